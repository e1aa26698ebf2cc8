#include <algorithm>
#include <map>
#include <set>

#include "plancog/activation.hpp"
#include "program_index.hpp"

namespace plancog {

std::string_view to_string(BindingKind kind) {
  switch (kind) {
    case BindingKind::Declaration: return "declaration";
    case BindingKind::Statement: return "statement";
    case BindingKind::Condition: return "condition";
    case BindingKind::Keyword: return "keyword";
    case BindingKind::Instance: return "instance";
  }
  return "?";
}

std::string_view to_string(ExpectationState state) {
  switch (state) {
    case ExpectationState::Open: return "open";
    case ExpectationState::Verified: return "verified";
    case ExpectationState::Violated: return "violated";
  }
  return "?";
}

const Bound* PlanInstance::binding(std::string_view slot) const {
  for (const Bound& b : bindings)
    if (b.slot == slot) return &b;
  return nullptr;
}

std::vector<int> PlanInstance::code_lines() const {
  std::set<int> lines;
  for (const Bound& b : bindings)
    if (b.kind == BindingKind::Statement || b.kind == BindingKind::Condition) lines.insert(b.line);
  return {lines.begin(), lines.end()};
}

std::string PlanInstance::label() const {
  if (!subject.empty()) return schema + "(" + subject + ")";
  return schema + "#" + std::to_string(id);
}

namespace {

using detail::ProgramIndex;

struct Candidate {
  BindingKind kind = BindingKind::Statement;
  int stmt_id = -1;
  int line = 0;
  std::string text;
};

std::string anchor_slot(const Schema& s) {
  for (const char* name : {"update", "init", "output"})
    if (s.find_slot(name)) return name;
  return "";
}

bool same_chain(const DefUse& du, int a, int b, const std::string& var) {
  if (detail::reaches(du, a, b, var) || detail::reaches(du, b, a, var)) return true;
  std::set<int> from_a;
  for (std::size_t d = 0; d < du.definitions.size(); ++d)
    if (du.definitions[d].stmt_id == a && du.definitions[d].var == var)
      from_a.insert(du.chains[d].begin(), du.chains[d].end());
  for (std::size_t d = 0; d < du.definitions.size(); ++d)
    if (du.definitions[d].stmt_id == b && du.definitions[d].var == var)
      for (int u : du.chains[d])
        if (from_a.count(u)) return true;
  return false;
}

Candidate statement_candidate(const Stmt& s) {
  return Candidate{BindingKind::Statement, s.id, s.line, compact_text(s)};
}

Candidate keyword_candidate(const Stmt& loop) {
  return Candidate{BindingKind::Keyword, loop.id, loop.line, ProgramIndex::keyword(loop)};
}

bool mentions(const Stmt& s, const std::string& var) {
  if (s.target == var) return true;
  const auto vars = referenced_variables(s.expr);
  return std::find(vars.begin(), vars.end(), var) != vars.end();
}

// Nodes a variable-plan slot may be bound to. `anchor` is the statement bound
// to the schema's anchor slot, or -1.
std::vector<Candidate> variable_candidates(const ProgramIndex& idx, const DefUse& du,
                                           const Schema& schema, const std::string& slot,
                                           const std::string& var, int anchor) {
  std::vector<Candidate> out;
  const Program& p = idx.program();
  const Declaration* decl = p.find_declaration(var);
  const bool is_anchor = slot == anchor_slot(schema);
  if (slot == "name") {
    if (decl) out.push_back(Candidate{BindingKind::Declaration, -1, decl->line, decl->name});
  } else if (slot == "type") {
    if (decl)
      out.push_back(
          Candidate{BindingKind::Declaration, -1, decl->line, std::string(to_string(decl->type))});
  } else if (slot == "init" || slot == "update") {
    for (int id : idx.definitions_of(var)) {
      if (!is_anchor) {
        if (idx.in_loop(id) != (slot == "update")) continue;
        if (anchor >= 0 && !same_chain(du, id, anchor, var)) continue;
      } else if (slot == "update" && !idx.in_loop(id)) {
        continue;
      }
      out.push_back(statement_candidate(idx.stmt(id)));
    }
  } else if (slot == "context") {
    if (anchor >= 0 && idx.in_loop(anchor)) {
      out.push_back(keyword_candidate(idx.stmt(idx.enclosing_loops(anchor).front())));
    } else {
      for (int loop : idx.loops()) {
        const auto vars = ProgramIndex::condition_variables(idx.stmt(loop));
        if (std::find(vars.begin(), vars.end(), var) != vars.end())
          out.push_back(keyword_candidate(idx.stmt(loop)));
      }
      if (out.empty()) {
        std::set<int> seen;
        for (int id : idx.definitions_of(var))
          if (idx.in_loop(id) && seen.insert(idx.enclosing_loops(id).front()).second)
            out.push_back(keyword_candidate(idx.stmt(idx.enclosing_loops(id).front())));
      }
    }
  } else if (slot == "output") {
    for (int id : idx.simple_statements())
      if (idx.stmt(id).kind == StmtKind::Writeln && mentions(idx.stmt(id), var))
        out.push_back(statement_candidate(idx.stmt(id)));
  } else {
    for (int id : idx.simple_statements())
      if (mentions(idx.stmt(id), var)) out.push_back(statement_candidate(idx.stmt(id)));
  }
  return out;
}

std::vector<Candidate> loop_candidates(const ProgramIndex& idx, int loop) {
  const Stmt& l = idx.stmt(loop);
  std::vector<Candidate> out{keyword_candidate(l),
                             Candidate{BindingKind::Condition, l.id, ProgramIndex::condition_line(l),
                                       ProgramIndex::condition_text(l)}};
  for (int id : idx.simple_statements()) out.push_back(statement_candidate(idx.stmt(id)));
  return out;
}

// Slot-reference and wildcard environment for matching an instance's fillers.
Bindings environment(const PlanInstance& inst, const std::vector<PlanInstance>& all) {
  Bindings env;
  if (!inst.subject.empty()) env["v"] = inst.subject;
  for (const Bound& b : inst.bindings)
    if (b.kind == BindingKind::Instance && b.child >= 0 && !all[b.child].subject.empty())
      env[b.slot] = all[b.child].subject;
  return env;
}

bool fits(const Pattern& p, const std::string& text, const Bindings& env) {
  Bindings local = env;
  return match_pattern(p, text, local);
}

bool fits_slot(const Slot& slot, const std::string& text, const Bindings& env) {
  for (const Filler& f : slot.fillers)
    if (fits(parse_pattern(f.pattern), text, env)) return true;
  return false;
}

// Earliest line first, then the longest text.
const Candidate* pick(const std::vector<const Candidate*>& matched) {
  const Candidate* best = nullptr;
  for (const Candidate* c : matched)
    if (!best || c->line < best->line || (c->line == best->line && c->text.size() > best->text.size()))
      best = c;
  return best;
}

std::vector<const Schema*> activated(const KnowledgeBase& kb, const ActivationResult& act,
                                     SchemaKind kind) {
  std::vector<const Schema*> out;
  for (const Activation& a : act.activations)
    if (const Schema* s = kb.find_schema(a.schema); s && s->kind == kind) out.push_back(s);
  return out;
}

bool complete(const Schema& s, const PlanInstance& inst) {
  for (const Slot& slot : s.slots)
    if (slot.mandatory && !inst.binding(slot.name)) return false;
  return true;
}

PlanInstance variable_plan(const Schema& schema, const std::string& var, const ProgramIndex& idx,
                           const DefUse& du) {
  PlanInstance inst;
  inst.schema = schema.name;
  inst.kind = schema.kind;
  inst.subject = var;
  const Bindings env{{"v", var}};
  const std::string anchor = anchor_slot(schema);
  std::vector<const Slot*> order;
  if (const Slot* a = schema.find_slot(anchor)) order.push_back(a);
  for (const Slot& s : schema.slots)
    if (s.name != anchor) order.push_back(&s);

  int anchor_stmt = -1;
  for (const Slot* slot : order) {
    if (slot->fillers.empty()) continue;
    const auto cands = variable_candidates(idx, du, schema, slot->name, var, anchor_stmt);
    std::vector<const Candidate*> matched;
    for (const Candidate& c : cands)
      if (fits_slot(*slot, c.text, env)) matched.push_back(&c);
    if (const Candidate* c = pick(matched)) {
      inst.bindings.push_back(Bound{slot->name, c->kind, c->stmt_id, c->line, c->text, -1});
      if (slot->name == anchor) anchor_stmt = c->stmt_id;
    } else if (slot->name != "name") {
      for (const Candidate& c : cands)
        inst.conflicts.push_back(Conflict{slot->name, c.stmt_id, c.line, c.text});
    }
  }
  inst.complete = complete(schema, inst);
  return inst;
}

// Variable instance `child` belongs to loop `loop` when its variable is set
// inside the loop or tested by it.
bool related(const PlanInstance& child, int loop, const ProgramIndex& idx) {
  if (child.kind != SchemaKind::Variable) return child.loop == loop;
  for (int id : idx.definitions_of(child.subject))
    if (idx.inside(id, loop)) return true;
  const auto vars = ProgramIndex::condition_variables(idx.stmt(loop));
  return std::find(vars.begin(), vars.end(), child.subject) != vars.end();
}

bool tested_by(const PlanInstance& child, int loop, const ProgramIndex& idx) {
  const auto vars = ProgramIndex::condition_variables(idx.stmt(loop));
  return !child.subject.empty() &&
         std::find(vars.begin(), vars.end(), child.subject) != vars.end();
}

PlanInstance loop_plan(const KnowledgeBase& kb, const Schema& schema, int loop,
                       const std::vector<PlanInstance>& existing, const ProgramIndex& idx) {
  PlanInstance inst;
  inst.schema = schema.name;
  inst.kind = schema.kind;
  inst.loop = loop;
  const auto links = implementations(kb, schema.name);
  const auto cands = loop_candidates(idx, loop);
  std::set<int> used;
  for (const Slot& slot : schema.slots) {
    auto link = std::find_if(links.begin(), links.end(),
                             [&](const auto& l) { return l.second == slot.name; });
    if (link != links.end()) {
      std::vector<const PlanInstance*> pool;
      for (const PlanInstance& c : existing)
        if (!used.count(c.id) && kb.is_a(c.schema, link->first) && related(c, loop, idx))
          pool.push_back(&c);
      std::stable_sort(pool.begin(), pool.end(), [&](const PlanInstance* a, const PlanInstance* b) {
        return tested_by(*a, loop, idx) > tested_by(*b, loop, idx);
      });
      if (pool.empty()) continue;
      const PlanInstance& c = *pool.front();
      used.insert(c.id);
      const auto lines = c.code_lines();
      inst.bindings.push_back(Bound{slot.name, BindingKind::Instance, -1,
                                    lines.empty() ? 0 : lines.front(),
                                    c.subject.empty() ? c.schema : c.subject, c.id});
      inst.children.push_back(c.id);
      continue;
    }
    if (slot.fillers.empty()) continue;
    const Bindings env = environment(inst, existing);
    std::vector<const Candidate*> matched;
    for (const Candidate& c : cands)
      if (fits_slot(slot, c.text, env)) matched.push_back(&c);
    if (const Candidate* c = pick(matched))
      inst.bindings.push_back(Bound{slot.name, c->kind, c->stmt_id, c->line, c->text, -1});
  }
  inst.complete = complete(schema, inst);
  return inst;
}

// Drops instances whose schema is a proper kind-of ancestor of another
// instance's schema in the same group.
template <typename Key>
std::vector<PlanInstance> most_specific(const KnowledgeBase& kb, std::vector<PlanInstance> group,
                                        Key key) {
  std::vector<PlanInstance> out;
  for (const PlanInstance& a : group) {
    bool general = false;
    for (const PlanInstance& b : group)
      if (key(a) == key(b) && a.schema != b.schema && kb.is_a(b.schema, a.schema)) general = true;
    if (!general) out.push_back(a);
  }
  return out;
}

std::string normalized(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != ' ') out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Instantiation instantiate(const KnowledgeBase& kb, const Program& program,
                          const ActivationResult& activation, const DefUse& du) {
  const ProgramIndex idx(program);
  Instantiation out;

  // Variable plans.
  std::vector<PlanInstance> vars;
  for (const Schema* s : activated(kb, activation, SchemaKind::Variable)) {
    std::set<std::string> subjects;
    if (const Activation* a = activation.find(s->name))
      subjects.insert(a->subjects.begin(), a->subjects.end());
    const std::string anchor = anchor_slot(*s);
    if (const Slot* slot = s->find_slot(anchor)) {
      for (const Declaration& d : program.declarations) {
        const Bindings env{{"v", d.name}};
        for (const Candidate& c : variable_candidates(idx, du, *s, anchor, d.name, -1))
          if (fits_slot(*slot, c.text, env)) subjects.insert(d.name);
      }
    }
    for (const Declaration& d : program.declarations)
      if (subjects.count(d.name)) vars.push_back(variable_plan(*s, d.name, idx, du));
  }
  vars = most_specific(kb, std::move(vars), [](const PlanInstance& i) { return i.subject; });
  for (PlanInstance& i : vars) {
    i.id = static_cast<int>(out.instances.size());
    out.instances.push_back(std::move(i));
  }

  // Loop-anchored plans; implementations first so control plans can use them.
  for (SchemaKind kind : {SchemaKind::Implementation, SchemaKind::Algorithm, SchemaKind::Control}) {
    std::vector<PlanInstance> found;
    for (int loop : idx.loops())
      for (const Schema* s : activated(kb, activation, kind)) {
        PlanInstance i = loop_plan(kb, *s, loop, out.instances, idx);
        if (i.complete) found.push_back(std::move(i));
      }
    found = most_specific(kb, std::move(found), [](const PlanInstance& i) { return i.loop; });
    for (PlanInstance& i : found) {
      i.id = static_cast<int>(out.instances.size());
      out.instances.push_back(std::move(i));
    }
  }

  // Expectations: rule-bound slot values, then unbound mandatory slots.
  auto add = [&](Expectation e) {
    for (const Expectation& x : out.expectations)
      if (x.instance == e.instance && x.slot == e.slot &&
          normalized(x.expected) == normalized(e.expected))
        return;
    out.expectations.push_back(std::move(e));
  };
  for (const Firing& f : activation.trace) {
    const ProductionRule* rule = nullptr;
    for (const ProductionRule& r : kb.rules)
      if (r.id == f.rule) rule = &r;
    if (!rule || rule->bindings.empty()) continue;
    const Schema* schema = kb.find_schema(f.schema);
    for (const PlanInstance& inst : out.instances) {
      if (inst.schema != f.schema) continue;
      if (!f.subject.empty() && inst.subject != f.subject) continue;
      const Bindings env = environment(inst, out.instances);
      for (const SlotBinding& b : rule->bindings) {
        const Pattern p = parse_pattern(b.pattern);
        const Slot* slot = schema ? schema->find_slot(b.slot) : nullptr;
        const Filler* proto = slot ? slot->prototype() : nullptr;
        Expectation e;
        e.instance = inst.id;
        e.slot = b.slot;
        e.expected = instantiate_pattern(p, env).value_or(b.pattern);
        e.prototypical =
            proto && normalized(instantiate_pattern(parse_pattern(proto->pattern), env)
                                    .value_or(proto->pattern)) == normalized(e.expected);
        e.origin = rule->id;
        add(std::move(e));
      }
    }
  }
  for (const PlanInstance& inst : out.instances) {
    const Schema* schema = kb.find_schema(inst.schema);
    const Bindings env = environment(inst, out.instances);
    for (const Slot& slot : schema->slots) {
      if (!slot.mandatory || inst.binding(slot.name) || slot.fillers.empty()) continue;
      const Filler* f = slot.prototype() ? slot.prototype() : &slot.fillers.front();
      Expectation e;
      e.instance = inst.id;
      e.slot = slot.name;
      e.expected = instantiate_pattern(parse_pattern(f->pattern), env).value_or(f->pattern);
      e.prototypical = f->prototypical;
      e.origin = "slot";
      add(std::move(e));
    }
  }
  return out;
}

std::vector<Expectation> verify_expectations(std::vector<Expectation> expectations,
                                             const std::vector<PlanInstance>& instances,
                                             const Program& program, const KnowledgeBase& kb,
                                             const DefUse& du) {
  const ProgramIndex idx(program);
  for (Expectation& e : expectations) {
    if (e.state != ExpectationState::Open) continue;
    const PlanInstance& inst = instances.at(e.instance);
    const Schema* schema = kb.find_schema(inst.schema);
    if (!schema) continue;
    Pattern pattern;
    try {
      pattern = parse_pattern(e.expected);
    } catch (const PatternError&) {
      continue;
    }
    std::vector<Candidate> cands;
    if (inst.kind == SchemaKind::Variable) {
      const Bound* anchor = inst.binding(anchor_slot(*schema));
      cands = variable_candidates(idx, du, *schema, e.slot, inst.subject,
                                  anchor ? anchor->stmt_id : -1);
    } else if (inst.loop >= 0) {
      cands = loop_candidates(idx, inst.loop);
    }
    const Bindings env = environment(inst, instances);
    std::vector<const Candidate*> matched;
    for (const Candidate& c : cands)
      if (fits(pattern, c.text, env)) matched.push_back(&c);
    if (const Candidate* c = pick(matched)) {
      e.state = ExpectationState::Verified;
      e.line = c->line;
      continue;
    }
    if (cands.empty()) continue;
    // Violated at the candidate nearest the instance's own code.
    auto lines = inst.code_lines();
    for (const Bound& b : inst.bindings)
      if (b.kind == BindingKind::Keyword) lines.push_back(b.line);
    auto distance = [&](int line) {
      int best = 1 << 30;
      for (int l : lines) best = std::min(best, std::abs(l - line));
      return best;
    };
    const Candidate* nearest = &cands.front();
    for (const Candidate& c : cands)
      if (distance(c.line) < distance(nearest->line) ||
          (distance(c.line) == distance(nearest->line) && c.line < nearest->line))
        nearest = &c;
    e.state = ExpectationState::Violated;
    e.line = nearest->line;
  }
  return expectations;
}

}  // namespace plancog
