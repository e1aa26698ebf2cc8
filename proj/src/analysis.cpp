#include "plancog/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "program_index.hpp"

namespace plancog {

namespace {

using detail::ProgramIndex;

// Goal vocabulary for the built-in plans. Schemas outside the table inherit
// the entry of their nearest kind-of ancestor.
const std::map<std::string, std::string, std::less<>>& goal_table() {
  static const std::map<std::string, std::string, std::less<>> table{
      {"New_Value_Variable", "enter-data"},
      {"Read_Variable", "enter-data"},
      {"Flag_Variable", "enter-data"},
      {"For_Loop", "enter-data"},
      {"Running_Total_Loop", "enter-data"},
      {"Average_Variable", "compute-average"},
      {"Running_Total_Variable", "compute-total"},
      {"Counter_Variable", "count-items"},
      {"Output_Variable", "output"},
      {"Linear_Search", "search-item"},
      {"Stock_Management", "manage-stock"},
  };
  return table;
}

// Noun a variable's role contributes to goal names ("report-average").
const std::map<std::string, std::string, std::less<>>& noun_table() {
  static const std::map<std::string, std::string, std::less<>> table{
      {"Average_Variable", "average"},  {"Running_Total_Variable", "total"},
      {"Counter_Variable", "count"},    {"Read_Variable", "data"},
      {"Flag_Variable", "flag"},
  };
  return table;
}

std::string lookup(const std::map<std::string, std::string, std::less<>>& table,
                   const KnowledgeBase& kb, const std::string& schema) {
  std::vector<std::string> frontier{schema};
  std::set<std::string> seen;
  while (!frontier.empty()) {
    std::vector<std::string> next;
    for (const std::string& s : frontier) {
      if (auto it = table.find(s); it != table.end()) return it->second;
      if (!seen.insert(s).second) continue;
      for (const std::string& p : kb.parents(s)) next.push_back(p);
    }
    frontier = std::move(next);
  }
  return "";
}

std::string slug(std::string s) {
  s = to_lower(s);
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

std::string noun(const Recognition& r, const KnowledgeBase& kb, const std::string& var) {
  for (const PlanInstance& i : r.instances)
    if (i.subject == var)
      if (std::string n = lookup(noun_table(), kb, i.schema); !n.empty()) return n;
  return to_lower(var);
}

std::set<int> statement_bindings(const PlanInstance& inst) {
  std::set<int> out;
  for (const Bound& b : inst.bindings)
    if (b.kind == BindingKind::Statement || b.kind == BindingKind::Condition) out.insert(b.stmt_id);
  return out;
}

bool feeds(const DefUse& du, const PlanInstance& from, const PlanInstance& to) {
  const auto src = statement_bindings(from), dst = statement_bindings(to);
  for (std::size_t d = 0; d < du.definitions.size(); ++d) {
    if (!src.count(du.definitions[d].stmt_id)) continue;
    for (int u : du.chains[d])
      if (dst.count(du.uses[u].stmt_id)) return true;
  }
  return false;
}

std::string base_goal(const Recognition& r, const KnowledgeBase& kb, const PlanInstance& inst) {
  std::string goal = lookup(goal_table(), kb, inst.schema);
  if (goal.empty()) return slug(inst.schema);
  if (goal == "output") return "output-" + noun(r, kb, inst.subject);
  return goal;
}

int goal_rank(const std::string& goal) {
  if (goal.rfind("enter", 0) == 0) return 0;
  if (goal.rfind("output", 0) == 0) return 2;
  return 1;
}

int first_line(const PlanInstance& inst) {
  int best = 1 << 30;
  for (const Bound& b : inst.bindings)
    if (b.kind != BindingKind::Declaration && b.kind != BindingKind::Instance && b.line > 0)
      best = std::min(best, b.line);
  return best;
}

std::vector<std::string> all_goals(const Recognition& r, const KnowledgeBase& kb) {
  std::vector<std::string> goals;
  for (const PlanInstance& i : r.instances) goals.push_back(base_goal(r, kb, i));
  // Partial results that feed a computation adopt its goal.
  for (std::size_t i = 0; i < r.instances.size(); ++i) {
    if (goals[i] != "compute-total" && goals[i] != "count-items") continue;
    for (std::size_t j = 0; j < r.instances.size(); ++j) {
      if (i == j || goals[j].rfind("compute-", 0) != 0 || goals[j] == goals[i]) continue;
      if (goals[j] == "compute-total") continue;
      if (feeds(r.du, r.instances[i], r.instances[j])) {
        goals[i] = goals[j];
        break;
      }
    }
  }
  return goals;
}

void count_leaves(const GoalNode& n, int& total) {
  if (n.plan >= 0) ++total;
  for (const GoalNode& c : n.children) count_leaves(c, total);
}

const GoalNode* search_leaf(const GoalNode& n, const std::vector<PlanInstance>& instances,
                            std::string_view schema) {
  if (n.plan >= 0 && instances[n.plan].schema == schema) return &n;
  for (const GoalNode& c : n.children)
    if (const GoalNode* f = search_leaf(c, instances, schema)) return f;
  return nullptr;
}

}  // namespace

int GoalTree::leaf_count() const {
  int total = 0;
  count_leaves(root, total);
  return total;
}

const GoalNode* GoalTree::find_leaf(const std::vector<PlanInstance>& instances,
                                    std::string_view schema) const {
  return search_leaf(root, instances, schema);
}

std::string goal_of(const Recognition& r, const KnowledgeBase& kb, int instance) {
  return all_goals(r, kb).at(instance);
}

GoalTree goal_tree(const Recognition& r, const Program& program, const KnowledgeBase& kb) {
  const auto goals = all_goals(r, kb);
  const auto& inst = r.instances;

  // A complete instance nests under a complete parent serving the same goal.
  std::vector<int> parent(inst.size(), -1);
  for (const PlanInstance& p : inst) {
    if (!p.complete) continue;
    for (int c : p.children)
      if (inst[c].complete && parent[c] < 0 && goals[c] == goals[p.id]) parent[c] = p.id;
  }
  std::function<void(int, std::vector<int>&)> descend = [&](int id, std::vector<int>& out) {
    for (std::size_t c = 0; c < inst.size(); ++c)
      if (parent[c] == id) {
        out.push_back(static_cast<int>(c));
        descend(static_cast<int>(c), out);
      }
  };

  GoalTree tree;
  const PlanInstance* output = nullptr;
  for (const PlanInstance& i : inst)
    if (goals[i.id].rfind("output-", 0) == 0 && (!output || (i.complete && !output->complete)))
      output = &i;
  tree.root.goal =
      output ? "report-" + noun(r, kb, output->subject) : "program-" + to_lower(program.name);

  std::map<std::string, std::vector<int>> by_goal;
  for (const PlanInstance& i : inst)
    if (i.complete && parent[i.id] < 0) by_goal[goals[i.id]].push_back(i.id);
  std::vector<std::string> order;
  for (const auto& [g, ids] : by_goal) order.push_back(g);
  auto earliest = [&](const std::string& g) {
    int best = 1 << 30;
    for (int id : by_goal[g]) best = std::min(best, first_line(inst[id]));
    return best;
  };
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    if (goal_rank(a) != goal_rank(b)) return goal_rank(a) < goal_rank(b);
    return earliest(a) < earliest(b);
  });

  for (const std::string& g : order) {
    GoalNode node;
    node.goal = g;
    for (const PlanInstance& i : inst)
      if (goals[i.id] == g && !r.coherence.internally_coherent(i.id)) node.coherent = false;
    for (int id : by_goal[g]) {
      GoalNode leaf;
      leaf.goal = g;
      leaf.plan = id;
      descend(id, leaf.nested);
      leaf.coherent = r.coherence.internally_coherent(id);
      for (int n : leaf.nested) leaf.coherent = leaf.coherent && r.coherence.internally_coherent(n);
      node.children.push_back(std::move(leaf));
    }
    tree.root.coherent = tree.root.coherent && node.coherent;
    tree.root.children.push_back(std::move(node));
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Plan-likeness

namespace {

bool wildcard_only(const std::string& pattern) {
  const Pattern p = parse_pattern(pattern);
  if (p.substring) return false;
  return std::all_of(p.tokens.begin(), p.tokens.end(), [](const PatternToken& t) {
    return t.kind == PatternToken::Kind::Variable;
  });
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out;
}

std::vector<Violation> check_discourse(const DiscourseRule& rule, const Recognition& r,
                                       const Program& program, const KnowledgeBase& kb) {
  const ProgramIndex idx(program);
  std::vector<Violation> out;
  if (rule.check == kNoDoubleDuty) {
    std::set<int> lines;
    std::vector<std::string> parts;
    for (const PlanInstance& i : r.instances)
      for (const Conflict& c : i.conflicts)
        if (c.slot == "init" && lines.insert(c.line).second) parts.push_back(c.text);
    if (!lines.empty())
      out.push_back(Violation{rule.id, rule.check, {lines.begin(), lines.end()},
                              "initializations " + join_names(parts) +
                                  " fit no plan's starting value and also offset a later update"});
  } else if (rule.check == kNameReflectsFunction) {
    std::map<std::string, std::vector<const PlanInstance*>> by_var;
    for (const PlanInstance& i : r.instances)
      if (i.complete && i.kind == SchemaKind::Variable) by_var[i.subject].push_back(&i);
    for (const Declaration& d : program.declarations) {
      auto it = by_var.find(d.name);
      if (it == by_var.end()) continue;
      bool judged = false, fits = false;
      std::vector<std::string> schemas;
      for (const PlanInstance* i : it->second) {
        const Slot* name = kb.find_schema(i->schema)->find_slot("name");
        if (!name) continue;
        bool specific = false;
        for (const Filler& f : name->fillers) {
          if (wildcard_only(f.pattern)) continue;
          specific = true;
          if (match_pattern(parse_pattern(f.pattern), d.name)) fits = true;
        }
        if (specific) {
          judged = true;
          schemas.push_back(i->schema);
        }
      }
      if (judged && !fits)
        out.push_back(Violation{rule.id, rule.check, {d.line},
                                d.name + " does not say it plays " + join_names(schemas)});
    }
  } else if (rule.check == kNoUnusedPlanPart) {
    std::set<std::string> seen;
    for (const PlanInstance& i : r.instances) {
      if (!i.complete || i.kind != SchemaKind::Variable || !seen.insert(i.subject).second) continue;
      const auto defs = idx.definitions_of(i.subject);
      if (defs.empty()) continue;
      bool used = false;
      for (std::size_t d = 0; d < r.du.definitions.size() && !used; ++d) {
        if (r.du.definitions[d].var != i.subject) continue;
        for (int u : r.du.chains[d])
          if (std::find(defs.begin(), defs.end(), r.du.uses[u].stmt_id) == defs.end()) used = true;
      }
      if (!used) {
        std::vector<int> lines;
        for (int id : defs) lines.push_back(idx.stmt(id).line);
        out.push_back(Violation{rule.id, rule.check, lines,
                                "the value computed in " + i.subject + " is never used"});
      }
    }
  }
  return out;
}

}  // namespace

PlanlinessReport planliness(const Recognition& r, const Program& program, const KnowledgeBase& kb) {
  PlanlinessReport rep;
  std::set<int> covered;
  for (const PlanInstance& i : r.instances) {
    if (!i.complete) continue;
    for (const Bound& b : i.bindings)
      if (b.kind == BindingKind::Statement || b.kind == BindingKind::Condition ||
          b.kind == BindingKind::Keyword)
        covered.insert(b.stmt_id);
  }
  rep.covered_statements.assign(covered.begin(), covered.end());
  const int total = program.statement_count();
  rep.coverage = total ? double(covered.size()) / total : 0.0;
  for (const DiscourseRule& d : kb.discourse_rules)
    for (Violation& v : check_discourse(d, r, program, kb)) rep.violations.push_back(std::move(v));
  const double penalty = 0.25 * std::min<std::size_t>(4, rep.violations.size());
  rep.score = rep.coverage * (1.0 - penalty);
  return rep;
}

PlanlinessReport planliness(const Program& program, const KnowledgeBase& kb) {
  return planliness(recognize(program, kb), program, kb);
}

// ---------------------------------------------------------------------------
// Fill in the blank

namespace {

// Canonical text of a candidate statement, or empty if it is not a simple
// statement over the program's variables.
std::string render(const std::string& text, const Program& context) {
  std::string src = "PROGRAM Probe;\n";
  if (!context.declarations.empty()) {
    src += "VAR\n";
    for (const Declaration& d : context.declarations)
      src += d.name + ": " + to_upper(to_string(d.type)) + ";\n";
  }
  src += "BEGIN\n" + text + "\nEND.\n";
  try {
    const Program p = parse(src);
    if (p.body.size() != 1 || !detail::is_simple(p.body.front())) return "";
    return pretty_print(p.body.front());
  } catch (const SyntaxError&) {
    return "";
  }
}

std::string zero_of(ScalarType t) {
  switch (t) {
    case ScalarType::Integer: return "0";
    case ScalarType::Real: return "0.0";
    case ScalarType::Boolean: return "FALSE";
  }
  return "0";
}

std::string squash(const std::string& s) {
  std::string out;
  for (char c : s)
    if (c != ' ') out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<Candidate> fill_blank(const BlankedProgram& bp, const KnowledgeBase& kb,
                                  Strategy strategy) {
  const Program& p = bp.context;
  const int hole = bp.blank_line;
  struct Scored {
    Candidate c;
    int tier;
    int distance;
  };
  std::vector<Scored> scored;

  if (strategy == Strategy::Plan) {
    const Recognition r = recognize(p, kb);
    for (const Expectation& e : r.expectations) {
      if (e.state != ExpectationState::Open) continue;
      const PlanInstance& inst = r.instances[e.instance];
      if (inst.binding(e.slot)) continue;
      const Slot* slot = kb.find_schema(inst.schema)->find_slot(e.slot);
      if (!slot || !slot->mandatory) continue;
      Bindings env;
      if (!inst.subject.empty()) env["v"] = inst.subject;
      std::vector<int> lines = inst.code_lines();
      for (const Bound& b : inst.bindings)
        if (b.kind == BindingKind::Keyword) lines.push_back(b.line);
      int distance = 1 << 20, support = 0;
      for (int l : lines)
        if (std::abs(l - hole) < distance || (std::abs(l - hole) == distance && l < support)) {
          distance = std::abs(l - hole);
          support = l;
        }
      for (const Filler& f : slot->fillers) {
        auto text = instantiate_pattern(parse_pattern(f.pattern), env);
        if (!text) continue;
        const std::string rendered = render(*text, p);
        if (rendered.empty()) continue;
        Candidate c{rendered, 0, inst.label() + "." + e.slot, f.prototypical, support};
        scored.push_back(Scored{c, f.prototypical ? 0 : 1, distance});
      }
    }
  } else {
    const Cfg cfg = build_cfg(p);
    const DefUse du = def_use(p, cfg);
    int hole_node = -1;
    for (const CfgNode& n : cfg.nodes)
      if (n.role == "hole" && n.line == hole) hole_node = n.id;
    std::set<int> reachable;
    if (hole_node >= 0) {
      std::vector<int> stack = cfg.successors(hole_node);
      while (!stack.empty()) {
        const int n = stack.back();
        stack.pop_back();
        if (!reachable.insert(n).second) continue;
        for (int s : cfg.successors(n)) stack.push_back(s);
      }
    }
    std::map<std::string, int> first_use;
    for (const Use& u : du.uses)
      if (u.possibly_uninitialized && reachable.count(u.node))
        if (!first_use.count(u.var) || u.line < first_use[u.var]) first_use[u.var] = u.line;
    for (const auto& [var, line] : first_use) {
      const Declaration* d = p.find_declaration(var);
      const std::string rendered = render(var + ":=" + zero_of(d->type), p);
      if (rendered.empty()) continue;
      Candidate c{rendered, 0, "define " + var + " before its use at line " + std::to_string(line),
                  false, line};
      scored.push_back(Scored{c, 2, std::abs(line - hole)});
    }
  }

  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.tier != b.tier) return a.tier < b.tier;
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.c.support_line != b.c.support_line) return a.c.support_line < b.c.support_line;
    return a.c.text < b.c.text;
  });
  std::vector<Candidate> out;
  std::set<std::string> seen;
  for (Scored& s : scored) {
    if (!seen.insert(squash(s.c.text)).second) continue;
    s.c.rank = static_cast<int>(out.size()) + 1;
    out.push_back(std::move(s.c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chunking

namespace {

void control_chunks(const PrimeNode& node, const ProgramIndex& idx, std::vector<Chunk>& out) {
  auto head_chunk = [&](std::string label) {
    Chunk c;
    c.mode = ChunkMode::Control;
    c.label = std::move(label);
    const Stmt& h = idx.stmt(node.head_stmt);
    c.statements.push_back(h.id);
    c.lines.push_back(h.line);
    if (h.end_line > 0) c.lines.push_back(h.end_line);
    return c;
  };
  if (node.kind == PrimeKind::Sequence && node.is_leaf()) {
    Chunk c = node.head_stmt >= 0 ? head_chunk("sequence") : Chunk{ChunkMode::Control, {}, {}, "sequence", -1};
    for (int id : node.statements) {
      c.statements.push_back(id);
      c.lines.push_back(idx.stmt(id).line);
    }
    if (!c.statements.empty()) out.push_back(std::move(c));
    return;
  }
  if (node.head_stmt >= 0) out.push_back(head_chunk(std::string(to_string(node.kind))));
  for (const PrimeNode& child : node.children) control_chunks(child, idx, out);
}

void normalize(Chunk& c) {
  std::sort(c.lines.begin(), c.lines.end());
  c.lines.erase(std::unique(c.lines.begin(), c.lines.end()), c.lines.end());
  std::sort(c.statements.begin(), c.statements.end());
  c.statements.erase(std::unique(c.statements.begin(), c.statements.end()), c.statements.end());
}

}  // namespace

Chunking chunk(const Recognition& r, const Program& program, ChunkMode mode) {
  const ProgramIndex idx(program);
  Chunking out;
  if (mode == ChunkMode::Control) {
    control_chunks(decompose_primes(program), idx, out.chunks);
  } else {
    for (const PlanInstance& i : r.instances) {
      if (!i.complete) continue;
      Chunk c;
      c.mode = ChunkMode::Plan;
      c.label = i.schema;
      c.instance = i.id;
      for (const Bound& b : i.bindings)
        if (b.kind == BindingKind::Statement || b.kind == BindingKind::Condition) {
          c.statements.push_back(b.stmt_id);
          c.lines.push_back(b.line);
        }
      if (!c.statements.empty()) out.chunks.push_back(std::move(c));
    }
  }
  std::set<int> covered;
  for (Chunk& c : out.chunks) {
    normalize(c);
    covered.insert(c.statements.begin(), c.statements.end());
  }
  std::set<int> residue_lines;
  for (int id = 0; id < idx.size(); ++id)
    if (!covered.count(id)) {
      out.residue.push_back(id);
      residue_lines.insert(idx.stmt(id).line);
    }
  out.residue_lines.assign(residue_lines.begin(), residue_lines.end());
  return out;
}

Chunking chunk(const Program& program, const KnowledgeBase& kb, ChunkMode mode) {
  if (mode == ChunkMode::Control) return chunk(Recognition{}, program, mode);
  return chunk(recognize(program, kb), program, mode);
}

double boundary_jaccard(const Chunking& a, const Chunking& b) {
  auto bounds = [](const Chunking& c) {
    std::set<std::pair<int, int>> out;
    for (const Chunk& ch : c.chunks)
      if (!ch.lines.empty()) out.insert({ch.lines.front(), ch.lines.back()});
    return out;
  };
  const auto x = bounds(a), y = bounds(b);
  std::set<std::pair<int, int>> uni = x;
  uni.insert(y.begin(), y.end());
  if (uni.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& p : x) inter += y.count(p);
  return double(inter) / double(uni.size());
}

double delocalization(const PlanInstance& instance) {
  const auto lines = instance.code_lines();
  if (lines.size() < 2)
    throw std::invalid_argument(instance.label() + " binds fewer than two code lines");
  return double(lines.back() - lines.front());
}

}  // namespace plancog
