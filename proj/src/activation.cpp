#include "plancog/activation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "program_index.hpp"

namespace plancog {

std::string Cue::describe() const {
  const std::string k(to_string(kind));
  switch (kind) {
    case CueKind::Type:
    case CueKind::Loop:
    case CueKind::Schema: return k + "=" + payload;
    default: return k + "~\"" + payload + "\"";
  }
}

const Activation* ActivationResult::find(std::string_view schema) const {
  for (const Activation& a : activations)
    if (a.schema == schema) return &a;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Beacons

namespace {

std::vector<Pattern> slot_patterns(const KnowledgeBase& kb, std::string_view slot) {
  std::vector<Pattern> out;
  for (const Schema& s : kb.schemas)
    if (const Slot* sl = s.find_slot(slot))
      for (const Filler& f : sl->fillers) out.push_back(parse_pattern(f.pattern));
  return out;
}

bool any_match(const std::vector<Pattern>& patterns, const std::string& text) {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const Pattern& p) { return match_pattern(p, text); });
}

std::string loop_form(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Repeat: return "repeat until " + compact_text(s.expr);
    case StmtKind::While: return "while " + compact_text(s.expr);
    case StmtKind::For:
      return "for " + s.target + ":=" + compact_text(s.expr) + " to " + compact_text(s.limit);
    default: return "";
  }
}

}  // namespace

std::vector<Cue> extract_beacons(const Program& program, const KnowledgeBase& kb) {
  std::vector<Cue> cues;
  for (const Declaration& d : program.declarations) {
    cues.push_back(Cue{CueKind::Name, d.name, d.name, d.line, -1});
    cues.push_back(Cue{CueKind::Type, std::string(to_string(d.type)), d.name, d.line, -1});
  }
  const auto init = slot_patterns(kb, "init");
  const auto update = slot_patterns(kb, "update");
  for (const Stmt* s : program.statements()) {
    if (detail::is_definition(*s)) {
      const std::string text = compact_text(*s);
      if (any_match(init, text)) cues.push_back(Cue{CueKind::Init, text, s->target, s->line, s->id});
      if (any_match(update, text))
        cues.push_back(Cue{CueKind::Update, text, s->target, s->line, s->id});
    }
    if (detail::is_loop(*s)) {
      cues.push_back(
          Cue{CueKind::Loop, to_lower(detail::ProgramIndex::keyword(*s)), "", s->line, s->id});
      cues.push_back(Cue{CueKind::LoopForm, loop_form(*s), "", s->line, s->id});
    }
  }
  for (const Comment& c : program.comments)
    cues.push_back(Cue{CueKind::Comment, c.text, "", c.line, -1});
  return cues;
}

// ---------------------------------------------------------------------------
// Rule firing

namespace {

bool condition_matches(const CueCondition& c, const Cue& cue) {
  if (c.kind != cue.kind) return false;
  switch (c.kind) {
    case CueKind::Type:
    case CueKind::Loop: return iequals(c.value, cue.payload);
    case CueKind::Schema: return c.value == cue.payload;
    case CueKind::Comment: {
      // Comments are prose: always a substring test.
      std::string needle = c.value;
      if (!needle.empty() && needle.front() == '~') needle.erase(0, 1);
      return to_lower(cue.payload).find(to_lower(needle)) != std::string::npos;
    }
    default: return match_pattern(parse_pattern(c.value), cue.payload);
  }
}

struct Match {
  std::string subject;
  std::vector<Cue> cues;
};

// Cues carrying a subject must agree on it. A match for a non-empty subject
// needs at least one supporting cue about that subject.
std::vector<Match> match_rule(const ProductionRule& rule, const std::set<Cue>& cues) {
  std::set<std::string> subjects{""};
  for (const Cue& c : cues)
    if (!c.subject.empty()) subjects.insert(c.subject);
  std::vector<Match> out;
  for (const std::string& subject : subjects) {
    Match m{subject, {}};
    bool ok = true, anchored = subject.empty();
    for (const CueCondition& cond : rule.conditions) {
      bool found = false;
      for (const Cue& c : cues) {
        if (!c.subject.empty() && c.subject != subject) continue;
        if (!condition_matches(cond, c)) continue;
        found = true;
        if (!c.subject.empty()) anchored = true;
        m.cues.push_back(c);
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    if (ok && anchored) {
      std::sort(m.cues.begin(), m.cues.end());
      m.cues.erase(std::unique(m.cues.begin(), m.cues.end()), m.cues.end());
      out.push_back(std::move(m));
    }
  }
  return out;
}

class Engine {
 public:
  Engine(const KnowledgeBase& kb, const std::vector<Cue>& cues) : kb_(kb), cues_(cues.begin(), cues.end()) {
    for (const ProductionRule& r : kb.rules) rules_.push_back(&r);
    std::sort(rules_.begin(), rules_.end(),
              [](const ProductionRule* a, const ProductionRule* b) { return a->id < b->id; });
  }

  ActivationResult run() {
    fire(Direction::DataDriven);
    while (true) {
      const std::size_t before = records_.size() + fired_.size();
      expand();
      fire(Direction::ConceptuallyDriven);
      if (records_.size() + fired_.size() == before) break;
    }
    ActivationResult out;
    for (auto& [name, a] : records_) {
      std::sort(a.rules.begin(), a.rules.end());
      a.rules.erase(std::unique(a.rules.begin(), a.rules.end()), a.rules.end());
      std::sort(a.cues.begin(), a.cues.end());
      a.cues.erase(std::unique(a.cues.begin(), a.cues.end()), a.cues.end());
      std::sort(a.sources.begin(), a.sources.end());
      a.sources.erase(std::unique(a.sources.begin(), a.sources.end()), a.sources.end());
      std::sort(a.subjects.begin(), a.subjects.end());
      a.subjects.erase(std::unique(a.subjects.begin(), a.subjects.end()), a.subjects.end());
      out.activations.push_back(a);
    }
    out.trace = std::move(trace_);
    out.cues.assign(cues_.begin(), cues_.end());
    return out;
  }

 private:
  Activation& record(const std::string& schema, Direction d) {
    auto [it, inserted] = records_.try_emplace(schema);
    if (inserted) {
      it->second.schema = schema;
      it->second.direction = d;
    } else if (d == Direction::DataDriven) {
      it->second.direction = d;
    }
    return it->second;
  }

  void fire(Direction direction) {
    while (true) {
      ++round_;
      std::vector<Cue> fresh;
      for (const ProductionRule* r : rules_) {
        if (r->direction != direction) continue;
        const Schema* target = kb_.find_schema(r->activate);
        const bool variable = target && target->kind == SchemaKind::Variable;
        for (Match& m : match_rule(*r, cues_)) {
          if (!fired_.insert({r->id, m.subject}).second) continue;
          const std::string subject = variable ? m.subject : "";
          trace_.push_back(Firing{round_, r->id, direction, r->activate, subject, m.cues});
          Activation& a = record(r->activate, direction);
          a.rules.push_back(r->id);
          a.cues.insert(a.cues.end(), m.cues.begin(), m.cues.end());
          if (!subject.empty()) a.subjects.push_back(subject);
          Cue cue{CueKind::Schema, r->activate, subject, 0, -1};
          if (!cues_.count(cue)) fresh.push_back(cue);
        }
      }
      if (fresh.empty()) break;
      cues_.insert(fresh.begin(), fresh.end());
    }
  }

  // Kind-of children and uses-linked sub-plans of every active schema, each
  // schema entered once.
  void expand() {
    std::vector<std::string> queue;
    for (const auto& [name, a] : records_) queue.push_back(name);
    std::set<std::string> visited(queue.begin(), queue.end());
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const std::string from = queue[i];
      std::vector<std::string> next = kb_.children(from);
      for (const auto& [to, slot] : implementations(kb_, from)) next.push_back(to);
      for (const std::string& to : next) {
        if (!records_.count(to)) {
          record(to, Direction::ConceptuallyDriven);
          cues_.insert(Cue{CueKind::Schema, to, "", 0, -1});
        }
        Activation& a = records_.at(to);
        if (a.direction == Direction::ConceptuallyDriven) a.sources.push_back(from);
        if (visited.insert(to).second) queue.push_back(to);
      }
    }
  }

  const KnowledgeBase& kb_;
  std::set<Cue> cues_;
  std::vector<const ProductionRule*> rules_;
  std::set<std::pair<std::string, std::string>> fired_;
  std::map<std::string, Activation> records_;
  std::vector<Firing> trace_;
  int round_ = 0;
};

}  // namespace

ActivationResult activate(const KnowledgeBase& kb, const std::vector<Cue>& cues) {
  return Engine(kb, cues).run();
}

Recognition recognize(const Program& program, const KnowledgeBase& kb, int step_budget) {
  Recognition r;
  r.cfg = build_cfg(program);
  r.du = def_use(program, r.cfg);
  r.cues = extract_beacons(program, kb);
  r.activation = activate(kb, r.cues);
  Instantiation inst = instantiate(kb, program, r.activation, r.du);
  r.instances = std::move(inst.instances);
  r.expectations =
      verify_expectations(std::move(inst.expectations), r.instances, program, kb, r.du);
  r.coherence = evaluate_coherence(r.instances, r.du, program, kb, step_budget);
  return r;
}

}  // namespace plancog
