#include "plancog/kb.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

#include "plancog/frontend.hpp"

namespace plancog {

std::string_view to_string(SchemaKind kind) {
  switch (kind) {
    case SchemaKind::Variable: return "variable";
    case SchemaKind::Control: return "control";
    case SchemaKind::Algorithm: return "algorithm";
    case SchemaKind::Implementation: return "implementation";
    case SchemaKind::Problem: return "problem";
  }
  return "?";
}

std::string_view to_string(CueKind kind) {
  switch (kind) {
    case CueKind::Name: return "name";
    case CueKind::Type: return "type";
    case CueKind::Init: return "init";
    case CueKind::Update: return "update";
    case CueKind::Loop: return "loop";
    case CueKind::LoopForm: return "loopform";
    case CueKind::Comment: return "comment";
    case CueKind::Schema: return "schema";
  }
  return "?";
}

std::optional<CueKind> cue_kind_from_string(std::string_view s) {
  for (CueKind k : {CueKind::Name, CueKind::Type, CueKind::Init, CueKind::Update, CueKind::Loop,
                    CueKind::LoopForm, CueKind::Comment, CueKind::Schema})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

bool is_variable_scoped(CueKind kind) {
  return kind == CueKind::Name || kind == CueKind::Type || kind == CueKind::Init ||
         kind == CueKind::Update;
}

std::string_view to_string(Direction d) {
  return d == Direction::DataDriven ? "data-driven" : "conceptually-driven";
}

namespace {

// `~` conditions carry a quoted pattern; `=` conditions a bare word.
bool uses_pattern(CueKind kind) {
  return kind == CueKind::Name || kind == CueKind::Init || kind == CueKind::Update ||
         kind == CueKind::LoopForm || kind == CueKind::Comment;
}

}  // namespace

const Filler* Slot::prototype() const {
  for (const Filler& f : fillers)
    if (f.prototypical) return &f;
  return nullptr;
}

const Slot* Schema::find_slot(std::string_view slot) const {
  for (const Slot& s : slots)
    if (s.name == slot) return &s;
  return nullptr;
}

const Schema* KnowledgeBase::find_schema(std::string_view name) const {
  for (const Schema& s : schemas)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<std::string> KnowledgeBase::parents(std::string_view schema) const {
  std::vector<std::string> out;
  for (const Link& l : links)
    if (l.relation == LinkRelation::KindOf && l.from == schema) out.push_back(l.to);
  return out;
}

std::vector<std::string> KnowledgeBase::children(std::string_view schema) const {
  std::vector<std::string> out;
  for (const Link& l : links)
    if (l.relation == LinkRelation::KindOf && l.to == schema) out.push_back(l.from);
  return out;
}

bool KnowledgeBase::is_a(std::string_view schema, std::string_view ancestor) const {
  std::set<std::string> seen;
  std::deque<std::string> queue{std::string(schema)};
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    if (cur == ancestor) return true;
    if (!seen.insert(cur).second) continue;
    for (auto& p : parents(cur)) queue.push_back(p);
  }
  return false;
}

KbParseError::KbParseError(int line, const std::string& message)
    : std::runtime_error("kb line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string summarize(const std::vector<Diagnostic>& diags) {
  std::string out = "knowledge base failed validation:";
  for (const auto& d : diags) out += "\n  " + d.code + ": " + d.message;
  return out;
}

}  // namespace

KbValidationError::KbValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

// ---------------------------------------------------------------------------
// Reader

namespace {

struct Word {
  enum class Kind { Bare, Quoted, Comma };
  Kind kind;
  std::string text;
};

std::vector<Word> split_line(std::string_view line, int line_no) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      break;
    } else if (c == ',') {
      out.push_back({Word::Kind::Comma, ","});
      ++i;
    } else if (c == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '\\' && i + 1 < line.size()) {
          text += line[i + 1];
          i += 2;
        } else if (line[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          text += line[i++];
        }
      }
      if (!closed) throw KbParseError(line_no, "unterminated string");
      out.push_back({Word::Kind::Quoted, std::move(text)});
    } else {
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
             line[j] != ',' && line[j] != '"' && line[j] != '#')
        ++j;
      out.push_back({Word::Kind::Bare, std::string(line.substr(i, j - i))});
      i = j;
    }
  }
  return out;
}

bool valid_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

class KbReader {
 public:
  KbReader(const std::vector<Word>& words, int line) : words_(words), line_(line) {}

  bool done() const { return pos_ >= words_.size(); }
  const Word* peek() const { return done() ? nullptr : &words_[pos_]; }

  std::string bare(std::string_view what) {
    if (done() || words_[pos_].kind != Word::Kind::Bare)
      throw KbParseError(line_, "expected " + std::string(what));
    return words_[pos_++].text;
  }
  std::string identifier(std::string_view what) {
    std::string w = bare(what);
    if (!valid_identifier(w)) throw KbParseError(line_, "invalid " + std::string(what) + " '" + w + "'");
    return w;
  }
  void keyword(std::string_view kw) {
    if (done() || words_[pos_].kind != Word::Kind::Bare || words_[pos_].text != kw)
      throw KbParseError(line_, "expected '" + std::string(kw) + "'");
    ++pos_;
  }
  bool accept(std::string_view kw) {
    if (!done() && words_[pos_].kind == Word::Kind::Bare && words_[pos_].text == kw) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_comma() {
    if (!done() && words_[pos_].kind == Word::Kind::Comma) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string quoted(std::string_view what) {
    if (done() || words_[pos_].kind != Word::Kind::Quoted)
      throw KbParseError(line_, "expected quoted " + std::string(what));
    return words_[pos_++].text;
  }
  void finish() {
    if (!done()) throw KbParseError(line_, "unexpected '" + words_[pos_].text + "'");
  }
  int line() const { return line_; }

 private:
  const std::vector<Word>& words_;
  int line_;
  std::size_t pos_ = 0;
};

CueCondition read_cue(KbReader& r) {
  const std::string head = r.bare("cue");
  CueCondition cue;
  const auto tilde = head.find('~');
  if (tilde != std::string::npos) {
    if (tilde + 1 != head.size()) throw KbParseError(r.line(), "malformed cue '" + head + "'");
    auto kind = cue_kind_from_string(head.substr(0, tilde));
    if (!kind || !uses_pattern(*kind))
      throw KbParseError(r.line(), "unknown pattern cue '" + head + "'");
    cue.kind = *kind;
    cue.value = r.quoted("cue pattern");
    return cue;
  }
  const auto eq = head.find('=');
  if (eq == std::string::npos) throw KbParseError(r.line(), "malformed cue '" + head + "'");
  auto kind = cue_kind_from_string(head.substr(0, eq));
  if (!kind || uses_pattern(*kind)) throw KbParseError(r.line(), "unknown cue '" + head + "'");
  cue.kind = *kind;
  cue.value = head.substr(eq + 1);
  if (cue.value.empty()) throw KbParseError(r.line(), "empty cue value in '" + head + "'");
  if (cue.kind == CueKind::Type && cue.value != "integer" && cue.value != "real" &&
      cue.value != "boolean")
    throw KbParseError(r.line(), "unknown type '" + cue.value + "'");
  if (cue.kind == CueKind::Loop && cue.value != "while" && cue.value != "repeat" &&
      cue.value != "for")
    throw KbParseError(r.line(), "unknown loop keyword '" + cue.value + "'");
  return cue;
}

ProductionRule read_rule(KbReader& r) {
  ProductionRule rule;
  rule.id = r.identifier("rule id");
  const std::string dir = r.bare("direction");
  if (dir == "data:")
    rule.direction = Direction::DataDriven;
  else if (dir == "concept:")
    rule.direction = Direction::ConceptuallyDriven;
  else
    throw KbParseError(r.line(), "expected 'data:' or 'concept:'");
  r.keyword("if");
  rule.conditions.push_back(read_cue(r));
  while (r.accept_comma()) rule.conditions.push_back(read_cue(r));
  r.keyword("then");
  r.keyword("activate");
  rule.activate = r.identifier("schema name");
  while (r.accept_comma()) {
    r.keyword("bind");
    std::string head = r.bare("slot binding");
    if (head.size() < 2 || head.back() != '=')
      throw KbParseError(r.line(), "expected <slot>=\"<pattern>\"");
    head.pop_back();
    if (!valid_identifier(head)) throw KbParseError(r.line(), "invalid slot name '" + head + "'");
    rule.bindings.push_back(SlotBinding{head, r.quoted("binding pattern")});
  }
  r.finish();
  return rule;
}

}  // namespace

KnowledgeBase parse_kb(std::string_view text) {
  KnowledgeBase kb;
  Schema* schema = nullptr;
  Slot* slot = nullptr;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto words = split_line(raw, line_no);
    if (words.empty()) continue;
    KbReader r(words, line_no);
    const std::string head = r.bare("directive");
    if (head == "schema") {
      Schema s;
      s.name = r.identifier("schema name");
      r.keyword("kind");
      const std::string kind = r.bare("schema kind");
      if (kind == "variable") s.kind = SchemaKind::Variable;
      else if (kind == "control") s.kind = SchemaKind::Control;
      else if (kind == "algorithm") s.kind = SchemaKind::Algorithm;
      else if (kind == "implementation") s.kind = SchemaKind::Implementation;
      else if (kind == "problem") s.kind = SchemaKind::Problem;
      else throw KbParseError(line_no, "unknown schema kind '" + kind + "'");
      r.finish();
      kb.schemas.push_back(std::move(s));
      schema = &kb.schemas.back();
      slot = nullptr;
    } else if (head == "desc" || head == "slot" || head == "filler" || head == "kindof" ||
               head == "uses") {
      if (!schema) throw KbParseError(line_no, "'" + head + "' outside a schema block");
      if (head == "desc") {
        schema->description = r.quoted("description");
        r.finish();
      } else if (head == "slot") {
        Slot s;
        s.name = r.identifier("slot name");
        s.mandatory = r.accept("mandatory");
        r.finish();
        schema->slots.push_back(std::move(s));
        slot = &schema->slots.back();
      } else if (head == "filler") {
        if (!slot) throw KbParseError(line_no, "'filler' outside a slot");
        Filler f;
        f.pattern = r.quoted("filler pattern");
        f.prototypical = r.accept("proto");
        r.finish();
        slot->fillers.push_back(std::move(f));
      } else if (head == "kindof") {
        Link l{LinkRelation::KindOf, schema->name, r.identifier("parent schema"), {}};
        r.finish();
        kb.links.push_back(std::move(l));
      } else {
        Link l{LinkRelation::Uses, schema->name, r.identifier("used schema"), {}};
        r.keyword("as");
        l.as_slot = r.identifier("slot name");
        r.finish();
        kb.links.push_back(std::move(l));
      }
    } else if (head == "discourse") {
      schema = nullptr;
      slot = nullptr;
      DiscourseRule d;
      d.id = r.identifier("discourse rule id");
      r.keyword("check");
      d.check = r.identifier("predicate");
      d.statement = r.quoted("statement");
      r.finish();
      kb.discourse_rules.push_back(std::move(d));
    } else if (head == "rule") {
      schema = nullptr;
      slot = nullptr;
      kb.rules.push_back(read_rule(r));
    } else {
      throw KbParseError(line_no, "unknown directive '" + head + "'");
    }
  }
  return kb;
}

KnowledgeBase load_kb(std::string_view text) {
  KnowledgeBase kb = parse_kb(text);
  auto diags = validate_kb(kb);
  if (!diags.empty()) throw KbValidationError(std::move(diags));
  return kb;
}

// ---------------------------------------------------------------------------
// Writer

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string dump_kb(const KnowledgeBase& kb) {
  std::ostringstream out;
  for (const Schema& s : kb.schemas) {
    out << "schema " << s.name << " kind " << to_string(s.kind) << "\n";
    if (!s.description.empty()) out << "  desc " << quote(s.description) << "\n";
    for (const Slot& slot : s.slots) {
      out << "  slot " << slot.name << (slot.mandatory ? " mandatory" : "") << "\n";
      for (const Filler& f : slot.fillers)
        out << "    filler " << quote(f.pattern) << (f.prototypical ? " proto" : "") << "\n";
    }
    for (const Link& l : kb.links)
      if (l.from == s.name && l.relation == LinkRelation::KindOf) out << "  kindof " << l.to << "\n";
    for (const Link& l : kb.links)
      if (l.from == s.name && l.relation == LinkRelation::Uses)
        out << "  uses " << l.to << " as " << l.as_slot << "\n";
    out << "\n";
  }
  for (const DiscourseRule& d : kb.discourse_rules)
    out << "discourse " << d.id << " check " << d.check << " " << quote(d.statement) << "\n";
  if (!kb.discourse_rules.empty()) out << "\n";
  for (const ProductionRule& r : kb.rules) {
    out << "rule " << r.id << (r.direction == Direction::DataDriven ? " data:" : " concept:")
        << " if ";
    for (std::size_t i = 0; i < r.conditions.size(); ++i) {
      const CueCondition& c = r.conditions[i];
      if (i) out << ", ";
      if (uses_pattern(c.kind))
        out << to_string(c.kind) << "~" << quote(c.value);
      else
        out << to_string(c.kind) << "=" << c.value;
    }
    out << " then activate " << r.activate;
    for (const SlotBinding& b : r.bindings) out << ", bind " << b.slot << "=" << quote(b.pattern);
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Diagnostic> validate_kb(const KnowledgeBase& kb) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string code, std::string schema, std::string slot, std::string rule,
                    std::string message) {
    out.push_back(Diagnostic{std::move(code), std::move(schema), std::move(slot),
                             std::move(rule), std::move(message)});
  };
  auto check_pattern = [&](const std::string& pattern, const std::string& schema,
                           const std::string& slot, const std::string& rule) {
    try {
      parse_pattern(pattern);
    } catch (const PatternError& e) {
      report("bad-pattern", schema, slot, rule, e.what());
    }
  };

  std::set<std::string> names;
  for (const Schema& s : kb.schemas) {
    if (!names.insert(s.name).second)
      report("duplicate-schema", s.name, "", "", "schema '" + s.name + "' defined twice");
    std::set<std::string> slot_names;
    bool any_mandatory = false;
    for (const Slot& slot : s.slots) {
      if (!slot_names.insert(slot.name).second)
        report("duplicate-slot", s.name, slot.name, "",
               "slot '" + slot.name + "' appears twice in '" + s.name + "'");
      any_mandatory = any_mandatory || slot.mandatory;
      const auto protos = std::count_if(slot.fillers.begin(), slot.fillers.end(),
                                        [](const Filler& f) { return f.prototypical; });
      if (protos > 1)
        report("double-prototypical", s.name, slot.name, "",
               "slot '" + s.name + "." + slot.name + "' has " + std::to_string(protos) +
                   " prototypical fillers");
      for (const Filler& f : slot.fillers) check_pattern(f.pattern, s.name, slot.name, "");
    }
    if (!any_mandatory && (s.kind == SchemaKind::Variable || s.kind == SchemaKind::Control ||
                           s.kind == SchemaKind::Algorithm))
      report("no-mandatory-slot", s.name, "", "",
             "schema '" + s.name + "' has no mandatory slot");
  }

  for (const Link& l : kb.links) {
    const Schema* from = kb.find_schema(l.from);
    const Schema* to = kb.find_schema(l.to);
    if (!from || !to)
      report("dangling-link", l.from, l.as_slot, "",
             "dangling link " + l.from + " -> " + l.to + ": unknown schema '" +
                 (from ? l.to : l.from) + "'");
    if (l.relation == LinkRelation::Uses && from && !from->find_slot(l.as_slot))
      report("unknown-slot", l.from, l.as_slot, "",
             "uses link names unknown slot '" + l.from + "." + l.as_slot + "'");
  }

  // Kind-of cycles: one diagnostic per strongly connected component.
  {
    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    int counter = 0;
    std::function<void(const std::string&)> strongconnect = [&](const std::string& v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      for (const std::string& w : kb.parents(v)) {
        if (!kb.find_schema(w)) continue;
        if (!index.count(w)) {
          strongconnect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] != index[v]) return;
      std::vector<std::string> component;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        component.push_back(w);
      } while (w != v);
      const auto parents = kb.parents(v);
      const bool self_loop = std::find(parents.begin(), parents.end(), v) != parents.end();
      if (component.size() > 1 || self_loop) {
        std::sort(component.begin(), component.end());
        std::string members;
        for (const auto& c : component) members += (members.empty() ? "" : ", ") + c;
        report("cycle", component.front(), "", "", "kind-of cycle among " + members);
      }
    };
    for (const Schema& s : kb.schemas)
      if (!index.count(s.name)) strongconnect(s.name);
  }

  std::set<std::string> discourse_ids;
  for (const DiscourseRule& d : kb.discourse_rules) {
    if (!discourse_ids.insert(d.id).second)
      report("duplicate-rule", "", "", d.id, "discourse rule '" + d.id + "' defined twice");
    if (d.check != kNameReflectsFunction && d.check != kNoDoubleDuty && d.check != kNoUnusedPlanPart)
      report("unknown-predicate", "", "", d.id, "unknown discourse predicate '" + d.check + "'");
  }

  std::set<std::string> rule_ids;
  for (const ProductionRule& r : kb.rules) {
    if (!rule_ids.insert(r.id).second)
      report("duplicate-rule", "", "", r.id, "rule '" + r.id + "' defined twice");
    for (const CueCondition& c : r.conditions) {
      if (c.kind == CueKind::Schema && !kb.find_schema(c.value))
        report("unknown-schema", c.value, "", r.id,
               "rule " + r.id + " tests unknown schema '" + c.value + "'");
      if (uses_pattern(c.kind) && c.kind != CueKind::Comment) check_pattern(c.value, "", "", r.id);
    }
    const Schema* target = kb.find_schema(r.activate);
    if (!target) {
      report("unknown-schema", r.activate, "", r.id,
             "rule " + r.id + " activates unknown schema '" + r.activate + "'");
      continue;
    }
    for (const SlotBinding& b : r.bindings) {
      if (!target->find_slot(b.slot))
        report("unknown-slot", r.activate, b.slot, r.id,
               "rule " + r.id + " binds unknown slot '" + r.activate + "." + b.slot + "'");
      check_pattern(b.pattern, r.activate, b.slot, r.id);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Queries

std::vector<std::string> specializations(const KnowledgeBase& kb, std::string_view schema) {
  if (!kb.find_schema(schema))
    throw std::invalid_argument("unknown schema '" + std::string(schema) + "'");
  std::vector<std::string> out;
  std::set<std::string> seen{std::string(schema)};
  std::deque<std::string> queue{std::string(schema)};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    for (const std::string& child : kb.children(cur)) {
      if (!seen.insert(child).second) continue;
      out.push_back(child);
      queue.push_back(child);
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> implementations(const KnowledgeBase& kb,
                                                                 std::string_view schema) {
  if (!kb.find_schema(schema))
    throw std::invalid_argument("unknown schema '" + std::string(schema) + "'");
  std::vector<std::pair<std::string, std::string>> out;
  for (const Link& l : kb.links)
    if (l.relation == LinkRelation::Uses && l.from == schema) out.emplace_back(l.to, l.as_slot);
  return out;
}

}  // namespace plancog
