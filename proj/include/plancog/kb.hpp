#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plancog {

// ---------------------------------------------------------------------------
// Cue patterns
//
//   literal text        token-wise, case-insensitive, whitespace-insensitive
//   <v> <w> <a> ...     a single lower-case letter: any identifier; the same
//                       letter binds the same identifier, distinct letters
//                       distinct identifiers
//   <int>               an unsigned integer literal
//   <Slot_Name>         the variable bound to that (sub-plan) slot
//   iteration           any loop keyword (REPEAT, WHILE, FOR)
//   ~text               case-insensitive substring match, no wildcards

struct PatternToken {
  enum class Kind { Literal, Variable, Integer, SlotRef, Iteration };
  Kind kind = Kind::Literal;
  std::string text;
  // Identifier, keyword or number: needs a space next to another word.
  bool word = false;
};

struct Pattern {
  std::string source;
  bool substring = false;
  std::vector<PatternToken> tokens;
};

class PatternError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Pattern parse_pattern(std::string_view text);

// Letter wildcards to identifiers, or slot names to identifiers.
using Bindings = std::map<std::string, std::string>;

// Matches `text` (mini-Pascal source fragment) in full. `bindings` pre-binds
// letter wildcards and provides slot references; on success it is extended
// with the new letter bindings.
bool match_pattern(const Pattern& pattern, std::string_view text, Bindings& bindings);
bool match_pattern(const Pattern& pattern, std::string_view text);

// Substitutes bound wildcards. Returns nullopt if an unbound wildcard or
// `<int>` remains, or for substring patterns.
std::optional<std::string> instantiate_pattern(const Pattern& pattern, const Bindings& bindings);

// ---------------------------------------------------------------------------
// Knowledge base

enum class SchemaKind { Variable, Control, Algorithm, Implementation, Problem };

std::string_view to_string(SchemaKind kind);

struct Filler {
  std::string pattern;
  bool prototypical = false;
  bool operator==(const Filler&) const = default;
};

struct Slot {
  std::string name;
  bool mandatory = false;
  std::vector<Filler> fillers;

  const Filler* prototype() const;
  bool operator==(const Slot&) const = default;
};

struct Schema {
  std::string name;
  SchemaKind kind = SchemaKind::Variable;
  std::string description;
  std::vector<Slot> slots;

  const Slot* find_slot(std::string_view slot) const;
  bool operator==(const Schema&) const = default;
};

enum class LinkRelation { KindOf, Uses };

// KindOf: `from` is a kind of `to`. Uses: `from` uses `to` as its slot
// `as_slot`. Both are declared inside the `from` schema block.
struct Link {
  LinkRelation relation = LinkRelation::KindOf;
  std::string from;
  std::string to;
  std::string as_slot;
  bool operator==(const Link&) const = default;
};

struct DiscourseRule {
  std::string id;
  std::string check;
  std::string statement;
  bool operator==(const DiscourseRule&) const = default;
};

inline constexpr std::string_view kNameReflectsFunction = "name-reflects-function";
inline constexpr std::string_view kNoDoubleDuty = "no-double-duty";
inline constexpr std::string_view kNoUnusedPlanPart = "no-unused-plan-part";

enum class CueKind { Name, Type, Init, Update, Loop, LoopForm, Comment, Schema };

std::string_view to_string(CueKind kind);
std::optional<CueKind> cue_kind_from_string(std::string_view s);
// name, type, init and update cues describe one variable.
bool is_variable_scoped(CueKind kind);

// A rule condition: `kind~"pattern"` or `kind=value`.
struct CueCondition {
  CueKind kind = CueKind::Name;
  std::string value;
  bool operator==(const CueCondition&) const = default;
};

enum class Direction { DataDriven, ConceptuallyDriven };

std::string_view to_string(Direction d);

struct SlotBinding {
  std::string slot;
  std::string pattern;
  bool operator==(const SlotBinding&) const = default;
};

struct ProductionRule {
  std::string id;
  Direction direction = Direction::DataDriven;
  std::vector<CueCondition> conditions;
  std::string activate;
  std::vector<SlotBinding> bindings;
  bool operator==(const ProductionRule&) const = default;
};

struct KnowledgeBase {
  std::vector<Schema> schemas;
  std::vector<Link> links;
  std::vector<DiscourseRule> discourse_rules;
  std::vector<ProductionRule> rules;

  const Schema* find_schema(std::string_view name) const;
  // Direct kind-of parents / children.
  std::vector<std::string> parents(std::string_view schema) const;
  std::vector<std::string> children(std::string_view schema) const;
  // True if `schema` equals `ancestor` or is a transitive kind-of descendant.
  bool is_a(std::string_view schema, std::string_view ancestor) const;
  bool operator==(const KnowledgeBase&) const = default;
};

struct Diagnostic {
  std::string code;
  std::string schema;
  std::string slot;
  std::string rule;
  std::string message;
};

class KbParseError : public std::runtime_error {
 public:
  KbParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

class KbValidationError : public std::runtime_error {
 public:
  explicit KbValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Parses without validating.
KnowledgeBase parse_kb(std::string_view text);
// Parses and validates; throws KbValidationError listing every diagnostic.
KnowledgeBase load_kb(std::string_view text);
std::string dump_kb(const KnowledgeBase& kb);
std::vector<Diagnostic> validate_kb(const KnowledgeBase& kb);

const KnowledgeBase& builtin_kb();
std::string_view builtin_kb_text();

// Transitive kind-of descendants, breadth-first, each listed once.
std::vector<std::string> specializations(const KnowledgeBase& kb, std::string_view schema);
// Direct uses-links out of `schema`: (used schema, slot of `schema`).
std::vector<std::pair<std::string, std::string>> implementations(const KnowledgeBase& kb,
                                                                 std::string_view schema);

}  // namespace plancog
