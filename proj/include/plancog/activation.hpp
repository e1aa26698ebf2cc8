#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plancog/frontend.hpp"
#include "plancog/interpreter.hpp"
#include "plancog/kb.hpp"
#include "plancog/relations.hpp"

namespace plancog {

// A beacon. `subject` names the variable a name/type/init/update cue is
// about (and, for schema cues, the variable a variable plan was activated
// for); it is empty for loop, loop-form and comment cues.
struct Cue {
  CueKind kind = CueKind::Name;
  std::string payload;
  std::string subject;
  int line = 0;
  int stmt_id = -1;

  std::string describe() const;
  auto operator<=>(const Cue&) const = default;
};

std::vector<Cue> extract_beacons(const Program& program, const KnowledgeBase& kb);

struct Activation {
  std::string schema;
  Direction direction = Direction::DataDriven;
  // Rules that fired for this schema, sorted by id.
  std::vector<std::string> rules;
  std::vector<Cue> cues;
  // Conceptually-driven expansion: schemas this one was reached from.
  std::vector<std::string> sources;
  // Variables the schema was activated for (schema cue subjects).
  std::vector<std::string> subjects;

  bool operator==(const Activation&) const = default;
};

// One rule firing in the order it happened.
struct Firing {
  int round = 0;
  std::string rule;
  Direction direction = Direction::DataDriven;
  std::string schema;
  std::string subject;
  std::vector<Cue> cues;
};

struct ActivationResult {
  // Sorted by schema name.
  std::vector<Activation> activations;
  std::vector<Firing> trace;
  // Cue set at the fixpoint: the input cues plus derived schema cues.
  std::vector<Cue> cues;

  const Activation* find(std::string_view schema) const;
  bool active(std::string_view schema) const { return find(schema) != nullptr; }
};

// Data-driven rules fire to a fixpoint; then kind-of children and uses-linked
// sub-plans of everything active are added (each schema visited once) and
// conceptually-driven rules fire over the enlarged cue set. The activation
// set does not depend on cue or rule order.
ActivationResult activate(const KnowledgeBase& kb, const std::vector<Cue>& cues);

enum class BindingKind { Declaration, Statement, Condition, Keyword, Instance };

std::string_view to_string(BindingKind kind);

struct Bound {
  std::string slot;
  BindingKind kind = BindingKind::Statement;
  // Statement (or loop, for Condition/Keyword) the slot is bound to.
  int stmt_id = -1;
  int line = 0;
  std::string text;
  // Instance kind: index of the bound sub-plan instance.
  int child = -1;
};

// A candidate node that fit none of the slot's fillers.
struct Conflict {
  std::string slot;
  int stmt_id = -1;
  int line = 0;
  std::string text;
};

struct PlanInstance {
  int id = 0;
  std::string schema;
  SchemaKind kind = SchemaKind::Variable;
  // Variable plans: the variable. Others: empty.
  std::string subject;
  // Loop-anchored plans: the loop statement.
  int loop = -1;
  std::vector<Bound> bindings;
  std::vector<Conflict> conflicts;
  bool complete = false;
  std::vector<int> children;

  const Bound* binding(std::string_view slot) const;
  // Lines of statement and condition bindings, ascending and distinct.
  std::vector<int> code_lines() const;
  std::string label() const;
};

enum class ExpectationState { Open, Verified, Violated };

std::string_view to_string(ExpectationState state);

struct Expectation {
  int instance = 0;
  std::string slot;
  // Filler pattern with the instance's variables substituted where possible.
  std::string expected;
  bool prototypical = false;
  // Rule id, or "slot" for an unbound mandatory slot.
  std::string origin;
  ExpectationState state = ExpectationState::Open;
  int line = 0;
};

struct Instantiation {
  std::vector<PlanInstance> instances;
  std::vector<Expectation> expectations;
};

// Variable plans get one instance per variable whose definitions fit the
// schema's anchor slot (update, else init, else output) or that a rule
// activated the schema for; loop-anchored plans one per loop where every
// mandatory slot can be bound.
Instantiation instantiate(const KnowledgeBase& kb, const Program& program,
                          const ActivationResult& activation, const DefUse& du);

std::vector<Expectation> verify_expectations(std::vector<Expectation> expectations,
                                             const std::vector<PlanInstance>& instances,
                                             const Program& program, const KnowledgeBase& kb,
                                             const DefUse& du);

struct InternalCheck {
  int instance = 0;
  std::string slot;
  std::string constraint;
  bool ok = true;
  int line = 0;
};

enum class Evidence { Static, Simulated };

std::string_view to_string(Evidence evidence);

struct Interaction {
  int first = 0;
  int second = 0;
  std::string description;
  Evidence evidence = Evidence::Static;
  std::vector<double> inputs;
  bool run_ok = true;
};

struct CoherenceReport {
  std::vector<InternalCheck> internal;
  std::vector<Interaction> external;

  bool internally_coherent(int instance) const;
};

CoherenceReport evaluate_coherence(const std::vector<PlanInstance>& instances, const DefUse& du,
                                   const Program& program, const KnowledgeBase& kb,
                                   int step_budget = kDefaultStepBudget);

struct Recognition {
  Cfg cfg;
  DefUse du;
  std::vector<Cue> cues;
  ActivationResult activation;
  std::vector<PlanInstance> instances;
  std::vector<Expectation> expectations;
  CoherenceReport coherence;
};

Recognition recognize(const Program& program, const KnowledgeBase& kb,
                      int step_budget = kDefaultStepBudget);

}  // namespace plancog
