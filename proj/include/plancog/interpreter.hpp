#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "plancog/frontend.hpp"

namespace plancog {

inline constexpr int kDefaultStepBudget = 100000;

struct Value {
  ScalarType type = ScalarType::Integer;
  std::int64_t int_value = 0;
  double real_value = 0.0;
  bool bool_value = false;

  static Value integer(std::int64_t v) { return Value{ScalarType::Integer, v, 0.0, false}; }
  static Value real(double v) { return Value{ScalarType::Real, 0, v, false}; }
  static Value boolean(bool v) { return Value{ScalarType::Boolean, 0, 0.0, v}; }

  double as_real() const { return type == ScalarType::Integer ? double(int_value) : real_value; }
  std::string to_string() const;

  bool operator==(const Value&) const = default;
};

// Shortest round-trip decimal; integral values keep a ".0" suffix.
std::string format_real(double v);

enum class RuntimeErrorKind {
  DivisionByZero,
  InputExhausted,
  StepBudgetExceeded,
  Overflow,
  TypeMismatch,
  Uninitialized,
  Hole,
};

std::string_view to_string(RuntimeErrorKind kind);

struct TraceEvent {
  int step = 0;
  int line = 0;
  int stmt_id = -1;
  std::string variable;
  Value value;
};

struct ExecutionResult {
  std::vector<Value> outputs;
  std::vector<TraceEvent> trace;
  bool ok = true;
  RuntimeErrorKind error = RuntimeErrorKind::DivisionByZero;
  int error_line = 0;
  std::string error_message;
  int steps = 0;
  // Variables holding a value when execution stopped.
  std::map<std::string, Value> final_values;

  std::vector<std::string> rendered_outputs() const;
};

// Steps count executed simple statements and evaluated loop/IF tests; the
// run stops with step-budget-exceeded rather than exceed `step_budget`.
ExecutionResult execute(const Program& program, const std::vector<double>& inputs,
                        int step_budget = kDefaultStepBudget);

// Throws std::invalid_argument when `var` is not declared.
std::vector<TraceEvent> trace_variable(const Program& program, const std::vector<double>& inputs,
                                       const std::string& var,
                                       int step_budget = kDefaultStepBudget);

enum class Verdict { Equal, EqualByError, Unequal, DifferentStatus };

std::string_view to_string(Verdict verdict);

struct BehaviorComparison {
  std::vector<double> inputs;
  Verdict verdict = Verdict::Equal;
  ExecutionResult first;
  ExecutionResult second;
};

struct BehaviorReport {
  std::vector<BehaviorComparison> comparisons;
  // Every comparison is Equal or EqualByError.
  bool equivalent() const;
};

// Real outputs compare within 1e-9.
BehaviorReport compare_behavior(const Program& a, const Program& b,
                                const std::vector<std::vector<double>>& input_sets,
                                int step_budget = kDefaultStepBudget);

}  // namespace plancog
