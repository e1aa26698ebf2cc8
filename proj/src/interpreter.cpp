#include "plancog/interpreter.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

namespace plancog {

std::string format_real(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string out(buf, end);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string Value::to_string() const {
  switch (type) {
    case ScalarType::Integer: return std::to_string(int_value);
    case ScalarType::Real: return format_real(real_value);
    case ScalarType::Boolean: return bool_value ? "TRUE" : "FALSE";
  }
  return "?";
}

std::string_view to_string(RuntimeErrorKind kind) {
  switch (kind) {
    case RuntimeErrorKind::DivisionByZero: return "division-by-zero";
    case RuntimeErrorKind::InputExhausted: return "input-exhausted";
    case RuntimeErrorKind::StepBudgetExceeded: return "step-budget-exceeded";
    case RuntimeErrorKind::Overflow: return "overflow";
    case RuntimeErrorKind::TypeMismatch: return "type-mismatch";
    case RuntimeErrorKind::Uninitialized: return "uninitialized";
    case RuntimeErrorKind::Hole: return "hole";
  }
  return "?";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Equal: return "equal";
    case Verdict::EqualByError: return "equal-by-error";
    case Verdict::Unequal: return "unequal";
    case Verdict::DifferentStatus: return "different-status";
  }
  return "?";
}

std::vector<std::string> ExecutionResult::rendered_outputs() const {
  std::vector<std::string> out;
  for (const Value& v : outputs) out.push_back(v.to_string());
  return out;
}

namespace {

struct Abort {
  RuntimeErrorKind kind;
  int line;
  std::string message;
};

class Machine {
 public:
  Machine(const Program& p, const std::vector<double>& inputs, int budget)
      : program_(p), inputs_(inputs), budget_(budget) {}

  ExecutionResult run() {
    try {
      for (const Stmt& s : program_.body) exec(s);
    } catch (const Abort& a) {
      result_.ok = false;
      result_.error = a.kind;
      result_.error_line = a.line;
      result_.error_message = a.message;
    }
    result_.final_values = vars_;
    return std::move(result_);
  }

 private:
  [[noreturn]] void fail(RuntimeErrorKind kind, int line, std::string message) {
    throw Abort{kind, line, std::move(message)};
  }

  void tick(int line) {
    if (result_.steps >= budget_)
      fail(RuntimeErrorKind::StepBudgetExceeded, line,
           "step budget of " + std::to_string(budget_) + " exhausted");
    ++result_.steps;
  }

  void store(const std::string& var, Value v, const Stmt& s) {
    const Declaration* decl = program_.find_declaration(var);
    if (decl->type == ScalarType::Real && v.type == ScalarType::Integer)
      v = Value::real(double(v.int_value));
    if (decl->type != v.type)
      fail(RuntimeErrorKind::TypeMismatch, s.line,
           "cannot store " + std::string(plancog::to_string(v.type)) + " in " + var);
    vars_[var] = v;
    result_.trace.push_back(TraceEvent{result_.steps, s.line, s.id, var, v});
  }

  Value checked_real(double v, int line) {
    if (!std::isfinite(v)) fail(RuntimeErrorKind::Overflow, line, "real overflow");
    return Value::real(v);
  }

  bool truth(const Expr& e, int line) {
    Value v = eval(e, line);
    if (v.type != ScalarType::Boolean)
      fail(RuntimeErrorKind::TypeMismatch, line, "condition is not boolean");
    return v.bool_value;
  }

  Value eval(const Expr& e, int line) {
    switch (e.kind) {
      case ExprKind::IntLit: return Value::integer(e.int_value);
      case ExprKind::RealLit: return Value::real(e.real_value);
      case ExprKind::BoolLit: return Value::boolean(e.bool_value);
      case ExprKind::Var: {
        auto it = vars_.find(e.op);
        if (it == vars_.end())
          fail(RuntimeErrorKind::Uninitialized, line, e.op + " read before assignment");
        return it->second;
      }
      case ExprKind::Unary: {
        Value v = eval(e.args[0], line);
        if (e.op == "NOT") {
          if (v.type != ScalarType::Boolean) fail(RuntimeErrorKind::TypeMismatch, line, "NOT");
          return Value::boolean(!v.bool_value);
        }
        if (v.type == ScalarType::Boolean)
          fail(RuntimeErrorKind::TypeMismatch, line, "sign on boolean");
        if (e.op == "+") return v;
        if (v.type == ScalarType::Real) return Value::real(-v.real_value);
        if (v.int_value == std::numeric_limits<std::int64_t>::min())
          fail(RuntimeErrorKind::Overflow, line, "integer overflow");
        return Value::integer(-v.int_value);
      }
      case ExprKind::Binary: return binary(e.op, eval(e.args[0], line), eval(e.args[1], line), line);
    }
    return Value{};
  }

  Value binary(const std::string& op, const Value& a, const Value& b, int line) {
    const bool boolean = a.type == ScalarType::Boolean || b.type == ScalarType::Boolean;
    if (op == "AND" || op == "OR") {
      if (a.type != ScalarType::Boolean || b.type != ScalarType::Boolean)
        fail(RuntimeErrorKind::TypeMismatch, line, op + " needs booleans");
      return Value::boolean(op == "AND" ? a.bool_value && b.bool_value
                                        : a.bool_value || b.bool_value);
    }
    if (op == "=" || op == "<>" || op == "<" || op == "<=" || op == ">" || op == ">=") {
      int cmp = 0;
      if (boolean) {
        if (a.type != b.type || (op != "=" && op != "<>"))
          fail(RuntimeErrorKind::TypeMismatch, line, "bad boolean comparison");
        cmp = int(a.bool_value) - int(b.bool_value);
      } else if (a.type == ScalarType::Integer && b.type == ScalarType::Integer) {
        cmp = a.int_value < b.int_value ? -1 : a.int_value > b.int_value ? 1 : 0;
      } else {
        const double x = a.as_real(), y = b.as_real();
        cmp = x < y ? -1 : x > y ? 1 : 0;
      }
      if (op == "=") return Value::boolean(cmp == 0);
      if (op == "<>") return Value::boolean(cmp != 0);
      if (op == "<") return Value::boolean(cmp < 0);
      if (op == "<=") return Value::boolean(cmp <= 0);
      if (op == ">") return Value::boolean(cmp > 0);
      return Value::boolean(cmp >= 0);
    }
    if (boolean) fail(RuntimeErrorKind::TypeMismatch, line, op + " on boolean");
    if (op == "/") {
      if (b.as_real() == 0.0) fail(RuntimeErrorKind::DivisionByZero, line, "division by zero");
      return checked_real(a.as_real() / b.as_real(), line);
    }
    if (op == "DIV" || op == "MOD") {
      if (a.type != ScalarType::Integer || b.type != ScalarType::Integer)
        fail(RuntimeErrorKind::TypeMismatch, line, op + " needs integers");
      if (b.int_value == 0) fail(RuntimeErrorKind::DivisionByZero, line, "division by zero");
      if (a.int_value == std::numeric_limits<std::int64_t>::min() && b.int_value == -1)
        fail(RuntimeErrorKind::Overflow, line, "integer overflow");
      return Value::integer(op == "DIV" ? a.int_value / b.int_value : a.int_value % b.int_value);
    }
    if (a.type == ScalarType::Integer && b.type == ScalarType::Integer) {
      std::int64_t r = 0;
      bool over = false;
      if (op == "+") over = __builtin_add_overflow(a.int_value, b.int_value, &r);
      else if (op == "-") over = __builtin_sub_overflow(a.int_value, b.int_value, &r);
      else over = __builtin_mul_overflow(a.int_value, b.int_value, &r);
      if (over) fail(RuntimeErrorKind::Overflow, line, "integer overflow");
      return Value::integer(r);
    }
    const double x = a.as_real(), y = b.as_real();
    if (op == "+") return checked_real(x + y, line);
    if (op == "-") return checked_real(x - y, line);
    return checked_real(x * y, line);
  }

  void read(const Stmt& s) {
    if (next_input_ >= inputs_.size())
      fail(RuntimeErrorKind::InputExhausted, s.line, "no input left for " + s.target);
    const double raw = inputs_[next_input_++];
    const Declaration* decl = program_.find_declaration(s.target);
    switch (decl->type) {
      case ScalarType::Integer:
        if (raw != std::trunc(raw) || std::fabs(raw) >= 9.2e18)
          fail(RuntimeErrorKind::TypeMismatch, s.line, "non-integer input for " + s.target);
        store(s.target, Value::integer(static_cast<std::int64_t>(raw)), s);
        break;
      case ScalarType::Real: store(s.target, Value::real(raw), s); break;
      case ScalarType::Boolean:
        fail(RuntimeErrorKind::TypeMismatch, s.line, "cannot read a boolean");
    }
  }

  void exec(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Assign:
        tick(s.line);
        store(s.target, eval(s.expr, s.line), s);
        break;
      case StmtKind::Readln:
        tick(s.line);
        read(s);
        break;
      case StmtKind::Writeln:
        tick(s.line);
        result_.outputs.push_back(eval(s.expr, s.line));
        break;
      case StmtKind::Hole:
        fail(RuntimeErrorKind::Hole, s.line, "program has a blank line");
      case StmtKind::Compound:
        for (const Stmt& c : s.body) exec(c);
        break;
      case StmtKind::Repeat:
        do {
          for (const Stmt& c : s.body) exec(c);
          tick(s.end_line);
        } while (!truth(s.expr, s.end_line));
        break;
      case StmtKind::While:
        while (true) {
          tick(s.line);
          if (!truth(s.expr, s.line)) break;
          exec(s.body.front());
        }
        break;
      case StmtKind::For: {
        tick(s.line);
        const Value lo = eval(s.expr, s.line), hi = eval(s.limit, s.line);
        if (lo.type != ScalarType::Integer || hi.type != ScalarType::Integer)
          fail(RuntimeErrorKind::TypeMismatch, s.line, "FOR bounds must be integers");
        if (lo.int_value > hi.int_value) break;
        for (std::int64_t i = lo.int_value;; ++i) {
          store(s.target, Value::integer(i), s);
          exec(s.body.front());
          if (i == hi.int_value) break;
          tick(s.line);
        }
        break;
      }
      case StmtKind::If:
        tick(s.line);
        if (truth(s.expr, s.line))
          exec(s.body.front());
        else if (!s.orelse.empty())
          exec(s.orelse.front());
        break;
    }
  }

  const Program& program_;
  const std::vector<double>& inputs_;
  std::size_t next_input_ = 0;
  int budget_;
  std::map<std::string, Value> vars_;
  ExecutionResult result_;
};

bool same_outputs(const std::vector<Value>& a, const std::vector<Value>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool bool_a = a[i].type == ScalarType::Boolean, bool_b = b[i].type == ScalarType::Boolean;
    if (bool_a || bool_b) {
      if (bool_a != bool_b || a[i].bool_value != b[i].bool_value) return false;
      continue;
    }
    if (std::fabs(a[i].as_real() - b[i].as_real()) > 1e-9) return false;
  }
  return true;
}

}  // namespace

ExecutionResult execute(const Program& program, const std::vector<double>& inputs,
                        int step_budget) {
  return Machine(program, inputs, step_budget).run();
}

std::vector<TraceEvent> trace_variable(const Program& program, const std::vector<double>& inputs,
                                       const std::string& var, int step_budget) {
  const Declaration* decl = program.find_declaration(var);
  if (!decl) throw std::invalid_argument("unknown variable " + var);
  std::vector<TraceEvent> out;
  for (TraceEvent& e : execute(program, inputs, step_budget).trace)
    if (e.variable == decl->name) out.push_back(std::move(e));
  return out;
}

bool BehaviorReport::equivalent() const {
  for (const auto& c : comparisons)
    if (c.verdict != Verdict::Equal && c.verdict != Verdict::EqualByError) return false;
  return true;
}

BehaviorReport compare_behavior(const Program& a, const Program& b,
                                const std::vector<std::vector<double>>& input_sets,
                                int step_budget) {
  BehaviorReport report;
  for (const auto& inputs : input_sets) {
    BehaviorComparison c;
    c.inputs = inputs;
    c.first = execute(a, inputs, step_budget);
    c.second = execute(b, inputs, step_budget);
    if (c.first.ok && c.second.ok)
      c.verdict = same_outputs(c.first.outputs, c.second.outputs) ? Verdict::Equal : Verdict::Unequal;
    else if (!c.first.ok && !c.second.ok && c.first.error == c.second.error)
      c.verdict = Verdict::EqualByError;
    else
      c.verdict = Verdict::DifferentStatus;
    report.comparisons.push_back(std::move(c));
  }
  return report;
}

}  // namespace plancog
