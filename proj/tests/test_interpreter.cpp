#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plancog/interpreter.hpp"
#include "support.hpp"

using namespace plancog;
using plancog::testing::fixture;

namespace {

constexpr double kSentinel = 99999;

Program snippet(const std::string& decls, const std::string& body) {
  return parse("PROGRAM T(input, output);\nVAR " + decls + ";\nBEGIN\n" + body + "\nEND.\n");
}

std::vector<double> random_sequence(std::mt19937& rng) {
  std::uniform_int_distribution<int> len(1, 20), val(-1000, 1000);
  std::vector<double> seq(len(rng));
  for (double& v : seq) v = val(rng);  // the range never reaches the sentinel
  seq.push_back(kSentinel);
  return seq;
}

// The value both fixtures are meant to print: the mean of the values before
// the sentinel.
double mean_before_sentinel(const std::vector<double>& seq) {
  double sum = 0;
  int n = 0;
  for (double v : seq) {
    if (v == kSentinel) break;
    sum += v;
    ++n;
  }
  return sum / n;
}

std::vector<std::int64_t> values(const std::vector<TraceEvent>& trace) {
  std::vector<std::int64_t> out;
  for (const TraceEvent& e : trace) out.push_back(e.value.int_value);
  return out;
}

}  // namespace

TEST_CASE("grey and orange average 1,2,3") {
  for (const char* name : {"grey", "orange"}) {
    CAPTURE(name);
    const ExecutionResult r = execute(fixture(name), {1, 2, 3, kSentinel});
    REQUIRE(r.ok);
    REQUIRE(r.outputs.size() == 1);
    CHECK(r.outputs[0].type == ScalarType::Real);
    CHECK(r.outputs[0].real_value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.rendered_outputs() == std::vector<std::string>{"2.0"});
    CHECK(r.final_values.at("Sum").int_value == 6);
    CHECK(r.final_values.at("Count").int_value == 3);
  }
}

TEST_CASE("sentinel alone divides by zero") {
  const ExecutionResult g = execute(fixture("grey"), {kSentinel});
  CHECK_FALSE(g.ok);
  CHECK(g.error == RuntimeErrorKind::DivisionByZero);
  CHECK(g.error_line == 15);
  CHECK(g.final_values.at("Count").int_value == 0);
  const ExecutionResult o = execute(fixture("orange"), {kSentinel});
  CHECK(o.error == RuntimeErrorKind::DivisionByZero);
  CHECK(o.error_line == 12);
}

TEST_CASE("trace_variable") {
  SUBCASE("grey count") {
    const auto t = trace_variable(fixture("grey"), {5, kSentinel}, "Count");
    REQUIRE(t.size() == 2);
    CHECK(values(t) == std::vector<std::int64_t>{0, 1});
    CHECK(t[0].line == 6);
    CHECK(t[1].line == 12);
    CHECK(t[0].step < t[1].step);
  }
  SUBCASE("orange count is bumped for the sentinel too") {
    const auto t = trace_variable(fixture("orange"), {5, kSentinel}, "count");
    CHECK(values(t) == std::vector<std::int64_t>{-1, 0, 1});
  }
  SUBCASE("unused variable") {
    const Program p = snippet("X, Y: INTEGER", "  X:=1;\n  WRITELN(X)");
    CHECK(trace_variable(p, {}, "Y").empty());
  }
  SUBCASE("unknown variable") {
    CHECK_THROWS_AS(trace_variable(fixture("grey"), {}, "Nope"), std::invalid_argument);
  }
}

TEST_CASE("compare_behavior verdicts") {
  const Program grey = fixture("grey"), orange = fixture("orange");
  auto one = [](const BehaviorReport& r) { return r.comparisons.at(0).verdict; };
  CHECK(one(compare_behavior(grey, orange, {{1, 2, 3, kSentinel}})) == Verdict::Equal);
  CHECK(one(compare_behavior(grey, orange, {{kSentinel}})) == Verdict::EqualByError);
  CHECK(one(compare_behavior(grey, grey, {{4, -7, kSentinel}})) == Verdict::Equal);
  const Program other = snippet("X: INTEGER", "  READLN(X);\n  WRITELN(X+1)");
  CHECK(one(compare_behavior(grey, other, {{1, kSentinel}})) == Verdict::Unequal);
  CHECK(one(compare_behavior(grey, other, {{kSentinel}})) == Verdict::DifferentStatus);
  CHECK(compare_behavior(grey, orange, {{1, kSentinel}, {kSentinel}}).equivalent());
}

TEST_CASE("property: compensation over seeded sequences") {
  std::mt19937 rng(0);
  const Program grey = fixture("grey"), orange = fixture("orange");
  for (int i = 0; i < 200; ++i) {
    const auto seq = random_sequence(rng);
    CAPTURE(i);
    const ExecutionResult g = execute(grey, seq), o = execute(orange, seq);
    REQUIRE(g.ok);
    REQUIRE(o.ok);
    REQUIRE(g.outputs.size() == 1);
    REQUIRE(o.outputs.size() == 1);
    const double want = mean_before_sentinel(seq);
    CHECK(std::abs(g.outputs[0].as_real() - want) <= 1e-9);
    CHECK(std::abs(o.outputs[0].as_real() - g.outputs[0].as_real()) <= 1e-9);
  }
}

TEST_CASE("property: trace completeness") {
  std::mt19937 rng(7);
  const Program grey = fixture("grey"), orange = fixture("orange");
  for (int i = 0; i < 50; ++i) {
    const auto seq = random_sequence(rng);
    const std::size_t before_sentinel = seq.size() - 1;
    CHECK(trace_variable(grey, seq, "Count").size() == 1 + before_sentinel);
    CHECK(trace_variable(orange, seq, "Count").size() == 1 + seq.size());
  }
}

TEST_CASE("property: determinism") {
  std::mt19937 rng(3);
  const Program grey = fixture("grey");
  for (int i = 0; i < 20; ++i) {
    const auto seq = random_sequence(rng);
    const ExecutionResult a = execute(grey, seq), b = execute(grey, seq);
    CHECK(a.outputs == b.outputs);
    CHECK(a.steps == b.steps);
    CHECK(a.trace.size() == b.trace.size());
  }
}

TEST_CASE("runtime errors") {
  SUBCASE("input exhausted") {
    const ExecutionResult r = execute(fixture("grey"), {1, 2});
    CHECK(r.error == RuntimeErrorKind::InputExhausted);
    CHECK(r.error_line == 8);
  }
  SUBCASE("step budget") {
    const ExecutionResult r =
        execute(snippet("X: INTEGER", "  X:=0;\n  WHILE X=X DO\n    X:=X+1"), {}, 500);
    CHECK(r.error == RuntimeErrorKind::StepBudgetExceeded);
    CHECK(r.steps <= 500);
  }
  SUBCASE("overflow") {
    const ExecutionResult r =
        execute(snippet("X: INTEGER", "  X:=9223372036854775807;\n  X:=X+1"), {});
    CHECK(r.error == RuntimeErrorKind::Overflow);
    CHECK(r.error_line == 5);
  }
  SUBCASE("integer division by zero") {
    const ExecutionResult r = execute(snippet("X: INTEGER", "  X:=0;\n  X:=5 DIV X"), {});
    CHECK(r.error == RuntimeErrorKind::DivisionByZero);
  }
  SUBCASE("read of a fraction into an integer") {
    const ExecutionResult r = execute(snippet("X: INTEGER", "  READLN(X)"), {1.5});
    CHECK(r.error == RuntimeErrorKind::TypeMismatch);
  }
  SUBCASE("uninitialized read") {
    const ExecutionResult r = execute(snippet("X: INTEGER", "  WRITELN(X)"), {});
    CHECK(r.error == RuntimeErrorKind::Uninitialized);
    CHECK(r.error_line == 4);
  }
  SUBCASE("hole") {
    const BlankedProgram bp = blank_line(plancog::testing::fixture_source("grey"), 6);
    const ExecutionResult r = execute(bp.context, {1, kSentinel});
    CHECK(r.error == RuntimeErrorKind::Hole);
    CHECK(r.error_line == 6);
  }
}

TEST_CASE("arithmetic") {
  const ExecutionResult r = execute(
      snippet("X: INTEGER; R: REAL; B: BOOLEAN",
              "  X:=7 DIV 2;\n  WRITELN(X);\n  WRITELN(7/2);\n  WRITELN(7 MOD 3);\n"
              "  R:=X;\n  WRITELN(R);\n  B:=NOT (X>2) OR (X=3);\n  WRITELN(B);\n"
              "  FOR X:=1 TO 3 DO\n    R:=R+X;\n  WRITELN(R)"),
      {});
  REQUIRE(r.ok);
  CHECK(r.rendered_outputs() ==
        std::vector<std::string>{"3", "3.5", "1", "3.0", "TRUE", "9.0"});
}

TEST_CASE("real formatting") {
  CHECK(format_real(2.0) == "2.0");
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(-2.5) == "-2.5");
  CHECK(format_real(1.0 / 3.0) == "0.3333333333333333");
}
