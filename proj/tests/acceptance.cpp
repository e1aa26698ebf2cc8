// Acceptance harness: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "plancog/analysis.hpp"
#include "plancog/cli.hpp"
#include "support.hpp"

using namespace plancog;
using plancog::testing::data_path;
using plancog::testing::fixture;
using plancog::testing::fixture_path;
using plancog::testing::fixture_source;

namespace {

constexpr double kSentinel = 99999;

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Records the first failed expectation.
class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond && v_.ok) {
      v_.ok = false;
      v_.detail = what;
    }
  }
  Outcome done(const std::string& summary) {
    if (v_.ok) v_.detail = summary;
    return v_;
  }

 private:
  Outcome v_;
};

std::string squash(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  return to_lower(s);
}

// Line of the first source line whose text, spaces removed, contains `needle`.
int source_line_of(const std::string& source, const std::string& needle) {
  std::istringstream in(source);
  std::string line;
  for (int n = 1; std::getline(in, line); ++n)
    if (squash(line).find(squash(needle)) != std::string::npos) return n;
  return 0;
}

nlohmann::json run_json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json");
  std::ostringstream out, err;
  if (run(args, out, err) != kExitOk) return nullptr;
  return nlohmann::json::parse(out.str());
}

Outcome goal_tree_shape() {
  Check c;
  const nlohmann::json doc = run_json({"recognize", fixture_path("grey")});
  c.expect(!doc.is_null(), "recognize failed");
  if (doc.is_null()) return c.done("");
  const auto& root = doc["goal_tree"];
  std::vector<std::string> goals;
  for (const auto& ch : root["children"]) goals.push_back(ch["goal"]);
  c.expect(goals == std::vector<std::string>{"enter-data", "compute-average", "output-average"},
           "root children differ");
  const std::string src = fixture_source("grey");
  const int init_line = source_line_of(src, "Count:=0;");
  const int update_line = source_line_of(src, "Count:=Count+1");
  bool found = false;
  std::function<void(const nlohmann::json&)> walk = [&](const nlohmann::json& n) {
    if (n.contains("plan") && n["plan"]["schema"] == "Counter_Variable") {
      const auto& b = n["plan"]["bindings"];
      found = b.contains("init") && b.contains("update") && b["init"]["line"] == init_line &&
              b["update"]["line"] == update_line && b["init"]["text"] == "Count:=0" &&
              b["update"]["text"] == "Count:=Count+1";
    }
    for (const auto& ch : n["children"]) walk(ch);
  };
  walk(root);
  c.expect(found, "Counter_Variable leaf does not bind lines " + std::to_string(init_line) +
                      " and " + std::to_string(update_line));
  return c.done("root children enter-data, compute-average, output-average; Counter init=" +
                std::to_string(init_line) + " update=" + std::to_string(update_line));
}

std::string rank1(const std::string& name) {
  const std::string src = fixture_source(name);
  const BlankedProgram bp = blank_line(src, marked_line(parse(src)));
  const auto cands = fill_blank(bp, builtin_kb(), Strategy::Plan);
  return cands.empty() ? "" : cands.front().text;
}

Outcome fill_grey() {
  Check c;
  const std::string got = rank1("grey");
  c.expect(squash(got) == squash("Count := 0"), "rank 1 is '" + got + "'");
  return c.done("rank 1 '" + got + "'");
}

Outcome fill_orange() {
  Check c;
  const std::string src = fixture_source("orange");
  const BlankedProgram bp = blank_line(src, marked_line(parse(src)));
  const std::string got = rank1("orange");
  c.expect(squash(got) == squash("Count := 0"), "rank 1 is '" + got + "'");
  c.expect(squash(bp.erased_text) == squash("Count := -1"), "actual line is " + bp.erased_text);
  c.expect(squash(got) != squash(bp.erased_text), "prediction equals the code");
  return c.done("rank 1 '" + got + "', code has '" + bp.erased_text + "'");
}

Outcome discourse() {
  Check c;
  const std::string src = fixture_source("orange");
  const std::vector<int> init_lines = {source_line_of(src, "Sum:=-99999"),
                                       source_line_of(src, "Count:=-1")};
  const PlanlinessReport orange = planliness(fixture("orange"), builtin_kb());
  const PlanlinessReport grey = planliness(fixture("grey"), builtin_kb());
  bool cited = false;
  for (const Violation& v : orange.violations)
    if (v.check == kNoDoubleDuty)
      cited = std::includes(v.lines.begin(), v.lines.end(), init_lines.begin(), init_lines.end());
  c.expect(cited, "no no-double-duty violation citing both initializations");
  c.expect(grey.score > orange.score, "grey score not above orange");
  char buf[96];
  std::snprintf(buf, sizeof buf, "no-double-duty at %d,%d; score grey %.3f > orange %.3f",
                init_lines[0], init_lines[1], grey.score, orange.score);
  return c.done(buf);
}

Outcome compensation() {
  Check c;
  const Program grey = fixture("grey"), orange = fixture("orange");
  std::mt19937 rng(0);
  std::uniform_int_distribution<int> len(1, 20), val(-1000, 1000);
  int equal = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> seq(len(rng));
    for (double& v : seq) v = val(rng);
    seq.push_back(kSentinel);
    const ExecutionResult g = execute(grey, seq), o = execute(orange, seq);
    const bool same = g.ok && o.ok && g.outputs.size() == 1 && o.outputs.size() == 1 &&
                      std::abs(g.outputs[0].as_real() - o.outputs[0].as_real()) <= 1e-9;
    equal += same;
  }
  c.expect(equal == 100, std::to_string(equal) + "/100 sequences agree");
  const ExecutionResult g = execute(grey, {kSentinel}), o = execute(orange, {kSentinel});
  c.expect(!g.ok && g.error == RuntimeErrorKind::DivisionByZero, "grey on empty sequence");
  c.expect(!o.ok && o.error == RuntimeErrorKind::DivisionByZero, "orange on empty sequence");
  return c.done("100/100 sequences agree within 1e-9; empty sequence: both division-by-zero");
}

Outcome activation_order() {
  Check c;
  std::mt19937 rng(0);
  int permutations = 0;
  for (const Fixture& f : corpus()) {
    const auto cues = extract_beacons(parse(read_file(f.path)), builtin_kb());
    const ActivationResult base = activate(builtin_kb(), cues);
    for (int i = 0; i < 20; ++i, ++permutations) {
      auto shuffled = cues;
      KnowledgeBase kb = builtin_kb();
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      std::shuffle(kb.rules.begin(), kb.rules.end(), rng);
      c.expect(activate(kb, shuffled).activations == base.activations,
               f.name + ": activation set changed under permutation");
    }
    auto more = cues;
    more.push_back(Cue{CueKind::Comment, "counter"});
    std::set<std::string> before, after;
    for (const Activation& a : base.activations) before.insert(a.schema);
    for (const Activation& a : activate(builtin_kb(), more).activations) after.insert(a.schema);
    c.expect(std::includes(after.begin(), after.end(), before.begin(), before.end()),
             f.name + ": {counter} removed an activation");
  }
  return c.done(std::to_string(permutations) + " permutations invariant; {counter} monotone");
}

Outcome relations_oracle() {
  Check c;
  int checked = 0;
  for (const Fixture& f : corpus()) {
    const Program p = parse(read_file(f.path));
    if (p.statement_count() > 12) continue;
    ++checked;
    const auto expected = oracle::enumerate_paths(p, 2);
    const auto got = oracle::observed(p, def_use(p, build_cfg(p)));
    c.expect(got.chains == expected.chains, f.name + ": def-use chains differ from paths");
    c.expect(got.uninitialized == expected.uninitialized, f.name + ": uninitialized uses differ");
    std::multiset<int> owned, simple;
    std::function<void(const PrimeNode&)> walk = [&](const PrimeNode& n) {
      if (n.is_leaf()) owned.insert(n.statements.begin(), n.statements.end());
      for (const PrimeNode& ch : n.children) walk(ch);
    };
    walk(decompose_primes(p));
    for (const Stmt* s : p.statements())
      if (s->kind == StmtKind::Assign || s->kind == StmtKind::Readln || s->kind == StmtKind::Writeln)
        simple.insert(s->id);
    c.expect(owned == simple, f.name + ": prime leaves do not partition statements");
  }
  c.expect(checked > 0, "no fixture small enough");
  return c.done(std::to_string(checked) + " fixtures match path enumeration; leaves partition");
}

Outcome delocalized_chunks() {
  Check c;
  const Program p = fixture("grey");
  const Recognition r = recognize(p, builtin_kb());
  double d = -1;
  for (const PlanInstance& i : r.instances)
    if (i.schema == "Counter_Variable") d = delocalization(i);
  c.expect(d == 6.0, "Counter delocalization " + std::to_string(d));
  const double j = boundary_jaccard(chunk(r, p, ChunkMode::Plan), chunk(r, p, ChunkMode::Control));
  c.expect(j < 1.0, "plan and control chunk boundaries coincide");
  char buf[80];
  std::snprintf(buf, sizeof buf, "Counter delocalization %.0f; boundary Jaccard %.4f", d, j);
  return c.done(buf);
}

Outcome kb_round_trip() {
  Check c;
  const std::string once = dump_kb(builtin_kb());
  c.expect(dump_kb(load_kb(once)) == once, "dump -> load -> dump differs");
  const std::pair<const char*, const char*> cases[] = {
      {"cycle.kb", "cycle"}, {"dangling.kb", "dangling-link"}, {"double_proto.kb", "double-prototypical"}};
  for (const auto& [file, code] : cases) {
    const auto diags = validate_kb(parse_kb(read_file(data_path(file))));
    c.expect(diags.size() == 1 && diags[0].code == code, std::string(file) + ": expected " + code);
  }
  return c.done("byte-identical round trip; cycle, dangling-link, double-prototypical reported");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_ms;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "goal tree reproduction", 1000, goal_tree_shape},
      {2, "fill-blank, plan-like", 1000, fill_grey},
      {3, "predicted expert error", 1000, fill_orange},
      {4, "discourse detection", 1000, discourse},
      {5, "compensation property", 5000, compensation},
      {6, "activation determinism and monotonicity", 5000, activation_order},
      {7, "relations oracle", 5000, relations_oracle},
      {8, "delocalization and chunking", 1000, delocalized_chunks},
      {9, "KB round trip", 1000, kb_round_trip},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome v;
    try {
      v = cr.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (v.ok && ms > cr.limit_ms) {
      v.ok = false;
      v.detail += " (too slow)";
    }
    failed += !v.ok;
    std::printf("%s criterion %d %-42s %8.1f ms / %5.0f ms  %s\n", v.ok ? "PASS" : "FAIL", cr.id,
                cr.name, ms, cr.limit_ms, v.detail.c_str());
  }
  return failed;
}
