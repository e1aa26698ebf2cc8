#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "plancog/activation.hpp"
#include "support.hpp"

using namespace plancog;
using plancog::testing::fixture;
using plancog::testing::kFixtures;

namespace {

Program snippet(const std::string& decls, const std::string& body) {
  return parse("PROGRAM T(input, output);\nVAR " + decls + ";\nBEGIN\n" + body + "\nEND.\n");
}

bool has_cue(const std::vector<Cue>& cues, CueKind kind, const std::string& payload, int line = 0) {
  return std::any_of(cues.begin(), cues.end(), [&](const Cue& c) {
    return c.kind == kind && c.payload == payload && (line == 0 || c.line == line);
  });
}

std::set<std::string> schemas(const ActivationResult& r) {
  std::set<std::string> out;
  for (const Activation& a : r.activations) out.insert(a.schema);
  return out;
}

std::set<std::string> data_driven(const ActivationResult& r) {
  std::set<std::string> out;
  for (const Activation& a : r.activations)
    if (a.direction == Direction::DataDriven) out.insert(a.schema);
  return out;
}

std::vector<const PlanInstance*> instances_of(const Recognition& r, const std::string& schema) {
  std::vector<const PlanInstance*> out;
  for (const PlanInstance& i : r.instances)
    if (i.schema == schema) out.push_back(&i);
  return out;
}

const Expectation* expectation(const Recognition& r, const std::string& slot) {
  for (const Expectation& e : r.expectations)
    if (e.slot == slot) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("beacons") {
  SUBCASE("grey") {
    const auto cues = extract_beacons(fixture("grey"), builtin_kb());
    CHECK(has_cue(cues, CueKind::Init, "Count:=0", 6));
    CHECK(has_cue(cues, CueKind::Loop, "repeat", 7));
    CHECK(has_cue(cues, CueKind::Update, "Count:=Count+1", 12));
  }
  SUBCASE("declaration") {
    const auto cues = extract_beacons(snippet("I: INTEGER", "  I:=1"), builtin_kb());
    CHECK(has_cue(cues, CueKind::Name, "I"));
    CHECK(has_cue(cues, CueKind::Type, "integer"));
  }
  SUBCASE("comment") {
    const auto cues =
        extract_beacons(snippet("S: INTEGER", "  {running total}\n  S:=0"), builtin_kb());
    CHECK(has_cue(cues, CueKind::Comment, "running total"));
  }
}

TEST_CASE("activate: rules R1 and R3") {
  SUBCASE("R1") {
    const ActivationResult r =
        activate(builtin_kb(), {Cue{CueKind::Name, "I", "I"}, Cue{CueKind::Type, "integer", "I"}});
    const Activation* a = r.find("Counter_Variable");
    REQUIRE(a);
    CHECK(a->direction == Direction::DataDriven);
    CHECK(std::find(a->rules.begin(), a->rules.end(), "R1") != a->rules.end());
  }
  SUBCASE("R3") {
    const ActivationResult r = activate(
        builtin_kb(),
        {Cue{CueKind::Schema, "Counter_Variable", "I"}, Cue{CueKind::LoopForm, "while A<>B"}});
    const Activation* a = r.find("Linear_Search");
    REQUIRE(a);
    CHECK(a->rules == std::vector<std::string>{"R3"});
  }
  SUBCASE("rule cues must describe one variable") {
    const ActivationResult r =
        activate(builtin_kb(), {Cue{CueKind::Name, "I", "I"}, Cue{CueKind::Type, "integer", "J"}});
    const Activation* a = r.find("Counter_Variable");
    CHECK((a == nullptr || std::find(a->rules.begin(), a->rules.end(), "R1") == a->rules.end()));
  }
  SUBCASE("no cues") {
    CHECK(activate(builtin_kb(), {}).activations.empty());
  }
}

TEST_CASE("search fires R3 and instantiates Linear_Search") {
  const Recognition r = recognize(fixture("search"), builtin_kb());
  const Activation* a = r.activation.find("Linear_Search");
  REQUIRE(a);
  CHECK(std::find(a->rules.begin(), a->rules.end(), "R3") != a->rules.end());
  const auto ls = instances_of(r, "Linear_Search");
  REQUIRE(ls.size() == 1);
  CHECK(ls[0]->complete);
  REQUIRE(ls[0]->binding("test"));
  CHECK(ls[0]->binding("test")->line == 9);
  REQUIRE(ls[0]->binding("counter-update"));
  CHECK(ls[0]->binding("counter-update")->line == 12);
  // R2 predicted I:=I+1 and the code has it.
  for (const Expectation& e : r.expectations)
    if (e.origin == "R2") {
      CHECK(e.state == ExpectationState::Verified);
      CHECK(e.line == 12);
    }
}

TEST_CASE("grey counter instance") {
  const Recognition r = recognize(fixture("grey"), builtin_kb());
  const auto counters = instances_of(r, "Counter_Variable");
  REQUIRE(counters.size() == 1);
  const PlanInstance& c = *counters[0];
  CHECK(c.subject == "Count");
  CHECK(c.complete);
  REQUIRE(c.binding("init"));
  CHECK(c.binding("init")->line == 6);
  CHECK(c.binding("init")->text == "Count:=0");
  REQUIRE(c.binding("update"));
  CHECK(c.binding("update")->line == 12);
  CHECK(c.binding("update")->text == "Count:=Count+1");
  REQUIRE(c.binding("context"));
  CHECK(c.binding("context")->line == 7);
  CHECK(c.code_lines() == std::vector<int>{6, 12});
}

TEST_CASE("grey instance set") {
  const Recognition r = recognize(fixture("grey"), builtin_kb());
  auto complete = [&](const std::string& s) {
    int n = 0;
    for (const PlanInstance* i : instances_of(r, s)) n += i->complete;
    return n;
  };
  CHECK(complete("Counter_Variable") == 1);
  CHECK(complete("Running_Total_Variable") == 1);
  CHECK(instances_of(r, "Read_Variable").size() == 1);
  CHECK(complete("New_Value_Controlled_Running_Total_Loop") == 1);
  // UNTIL tests Num, so the counter- and total-controlled variants do not fit.
  CHECK(instances_of(r, "Counter_Controlled_Running_Total_Loop").empty());
  CHECK(instances_of(r, "Total_Controlled_Running_Total_Loop").empty());
  for (const Expectation& e : r.expectations) CHECK(e.state != ExpectationState::Violated);
}

TEST_CASE("orange counter is internally incoherent") {
  const Recognition r = recognize(fixture("orange"), builtin_kb());
  const auto counters = instances_of(r, "Counter_Variable");
  REQUIRE(counters.size() == 1);
  CHECK_FALSE(counters[0]->complete);
  CHECK_FALSE(r.coherence.internally_coherent(counters[0]->id));
  bool flagged = false;
  for (const InternalCheck& c : r.coherence.internal)
    if (c.instance == counters[0]->id && c.slot == "init" && !c.ok) flagged = c.line == 6;
  CHECK(flagged);
  const Expectation* e = expectation(r, "init");
  REQUIRE(e);
  CHECK(e->state == ExpectationState::Violated);
}

TEST_CASE("lone initialization leaves an open expectation") {
  const Recognition r = recognize(snippet("I: INTEGER", "  I:=1"), builtin_kb());
  const auto counters = instances_of(r, "Counter_Variable");
  REQUIRE(counters.size() == 1);
  CHECK_FALSE(counters[0]->complete);
  CHECK(counters[0]->binding("init"));
  const Expectation* e = expectation(r, "update");
  REQUIRE(e);
  CHECK(e->expected == "I:=I+1");
  CHECK(e->state == ExpectationState::Open);
}

TEST_CASE("flag: expected WHILE meets REPEAT") {
  const Recognition r = recognize(fixture("flag"), builtin_kb());
  const Expectation* e = expectation(r, "context");
  REQUIRE(e);
  CHECK(iequals(e->expected, "while"));
  CHECK(e->state == ExpectationState::Violated);
  CHECK(e->line == 9);
}

TEST_CASE("coherence evidence") {
  SUBCASE("grey counter and running total are checked by simulation") {
    const Recognition r = recognize(fixture("grey"), builtin_kb());
    const int counter = instances_of(r, "Counter_Variable")[0]->id;
    const int total = instances_of(r, "Running_Total_Variable")[0]->id;
    bool found = false;
    for (const Interaction& x : r.coherence.external) {
      if (!((x.first == counter && x.second == total) || (x.first == total && x.second == counter)))
        continue;
      found = true;
      CHECK(x.evidence == Evidence::Simulated);
      CHECK(x.inputs == std::vector<double>{1, 2, 3, 99999});
      CHECK(x.run_ok);
    }
    CHECK(found);
  }
  SUBCASE("a single plan has no external interactions") {
    const Recognition r = recognize(
        snippet("I: INTEGER", "  I:=0;\n  WHILE I<10 DO\n    I:=I+1"), builtin_kb());
    REQUIRE(r.instances.size() == 1);
    CHECK(r.coherence.external.empty());
  }
}

TEST_CASE("property: activation ignores cue and rule order") {
  std::mt19937 rng(11);
  for (const char* name : kFixtures) {
    CAPTURE(name);
    const auto cues = extract_beacons(fixture(name), builtin_kb());
    const ActivationResult base = activate(builtin_kb(), cues);
    for (int round = 0; round < 20; ++round) {
      auto shuffled_cues = cues;
      KnowledgeBase kb = builtin_kb();
      std::shuffle(shuffled_cues.begin(), shuffled_cues.end(), rng);
      std::shuffle(kb.rules.begin(), kb.rules.end(), rng);
      const ActivationResult again = activate(kb, shuffled_cues);
      CHECK(again.activations == base.activations);
    }
  }
}

TEST_CASE("property: more cues never remove an activation") {
  std::mt19937 rng(5);
  for (const char* name : kFixtures) {
    CAPTURE(name);
    const auto cues = extract_beacons(fixture(name), builtin_kb());
    auto with_comment = cues;
    with_comment.push_back(Cue{CueKind::Comment, "counter"});
    const auto base = schemas(activate(builtin_kb(), cues));
    const auto more = schemas(activate(builtin_kb(), with_comment));
    CHECK(std::includes(more.begin(), more.end(), base.begin(), base.end()));
    // Random sub-multisets.
    for (int round = 0; round < 20; ++round) {
      std::vector<Cue> subset;
      for (const Cue& c : cues)
        if (rng() % 2) subset.push_back(c);
      const auto small = data_driven(activate(builtin_kb(), subset));
      const auto big = data_driven(activate(builtin_kb(), cues));
      CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    }
  }
}

TEST_CASE("property: every binding fits one of its slot's fillers") {
  const KnowledgeBase& kb = builtin_kb();
  for (const char* name : kFixtures) {
    CAPTURE(name);
    const Recognition r = recognize(fixture(name), kb);
    for (const PlanInstance& i : r.instances) {
      CAPTURE(i.label());
      const Schema* s = kb.find_schema(i.schema);
      REQUIRE(s);
      Bindings env;
      if (!i.subject.empty()) env["v"] = i.subject;
      for (const Bound& b : i.bindings)
        if (b.kind == BindingKind::Instance) env[b.slot] = r.instances.at(b.child).subject;
      for (const Bound& b : i.bindings) {
        if (b.kind == BindingKind::Instance) continue;
        const Slot* slot = s->find_slot(b.slot);
        REQUIRE(slot);
        if (slot->fillers.empty()) continue;
        CAPTURE(b.slot);
        CAPTURE(b.text);
        const bool fits = std::any_of(slot->fillers.begin(), slot->fillers.end(), [&](const Filler& f) {
          Bindings copy = env;
          return match_pattern(parse_pattern(f.pattern), b.text, copy);
        });
        CHECK(fits);
      }
    }
  }
}

TEST_CASE("property: a verified expectation points at matching code") {
  for (const char* name : kFixtures) {
    CAPTURE(name);
    const Program p = fixture(name);
    const Recognition r = recognize(p, builtin_kb());
    for (const Expectation& e : r.expectations) {
      if (e.state != ExpectationState::Verified) continue;
      CAPTURE(e.expected);
      const Pattern pat = parse_pattern(e.expected);
      bool seen = false;
      for (const Stmt* s : p.statements()) {
        if (s->line != e.line && s->end_line != e.line) continue;
        seen = seen || match_pattern(pat, compact_text(*s)) ||
               match_pattern(pat, std::string(to_string(s->kind))) ||
               match_pattern(pat, compact_text(s->expr));
      }
      CHECK(seen);
    }
  }
}
