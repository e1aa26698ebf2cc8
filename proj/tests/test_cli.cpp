#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plancog/cli.hpp"
#include "plancog/kb.hpp"
#include "support.hpp"

using namespace plancog;
using plancog::testing::data_path;
using plancog::testing::fixture_path;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

json cli_json(std::vector<std::string> args) {
  args.insert(args.begin(), "--json");
  const Outcome o = cli(args);
  REQUIRE(o.code == kExitOk);
  // json::parse rejects trailing content, so this also proves one document.
  return json::parse(o.out);
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

bool sorted_ascending(const json& lines) {
  for (std::size_t i = 1; i < lines.size(); ++i)
    if (lines[i - 1].get<int>() > lines[i].get<int>()) return false;
  return true;
}

void check_goal_node(const json& n) {
  REQUIRE(n.is_object());
  CHECK(n.at("goal").is_string());
  REQUIRE(n.at("children").is_array());
  if (n.contains("plan")) CHECK(n.at("plan").at("schema").is_string());
  for (const json& c : n.at("children")) check_goal_node(c);
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("corpus fixtures ship and parse") {
  const auto fixtures = corpus();
  REQUIRE(fixtures.size() == 4);
  for (const Fixture& f : fixtures) {
    CAPTURE(f.name);
    CHECK(std::filesystem::exists(f.path));
    CHECK_NOTHROW(parse(read_file(f.path)));
  }
}

TEST_CASE("command examples") {
  SUBCASE("fill-blank grey") {
    const Outcome o = cli({"fill-blank", fixture_path("grey"), "--line", "6", "--strategy", "plan"});
    CHECK(o.code == kExitOk);
    CHECK(contains(o.out, "1. Count := 0"));
  }
  SUBCASE("fill-blank defaults to the marked line") {
    const Outcome o = cli({"fill-blank", fixture_path("orange")});
    CHECK(o.code == kExitOk);
    CHECK(contains(o.out, "blank line 6"));
    CHECK(contains(o.out, "1. Count := 0"));
  }
  SUBCASE("kb validate of a bad file") {
    const Outcome o = cli({"kb", "validate", data_path("cycle.kb")});
    CHECK(o.code == kExitAnalysisError);
    CHECK(contains(o.out, "cycle"));
  }
  SUBCASE("simulate orange") {
    const Outcome o = cli({"simulate", fixture_path("orange"), "--input", "1,2,3,99999"});
    CHECK(o.code == kExitOk);
    CHECK(o.out == "2.0\n");
  }
  SUBCASE("search fires R3") {
    const Outcome o = cli({"recognize", fixture_path("search"), "--trace"});
    CHECK(o.code == kExitOk);
    CHECK(contains(o.out, "R3 (data-driven) -> Linear_Search"));
  }
}

TEST_CASE("exit codes by error class") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"parse"}).code == kExitUsage);
  CHECK(cli({"parse", fixture_path("grey"), "--bogus"}).code == kExitUsage);
  CHECK(cli({"chunk", fixture_path("grey"), "--mode", "sideways"}).code == kExitUsage);
  CHECK(cli({"simulate", fixture_path("grey"), "--input", "1,x"}).code == kExitUsage);
  CHECK(cli({"--step-budget", "0", "parse", fixture_path("grey")}).code == kExitUsage);
  CHECK(cli({"fill-blank", fixture_path("search")}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);

  const Outcome syntax = cli({"parse", data_path("broken.mp")});
  CHECK(syntax.code == kExitAnalysisError);
  CHECK(contains(syntax.err, ":5:"));
  CHECK(cli({"parse", data_path("missing.mp")}).code == kExitAnalysisError);
  CHECK(cli({"kb", "validate", data_path("bad_syntax.kb")}).code == kExitAnalysisError);
  CHECK(cli({"--kb", data_path("dangling.kb"), "recognize", fixture_path("grey")}).code ==
        kExitAnalysisError);
  CHECK(cli({"relations", fixture_path("grey"), "--line", "2"}).code == kExitAnalysisError);
  CHECK(cli({"fill-blank", fixture_path("grey"), "--line", "10"}).code == kExitAnalysisError);
  CHECK(cli({"simulate", fixture_path("grey"), "--trace", "Nope"}).code == kExitUsage);
}

TEST_CASE("a runtime error is a result, not a failure") {
  const Outcome o = cli({"simulate", fixture_path("grey"), "--input", "99999"});
  CHECK(o.code == kExitOk);
  CHECK(contains(o.out, "division-by-zero at line 15"));
}

TEST_CASE("every subcommand emits one JSON document") {
  const std::string grey = fixture_path("grey");
  const std::vector<std::vector<std::string>> commands = {
      {"parse", grey},
      {"relations", grey},
      {"relations", grey, "--line", "8"},
      {"kb", "validate", data_path("cycle.kb")},
      {"kb", "dump-builtin"},
      {"recognize", grey, "--trace"},
      {"planliness", grey},
      {"fill-blank", grey, "--line", "6"},
      {"chunk", grey, "--mode", "plan"},
      {"simulate", grey, "--input", "1,2,99999", "--trace", "Count"},
  };
  for (auto args : commands) {
    CAPTURE(args[0]);
    args.insert(args.begin(), "--json");
    std::ostringstream out, err;
    run(args, out, err);
    CHECK(json::accept(out.str()));
  }
}

TEST_CASE("goal tree JSON shape") {
  const json doc = cli_json({"recognize", fixture_path("grey")});
  const json& tree = doc.at("goal_tree");
  check_goal_node(tree);
  CHECK(tree.at("goal") == "report-average");
  std::vector<std::string> goals;
  for (const json& c : tree.at("children")) goals.push_back(c.at("goal"));
  CHECK(goals == std::vector<std::string>{"enter-data", "compute-average", "output-average"});
  for (const json& i : doc.at("instances")) CHECK(sorted_ascending(i.at("lines")));
}

TEST_CASE("text and JSON agree") {
  SUBCASE("planliness") {
    const json doc = cli_json({"planliness", fixture_path("orange")});
    const Outcome text = cli({"planliness", fixture_path("orange")});
    char buf[32];
    std::snprintf(buf, sizeof buf, "score    %.3f", doc.at("score").get<double>());
    CHECK(contains(text.out, buf));
    for (const json& v : doc.at("violations")) {
      CHECK(sorted_ascending(v.at("lines")));
      CHECK(contains(text.out, v.at("check").get<std::string>()));
    }
  }
  SUBCASE("fill-blank") {
    const json doc = cli_json({"fill-blank", fixture_path("grey"), "--line", "6"});
    const Outcome text = cli({"fill-blank", fixture_path("grey"), "--line", "6"});
    for (const json& c : doc.at("candidates"))
      CHECK(contains(text.out, std::to_string(c.at("rank").get<int>()) + ". " +
                                   c.at("text").get<std::string>()));
  }
  SUBCASE("chunk lines") {
    const json doc = cli_json({"chunk", fixture_path("grey"), "--mode", "plan"});
    const Outcome text = cli({"chunk", fixture_path("grey"), "--mode", "plan"});
    for (const json& c : doc.at("chunks")) {
      CHECK(sorted_ascending(c.at("lines")));
      std::string lines;
      for (const json& l : c.at("lines"))
        lines += (lines.empty() ? "" : ", ") + std::to_string(l.get<int>());
      CHECK(contains(text.out, "lines " + lines));
    }
  }
  SUBCASE("relations") {
    const json doc = cli_json({"relations", fixture_path("grey"), "--line", "12"});
    CHECK(doc.at("data") == json::array({6, 15}));
    CHECK(contains(cli({"relations", fixture_path("grey"), "--line", "12"}).out, "data    6, 15"));
  }
}

TEST_CASE("flag fixture reports a violated WHILE expectation") {
  const json doc = cli_json({"recognize", fixture_path("flag")});
  bool found = false;
  for (const json& e : doc.at("expectations"))
    if (e.at("slot") == "context")
      found = e.at("state") == "violated" && e.at("expected") == "WHILE" && e.at("line") == 9;
  CHECK(found);
}

TEST_CASE("--kb loads a knowledge base from disk") {
  const std::string path = temp_file("plancog_builtin.kb", dump_kb(builtin_kb()));
  const Outcome via_file = cli({"--kb", path, "recognize", fixture_path("grey")});
  const Outcome builtin = cli({"recognize", fixture_path("grey")});
  CHECK(via_file.code == kExitOk);
  CHECK(via_file.out == builtin.out);
  CHECK(cli({"kb", "dump-builtin"}).out == dump_kb(builtin_kb()));
  CHECK(cli({"kb", "validate", path}).code == kExitOk);
}

TEST_CASE("step budget reaches the interpreter") {
  const std::string loop = temp_file(
      "plancog_loop.mp",
      "PROGRAM L(input, output);\nVAR X: INTEGER;\nBEGIN\n  X:=0;\n  WHILE X=X DO\n    X:=X+1\nEND.\n");
  const json doc = cli_json({"--step-budget", "50", "simulate", loop});
  CHECK(doc.at("status") == "runtime-error");
  CHECK(doc.at("error").at("kind") == "step-budget-exceeded");
  CHECK(doc.at("steps").get<int>() <= 50);
}
