#include "plancog/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "plancog/report.hpp"

#ifndef PLANCOG_CORPUS_DIR
#define PLANCOG_CORPUS_DIR "corpus"
#endif

namespace plancog {

std::string corpus_dir() { return PLANCOG_CORPUS_DIR; }

std::vector<Fixture> corpus() {
  const std::string dir = corpus_dir();
  return {
      {"grey", dir + "/grey.mp", "plan-like averaging loop"},
      {"orange", dir + "/orange.mp", "averaging loop with compensating initializations"},
      {"search", dir + "/search.mp", "linear search, counter I:=1, WHILE Item<>Key"},
      {"flag", dir + "/flag.mp", "REPEAT loop ended by a boolean flag"},
  };
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join_ints(const std::vector<int>& xs, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + std::to_string(xs[i]);
  return out;
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::vector<double> parse_inputs(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    const std::string token = item.substr(b, e - b + 1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw UsageError("bad input value '" + token + "'");
    out.push_back(v);
  }
  return out;
}

class Session {
 public:
  Session(const Config& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  const KnowledgeBase& kb() {
    if (cfg_.kb_path.empty()) return builtin_kb();
    if (!loaded_) loaded_ = load_kb(read_file(cfg_.kb_path));
    return *loaded_;
  }

  void emit(const json& doc) { out_ << doc.dump(2) << "\n"; }

  int parse_cmd(const std::string& file) {
    const Program p = parse(read_file(file));
    if (cfg_.json)
      emit(to_json(p));
    else
      out_ << pretty_print(p);
    return kExitOk;
  }

  int relations_cmd(const std::string& file, int line, const std::string& kind) {
    const Program p = parse(read_file(file));
    if (line > 0) {
      json doc{{"line", line}};
      if (kind != "data") doc["control"] = query_relation(RelationKind::Control, p, line);
      if (kind != "control") doc["data"] = query_relation(RelationKind::Data, p, line);
      if (cfg_.json) {
        emit(doc);
      } else {
        if (doc.contains("control"))
          out_ << "control " << join_ints(doc["control"].get<std::vector<int>>()) << "\n";
        if (doc.contains("data"))
          out_ << "data    " << join_ints(doc["data"].get<std::vector<int>>()) << "\n";
      }
      return kExitOk;
    }
    const Cfg cfg = build_cfg(p);
    const DefUse du = def_use(p, cfg);
    const PrimeNode primes = decompose_primes(p);
    if (cfg_.json) {
      emit({{"cfg", to_json(cfg)}, {"def_use", to_json(du)}, {"primes", to_json(primes)}});
      return kExitOk;
    }
    out_ << "control flow\n";
    for (const CfgNode& n : cfg.nodes) {
      out_ << "  " << std::setw(3) << n.id << "  " << std::left << std::setw(9) << n.role
           << std::right;
      if (n.line > 0) out_ << " line " << n.line;
      std::vector<std::string> succ;
      for (const CfgEdge* e : cfg.out_edges(n.id))
        succ.push_back(std::to_string(e->to) +
                       (e->label == EdgeLabel::Seq ? "" : "(" + std::string(to_string(e->label)) + ")"));
      if (!succ.empty()) {
        out_ << "  ->";
        for (const auto& s : succ) out_ << " " << s;
      }
      out_ << "\n";
    }
    out_ << "def-use chains\n";
    for (std::size_t d = 0; d < du.definitions.size(); ++d) {
      std::vector<int> lines;
      for (int u : du.chains[d]) lines.push_back(du.uses[u].line);
      std::sort(lines.begin(), lines.end());
      lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
      out_ << "  " << du.definitions[d].var << " line " << du.definitions[d].line << " -> "
           << (lines.empty() ? "(no use)" : join_ints(lines)) << "\n";
    }
    for (const Use& u : du.uses)
      if (u.possibly_uninitialized)
        out_ << "  " << u.var << " may be read uninitialized at line " << u.line << "\n";
    out_ << "prime structures\n";
    print_prime(primes, 1, p);
    return kExitOk;
  }

  int kb_validate_cmd(const std::string& file) {
    const KnowledgeBase kb = parse_kb(read_file(file));
    const auto diags = validate_kb(kb);
    if (cfg_.json) {
      json list = json::array();
      for (const Diagnostic& d : diags) list.push_back(to_json(d));
      emit({{"valid", diags.empty()}, {"diagnostics", list}});
    } else if (diags.empty()) {
      out_ << "ok: " << kb.schemas.size() << " schemas, " << kb.rules.size() << " rules\n";
    } else {
      for (const Diagnostic& d : diags) out_ << d.code << ": " << d.message << "\n";
    }
    return diags.empty() ? kExitOk : kExitAnalysisError;
  }

  int kb_dump_cmd() {
    const std::string text = dump_kb(builtin_kb());
    if (cfg_.json)
      emit({{"kb", text}});
    else
      out_ << text;
    return kExitOk;
  }

  int recognize_cmd(const std::string& file, bool trace) {
    const Program p = parse(read_file(file));
    const Recognition r = recognize(p, kb(), cfg_.step_budget);
    const GoalTree tree = goal_tree(r, p, kb());
    if (cfg_.json) {
      json doc{{"goal_tree", to_json(tree, r.instances)}};
      json acts = json::array();
      for (const Activation& a : r.activation.activations) acts.push_back(to_json(a));
      doc["activations"] = acts;
      json insts = json::array();
      for (const PlanInstance& i : r.instances) insts.push_back(to_json(i));
      doc["instances"] = insts;
      json exps = json::array();
      for (const Expectation& e : r.expectations) exps.push_back(to_json(e, r.instances));
      doc["expectations"] = exps;
      doc["coherence"] = to_json(r.coherence, r.instances);
      if (trace) {
        json t = json::array();
        for (const Firing& f : r.activation.trace) t.push_back(to_json(f));
        doc["trace"] = t;
      }
      emit(doc);
      return kExitOk;
    }
    if (trace) {
      out_ << "rule firings\n";
      int n = 0;
      for (const Firing& f : r.activation.trace) {
        out_ << "  " << ++n << ". " << f.rule << " (" << to_string(f.direction) << ") -> "
             << f.schema;
        if (!f.subject.empty()) out_ << " for " << f.subject;
        out_ << "  on";
        for (const Cue& c : f.cues) out_ << " " << c.describe();
        out_ << "\n";
      }
      out_ << "\n";
    }
    out_ << "goal tree\n";
    print_goal(tree.root, 1, r);
    out_ << "\nactivations\n";
    for (const Activation& a : r.activation.activations) {
      out_ << "  " << a.schema << " (" << to_string(a.direction);
      if (!a.rules.empty()) {
        out_ << " via";
        for (const auto& id : a.rules) out_ << " " << id;
      }
      if (!a.sources.empty()) {
        out_ << " from";
        for (const auto& s : a.sources) out_ << " " << s;
      }
      out_ << ")\n";
    }
    out_ << "\ninstances\n";
    for (const PlanInstance& i : r.instances) {
      out_ << "  #" << i.id << " " << i.label() << " " << (i.complete ? "complete" : "partial")
           << "\n";
      for (const Bound& b : i.bindings) {
        out_ << "      " << std::left << std::setw(16) << b.slot << std::right;
        if (b.kind == BindingKind::Instance)
          out_ << "-> #" << b.child << " " << r.instances[b.child].label();
        else
          out_ << "line " << std::setw(3) << b.line << "  " << b.text;
        out_ << "\n";
      }
      for (const Conflict& c : i.conflicts)
        out_ << "      " << std::left << std::setw(16) << c.slot << std::right << "line "
             << std::setw(3) << c.line << "  " << c.text << "  (fits no filler)\n";
    }
    if (!r.expectations.empty()) {
      out_ << "\nexpectations\n";
      for (const Expectation& e : r.expectations) {
        out_ << "  " << r.instances[e.instance].label() << "." << e.slot << " = \"" << e.expected
             << "\" (" << e.origin << "): " << to_string(e.state);
        if (e.line > 0) out_ << " at line " << e.line;
        out_ << "\n";
      }
    }
    out_ << "\ncoherence\n";
    int failed = 0;
    for (const InternalCheck& c : r.coherence.internal)
      if (!c.ok) {
        ++failed;
        out_ << "  incoherent " << r.instances[c.instance].label() << ": " << c.constraint
             << " (line " << c.line << ")\n";
      }
    out_ << "  internal checks: " << r.coherence.internal.size() << ", failed: " << failed << "\n";
    for (const Interaction& x : r.coherence.external)
      out_ << "  [" << to_string(x.evidence) << "] " << x.description << "\n";
    return kExitOk;
  }

  int planliness_cmd(const std::string& file) {
    const Program p = parse(read_file(file));
    const Recognition r = recognize(p, kb(), cfg_.step_budget);
    const PlanlinessReport rep = planliness(r, p, kb());
    if (cfg_.json) {
      emit(to_json(rep));
      return kExitOk;
    }
    out_ << "score    " << fixed(rep.score) << "\n";
    out_ << "coverage " << fixed(rep.coverage) << " (" << rep.covered_statements.size() << " of "
         << p.statement_count() << " statements)\n";
    if (rep.violations.empty()) out_ << "violations: none\n";
    for (const Violation& v : rep.violations)
      out_ << "violation " << v.rule << " " << v.check << " at lines " << join_ints(v.lines)
           << ": " << v.explanation << "\n";
    return kExitOk;
  }

  int fill_blank_cmd(const std::string& file, int line, const std::string& strategy) {
    const std::string source = read_file(file);
    if (line <= 0) {
      line = marked_line(parse(source));
      if (line <= 0) throw UsageError("no --line given and no marked line in " + file);
    }
    const BlankedProgram bp = blank_line(source, line);
    const auto cands =
        fill_blank(bp, kb(), strategy == "control" ? Strategy::Control : Strategy::Plan);
    if (cfg_.json) {
      json list = json::array();
      for (const Candidate& c : cands) list.push_back(to_json(c));
      emit({{"line", line}, {"erased", bp.erased_text}, {"strategy", strategy}, {"candidates", list}});
      return kExitOk;
    }
    out_ << "blank line " << line << " (was " << bp.erased_text << "), strategy " << strategy << "\n";
    if (cands.empty()) out_ << "no candidates\n";
    for (const Candidate& c : cands) {
      out_ << "  " << c.rank << ". " << c.text << "    [" << c.justification;
      if (c.prototypical) out_ << ", prototypical";
      out_ << "]\n";
    }
    return kExitOk;
  }

  int chunk_cmd(const std::string& file, const std::string& mode) {
    const Program p = parse(read_file(file));
    const ChunkMode m = mode == "plan" ? ChunkMode::Plan : ChunkMode::Control;
    const Chunking c = m == ChunkMode::Plan ? chunk(recognize(p, kb(), cfg_.step_budget), p, m)
                                            : chunk(p, kb(), m);
    if (cfg_.json) {
      emit(to_json(c));
      return kExitOk;
    }
    out_ << mode << " chunks\n";
    for (const Chunk& ch : c.chunks)
      out_ << "  " << std::left << std::setw(42) << ch.label << std::right << " lines "
           << join_ints(ch.lines) << "\n";
    out_ << "residue lines " << (c.residue_lines.empty() ? "none" : join_ints(c.residue_lines))
         << "\n";
    return kExitOk;
  }

  int simulate_cmd(const std::string& file, const std::string& input, const std::string& var) {
    const Program p = parse(read_file(file));
    const auto inputs = parse_inputs(input);
    if (!var.empty() && !p.find_declaration(var)) throw UsageError("unknown variable " + var);
    ExecutionResult r = execute(p, inputs, cfg_.step_budget);
    if (!var.empty()) {
      const std::string name = p.find_declaration(var)->name;
      std::erase_if(r.trace, [&](const TraceEvent& e) { return e.variable != name; });
    }
    if (cfg_.json) {
      json doc = to_json(r);
      if (var.empty()) doc.erase("trace");
      emit(doc);
      return kExitOk;
    }
    for (const std::string& o : r.rendered_outputs()) out_ << o << "\n";
    if (!r.ok)
      out_ << "runtime error: " << to_string(r.error) << " at line " << r.error_line << " ("
           << r.error_message << ")\n";
    if (!var.empty())
      for (const TraceEvent& e : r.trace)
        out_ << "  step " << e.step << " line " << e.line << " " << e.variable << " = "
             << e.value.to_string() << "\n";
    return kExitOk;
  }

 private:
  void print_prime(const PrimeNode& n, int depth, const Program& p) {
    out_ << std::string(depth * 2, ' ') << to_string(n.kind) << " lines " << n.first_line << "-"
         << n.last_line;
    if (n.is_leaf() && !n.statements.empty()) {
      std::vector<int> lines;
      for (int id : n.statements) lines.push_back(p.statement_by_id(id)->line);
      out_ << " [" << join_ints(lines) << "]";
    }
    out_ << "\n";
    for (const PrimeNode& c : n.children) print_prime(c, depth + 1, p);
  }

  void print_goal(const GoalNode& n, int depth, const Recognition& r) {
    out_ << std::string(depth * 2, ' ');
    if (n.plan >= 0) {
      const PlanInstance& i = r.instances[n.plan];
      out_ << i.label();
      std::vector<std::string> parts;
      for (const Bound& b : i.bindings)
        if (b.kind == BindingKind::Statement || b.kind == BindingKind::Condition)
          parts.push_back(b.slot + "=" + std::to_string(b.line) + " " + b.text);
      if (!parts.empty()) {
        out_ << ":";
        for (std::size_t k = 0; k < parts.size(); ++k) out_ << (k ? ", " : " ") << parts[k];
      }
      for (int id : n.nested) out_ << "\n" << std::string(depth * 2 + 4, ' ') << "uses " << r.instances[id].label();
    } else {
      out_ << n.goal;
    }
    if (!n.coherent) out_ << "  (incoherent)";
    out_ << "\n";
    for (const GoalNode& c : n.children) print_goal(c, depth + 1, r);
  }

  Config cfg_;
  std::ostream& out_;
  std::optional<KnowledgeBase> loaded_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plan recognition and comprehension analyses for mini-Pascal programs", "plancog"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--kb", cfg.kb_path, "Knowledge base file (default: built-in)");
  app.add_flag("--json", cfg.json, "Emit one JSON document");
  app.add_option("--seed", cfg.seed, "Random seed for property runs")->capture_default_str();
  app.add_option("--step-budget", cfg.step_budget, "Interpreter step budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string file, kind = "both", strategy = "plan", mode = "control", input, var;
  int line = 0;
  bool trace = false;

  auto* parse_sub = app.add_subcommand("parse", "Parse and pretty-print a program");
  parse_sub->add_option("file", file)->required();

  auto* rel = app.add_subcommand("relations", "Control flow, def-use chains and prime structures");
  rel->add_option("file", file)->required();
  rel->add_option("--line", line, "Query the statement on this line");
  rel->add_option("--kind", kind)->check(CLI::IsMember({"control", "data", "both"}));

  auto* kbc = app.add_subcommand("kb", "Knowledge-base utilities");
  kbc->require_subcommand(1);
  auto* validate = kbc->add_subcommand("validate", "Check a knowledge-base file");
  validate->add_option("file", file)->required();
  auto* dump = kbc->add_subcommand("dump-builtin", "Print the built-in knowledge base");

  auto* rec = app.add_subcommand("recognize", "Recognize plans and build the goal tree");
  rec->add_option("file", file)->required();
  rec->add_flag("--trace", trace, "Show rule firings in order");

  auto* plan = app.add_subcommand("planliness", "Score plan-likeness and discourse violations");
  plan->add_option("file", file)->required();

  auto* fill = app.add_subcommand("fill-blank", "Predict the statement for a blanked line");
  fill->add_option("file", file)->required();
  fill->add_option("--line", line, "Line to blank (default: the marked line)");
  fill->add_option("--strategy", strategy)->check(CLI::IsMember({"plan", "control"}));

  auto* chunk_sub = app.add_subcommand("chunk", "Group statements into chunks");
  chunk_sub->add_option("file", file)->required();
  chunk_sub->add_option("--mode", mode)->check(CLI::IsMember({"plan", "control"}));

  auto* sim = app.add_subcommand("simulate", "Run a program on input values");
  sim->add_option("file", file)->required();
  sim->add_option("--input", input, "Comma-separated input values");
  sim->add_option("--trace", var, "Show every value VAR takes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Session s(cfg, out);
  try {
    if (*parse_sub) return s.parse_cmd(file);
    if (*rel) return s.relations_cmd(file, line, kind);
    if (*validate) return s.kb_validate_cmd(file);
    if (*dump) return s.kb_dump_cmd();
    if (*rec) return s.recognize_cmd(file, trace);
    if (*plan) return s.planliness_cmd(file);
    if (*fill) return s.fill_blank_cmd(file, line, strategy);
    if (*chunk_sub) return s.chunk_cmd(file, mode);
    if (*sim) return s.simulate_cmd(file, input, var);
  } catch (const UsageError& e) {
    err << "plancog: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SyntaxError& e) {
    err << file << ":" << e.line() << ": " << e.what() << "\n";
    return kExitAnalysisError;
  } catch (const KbParseError& e) {
    err << e.what() << "\n";
    return kExitAnalysisError;
  } catch (const KbValidationError& e) {
    for (const Diagnostic& d : e.diagnostics()) err << d.code << ": " << d.message << "\n";
    return kExitAnalysisError;
  } catch (const std::exception& e) {
    err << "plancog: " << e.what() << "\n";
    return kExitAnalysisError;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"plancog"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace plancog
