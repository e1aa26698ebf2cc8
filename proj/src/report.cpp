#include "plancog/report.hpp"

#include <algorithm>

namespace plancog {

json to_json(const Program& p) {
  json decls = json::array();
  for (const Declaration& d : p.declarations)
    decls.push_back({{"name", d.name}, {"type", to_string(d.type)}, {"line", d.line}});
  json stmts = json::array();
  for (const Stmt* s : p.statements())
    stmts.push_back(
        {{"id", s->id}, {"line", s->line}, {"kind", to_string(s->kind)}, {"text", compact_text(*s)}});
  json comments = json::array();
  for (const Comment& c : p.comments) comments.push_back({{"line", c.line}, {"text", c.text}});
  return {{"name", p.name},   {"declarations", decls}, {"statements", stmts},
          {"comments", comments}, {"pretty", pretty_print(p)}};
}

json to_json(const Cfg& cfg) {
  json nodes = json::array();
  for (const CfgNode& n : cfg.nodes) {
    json j{{"id", n.id}, {"kind", to_string(n.kind)}, {"role", n.role}, {"line", n.line}};
    if (n.stmt_id >= 0) j["stmt"] = n.stmt_id;
    if (n.synthetic) j["synthetic"] = true;
    j["defs"] = n.defs;
    j["uses"] = n.uses;
    nodes.push_back(std::move(j));
  }
  json edges = json::array();
  for (const CfgEdge& e : cfg.edges)
    edges.push_back({{"from", e.from}, {"to", e.to}, {"label", to_string(e.label)}});
  return {{"entry", cfg.entry}, {"exit", cfg.exit}, {"nodes", nodes}, {"edges", edges}};
}

json to_json(const DefUse& du) {
  json chains = json::array();
  for (std::size_t d = 0; d < du.definitions.size(); ++d) {
    const Definition& def = du.definitions[d];
    std::vector<int> lines;
    for (int u : du.chains[d]) lines.push_back(du.uses[u].line);
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    chains.push_back({{"var", def.var}, {"def_line", def.line}, {"use_lines", lines}});
  }
  json uninit = json::array();
  for (const Use& u : du.uses)
    if (u.possibly_uninitialized) uninit.push_back({{"var", u.var}, {"line", u.line}});
  return {{"chains", chains}, {"possibly_uninitialized", uninit}};
}

json to_json(const PrimeNode& n) {
  json j{{"kind", to_string(n.kind)}, {"first_line", n.first_line}, {"last_line", n.last_line}};
  if (n.head_stmt >= 0) j["head_line"] = n.head_line;
  if (n.is_leaf()) j["statements"] = n.statements;
  json children = json::array();
  for (const PrimeNode& c : n.children) children.push_back(to_json(c));
  j["children"] = children;
  return j;
}

json to_json(const Cue& c) {
  json j{{"cue", c.describe()}, {"kind", to_string(c.kind)}, {"payload", c.payload}};
  if (!c.subject.empty()) j["subject"] = c.subject;
  if (c.line > 0) j["line"] = c.line;
  return j;
}

json to_json(const Activation& a) {
  json cues = json::array();
  for (const Cue& c : a.cues) cues.push_back(c.describe());
  return {{"schema", a.schema},   {"direction", to_string(a.direction)}, {"rules", a.rules},
          {"subjects", a.subjects}, {"sources", a.sources},              {"cues", cues}};
}

json to_json(const Firing& f) {
  json cues = json::array();
  for (const Cue& c : f.cues) cues.push_back(c.describe());
  json j{{"round", f.round}, {"rule", f.rule}, {"direction", to_string(f.direction)},
         {"schema", f.schema}};
  if (!f.subject.empty()) j["subject"] = f.subject;
  j["cues"] = cues;
  return j;
}

json to_json(const PlanInstance& i) {
  json bindings = json::object();
  for (const Bound& b : i.bindings) {
    json j{{"kind", to_string(b.kind)}, {"text", b.text}};
    if (b.line > 0) j["line"] = b.line;
    if (b.child >= 0) j["instance"] = b.child;
    bindings[b.slot] = std::move(j);
  }
  json conflicts = json::array();
  for (const Conflict& c : i.conflicts)
    conflicts.push_back({{"slot", c.slot}, {"line", c.line}, {"text", c.text}});
  json j{{"id", i.id}, {"schema", i.schema}, {"kind", to_string(i.kind)}};
  if (!i.subject.empty()) j["subject"] = i.subject;
  j["status"] = i.complete ? "complete" : "partial";
  j["bindings"] = bindings;
  j["lines"] = i.code_lines();
  j["conflicts"] = conflicts;
  j["children"] = i.children;
  return j;
}

json to_json(const Expectation& e, const std::vector<PlanInstance>& instances) {
  json j{{"instance", instances.at(e.instance).label()},
         {"slot", e.slot},
         {"expected", e.expected},
         {"prototypical", e.prototypical},
         {"origin", e.origin},
         {"state", to_string(e.state)}};
  if (e.line > 0) j["line"] = e.line;
  return j;
}

json to_json(const CoherenceReport& r, const std::vector<PlanInstance>& instances) {
  json internal = json::array();
  for (const InternalCheck& c : r.internal)
    internal.push_back({{"instance", instances.at(c.instance).label()},
                        {"slot", c.slot},
                        {"constraint", c.constraint},
                        {"ok", c.ok},
                        {"line", c.line}});
  json external = json::array();
  for (const Interaction& x : r.external) {
    json j{{"instances", {instances.at(x.first).label(), instances.at(x.second).label()}},
           {"description", x.description},
           {"evidence", to_string(x.evidence)}};
    if (x.evidence == Evidence::Simulated) {
      j["inputs"] = x.inputs;
      j["run_ok"] = x.run_ok;
    }
    external.push_back(std::move(j));
  }
  return {{"internal", internal}, {"external", external}};
}

namespace {

json plan_json(int id, const std::vector<int>& nested, const std::vector<PlanInstance>& instances) {
  const PlanInstance& i = instances.at(id);
  json j{{"schema", i.schema}};
  if (!i.subject.empty()) j["subject"] = i.subject;
  j["instance"] = i.id;
  json bindings = json::object();
  for (const Bound& b : i.bindings)
    if (b.kind == BindingKind::Statement || b.kind == BindingKind::Condition)
      bindings[b.slot] = {{"line", b.line}, {"text", b.text}};
  j["bindings"] = bindings;
  json sub = json::array();
  for (int c : i.children)
    if (std::find(nested.begin(), nested.end(), c) != nested.end())
      sub.push_back(plan_json(c, nested, instances));
  j["children"] = sub;
  return j;
}

json goal_json(const GoalNode& n, const std::vector<PlanInstance>& instances) {
  json j{{"goal", n.goal}};
  json children = json::array();
  for (const GoalNode& c : n.children) children.push_back(goal_json(c, instances));
  j["children"] = children;
  if (n.plan >= 0) j["plan"] = plan_json(n.plan, n.nested, instances);
  j["coherent"] = n.coherent;
  return j;
}

}  // namespace

json to_json(const GoalTree& tree, const std::vector<PlanInstance>& instances) {
  return goal_json(tree.root, instances);
}

json to_json(const PlanlinessReport& r) {
  json violations = json::array();
  for (const Violation& v : r.violations)
    violations.push_back(
        {{"rule", v.rule}, {"check", v.check}, {"lines", v.lines}, {"explanation", v.explanation}});
  return {{"score", r.score}, {"coverage", r.coverage}, {"violations", violations}};
}

json to_json(const Candidate& c) {
  return {{"rank", c.rank},
          {"text", c.text},
          {"justification", c.justification},
          {"prototypical", c.prototypical},
          {"support_line", c.support_line}};
}

json to_json(const Chunking& c) {
  json chunks = json::array();
  for (const Chunk& ch : c.chunks) {
    json j{{"mode", ch.mode == ChunkMode::Plan ? "plan" : "control"},
           {"label", ch.label},
           {"lines", ch.lines}};
    chunks.push_back(std::move(j));
  }
  return {{"chunks", chunks}, {"residue_lines", c.residue_lines}};
}

json to_json(const ExecutionResult& r) {
  json trace = json::array();
  for (const TraceEvent& e : r.trace)
    trace.push_back(
        {{"step", e.step}, {"line", e.line}, {"variable", e.variable}, {"value", e.value.to_string()}});
  json j{{"status", r.ok ? "ok" : "runtime-error"}};
  if (!r.ok) j["error"] = {{"kind", to_string(r.error)}, {"line", r.error_line}, {"message", r.error_message}};
  j["outputs"] = r.rendered_outputs();
  j["steps"] = r.steps;
  j["trace"] = trace;
  return j;
}

json to_json(const Diagnostic& d) {
  json j{{"code", d.code}};
  if (!d.schema.empty()) j["schema"] = d.schema;
  if (!d.slot.empty()) j["slot"] = d.slot;
  if (!d.rule.empty()) j["rule"] = d.rule;
  j["message"] = d.message;
  return j;
}

}  // namespace plancog
