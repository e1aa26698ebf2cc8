#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "plancog/activation.hpp"
#include "program_index.hpp"

namespace plancog {

std::string_view to_string(Evidence evidence) {
  return evidence == Evidence::Static ? "static" : "simulated";
}

bool CoherenceReport::internally_coherent(int instance) const {
  for (const InternalCheck& c : internal)
    if (c.instance == instance && !c.ok) return false;
  return true;
}

namespace {

using detail::ProgramIndex;

bool fits_slot(const Slot& slot, const std::string& text, const Bindings& env) {
  for (const Filler& f : slot.fillers) {
    Bindings local = env;
    if (match_pattern(parse_pattern(f.pattern), text, local)) return true;
  }
  return false;
}

std::set<int> bound_statements(const PlanInstance& inst) {
  std::set<int> out;
  for (const Bound& b : inst.bindings)
    if (b.kind == BindingKind::Statement || b.kind == BindingKind::Condition) out.insert(b.stmt_id);
  return out;
}

std::set<int> loops_of(const PlanInstance& inst, const ProgramIndex& idx) {
  std::set<int> out;
  if (inst.loop >= 0) out.insert(inst.loop);
  for (const Bound& b : inst.bindings) {
    if (b.kind == BindingKind::Keyword || b.kind == BindingKind::Condition) out.insert(b.stmt_id);
    if (b.kind == BindingKind::Statement)
      for (int l : idx.enclosing_loops(b.stmt_id)) out.insert(l);
  }
  return out;
}

bool chained(const DefUse& du, const std::set<int>& a, const std::set<int>& b) {
  for (std::size_t d = 0; d < du.definitions.size(); ++d) {
    const int from = du.definitions[d].stmt_id;
    const bool in_a = a.count(from), in_b = b.count(from);
    if (!in_a && !in_b) continue;
    for (int u : du.chains[d]) {
      const int to = du.uses[u].stmt_id;
      if ((in_a && b.count(to)) || (in_b && a.count(to))) return true;
    }
  }
  return false;
}

bool counter_in_loop(const PlanInstance& inst, const KnowledgeBase& kb, const ProgramIndex& idx) {
  if (!kb.is_a(inst.schema, "Counter_Variable")) return false;
  for (const Bound& b : inst.bindings) {
    if (b.kind == BindingKind::Keyword) return true;
    if (b.kind == BindingKind::Statement && idx.in_loop(b.stmt_id)) return true;
  }
  return false;
}

// A sentinel is an integer literal a loop condition compares against.
std::optional<std::int64_t> sentinel(const ProgramIndex& idx) {
  std::optional<std::int64_t> found;
  std::function<void(const Expr&)> scan = [&](const Expr& e) {
    if (found) return;
    if (e.kind == ExprKind::Binary && (e.op == "=" || e.op == "<>")) {
      for (const Expr& side : e.args)
        if (side.kind == ExprKind::IntLit) {
          found = side.int_value;
          return;
        }
    }
    for (const Expr& a : e.args) scan(a);
  };
  for (int loop : idx.loops())
    if (idx.stmt(loop).kind != StmtKind::For) scan(idx.stmt(loop).expr);
  return found;
}

std::vector<std::vector<double>> probe_inputs(const ProgramIndex& idx) {
  if (auto s = sentinel(idx)) return {{1, 2, 3, double(*s)}};
  return {{1, 2, 3}, {3, 1, 2, 3}, {1, 2, 3, -1}};
}

std::vector<std::string> subjects_of(const PlanInstance& inst,
                                     const std::vector<PlanInstance>& all) {
  if (!inst.subject.empty()) return {inst.subject};
  std::vector<std::string> out;
  for (int c : inst.children)
    if (!all[c].subject.empty()) out.push_back(all[c].subject);
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

}  // namespace

CoherenceReport evaluate_coherence(const std::vector<PlanInstance>& instances, const DefUse& du,
                                   const Program& program, const KnowledgeBase& kb,
                                   int step_budget) {
  const ProgramIndex idx(program);
  CoherenceReport report;

  for (const PlanInstance& inst : instances) {
    const Schema* schema = kb.find_schema(inst.schema);
    Bindings env;
    if (!inst.subject.empty()) env["v"] = inst.subject;
    for (const Bound& b : inst.bindings)
      if (b.kind == BindingKind::Instance && !instances[b.child].subject.empty())
        env[b.slot] = instances[b.child].subject;
    for (const Bound& b : inst.bindings) {
      if (b.kind == BindingKind::Instance) {
        const bool ok = kb.is_a(instances[b.child].schema,
                                [&] {
                                  for (const auto& [to, slot] : implementations(kb, inst.schema))
                                    if (slot == b.slot) return to;
                                  return std::string();
                                }());
        report.internal.push_back(
            InternalCheck{inst.id, b.slot, "sub-plan " + instances[b.child].label() + " fits the link", ok, b.line});
        continue;
      }
      const Slot* slot = schema->find_slot(b.slot);
      const bool ok = slot && fits_slot(*slot, b.text, env);
      report.internal.push_back(
          InternalCheck{inst.id, b.slot, "\"" + b.text + "\" fits a filler of " + b.slot, ok, b.line});
    }
    for (const Conflict& c : inst.conflicts)
      report.internal.push_back(InternalCheck{
          inst.id, c.slot, "\"" + c.text + "\" fits no filler of " + c.slot, false, c.line});
    const Bound* init = inst.binding("init");
    const Bound* update = inst.binding("update");
    if (inst.kind == SchemaKind::Variable && init && update &&
        init->kind == BindingKind::Statement && update->kind == BindingKind::Statement) {
      const bool ok = detail::reaches(du, init->stmt_id, update->stmt_id, inst.subject) ||
                      [&] {
                        for (const Use& u : du.uses)
                          if (u.var == inst.subject &&
                              detail::reaches(du, init->stmt_id, u.stmt_id, inst.subject) &&
                              detail::reaches(du, update->stmt_id, u.stmt_id, inst.subject))
                            return true;
                        return false;
                      }();
      report.internal.push_back(
          InternalCheck{inst.id, "update", "init and update on one def-use chain", ok, update->line});
    }
  }

  std::optional<ExecutionResult> run;
  std::vector<double> used_inputs;
  auto simulate = [&]() -> const ExecutionResult& {
    if (!run) {
      for (const auto& inputs : probe_inputs(idx)) {
        run = execute(program, inputs, step_budget);
        used_inputs = inputs;
        if (run->ok) break;
      }
    }
    return *run;
  };

  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t j = i + 1; j < instances.size(); ++j) {
      const PlanInstance& a = instances[i];
      const PlanInstance& b = instances[j];
      std::vector<std::string> shared;
      if (chained(du, bound_statements(a), bound_statements(b))) shared.push_back("share a def-use chain");
      const auto la = loops_of(a, idx), lb = loops_of(b, idx);
      std::vector<int> common;
      std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(common));
      if (!common.empty())
        shared.push_back("share the loop at line " + std::to_string(idx.stmt(common.front()).line));
      if (shared.empty()) continue;

      Interaction x;
      x.first = a.id;
      x.second = b.id;
      x.description = a.label() + " and " + b.label() + " " + shared.front();
      for (std::size_t k = 1; k < shared.size(); ++k) x.description += " and " + shared[k];
      if (counter_in_loop(a, kb, idx) || counter_in_loop(b, kb, idx)) {
        const ExecutionResult& r = simulate();
        x.evidence = Evidence::Simulated;
        x.inputs = used_inputs;
        x.run_ok = r.ok;
        std::string values;
        for (const PlanInstance* p : {&a, &b})
          for (const std::string& v : subjects_of(*p, instances)) {
            auto it = r.final_values.find(v);
            if (it == r.final_values.end()) continue;
            if (values.find(v + "=") != std::string::npos) continue;
            values += (values.empty() ? "" : ", ") + v + "=" + it->second.to_string();
          }
        x.description += "; run on [" + join(used_inputs) + "] " +
                         (r.ok ? "ends with " + values
                               : "stops with " + std::string(to_string(r.error)));
      } else {
        x.evidence = Evidence::Static;
      }
      report.external.push_back(std::move(x));
    }
  }
  return report;
}

}  // namespace plancog
