#pragma once

// JSON views of analysis results. Line lists are sorted ascending.

#include <json.hpp>

#include "plancog/analysis.hpp"
#include "plancog/interpreter.hpp"

namespace plancog {

using json = nlohmann::ordered_json;

json to_json(const Program& program);
json to_json(const Cfg& cfg);
json to_json(const DefUse& du);
json to_json(const PrimeNode& node);
json to_json(const Cue& cue);
json to_json(const Activation& activation);
json to_json(const Firing& firing);
json to_json(const PlanInstance& instance);
json to_json(const Expectation& expectation, const std::vector<PlanInstance>& instances);
json to_json(const CoherenceReport& report, const std::vector<PlanInstance>& instances);
json to_json(const GoalTree& tree, const std::vector<PlanInstance>& instances);
json to_json(const PlanlinessReport& report);
json to_json(const Candidate& candidate);
json to_json(const Chunking& chunking);
json to_json(const ExecutionResult& result);
json to_json(const Diagnostic& diagnostic);

}  // namespace plancog
