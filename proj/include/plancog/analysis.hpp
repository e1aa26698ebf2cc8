#pragma once

#include <string>
#include <vector>

#include "plancog/activation.hpp"

namespace plancog {

// Goal nodes carry a goal name; plan leaves additionally reference the
// instance (`plan` >= 0) and list same-goal sub-plans in `nested`.
struct GoalNode {
  std::string goal;
  int plan = -1;
  std::vector<int> nested;
  bool coherent = true;
  std::vector<GoalNode> children;
};

struct GoalTree {
  GoalNode root;
  int leaf_count() const;
  // Plan leaf bound to the first instance of `schema`, or nullptr.
  const GoalNode* find_leaf(const std::vector<PlanInstance>& instances,
                            std::string_view schema) const;
};

// Task-vocabulary goal served by an instance.
std::string goal_of(const Recognition& r, const KnowledgeBase& kb, int instance);
GoalTree goal_tree(const Recognition& r, const Program& program, const KnowledgeBase& kb);

struct Violation {
  std::string rule;
  std::string check;
  std::vector<int> lines;
  std::string explanation;
};

struct PlanlinessReport {
  double coverage = 0.0;
  double score = 0.0;
  std::vector<Violation> violations;
  std::vector<int> covered_statements;
};

// score = coverage * (1 - 0.25 * min(4, violation count))
PlanlinessReport planliness(const Recognition& r, const Program& program, const KnowledgeBase& kb);
PlanlinessReport planliness(const Program& program, const KnowledgeBase& kb);

enum class Strategy { Plan, Control };

struct Candidate {
  std::string text;
  int rank = 0;
  // "Schema(var).slot" for plan candidates, the template name for control.
  std::string justification;
  bool prototypical = false;
  int support_line = 0;
};

std::vector<Candidate> fill_blank(const BlankedProgram& bp, const KnowledgeBase& kb,
                                  Strategy strategy);

enum class ChunkMode { Plan, Control };

struct Chunk {
  ChunkMode mode = ChunkMode::Control;
  std::vector<int> lines;
  std::vector<int> statements;
  std::string label;
  int instance = -1;
};

struct Chunking {
  std::vector<Chunk> chunks;
  // Statements in no chunk (plan mode only) and their lines.
  std::vector<int> residue;
  std::vector<int> residue_lines;
};

Chunking chunk(const Recognition& r, const Program& program, ChunkMode mode);
Chunking chunk(const Program& program, const KnowledgeBase& kb, ChunkMode mode);

// Jaccard similarity of the (first line, last line) pairs of two chunkings.
double boundary_jaccard(const Chunking& a, const Chunking& b);

// Largest distance between two code lines bound by the instance. Throws
// std::invalid_argument below two distinct lines.
double delocalization(const PlanInstance& instance);

}  // namespace plancog
