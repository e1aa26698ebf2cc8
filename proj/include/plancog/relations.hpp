#pragma once

#include <string>
#include <vector>

#include "plancog/frontend.hpp"

namespace plancog {

enum class CfgNodeKind { Entry, Exit, Statement, Condition, Junction };
enum class EdgeLabel { Seq, True, False, LoopBack };

std::string_view to_string(CfgNodeKind kind);
std::string_view to_string(EdgeLabel label);

struct CfgNode {
  int id = 0;
  CfgNodeKind kind = CfgNodeKind::Statement;
  // assign, readln, writeln, hole, compound, repeat, until, while, loop-end,
  // for-init, for-test, for-step, if; "entry"/"exit" for the sentinels.
  std::string role;
  int stmt_id = -1;
  int line = 0;
  // Internal join points (the end of a WHILE body) that have no source line
  // of their own; skipped by line-addressed queries.
  bool synthetic = false;
  std::vector<std::string> defs;
  std::vector<std::string> uses;
};

struct CfgEdge {
  int from = 0;
  int to = 0;
  EdgeLabel label = EdgeLabel::Seq;
};

struct Cfg {
  std::vector<CfgNode> nodes;
  std::vector<CfgEdge> edges;
  int entry = 0;
  int exit = 1;

  std::vector<int> successors(int node) const;
  std::vector<int> predecessors(int node) const;
  std::vector<const CfgEdge*> out_edges(int node) const;
  // Non-synthetic statement/condition/junction nodes on `line`.
  std::vector<int> nodes_at_line(int line) const;
};

// Repeat bodies run before their UNTIL test; WHILE and FOR test first. The
// UNTIL test is its own node (on the UNTIL line) with a loop-back edge to
// the first body node.
Cfg build_cfg(const Program& program);

enum class PrimeKind { Sequence, Iteration, Conditional };

std::string_view to_string(PrimeKind kind);

// Iteration and conditional nodes are headed by their loop / IF statement; a
// sequence node is headed by its BEGIN..END block, or by nothing for the
// program body and single-statement branches. Leaves are sequences without
// children and own the simple statements in `statements`.
struct PrimeNode {
  PrimeKind kind = PrimeKind::Sequence;
  int head_stmt = -1;
  int head_line = 0;
  int first_line = 0;
  int last_line = 0;
  std::vector<int> statements;
  std::vector<PrimeNode> children;

  bool is_leaf() const { return children.empty(); }
};

PrimeNode decompose_primes(const Program& program);

struct Definition {
  std::string var;
  int node = 0;
  int stmt_id = -1;
  int line = 0;
};

struct Use {
  std::string var;
  int node = 0;
  int stmt_id = -1;
  int line = 0;
  // Some path from entry reaches this use without defining `var`.
  bool possibly_uninitialized = false;
};

struct DefUse {
  std::vector<Definition> definitions;
  std::vector<Use> uses;
  // chains[d]: indices into `uses` reached by definition d, ascending.
  std::vector<std::vector<int>> chains;

  std::vector<int> reaching(int use_index) const;
  // True if some definition on `def_line` of `var` reaches a use on
  // `use_line`.
  bool connects(const std::string& var, int def_line, int use_line) const;
};

DefUse def_use(const Program& program, const Cfg& cfg);

enum class RelationKind { Control, Data };

// Control: lines of CFG predecessors and successors of the statement(s) on
// `line`. Data: lines of statements sharing a def-use chain with them.
// Sorted ascending, `line` itself excluded.
std::vector<int> query_relation(RelationKind kind, const Program& program, int line);

}  // namespace plancog
