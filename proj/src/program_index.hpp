#pragma once

// Lookup tables over a parsed program shared by the recognition passes.

#include <algorithm>
#include <string>
#include <vector>

#include "plancog/frontend.hpp"
#include "plancog/relations.hpp"

namespace plancog::detail {

inline bool is_loop(const Stmt& s) {
  return s.kind == StmtKind::Repeat || s.kind == StmtKind::While || s.kind == StmtKind::For;
}

inline bool is_simple(const Stmt& s) {
  return s.kind == StmtKind::Assign || s.kind == StmtKind::Readln ||
         s.kind == StmtKind::Writeln || s.kind == StmtKind::Hole;
}

inline bool is_definition(const Stmt& s) {
  return s.kind == StmtKind::Assign || s.kind == StmtKind::Readln;
}

class ProgramIndex {
 public:
  explicit ProgramIndex(const Program& p) : program_(p) {
    stmts_ = p.statements();
    enclosing_.resize(stmts_.size());
    for (const Stmt& s : p.body) walk(s, {});
  }

  const Program& program() const { return program_; }
  const Stmt& stmt(int id) const { return *stmts_.at(id); }
  int size() const { return static_cast<int>(stmts_.size()); }
  const std::vector<const Stmt*>& all() const { return stmts_; }

  // Loops around `id`, innermost first (the statement itself excluded).
  const std::vector<int>& enclosing_loops(int id) const { return enclosing_.at(id); }
  bool in_loop(int id) const { return !enclosing_.at(id).empty(); }
  bool inside(int id, int loop) const {
    const auto& e = enclosing_.at(id);
    return std::find(e.begin(), e.end(), loop) != e.end();
  }

  std::vector<int> loops() const {
    std::vector<int> out;
    for (const Stmt* s : stmts_)
      if (is_loop(*s)) out.push_back(s->id);
    return out;
  }

  std::vector<int> simple_statements() const {
    std::vector<int> out;
    for (const Stmt* s : stmts_)
      if (is_simple(*s)) out.push_back(s->id);
    return out;
  }

  std::vector<int> definitions_of(const std::string& var) const {
    std::vector<int> out;
    for (const Stmt* s : stmts_)
      if (is_definition(*s) && s->target == var) out.push_back(s->id);
    return out;
  }

  static std::string keyword(const Stmt& loop) {
    switch (loop.kind) {
      case StmtKind::Repeat: return "REPEAT";
      case StmtKind::While: return "WHILE";
      case StmtKind::For: return "FOR";
      default: return "";
    }
  }

  static std::string condition_text(const Stmt& loop) {
    if (loop.kind == StmtKind::For) return loop.target + "<=" + compact_text(loop.limit);
    return compact_text(loop.expr);
  }

  static int condition_line(const Stmt& loop) {
    return loop.kind == StmtKind::Repeat ? loop.end_line : loop.line;
  }

  static std::vector<std::string> condition_variables(const Stmt& loop) {
    if (loop.kind == StmtKind::For) return {loop.target};
    return referenced_variables(loop.expr);
  }

 private:
  void walk(const Stmt& s, std::vector<int> loops) {
    enclosing_[s.id] = loops;
    if (is_loop(s)) loops.insert(loops.begin(), s.id);
    for (const Stmt& c : s.body) walk(c, loops);
    for (const Stmt& c : s.orelse) walk(c, loops);
  }

  const Program& program_;
  std::vector<const Stmt*> stmts_;
  std::vector<std::vector<int>> enclosing_;
};

// Some definition of `var` made by statement `def` reaches a use of `var`
// at statement `use`.
inline bool reaches(const DefUse& du, int def, int use, const std::string& var) {
  for (std::size_t d = 0; d < du.definitions.size(); ++d) {
    if (du.definitions[d].stmt_id != def || du.definitions[d].var != var) continue;
    for (int u : du.chains[d])
      if (du.uses[u].stmt_id == use) return true;
  }
  return false;
}

}  // namespace plancog::detail
