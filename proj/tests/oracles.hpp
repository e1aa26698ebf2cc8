#pragma once

// Reference implementations the library is checked against. They work on the
// AST directly and share no code with the analyses under test.

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "plancog/relations.hpp"

namespace plancog::oracle {

struct Flow {
  // (defining statement, using statement, variable)
  std::set<std::tuple<int, int, std::string>> chains;
  // (using statement, variable) reachable without a definition
  std::set<std::pair<int, std::string>> uninitialized;
};

// Walks every path through the program with each loop body run at most
// `unroll` times. The state is the last definition of each variable, so a
// set of states stands in for the set of paths that produced them.
class PathWalker {
 public:
  explicit PathWalker(int unroll) : unroll_(unroll) {}

  using State = std::map<std::string, int>;

  Flow run(const Program& p) {
    State init;
    for (const Declaration& d : p.declarations) init[d.name] = -1;
    std::set<State> states{init};
    for (const Stmt& s : p.body) states = step(s, states);
    return flow_;
  }

 private:
  void use(const std::set<State>& states, int stmt, const std::string& var) {
    for (const State& st : states) {
      const int d = st.at(var);
      if (d < 0)
        flow_.uninitialized.insert({stmt, var});
      else
        flow_.chains.insert({d, stmt, var});
    }
  }

  void use_expr(const std::set<State>& states, int stmt, const Expr& e) {
    for (const std::string& v : referenced_variables(e)) use(states, stmt, canonical(states, v));
  }

  static std::string canonical(const std::set<State>& states, const std::string& v) {
    for (const auto& [name, _] : *states.begin())
      if (iequals(name, v)) return name;
    return v;
  }

  static std::set<State> define(std::set<State> states, const std::string& var, int stmt) {
    std::set<State> out;
    for (State st : states) {
      st[canonical(states, var)] = stmt;
      out.insert(st);
    }
    return out;
  }

  std::set<State> seq(const std::vector<Stmt>& body, std::set<State> states) {
    for (const Stmt& s : body) states = step(s, states);
    return states;
  }

  std::set<State> step(const Stmt& s, const std::set<State>& in) {
    switch (s.kind) {
      case StmtKind::Assign:
        use_expr(in, s.id, s.expr);
        return define(in, s.target, s.id);
      case StmtKind::Readln:
        return define(in, s.target, s.id);
      case StmtKind::Writeln:
        use_expr(in, s.id, s.expr);
        return in;
      case StmtKind::Hole:
        return in;
      case StmtKind::Compound:
        return seq(s.body, in);
      case StmtKind::If: {
        use_expr(in, s.id, s.expr);
        std::set<State> out = seq(s.body, in);
        const std::set<State> other = seq(s.orelse, in);
        out.insert(other.begin(), other.end());
        return out;
      }
      case StmtKind::While: {
        use_expr(in, s.id, s.expr);
        std::set<State> out = in, cur = in;
        for (int k = 0; k < unroll_; ++k) {
          cur = seq(s.body, cur);
          use_expr(cur, s.id, s.expr);
          out.insert(cur.begin(), cur.end());
        }
        return out;
      }
      case StmtKind::Repeat: {
        std::set<State> out, cur = in;
        for (int k = 0; k < unroll_; ++k) {
          cur = seq(s.body, cur);
          use_expr(cur, s.id, s.expr);
          out.insert(cur.begin(), cur.end());
        }
        return out;
      }
      case StmtKind::For: {
        // Both bounds are evaluated once, before the first test.
        use_expr(in, s.id, s.expr);
        use_expr(in, s.id, s.limit);
        std::set<State> cur = define(in, s.target, s.id);
        const auto test = [&](const std::set<State>& st) { use(st, s.id, canonical(st, s.target)); };
        test(cur);
        std::set<State> out = cur;
        for (int k = 0; k < unroll_; ++k) {
          cur = seq(s.body, cur);
          use(cur, s.id, canonical(cur, s.target));
          cur = define(cur, s.target, s.id);
          test(cur);
          out.insert(cur.begin(), cur.end());
        }
        return out;
      }
    }
    return in;
  }

  int unroll_;
  Flow flow_;
};

inline Flow enumerate_paths(const Program& p, int unroll) { return PathWalker(unroll).run(p); }

// The library's def-use result in the oracle's terms.
inline Flow observed(const Program& p, const DefUse& du) {
  Flow f;
  const auto name = [&](const std::string& v) { return p.find_declaration(v)->name; };
  for (std::size_t d = 0; d < du.definitions.size(); ++d) {
    const Definition& def = du.definitions[d];
    if (def.stmt_id < 0) continue;
    for (int u : du.chains[d]) f.chains.insert({def.stmt_id, du.uses[u].stmt_id, name(def.var)});
  }
  for (const Use& u : du.uses)
    if (u.possibly_uninitialized) f.uninitialized.insert({u.stmt_id, name(u.var)});
  return f;
}

// Random structured program over X, Y, Z with at most `max_statements`
// statements (compound blocks included).
inline std::string random_program(std::mt19937& rng, int max_statements) {
  const char* vars[] = {"X", "Y", "Z"};
  auto pick = [&](int n) { return int(rng() % unsigned(n)); };
  auto var = [&] { return std::string(vars[pick(3)]); };
  auto operand = [&] { return pick(3) == 0 ? std::to_string(pick(5)) : var(); };
  auto expr = [&] { return pick(2) ? operand() : operand() + (pick(2) ? "+" : "-") + operand(); };
  auto cond = [&] {
    const char* ops[] = {"<", ">", "=", "<>"};
    return operand() + ops[pick(4)] + operand();
  };
  int budget = max_statements;
  std::function<std::string(int, std::string)> stmt = [&](int depth, std::string indent) {
    --budget;
    const int choice = depth >= 3 || budget < 2 ? pick(3) : pick(8);
    switch (choice) {
      case 0:
        return indent + var() + ":=" + expr();
      case 1:
        return indent + "READLN(" + var() + ")";
      case 2:
        return indent + "WRITELN(" + expr() + ")";
      case 3: {
        std::string s = indent + "IF " + cond() + " THEN\n" + stmt(depth + 1, indent + "  ");
        if (budget > 0 && pick(2)) s += "\n" + indent + "ELSE\n" + stmt(depth + 1, indent + "  ");
        return s;
      }
      case 4:
        return indent + "WHILE " + cond() + " DO\n" + stmt(depth + 1, indent + "  ");
      case 5: {
        std::string s = indent + "REPEAT\n" + stmt(depth + 1, indent + "  ");
        if (budget > 0 && pick(2)) s += ";\n" + stmt(depth + 1, indent + "  ");
        return s + "\n" + indent + "UNTIL " + cond();
      }
      case 6:
        return indent + "FOR " + var() + ":=" + operand() + " TO " + operand() + " DO\n" +
               stmt(depth + 1, indent + "  ");
      default: {
        std::string s = indent + "BEGIN\n" + stmt(depth + 1, indent + "  ");
        while (budget > 0 && pick(3)) s += ";\n" + stmt(depth + 1, indent + "  ");
        return s + "\n" + indent + "END";
      }
    }
  };
  std::string body;
  while (budget > 0 && (body.empty() || pick(4))) body += (body.empty() ? "" : ";\n") + stmt(0, "  ");
  return "PROGRAM R(input, output);\nVAR X, Y, Z: INTEGER;\nBEGIN\n" + body + "\nEND.\n";
}

}  // namespace plancog::oracle
