#include "plancog/relations.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace plancog {

std::string_view to_string(CfgNodeKind kind) {
  switch (kind) {
    case CfgNodeKind::Entry: return "entry";
    case CfgNodeKind::Exit: return "exit";
    case CfgNodeKind::Statement: return "statement";
    case CfgNodeKind::Condition: return "condition";
    case CfgNodeKind::Junction: return "junction";
  }
  return "?";
}

std::string_view to_string(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::Seq: return "seq";
    case EdgeLabel::True: return "true";
    case EdgeLabel::False: return "false";
    case EdgeLabel::LoopBack: return "loop-back";
  }
  return "?";
}

std::string_view to_string(PrimeKind kind) {
  switch (kind) {
    case PrimeKind::Sequence: return "sequence";
    case PrimeKind::Iteration: return "iteration";
    case PrimeKind::Conditional: return "conditional";
  }
  return "?";
}

std::vector<int> Cfg::successors(int node) const {
  std::vector<int> out;
  for (const CfgEdge& e : edges)
    if (e.from == node) out.push_back(e.to);
  return out;
}

std::vector<int> Cfg::predecessors(int node) const {
  std::vector<int> out;
  for (const CfgEdge& e : edges)
    if (e.to == node) out.push_back(e.from);
  return out;
}

std::vector<const CfgEdge*> Cfg::out_edges(int node) const {
  std::vector<const CfgEdge*> out;
  for (const CfgEdge& e : edges)
    if (e.from == node) out.push_back(&e);
  return out;
}

std::vector<int> Cfg::nodes_at_line(int line) const {
  std::vector<int> out;
  for (const CfgNode& n : nodes)
    if (n.line == line && !n.synthetic && n.kind != CfgNodeKind::Entry &&
        n.kind != CfgNodeKind::Exit)
      out.push_back(n.id);
  return out;
}

// ---------------------------------------------------------------------------
// CFG

namespace {

class CfgBuilder {
 public:
  Cfg build(const Program& p) {
    add(CfgNodeKind::Entry, "entry", nullptr, 0);
    add(CfgNodeKind::Exit, "exit", nullptr, 0);
    const int first = list(p.body, cfg_.exit);
    edge(cfg_.entry, first, EdgeLabel::Seq);
    renumber();
    return std::move(cfg_);
  }

 private:
  int add(CfgNodeKind kind, std::string role, const Stmt* s, int line,
          std::vector<std::string> defs = {}, std::vector<std::string> uses = {}) {
    CfgNode n;
    n.id = static_cast<int>(cfg_.nodes.size());
    n.kind = kind;
    n.role = std::move(role);
    n.stmt_id = s ? s->id : -1;
    n.line = line;
    n.defs = std::move(defs);
    n.uses = std::move(uses);
    cfg_.nodes.push_back(std::move(n));
    return cfg_.nodes.back().id;
  }

  void edge(int from, int to, EdgeLabel label) { cfg_.edges.push_back(CfgEdge{from, to, label}); }

  int list(const std::vector<Stmt>& stmts, int next) {
    for (auto it = stmts.rbegin(); it != stmts.rend(); ++it) next = stmt(*it, next);
    return next;
  }

  int stmt(const Stmt& s, int next) {
    switch (s.kind) {
      case StmtKind::Assign: {
        const int n = add(CfgNodeKind::Statement, "assign", &s, s.line, {s.target},
                          referenced_variables(s.expr));
        edge(n, next, EdgeLabel::Seq);
        return n;
      }
      case StmtKind::Readln: {
        const int n = add(CfgNodeKind::Statement, "readln", &s, s.line, {s.target});
        edge(n, next, EdgeLabel::Seq);
        return n;
      }
      case StmtKind::Writeln: {
        const int n = add(CfgNodeKind::Statement, "writeln", &s, s.line, {},
                          referenced_variables(s.expr));
        edge(n, next, EdgeLabel::Seq);
        return n;
      }
      case StmtKind::Hole: {
        const int n = add(CfgNodeKind::Statement, "hole", &s, s.line);
        edge(n, next, EdgeLabel::Seq);
        return n;
      }
      case StmtKind::Compound: {
        const int n = add(CfgNodeKind::Junction, "compound", &s, s.line);
        edge(n, list(s.body, next), EdgeLabel::Seq);
        return n;
      }
      case StmtKind::Repeat: {
        const int head = add(CfgNodeKind::Junction, "repeat", &s, s.line);
        const int test = add(CfgNodeKind::Condition, "until", &s, s.end_line, {},
                             referenced_variables(s.expr));
        const int body = list(s.body, test);
        edge(head, body, EdgeLabel::Seq);
        edge(test, next, EdgeLabel::True);
        edge(test, body, EdgeLabel::LoopBack);
        return head;
      }
      case StmtKind::While: {
        const int test = add(CfgNodeKind::Condition, "while", &s, s.line, {},
                             referenced_variables(s.expr));
        const int end = add(CfgNodeKind::Junction, "loop-end", &s, s.line);
        cfg_.nodes[end].synthetic = true;
        edge(test, list(s.body, end), EdgeLabel::True);
        edge(test, next, EdgeLabel::False);
        edge(end, test, EdgeLabel::LoopBack);
        return test;
      }
      case StmtKind::For: {
        std::vector<std::string> bound_uses = referenced_variables(s.expr);
        for (auto& v : referenced_variables(s.limit))
          if (std::find(bound_uses.begin(), bound_uses.end(), v) == bound_uses.end())
            bound_uses.push_back(v);
        const int init = add(CfgNodeKind::Statement, "for-init", &s, s.line, {s.target}, bound_uses);
        const int test = add(CfgNodeKind::Condition, "for-test", &s, s.line, {}, {s.target});
        const int step =
            add(CfgNodeKind::Statement, "for-step", &s, s.line, {s.target}, {s.target});
        edge(init, test, EdgeLabel::Seq);
        edge(test, list(s.body, step), EdgeLabel::True);
        edge(test, next, EdgeLabel::False);
        edge(step, test, EdgeLabel::LoopBack);
        return init;
      }
      case StmtKind::If: {
        const int test = add(CfgNodeKind::Condition, "if", &s, s.line, {},
                             referenced_variables(s.expr));
        edge(test, list(s.body, next), EdgeLabel::True);
        edge(test, s.orelse.empty() ? next : list(s.orelse, next), EdgeLabel::False);
        return test;
      }
    }
    return next;
  }

  // Nodes were created back to front; number them in depth-first order from
  // entry so ids read in program order.
  void renumber() {
    std::vector<int> order;
    std::vector<bool> seen(cfg_.nodes.size(), false);
    std::vector<int> stack{cfg_.entry};
    while (!stack.empty()) {
      const int n = stack.back();
      stack.pop_back();
      if (seen[n] || n == cfg_.exit) continue;
      seen[n] = true;
      order.push_back(n);
      auto succ = cfg_.successors(n);
      for (auto it = succ.rbegin(); it != succ.rend(); ++it) stack.push_back(*it);
    }
    for (std::size_t i = 0; i < cfg_.nodes.size(); ++i)
      if (!seen[i] && static_cast<int>(i) != cfg_.exit) order.push_back(static_cast<int>(i));
    order.push_back(cfg_.exit);

    std::vector<int> remap(cfg_.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = static_cast<int>(i);
    std::vector<CfgNode> nodes(cfg_.nodes.size());
    for (CfgNode& n : cfg_.nodes) {
      n.id = remap[n.id];
      nodes[n.id] = std::move(n);
    }
    cfg_.nodes = std::move(nodes);
    for (CfgEdge& e : cfg_.edges) {
      e.from = remap[e.from];
      e.to = remap[e.to];
    }
    std::stable_sort(cfg_.edges.begin(), cfg_.edges.end(),
                     [](const CfgEdge& a, const CfgEdge& b) { return a.from < b.from; });
    cfg_.entry = remap[cfg_.entry];
    cfg_.exit = remap[cfg_.exit];
  }

  Cfg cfg_;
};

}  // namespace

Cfg build_cfg(const Program& program) { return CfgBuilder{}.build(program); }

// ---------------------------------------------------------------------------
// Prime structures

namespace {

bool is_simple(const Stmt& s) {
  return s.kind == StmtKind::Assign || s.kind == StmtKind::Readln ||
         s.kind == StmtKind::Writeln || s.kind == StmtKind::Hole;
}

void widen(PrimeNode& node, int line) {
  if (line <= 0) return;
  if (node.first_line == 0 || line < node.first_line) node.first_line = line;
  if (line > node.last_line) node.last_line = line;
}

void widen(PrimeNode& node, const PrimeNode& child) {
  widen(node, child.first_line);
  widen(node, child.last_line);
}

PrimeNode structured(const Stmt& s);

PrimeNode sequence(const std::vector<Stmt>& stmts, const Stmt* head) {
  PrimeNode node;
  node.kind = PrimeKind::Sequence;
  if (head) {
    node.head_stmt = head->id;
    node.head_line = head->line;
    widen(node, head->line);
    widen(node, head->end_line);
  }
  const bool all_simple = std::all_of(stmts.begin(), stmts.end(), is_simple);
  if (all_simple) {
    for (const Stmt& s : stmts) {
      node.statements.push_back(s.id);
      widen(node, s.line);
    }
    return node;
  }
  PrimeNode leaf;
  auto flush = [&] {
    if (leaf.statements.empty()) return;
    widen(node, leaf);
    node.children.push_back(std::move(leaf));
    leaf = PrimeNode{};
  };
  for (const Stmt& s : stmts) {
    if (is_simple(s)) {
      leaf.statements.push_back(s.id);
      widen(leaf, s.line);
      continue;
    }
    flush();
    PrimeNode child = structured(s);
    widen(node, child);
    node.children.push_back(std::move(child));
  }
  flush();
  return node;
}

PrimeNode branch(const Stmt& s) {
  if (s.kind == StmtKind::Compound) return sequence(s.body, &s);
  return sequence(std::vector<Stmt>{s}, nullptr);
}

PrimeNode structured(const Stmt& s) {
  if (s.kind == StmtKind::Compound) return sequence(s.body, &s);
  PrimeNode node;
  node.head_stmt = s.id;
  node.head_line = s.line;
  widen(node, s.line);
  widen(node, s.end_line);
  if (s.kind == StmtKind::If) {
    node.kind = PrimeKind::Conditional;
    node.children.push_back(branch(s.body.front()));
    if (!s.orelse.empty()) node.children.push_back(branch(s.orelse.front()));
  } else {
    node.kind = PrimeKind::Iteration;
    if (s.kind == StmtKind::Repeat)
      node.children.push_back(sequence(s.body, nullptr));
    else
      node.children.push_back(branch(s.body.front()));
  }
  for (const PrimeNode& c : node.children) widen(node, c);
  return node;
}

}  // namespace

PrimeNode decompose_primes(const Program& program) { return sequence(program.body, nullptr); }

// ---------------------------------------------------------------------------
// Def-use

std::vector<int> DefUse::reaching(int use_index) const {
  std::vector<int> out;
  for (std::size_t d = 0; d < chains.size(); ++d)
    if (std::binary_search(chains[d].begin(), chains[d].end(), use_index))
      out.push_back(static_cast<int>(d));
  return out;
}

bool DefUse::connects(const std::string& var, int def_line, int use_line) const {
  for (std::size_t d = 0; d < definitions.size(); ++d) {
    if (definitions[d].var != var || definitions[d].line != def_line) continue;
    for (int u : chains[d])
      if (uses[u].line == use_line) return true;
  }
  return false;
}

DefUse def_use(const Program& program, const Cfg& cfg) {
  DefUse out;
  // Definition sites, plus one pseudo-definition per variable at entry.
  std::map<std::string, std::vector<int>> defs_of;
  std::vector<std::vector<int>> gen(cfg.nodes.size());
  for (const CfgNode& n : cfg.nodes) {
    for (const std::string& v : n.defs) {
      const int d = static_cast<int>(out.definitions.size());
      out.definitions.push_back(Definition{v, n.id, n.stmt_id, n.line});
      defs_of[v].push_back(d);
      gen[n.id].push_back(d);
    }
  }
  const int real_defs = static_cast<int>(out.definitions.size());
  std::map<std::string, int> pseudo;
  for (const Declaration& decl : program.declarations) {
    const int d = real_defs + static_cast<int>(pseudo.size());
    pseudo[decl.name] = d;
    defs_of[decl.name].push_back(d);
    gen[cfg.entry].push_back(d);
  }
  auto var_of = [&](int d) -> const std::string& {
    if (d < real_defs) return out.definitions[d].var;
    for (const auto& [v, id] : pseudo)
      if (id == d) return v;
    throw std::logic_error("unknown definition");
  };

  std::vector<std::set<int>> in(cfg.nodes.size()), outset(cfg.nodes.size());
  auto transfer = [&](int n) {
    std::set<int> result;
    const auto& killed = cfg.nodes[n].defs;
    for (int d : in[n])
      if (std::find(killed.begin(), killed.end(), var_of(d)) == killed.end()) result.insert(d);
    for (int d : gen[n]) result.insert(d);
    return result;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const CfgNode& n : cfg.nodes) {
      std::set<int> merged;
      for (int p : cfg.predecessors(n.id)) merged.insert(outset[p].begin(), outset[p].end());
      in[n.id] = std::move(merged);
      auto next = transfer(n.id);
      if (next != outset[n.id]) {
        outset[n.id] = std::move(next);
        changed = true;
      }
    }
  }

  out.chains.assign(out.definitions.size(), {});
  for (const CfgNode& n : cfg.nodes) {
    for (const std::string& v : n.uses) {
      Use use{v, n.id, n.stmt_id, n.line, false};
      const int u = static_cast<int>(out.uses.size());
      for (int d : in[n.id]) {
        if (var_of(d) != v) continue;
        if (d >= real_defs)
          use.possibly_uninitialized = true;
        else
          out.chains[d].push_back(u);
      }
      out.uses.push_back(use);
    }
  }
  for (auto& c : out.chains) std::sort(c.begin(), c.end());
  return out;
}

// ---------------------------------------------------------------------------
// Queries

std::vector<int> query_relation(RelationKind kind, const Program& program, int line) {
  const Cfg cfg = build_cfg(program);
  const auto here = cfg.nodes_at_line(line);
  if (here.empty())
    throw std::out_of_range("line " + std::to_string(line) + " does not address a statement");

  std::set<int> related;
  if (kind == RelationKind::Control) {
    // Step over synthetic join nodes to the real neighbours behind them.
    auto collect = [&](int start, bool forward) {
      std::vector<int> stack = forward ? cfg.successors(start) : cfg.predecessors(start);
      std::set<int> seen;
      while (!stack.empty()) {
        const int n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        const CfgNode& node = cfg.nodes[n];
        if (node.synthetic) {
          auto more = forward ? cfg.successors(n) : cfg.predecessors(n);
          stack.insert(stack.end(), more.begin(), more.end());
          continue;
        }
        if (node.kind == CfgNodeKind::Entry || node.kind == CfgNodeKind::Exit) continue;
        related.insert(node.line);
      }
    };
    for (int n : here) {
      collect(n, true);
      collect(n, false);
    }
  } else {
    const DefUse du = def_use(program, cfg);
    for (std::size_t d = 0; d < du.definitions.size(); ++d) {
      const bool def_here = du.definitions[d].line == line;
      for (int u : du.chains[d]) {
        if (def_here) related.insert(du.uses[u].line);
        if (du.uses[u].line == line) related.insert(du.definitions[d].line);
      }
    }
  }
  related.erase(line);
  return {related.begin(), related.end()};
}

}  // namespace plancog
