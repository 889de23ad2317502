#pragma once

// 2-SAT by implication-graph SCCs, and linear-size resolution refutations
// read off implication paths.

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "qbfscc/core.hpp"
#include "qbfscc/qures.hpp"

namespace qbfscc {

struct TwoSatResult {
  bool sat = false;
  Assignment model;      // when sat; over the variables of the formula
  VarId conflict = 0;    // when unsat: smallest x with x and ¬x equivalent (0 for an empty clause)
};

namespace detail {

class ImplicationGraph {
 public:
  explicit ImplicationGraph(std::span<const Clause> cnf) {
    for (const auto& c : cnf) {
      if (c.size() > 2) throw Error("clause " + c.to_string() + " is wider than 2");
      if (c.empty()) has_empty_ = true;
      for (Literal l : c) max_var_ = std::max(max_var_, l.var());
    }
    adj_.resize(2 * (max_var_ + 1));
    for (std::size_t i = 0; i < cnf.size(); ++i) {
      const Clause& c = cnf[i];
      if (c.size() == 1) {
        Literal a = c.literals()[0];
        add_edge(a.negated(), a, i);
      } else if (c.size() == 2) {
        Literal a = c.literals()[0], b = c.literals()[1];
        add_edge(a.negated(), b, i);
        add_edge(b.negated(), a, i);
      }
    }
  }

  static std::size_t node(Literal l) { return 2 * l.var() + (l.positive() ? 0 : 1); }
  static Literal literal(std::size_t n) { return Literal(static_cast<VarId>(n / 2), n % 2 == 0); }

  bool has_empty() const { return has_empty_; }
  VarId max_var() const { return max_var_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& out(std::size_t n) const { return adj_[n]; }

  /// Tarjan SCC ids; components are numbered in reverse topological order.
  std::vector<int> scc() const {
    const std::size_t n = adj_.size();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on(n, false);
    std::vector<std::size_t> stack;
    int counter = 0, ncomp = 0;
    // iterative Tarjan
    for (std::size_t root = 0; root < n; ++root) {
      if (index[root] != -1) continue;
      std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
      index[root] = low[root] = counter++;
      stack.push_back(root);
      on[root] = true;
      while (!call.empty()) {
        auto& [v, ei] = call.back();
        if (ei < adj_[v].size()) {
          std::size_t w = adj_[v][ei++].first;
          if (index[w] == -1) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            on[w] = true;
            call.emplace_back(w, 0);
          } else if (on[w]) {
            low[v] = std::min(low[v], index[w]);
          }
        } else {
          std::size_t done = v;
          if (low[done] == index[done]) {
            for (;;) {
              std::size_t w = stack.back();
              stack.pop_back();
              on[w] = false;
              comp[w] = ncomp;
              if (w == done) break;
            }
            ++ncomp;
          }
          call.pop_back();
          if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
      }
    }
    return comp;
  }

  /// Shortest path from -> to as a list of clause indices (BFS, edges in insertion order).
  std::vector<std::size_t> path(Literal from, Literal to) const {
    const std::size_t n = adj_.size();
    std::vector<long> prev_node(n, -1), prev_clause(n, -1);
    std::vector<bool> visited(n, false);
    std::deque<std::size_t> q{node(from)};
    visited[node(from)] = true;
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop_front();
      if (v == node(to)) break;
      for (auto [w, ci] : adj_[v])
        if (!visited[w]) {
          visited[w] = true;
          prev_node[w] = static_cast<long>(v);
          prev_clause[w] = static_cast<long>(ci);
          q.push_back(w);
        }
    }
    if (!visited[node(to)]) throw Error("no implication path");
    std::vector<std::size_t> out;
    for (std::size_t v = node(to); v != node(from); v = static_cast<std::size_t>(prev_node[v]))
      out.push_back(static_cast<std::size_t>(prev_clause[v]));
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  void add_edge(Literal a, Literal b, std::size_t clause) { adj_[node(a)].emplace_back(node(b), clause); }

  VarId max_var_ = 0;
  bool has_empty_ = false;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj_;
};

}  // namespace detail

inline TwoSatResult solve_2sat(std::span<const Clause> cnf) {
  detail::ImplicationGraph g(cnf);
  TwoSatResult res;
  if (g.has_empty()) return res;
  auto comp = g.scc();
  std::vector<VarId> vars = matrix_vars(cnf);
  for (VarId v : vars) {
    if (comp[detail::ImplicationGraph::node(Literal(v, true))] == comp[detail::ImplicationGraph::node(Literal(v, false))]) {
      res.conflict = v;
      return res;
    }
  }
  res.sat = true;
  // Tarjan numbers components in reverse topological order: pick the literal
  // whose component comes later topologically (smaller id).
  for (VarId v : vars)
    res.model.bind(v, comp[detail::ImplicationGraph::node(Literal(v, true))] <
                          comp[detail::ImplicationGraph::node(Literal(v, false))]);
  return res;
}

/// Resolution refutation of an unsatisfiable CNF of width ≤ 2: units x and
/// ¬x are derived along shortest implication paths, then resolved.
inline QUResProof refute_2sat(std::span<const Clause> cnf) {
  TwoSatResult r = solve_2sat(cnf);
  if (r.sat) throw DomainError("2-CNF is satisfiable");
  QUResProof pi;
  std::map<Clause, std::size_t> axiom_ids;
  auto axiom = [&](const Clause& c) {
    if (auto it = axiom_ids.find(c); it != axiom_ids.end()) return it->second;
    std::size_t id = pi.steps.size() + 1;
    pi.steps.push_back({id, c, QRule::axiom, {}});
    axiom_ids.emplace(c, id);
    return id;
  };
  auto resolve = [&](std::size_t a, std::size_t b) {
    const Clause& ca = pi.steps[a - 1].clause;
    const Clause& cb = pi.steps[b - 1].clause;
    VarId p = *unique_pivot(ca, cb);
    std::size_t id = pi.steps.size() + 1;
    pi.steps.push_back({id, resolvent(ca, cb, p), QRule::resolve, {a, b}});
    return id;
  };
  if (r.conflict == 0) {
    axiom(Clause{});
    return pi;
  }
  detail::ImplicationGraph g(cnf);
  // Derives the unit ¬from along the path from -> ¬from.
  auto unit_along = [&](Literal from) {
    std::vector<std::size_t> path = g.path(from, from.negated());
    std::size_t cur = axiom(cnf[path[0]]);
    for (std::size_t k = 1; k < path.size(); ++k) {
      const Clause& have = pi.steps[cur - 1].clause;
      if (have.size() == 1 && have.contains(from.negated())) break;
      cur = resolve(cur, axiom(cnf[path[k]]));
    }
    return cur;
  };
  Literal x(r.conflict, true);
  std::size_t neg = unit_along(x);
  std::size_t pos = unit_along(x.negated());
  resolve(pos, neg);
  return pi;
}

/// Refutation of a false ∃Y∀X·ψ with (1,2)-clauses: each clause is reduced to
/// its existential part, then the 2-SAT refutation of those parts follows.
inline QUResProof refute_sigma2(const Qcnf& psi) {
  std::vector<Clause> parts;
  for (const auto& c : psi.matrix()) parts.push_back(max_reduce(psi, c));
  for (const auto& p : parts)
    for (Literal l : p)
      if (!psi.is_existential(l.var())) throw DomainError("clause part " + p.to_string() + " is not existential");
  QUResProof two = refute_2sat(parts);
  detail::ProofBuilder b;
  std::map<Clause, std::size_t> reduced;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::size_t a = b.add(psi.matrix()[i], QRule::axiom, {});
    std::size_t r = parts[i] == psi.matrix()[i] ? a : b.add(parts[i], QRule::reduce, {a});
    reduced.emplace(parts[i], r);
  }
  std::vector<std::size_t> map(two.steps.size());
  for (std::size_t i = 0; i < two.steps.size(); ++i) {
    const auto& s = two.steps[i];
    if (s.rule == QRule::axiom) {
      map[i] = reduced.at(s.clause);
    } else {
      map[i] = b.add(s.clause, QRule::resolve, {map[two.index_of(s.premises[0])], map[two.index_of(s.premises[1])]});
    }
  }
  return b.finish(map.back());
}

}  // namespace qbfscc
