#pragma once

// Exhaustive semantic oracles: truth, universal strategies, exact cost, and
// the 2-SAT based tests for the components of the random family.

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "qbfscc/core.hpp"
#include "qbfscc/game.hpp"
#include "qbfscc/generators.hpp"
#include "qbfscc/hitting_set.hpp"
#include "qbfscc/twosat.hpp"

namespace qbfscc {

inline constexpr std::uint64_t kDefaultStrategyBudget = 2'000'000;

inline bool truth(const Qcnf& phi, std::size_t cap = kDefaultVarCap) {
  Game g(phi, cap);
  return g.value();
}

/// Universal strategy as a table over all existential assignments.
/// Indices follow AssignmentSpace over vars∃(Φ) and vars∀(Φ).
class Strategy {
 public:
  Strategy() = default;
  Strategy(AssignmentSpace exist, AssignmentSpace univ, std::vector<std::uint64_t> table)
      : exist_(std::move(exist)), univ_(std::move(univ)), table_(std::move(table)) {
    if (table_.size() != exist_.count()) throw Error("strategy table size does not match the existential space");
  }

  /// Builds a table by querying f on every existential assignment.
  template <class F>
  static Strategy tabulate(const Qcnf& phi, F&& f, std::size_t cap = kDefaultVarCap) {
    AssignmentSpace e(phi.exist_vars()), u(phi.univ_vars());
    if (e.width() > cap) throw CapError("strategy over " + std::to_string(e.width()) + " existential variables exceeds cap");
    std::vector<std::uint64_t> table(e.count());
    for (std::uint64_t a = 0; a < e.count(); ++a) table[a] = u.index_of(f(e.at(a)));
    return Strategy(std::move(e), std::move(u), std::move(table));
  }

  const AssignmentSpace& exist_space() const { return exist_; }
  const AssignmentSpace& univ_space() const { return univ_; }
  const std::vector<std::uint64_t>& table() const { return table_; }

  Assignment respond(const Assignment& alpha) const { return univ_.at(table_[exist_.index_of(alpha)]); }

  /// Projection of S(α) onto vars, over all α.
  std::size_t range_size(std::span<const VarId> vars) const {
    std::vector<std::size_t> pos;
    for (VarId v : vars) {
      auto it = std::find(univ_.vars().begin(), univ_.vars().end(), v);
      if (it == univ_.vars().end()) throw Error("variable " + std::to_string(v) + " is not universal");
      pos.push_back(static_cast<std::size_t>(it - univ_.vars().begin()));
    }
    std::set<std::uint64_t> seen;
    for (std::uint64_t r : table_) {
      std::uint64_t key = 0;
      for (std::size_t p : pos) key = (key << 1) | (univ_.bit(r, p) ? 1u : 0u);
      seen.insert(key);
    }
    return seen.size();
  }

  /// Range sizes of the projections S_i, one per nonempty universal block.
  std::vector<std::size_t> block_ranges(const Qcnf& phi) const {
    std::vector<std::size_t> out;
    for (const auto& b : phi.blocks())
      if (b.quantifier == Quantifier::forall && !b.vars.empty()) out.push_back(range_size(b.vars));
    return out;
  }

  std::size_t cost(const Qcnf& phi) const {
    std::size_t c = 1;
    for (std::size_t r : block_ranges(phi)) c = std::max(c, r);
    return c;
  }

 private:
  AssignmentSpace exist_;
  AssignmentSpace univ_;
  std::vector<std::uint64_t> table_;
};

namespace detail {

/// For each game block, positions of its variables in a sorted variable list.
inline std::vector<std::size_t> positions_in(std::span<const VarId> vars, std::span<const VarId> space) {
  std::vector<std::size_t> out;
  for (VarId v : vars) out.push_back(static_cast<std::size_t>(std::lower_bound(space.begin(), space.end(), v) - space.begin()));
  return out;
}

inline std::uint64_t gather(std::uint64_t index, std::size_t width, const std::vector<std::size_t>& pos) {
  std::uint64_t m = 0;
  for (std::size_t p : pos) m = (m << 1) | ((index >> (width - 1 - p)) & 1u);
  return m;
}

inline std::uint64_t scatter(std::uint64_t local, std::size_t local_width, std::size_t width, const std::vector<std::size_t>& pos) {
  std::uint64_t m = 0;
  for (std::size_t j = 0; j < pos.size(); ++j)
    if ((local >> (local_width - 1 - j)) & 1u) m |= std::uint64_t{1} << (width - 1 - pos[j]);
  return m;
}

/// Plays the game for every existential assignment, answering each universal
/// block with the first move that keeps the universal player winning.
inline Strategy synthesize_from_game(Game& g) {
  const Qcnf& phi = g.formula();
  AssignmentSpace e(phi.exist_vars()), u(phi.univ_vars());
  std::vector<std::vector<std::size_t>> pos(g.num_blocks());
  for (std::size_t b = 0; b < g.num_blocks(); ++b) {
    const Block& blk = g.block(b);
    pos[b] = positions_in(blk.vars, blk.quantifier == Quantifier::exists ? e.vars() : u.vars());
  }
  std::vector<std::uint64_t> table(e.count());
  Game::State st, next;
  for (std::uint64_t a = 0; a < e.count(); ++a) {
    st = g.initial();
    std::uint64_t resp = 0;
    bool done = g.has_empty_clause();
    for (std::size_t b = 0; b < g.num_blocks(); ++b) {
      const Block& blk = g.block(b);
      const std::size_t w = blk.vars.size();
      if (blk.quantifier == Quantifier::exists) {
        std::uint64_t m = gather(a, e.width(), pos[b]);
        if (!done && !g.apply(b, st, m, next)) done = true;
        st = next;
        continue;
      }
      std::uint64_t chosen = g.moves(b).front();
      if (!done) {
        bool found = false;
        for (std::uint64_t m : g.moves(b)) {
          if (g.forall_wins_with(b, st, m)) {
            chosen = m;
            found = true;
            break;
          }
        }
        if (!found) throw DomainError("formula is true; no winning universal strategy");
        if (!g.apply(b, st, chosen, next)) done = true;
        st = next;
      }
      resp |= scatter(chosen, w, u.width(), pos[b]);
    }
    table[a] = resp;
  }
  return Strategy(std::move(e), std::move(u), std::move(table));
}

}  // namespace detail

/// Canonical winning ∀-strategy: at each universal block the first response
/// (in assignment order) from which the universal player still wins.
inline Strategy synthesize_winning_forall(const Qcnf& phi, std::size_t cap = kDefaultVarCap) {
  Game g(phi, cap);
  if (g.value()) throw DomainError("formula is true; no winning universal strategy");
  return detail::synthesize_from_game(g);
}

struct StrategyVerdict {
  bool ok = true;
  std::string message;
  explicit operator bool() const { return ok; }
};

/// Checks the dependency condition block by block and that every play
/// α ∪ S(α) falsifies the matrix.
inline StrategyVerdict verify_strategy(const Qcnf& phi, const Strategy& s) {
  if (s.exist_space().vars() != phi.exist_vars() || s.univ_space().vars() != phi.univ_vars())
    return {false, "strategy variables do not match the formula"};
  const auto& E = s.exist_space();
  const auto& U = s.univ_space();
  for (std::size_t b = 0; b < phi.blocks().size(); ++b) {
    const Block& blk = phi.blocks()[b];
    if (blk.quantifier != Quantifier::forall || blk.vars.empty()) continue;
    std::vector<VarId> left;
    for (VarId v : E.vars())
      if (phi.block_of(v) < b) left.push_back(v);
    auto lpos = detail::positions_in(left, E.vars());
    auto upos = detail::positions_in(blk.vars, U.vars());
    std::map<std::uint64_t, std::uint64_t> seen;
    for (std::uint64_t a = 0; a < E.count(); ++a) {
      std::uint64_t key = detail::gather(a, E.width(), lpos);
      std::uint64_t val = detail::gather(s.table()[a], U.width(), upos);
      auto [it, inserted] = seen.emplace(key, val);
      if (!inserted && it->second != val)
        return {false, "response on universal block " + std::to_string(b) + " depends on existentials to its right"};
    }
  }
  DenseAssignment tau(phi.num_vars());
  for (std::uint64_t a = 0; a < E.count(); ++a) {
    for (std::size_t j = 0; j < E.width(); ++j) tau.set(E.vars()[j], E.bit(a, j));
    for (std::size_t j = 0; j < U.width(); ++j) tau.set(U.vars()[j], U.bit(s.table()[a], j));
    bool falsified = false;
    for (const auto& c : phi.matrix()) {
      bool sat = false;
      for (Literal l : c)
        if (tau.value(l) == 1) {
          sat = true;
          break;
        }
      if (!sat) {
        falsified = true;
        break;
      }
    }
    if (!falsified) return {false, "existential play " + std::to_string(a) + " satisfies the matrix"};
  }
  return {};
}

struct CostReport {
  std::size_t cost = 0;
  Strategy witness;
  std::vector<std::size_t> block_ranges;
};

/// Exact cost for formulas with exactly one nonempty universal block, as a
/// minimum hitting set over the falsifying responses of each outer play.
inline CostReport cost_exact_single_block(const Qcnf& phi, std::size_t cap = kDefaultVarCap) {
  Game g(phi, cap);
  std::optional<std::size_t> ub;
  for (std::size_t b = 0; b < g.num_blocks(); ++b)
    if (g.block(b).quantifier == Quantifier::forall) {
      if (ub) throw Error("formula has more than one universal block");
      ub = b;
    }
  if (!ub) {
    if (g.value()) throw DomainError("formula is true; cost is undefined");
    CostReport r;
    r.cost = 1;
    r.witness = synthesize_winning_forall(phi, cap);
    return r;
  }
  const std::vector<VarId>& U = g.block(*ub).vars;
  const std::uint64_t nresp = std::uint64_t{1} << U.size();
  std::vector<VarId> outer;
  for (std::size_t b = 0; b < *ub; ++b) outer.insert(outer.end(), g.block(b).vars.begin(), g.block(b).vars.end());
  std::sort(outer.begin(), outer.end());
  if (outer.size() > cap) throw CapError("too many outer existential variables");
  AssignmentSpace outer_space(outer);
  std::vector<std::vector<std::size_t>> pos(*ub);
  for (std::size_t b = 0; b < *ub; ++b) pos[b] = detail::positions_in(g.block(b).vars, outer);

  std::vector<boost::dynamic_bitset<>> W(outer_space.count(), boost::dynamic_bitset<>(nresp));
  Game::State st, next;
  for (std::uint64_t a = 0; a < outer_space.count(); ++a) {
    st = g.initial();
    bool lost = g.has_empty_clause();
    for (std::size_t b = 0; b < *ub && !lost; ++b) {
      if (!g.apply(b, st, detail::gather(a, outer.size(), pos[b]), next)) lost = true;
      st = next;
    }
    for (std::uint64_t m = 0; m < nresp; ++m)
      if (lost || g.forall_wins_with(*ub, st, m)) W[a].set(m);
    if (W[a].none()) throw DomainError("formula is true; cost is undefined");
  }
  std::vector<boost::dynamic_bitset<>> distinct(W.begin(), W.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::size_t> B = min_hitting_set(nresp, distinct);

  AssignmentSpace E(phi.exist_vars()), Uall(phi.univ_vars());
  auto opos = detail::positions_in(outer, E.vars());
  auto upos = detail::positions_in(U, Uall.vars());
  std::vector<std::uint64_t> table(E.count());
  for (std::uint64_t a = 0; a < E.count(); ++a) {
    std::uint64_t oa = detail::gather(a, E.width(), opos);
    std::size_t pick = 0;
    for (std::size_t bsel : B)
      if (W[oa].test(bsel)) {
        pick = bsel;
        break;
      }
    table[a] = detail::scatter(pick, U.size(), Uall.width(), upos);
  }
  CostReport r;
  r.cost = B.size();
  r.witness = Strategy(std::move(E), std::move(Uall), std::move(table));
  r.block_ranges = r.witness.block_ranges(phi);
  return r;
}

/// Exact cost for any prefix: for k = 1, 2, ... every choice of response
/// sets of size min(k, |⟨U_i⟩|) per universal block is tried in the
/// restricted game. `budget` bounds the number of game evaluations.
inline CostReport cost_exact_general(const Qcnf& phi, std::uint64_t budget = kDefaultStrategyBudget,
                                     std::size_t cap = kDefaultVarCap) {
  Game g(phi, cap);
  if (g.value()) throw DomainError("formula is true; cost is undefined");
  std::vector<std::size_t> ublocks;
  std::size_t kmax = 1;
  for (std::size_t b = 0; b < g.num_blocks(); ++b)
    if (g.block(b).quantifier == Quantifier::forall) {
      if (g.block(b).vars.size() > 20) throw CapError("universal block too large for cost search");
      ublocks.push_back(b);
      kmax = std::max<std::size_t>(kmax, std::size_t{1} << g.block(b).vars.size());
    }
  std::uint64_t evaluations = 0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    // per-block subset enumerators (combinations of size min(k, 2^w))
    std::vector<std::vector<std::uint64_t>> combos(ublocks.size());
    std::vector<std::uint64_t> n(ublocks.size());
    for (std::size_t i = 0; i < ublocks.size(); ++i) {
      n[i] = std::uint64_t{1} << g.block(ublocks[i]).vars.size();
      std::size_t size = std::min<std::uint64_t>(k, n[i]);
      combos[i].resize(size);
      for (std::size_t j = 0; j < size; ++j) combos[i][j] = j;
    }
    auto next_combo = [](std::vector<std::uint64_t>& c, std::uint64_t n) {
      std::size_t s = c.size();
      for (std::size_t j = s; j-- > 0;) {
        if (c[j] < n - s + j) {
          ++c[j];
          for (std::size_t t = j + 1; t < s; ++t) c[t] = c[t - 1] + 1;
          return true;
        }
      }
      return false;
    };
    for (;;) {
      if (++evaluations > budget)
        throw CapError("cost search exceeded budget of " + std::to_string(budget) + " game evaluations");
      std::vector<std::optional<std::vector<std::uint64_t>>> allowed(g.num_blocks());
      for (std::size_t i = 0; i < ublocks.size(); ++i) allowed[ublocks[i]] = combos[i];
      g.restrict_moves(allowed);
      if (!g.value()) {
        CostReport r;
        r.witness = detail::synthesize_from_game(g);
        r.block_ranges = r.witness.block_ranges(phi);
        r.cost = 1;
        for (std::size_t x : r.block_ranges) r.cost = std::max(r.cost, x);
        return r;
      }
      // odometer over blocks, last block fastest
      std::size_t i = ublocks.size();
      bool advanced = false;
      while (i-- > 0) {
        if (next_combo(combos[i], n[i])) {
          advanced = true;
          break;
        }
        std::size_t size = combos[i].size();
        for (std::size_t j = 0; j < size; ++j) combos[i][j] = j;
      }
      if (!advanced) break;
    }
  }
  throw Error("cost search exhausted without a winning strategy");
}

namespace detail {

/// Splits each clause of a (1,2)-formula into its existential part; throws
/// on clauses with more than one universal or more than two existential literals.
inline std::vector<Clause> existential_parts(const Qcnf& psi) {
  std::vector<Clause> out;
  for (const auto& c : psi.matrix()) {
    std::vector<Literal> e;
    std::size_t u = 0;
    for (Literal l : c) {
      if (psi.is_universal(l.var())) ++u;
      else e.push_back(l);
    }
    if (u > 1 || e.size() > 2) throw Error("clause " + c.to_string() + " is not a (1,2)-clause");
    out.emplace_back(std::move(e));
  }
  return out;
}

}  // namespace detail

/// ∃Y∀X·ψ is false iff the 2-CNF of existential parts is unsatisfiable.
inline bool psi_false(const Qcnf& psi) { return !solve_2sat(detail::existential_parts(psi)).sat; }

/// No constant universal response wins: ψ[β] is satisfiable for every β ∈ ⟨X⟩.
inline bool psi_nonconstant(const Qcnf& psi, std::size_t cap = 20) {
  detail::existential_parts(psi);
  std::vector<VarId> X = psi.univ_vars();
  if (X.size() > cap) throw CapError("too many universal variables for the non-constancy test");
  AssignmentSpace space(X);
  for (std::uint64_t b = 0; b < space.count(); ++b) {
    Assignment beta = space.at(b);
    std::vector<Clause> restricted;
    bool empty = false;
    for (const auto& c : psi.matrix())
      if (auto r = restrict_clause(c, beta)) {
        if (r->empty()) empty = true;
        restricted.push_back(std::move(*r));
      }
    if (empty || !solve_2sat(restricted).sat) return false;
  }
  return true;
}

struct LowerBoundReport {
  bool certified = false;        // every component is false
  std::size_t components_false = 0;
  std::size_t k = 0;             // components with no constant winning response
  std::uint64_t N = 0;           // 2^m
  double bound = 1.0;            // (N/(N-1))^k
  double log2_bound = 0.0;
  std::string status;
};

/// Counting lower bound on cost(Q(n,m,c)) from its components.
inline LowerBoundReport cost_lower_bound_q(const RandomQMeta& meta) {
  LowerBoundReport r;
  if (meta.m >= 63) throw CapError("m too large");
  r.N = std::uint64_t{1} << meta.m;
  for (const auto& comp : meta.components) {
    Qcnf psi = component_qcnf(comp);
    if (psi_false(psi)) ++r.components_false;
    if (psi_nonconstant(psi)) ++r.k;
  }
  r.certified = r.components_false == meta.components.size();
  const double ratio = static_cast<double>(r.N) / static_cast<double>(r.N - 1);
  r.log2_bound = static_cast<double>(r.k) * std::log2(ratio);
  r.bound = std::pow(ratio, static_cast<double>(r.k));
  r.status = r.certified ? "certified" : "truth uncertified";
  return r;
}

}  // namespace qbfscc
