#pragma once

// Formula families and seeded random models.
//
// Variable numbering:
//   EQ(n)        x_i = i, u_i = n+i, t_i = 2n+i
//   KBKF         y0 = 1, then (y_k, y_k', u_k[, v_k]) for k = 1..n,
//                then y_{n+1} .. y_{2n}
//   Q(n,m,cn)    Y blocks (n vars each), then X blocks (m each), then t_1..t_n
//   (1,2)-QCNF   X = 1..m, Y = m+1..m+n
//
// Random clause universes are indexed existential-pair major:
//   index = ((pair * 4 + sign) * 2m + ulit)
// where pair enumerates i<j lexicographically, sign = 2*neg_i + neg_j and
// ulit = 2*x + neg. Component i draws from SplitMix64::substream(seed, i),
// sampling indices uniformly and rejecting repeats.

#include <cstdint>
#include <set>
#include <vector>

#include "qbfscc/core.hpp"
#include "qbfscc/rng.hpp"

namespace qbfscc {

inline Qcnf gen_equality(std::size_t n) {
  if (n == 0) throw Error("EQ(n) needs n >= 1");
  auto x = [](std::size_t i) { return static_cast<VarId>(i); };
  auto u = [n](std::size_t i) { return static_cast<VarId>(n + i); };
  auto t = [n](std::size_t i) { return static_cast<VarId>(2 * n + i); };
  std::vector<Block> blocks(3);
  blocks[0].quantifier = Quantifier::exists;
  blocks[1].quantifier = Quantifier::forall;
  blocks[2].quantifier = Quantifier::exists;
  std::vector<Clause> matrix;
  std::vector<Literal> longc;
  for (std::size_t i = 1; i <= n; ++i) {
    blocks[0].vars.push_back(x(i));
    blocks[1].vars.push_back(u(i));
    blocks[2].vars.push_back(t(i));
    matrix.push_back(Clause{Literal(x(i), true), Literal(u(i), true), Literal(t(i), false)});
    matrix.push_back(Clause{Literal(x(i), false), Literal(u(i), false), Literal(t(i), false)});
    longc.emplace_back(t(i), true);
  }
  matrix.emplace_back(std::move(longc));
  Qcnf phi(std::move(blocks), std::move(matrix));
  for (std::size_t i = 1; i <= n; ++i) {
    phi.set_name(x(i), "x" + std::to_string(i));
    phi.set_name(u(i), "u" + std::to_string(i));
    phi.set_name(t(i), "t" + std::to_string(i));
  }
  return phi;
}

enum class KbkfVariant { plain, doubled, weak };

inline Qcnf gen_kbkf_variant(std::size_t n, KbkfVariant variant) {
  if (n == 0) throw Error("KBKF(n) needs n >= 1");
  const bool with_v = variant != KbkfVariant::plain;
  const std::size_t stride = with_v ? 4 : 3;
  auto y = [&](std::size_t k) -> VarId {
    if (k == 0) return 1;
    if (k <= n) return static_cast<VarId>(2 + (k - 1) * stride);
    return static_cast<VarId>(2 + n * stride + (k - n - 1));
  };
  auto yp = [&](std::size_t k) { return static_cast<VarId>(y(k) + 1); };
  auto u = [&](std::size_t k) { return static_cast<VarId>(y(k) + 2); };
  auto v = [&](std::size_t k) { return static_cast<VarId>(y(k) + 3); };

  std::vector<Block> blocks;
  blocks.push_back({Quantifier::exists, {y(0)}});
  std::vector<VarId> weak_vs;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k == 1) {
      blocks.back().vars.push_back(y(1));
      blocks.back().vars.push_back(yp(1));
    } else {
      blocks.push_back({Quantifier::exists, {y(k), yp(k)}});
    }
    Block ub{Quantifier::forall, {u(k)}};
    if (variant == KbkfVariant::doubled) ub.vars.push_back(v(k));
    if (variant == KbkfVariant::weak) weak_vs.push_back(v(k));
    blocks.push_back(std::move(ub));
  }
  blocks.back().vars.insert(blocks.back().vars.end(), weak_vs.begin(), weak_vs.end());
  Block last{Quantifier::exists, {}};
  for (std::size_t t = 1; t <= n; ++t) last.vars.push_back(y(n + t));
  blocks.push_back(std::move(last));

  // u-literal with its v twin when doubled.
  auto ulits = [&](std::size_t k, bool positive) {
    std::vector<Literal> out{Literal(u(k), positive)};
    if (with_v) out.emplace_back(v(k), positive);
    return out;
  };
  auto clause = [](std::initializer_list<std::vector<Literal>> parts) {
    std::vector<Literal> lits;
    for (const auto& p : parts) lits.insert(lits.end(), p.begin(), p.end());
    return Clause(std::move(lits));
  };
  auto neg = [](VarId var) { return std::vector<Literal>{Literal(var, false)}; };
  auto pos = [](VarId var) { return std::vector<Literal>{Literal(var, true)}; };

  std::vector<Clause> matrix;
  matrix.push_back(clause({neg(y(0))}));
  matrix.push_back(clause({pos(y(0)), neg(y(1)), neg(yp(1))}));
  for (std::size_t k = 1; k < n; ++k) {
    matrix.push_back(clause({pos(y(k)), ulits(k, false), neg(y(k + 1)), neg(yp(k + 1))}));
    matrix.push_back(clause({pos(yp(k)), ulits(k, true), neg(y(k + 1)), neg(yp(k + 1))}));
  }
  std::vector<Literal> tail;
  for (std::size_t t = 1; t <= n; ++t) tail.emplace_back(y(n + t), false);
  matrix.push_back(clause({pos(y(n)), ulits(n, false), tail}));
  matrix.push_back(clause({pos(yp(n)), ulits(n, true), tail}));
  for (std::size_t t = 1; t <= n; ++t) {
    matrix.push_back(clause({ulits(t, false), pos(y(n + t))}));
    matrix.push_back(clause({ulits(t, true), pos(y(n + t))}));
  }

  Qcnf phi(std::move(blocks), std::move(matrix));
  phi.set_name(y(0), "y0");
  for (std::size_t k = 1; k <= n; ++k) {
    phi.set_name(y(k), "y" + std::to_string(k));
    phi.set_name(yp(k), "y" + std::to_string(k) + "'");
    phi.set_name(u(k), "u" + std::to_string(k));
    if (with_v) phi.set_name(v(k), "v" + std::to_string(k));
  }
  for (std::size_t t = 1; t <= n; ++t) phi.set_name(y(n + t), "y" + std::to_string(n + t));
  return phi;
}

inline Qcnf gen_kbkf(std::size_t n) { return gen_kbkf_variant(n, KbkfVariant::plain); }
inline Qcnf gen_kbkf_doubled(std::size_t n) { return gen_kbkf_variant(n, KbkfVariant::doubled); }
inline Qcnf gen_kbkf_weak(std::size_t n) { return gen_kbkf_variant(n, KbkfVariant::weak); }

/// Size of the (1 universal, 2 existential) clause universe.
inline std::uint64_t clause_universe_12(std::uint64_t n_exist, std::uint64_t m_univ) {
  return 4 * (n_exist * (n_exist - 1) / 2) * 2 * m_univ;
}

/// Decodes a universe index into a clause over the given Y and X lists.
inline Clause decode_clause_12(std::uint64_t index, const std::vector<VarId>& ys, const std::vector<VarId>& xs) {
  const std::uint64_t two_m = 2 * xs.size();
  std::uint64_t ulit = index % two_m;
  std::uint64_t rest = index / two_m;
  std::uint64_t sign = rest % 4;
  std::uint64_t pair = rest / 4;
  std::size_t n = ys.size();
  std::size_t i = 0;
  while (pair >= n - 1 - i) {
    pair -= n - 1 - i;
    ++i;
  }
  std::size_t j = i + 1 + static_cast<std::size_t>(pair);
  return Clause{Literal(ys[i], (sign & 2) == 0), Literal(ys[j], (sign & 1) == 0),
                Literal(xs[ulit / 2], (ulit & 1) == 0)};
}

/// Decodes an index of the 2-clause universe 4*C(n,2) over ys.
inline Clause decode_clause_2(std::uint64_t index, const std::vector<VarId>& ys) {
  std::uint64_t sign = index % 4;
  std::uint64_t pair = index / 4;
  std::size_t n = ys.size();
  std::size_t i = 0;
  while (pair >= n - 1 - i) {
    pair -= n - 1 - i;
    ++i;
  }
  std::size_t j = i + 1 + static_cast<std::size_t>(pair);
  return Clause{Literal(ys[i], (sign & 2) == 0), Literal(ys[j], (sign & 1) == 0)};
}

/// `count` distinct indices below `universe`, in draw order.
inline std::vector<std::uint64_t> sample_distinct(SplitMix64& rng, std::uint64_t universe, std::uint64_t count) {
  if (count > universe)
    throw Error("clause count " + std::to_string(count) + " exceeds universe size " + std::to_string(universe));
  std::set<std::uint64_t> seen;
  std::vector<std::uint64_t> out;
  out.reserve(count);
  while (out.size() < count) {
    std::uint64_t r = rng.below(universe);
    if (seen.insert(r).second) out.push_back(r);
  }
  return out;
}

struct RandomQComponent {
  std::vector<VarId> x;         // universal, m vars
  std::vector<VarId> y;         // existential, n vars
  VarId t = 0;
  std::vector<Clause> clauses;  // the C_i^j, without the selector literal
};

struct RandomQMeta {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t cn = 0;
  std::uint64_t seed = 0;
  std::vector<RandomQComponent> components;
};

struct RandomQ {
  Qcnf formula;
  RandomQMeta meta;
};

inline RandomQ gen_random_q(std::size_t n, std::size_t m, std::size_t cn, std::uint64_t seed) {
  if (n < 2) throw Error("Q(n,m,c) needs n >= 2");
  if (m < 1) throw Error("Q(n,m,c) needs m >= 1");
  if (cn < 1) throw Error("Q(n,m,c) needs at least one clause per component");
  const std::uint64_t universe = clause_universe_12(n, m);
  if (cn > universe)
    throw Error("clause count " + std::to_string(cn) + " exceeds universe size " + std::to_string(universe));

  RandomQMeta meta{n, m, cn, seed, {}};
  const VarId ybase = 0;
  const VarId xbase = static_cast<VarId>(n * n);
  const VarId tbase = static_cast<VarId>(n * n + n * m);
  std::vector<Block> blocks{{Quantifier::exists, {}}, {Quantifier::forall, {}}, {Quantifier::exists, {}}};
  std::vector<Clause> matrix;
  std::vector<Literal> longc;
  for (std::size_t i = 0; i < n; ++i) {
    RandomQComponent comp;
    for (std::size_t j = 0; j < n; ++j) comp.y.push_back(static_cast<VarId>(ybase + i * n + j + 1));
    for (std::size_t j = 0; j < m; ++j) comp.x.push_back(static_cast<VarId>(xbase + i * m + j + 1));
    comp.t = static_cast<VarId>(tbase + i + 1);
    SplitMix64 rng = SplitMix64::substream(seed, i);
    for (std::uint64_t idx : sample_distinct(rng, universe, cn)) comp.clauses.push_back(decode_clause_12(idx, comp.y, comp.x));
    blocks[0].vars.insert(blocks[0].vars.end(), comp.y.begin(), comp.y.end());
    blocks[1].vars.insert(blocks[1].vars.end(), comp.x.begin(), comp.x.end());
    blocks[2].vars.push_back(comp.t);
    for (const auto& c : comp.clauses) {
      std::vector<Literal> lits(c.begin(), c.end());
      lits.emplace_back(comp.t, false);
      matrix.emplace_back(std::move(lits));
    }
    longc.emplace_back(comp.t, true);
    meta.components.push_back(std::move(comp));
  }
  matrix.emplace_back(std::move(longc));
  return {Qcnf(std::move(blocks), std::move(matrix)), std::move(meta)};
}

/// Ψ_i = ∃Y_i ∀X_i · ψ_i, on the original variable ids.
inline Qcnf component_qcnf(const RandomQComponent& comp) {
  return Qcnf({{Quantifier::exists, comp.y}, {Quantifier::forall, comp.x}}, comp.clauses);
}

/// ∀X ∃Y with clauses of one X-literal and two Y-literals.
inline Qcnf gen_random_12qcnf(std::size_t m, std::size_t n, std::size_t clauses, std::uint64_t seed) {
  if (m < 1 || n < 2) throw Error("(1,2)-QCNF needs m >= 1 and n >= 2");
  std::vector<VarId> xs, ys;
  for (std::size_t j = 1; j <= m; ++j) xs.push_back(static_cast<VarId>(j));
  for (std::size_t j = 1; j <= n; ++j) ys.push_back(static_cast<VarId>(m + j));
  SplitMix64 rng = SplitMix64::substream(seed, 0);
  std::vector<Clause> matrix;
  for (std::uint64_t idx : sample_distinct(rng, clause_universe_12(n, m), clauses))
    matrix.push_back(decode_clause_12(idx, ys, xs));
  return Qcnf({{Quantifier::forall, xs}, {Quantifier::exists, ys}}, std::move(matrix), static_cast<VarId>(m + n));
}

/// Uniform random 2-CNF over variables 1..n, distinct clauses on distinct variables.
inline std::vector<Clause> gen_random_2sat(std::size_t n, std::size_t clauses, std::uint64_t seed) {
  if (n < 2) throw Error("random 2-SAT needs n >= 2");
  std::vector<VarId> ys;
  for (std::size_t j = 1; j <= n; ++j) ys.push_back(static_cast<VarId>(j));
  SplitMix64 rng = SplitMix64::substream(seed, 0);
  std::vector<Clause> out;
  for (std::uint64_t idx : sample_distinct(rng, 4 * (n * (n - 1) / 2), clauses)) out.push_back(decode_clause_2(idx, ys));
  return out;
}

inline Qcnf cnf_as_qcnf(std::vector<Clause> cnf, VarId num_vars) {
  std::vector<VarId> vars;
  for (VarId v = 1; v <= num_vars; ++v) vars.push_back(v);
  return Qcnf({{Quantifier::exists, vars}}, std::move(cnf), num_vars);
}

}  // namespace qbfscc
