#pragma once

// Linear-size semantic refutation of EQ(n) over formula lines. With
// E_i = (x_i ∨ u_i) ∧ (¬x_i ∨ ¬u_i), it derives E_i ∨ ¬t_i from the two
// axioms on t_i, then K_n = E_1 ∨ … ∨ E_n from the long clause, and then
// K_{m-1} from the reductions of K_m on u_m ↦ 0 and u_m ↦ 1.

#include <vector>

#include "qbfscc/formula.hpp"
#include "qbfscc/generators.hpp"
#include "qbfscc/semantic_proof.hpp"

namespace qbfscc {

namespace detail {

inline Formula any_of(std::vector<Formula> kids) {
  if (kids.empty()) return Formula::constant(false);
  if (kids.size() == 1) return kids.front();
  return Formula::disj(std::move(kids));
}

}  // namespace detail

/// E_i = (x_i ∨ u_i) ∧ (¬x_i ∨ ¬u_i) with x_i = i, u_i = n + i.
inline Formula equality_term(std::size_t n, std::size_t i) {
  Literal x(static_cast<VarId>(i), true), u(static_cast<VarId>(n + i), true);
  return Formula::conj({Formula::disj({Formula::lit(x), Formula::lit(u)}), Formula::disj({Formula::lit(x.negated()), Formula::lit(u.negated())})});
}

/// E_1 ∨ … ∨ E_upto.
inline Formula equality_disjunction(std::size_t n, std::size_t upto) {
  std::vector<Formula> kids;
  for (std::size_t i = 1; i <= upto; ++i) kids.push_back(equality_term(n, i));
  return detail::any_of(std::move(kids));
}

inline SemanticProof frege_eq_refutation(std::size_t n) {
  if (n == 0) throw Error("EQ(n) needs n >= 1");
  Qcnf eq = gen_equality(n);
  auto x = [](std::size_t i) { return static_cast<VarId>(i); };
  auto u = [n](std::size_t i) { return static_cast<VarId>(n + i); };
  auto t = [n](std::size_t i) { return static_cast<VarId>(2 * n + i); };
  auto e = [n](std::size_t i) { return equality_term(n, i); };

  detail::SemBuilder b;
  std::vector<std::size_t> ax;
  for (std::size_t k = 0; k < eq.matrix().size(); ++k) ax.push_back(b.axiom(eq.matrix()[k], k + 1));
  std::vector<std::size_t> l(n + 1);
  for (std::size_t i = 1; i <= n; ++i)
    l[i] = b.consequence(Formula::disj({e(i), Formula::lit(Literal(t(i), false))}), {ax[2 * i - 2], ax[2 * i - 1]});
  std::size_t r = ax[2 * n];
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Formula> kids;
    for (std::size_t i = 1; i <= k; ++i) kids.push_back(e(i));
    for (std::size_t i = k + 1; i <= n; ++i) kids.push_back(Formula::lit(Literal(t(i), true)));
    r = b.consequence(detail::any_of(std::move(kids)), {r, l[k]});
  }
  std::size_t km = r;
  for (std::size_t m = n; m >= 1; --m) {
    std::vector<Formula> rest;
    for (std::size_t i = 1; i < m; ++i) rest.push_back(e(i));
    auto with = [&](bool positive) {
      auto kids = rest;
      kids.push_back(Formula::lit(Literal(x(m), positive)));
      return detail::any_of(std::move(kids));
    };
    std::size_t p0 = b.reduction(with(true), km, Assignment{{u(m), false}});
    std::size_t p1 = b.reduction(with(false), km, Assignment{{u(m), true}});
    km = b.consequence(detail::any_of(rest), {p0, p1});
  }
  return b.finish();
}

}  // namespace qbfscc
