#pragma once

// Semantic refutation built from a winning universal strategy S. With the
// universal variables u_1..u_n in prefix order and X_i the existentials left
// of u_i, B_i is false exactly when u_1..u_i agree with S. Its maxterm CNF
// L_i follows from the axioms for i = n, and L_{i-1} follows from the two
// reductions of L_i on u_i. L_0 is the empty clause.

#include <map>
#include <vector>

#include "qbfscc/semantic_proof.hpp"
#include "qbfscc/semantics.hpp"

namespace qbfscc {

inline SemanticProof completeness_refutation(const Qcnf& phi, const Strategy& s, std::size_t cap = kDefaultSemanticCap) {
  if (phi.num_vars() > cap) throw CapError("formula over " + std::to_string(phi.num_vars()) + " variables exceeds cap " + std::to_string(cap));
  if (auto v = verify_strategy(phi, s); !v) throw DomainError("strategy is not winning: " + v.message);
  detail::SemBuilder b;
  for (std::size_t k = 0; k < phi.matrix().size(); ++k)
    if (phi.matrix()[k].empty()) {
      b.axiom(Clause{}, k + 1);
      return b.finish();
    }
  std::vector<std::size_t> axioms;
  for (std::size_t k = 0; k < phi.matrix().size(); ++k) axioms.push_back(b.axiom(phi.matrix()[k], k + 1));

  std::vector<VarId> us;
  for (const auto& blk : phi.blocks())
    if (blk.quantifier == Quantifier::forall) us.insert(us.end(), blk.vars.begin(), blk.vars.end());
  const std::size_t n = us.size();

  // rows of B_i that are 0, as maxterm clauses
  auto layer = [&](std::size_t i) {
    std::vector<VarId> x;
    if (i > 0)
      for (VarId v : phi.exist_vars())
        if (phi.block_of(v) < phi.block_of(us[i - 1])) x.push_back(v);
    AssignmentSpace xs(x);
    std::vector<Clause> out;
    for (std::uint64_t a = 0; a < xs.count(); ++a) {
      Assignment full = xs.at(a);
      for (VarId v : phi.exist_vars())
        if (!full.contains(v)) full.bind(v, false);
      Assignment resp = s.respond(full);
      std::vector<Literal> lits;
      for (VarId v : x) lits.emplace_back(v, !*full.value(v));
      for (std::size_t j = 0; j < i; ++j) lits.emplace_back(us[j], !*resp.value(us[j]));
      out.emplace_back(std::move(lits));
    }
    return out;
  };

  std::vector<std::size_t> current;
  for (const Clause& c : layer(n)) current.push_back(b.consequence(c, axioms));
  for (std::size_t i = n; i >= 1; --i) {
    std::vector<std::size_t> reduced;
    for (std::size_t id : current) {
      const Clause c = std::get<Clause>(b.line(id));
      Literal lu;
      for (Literal l : c)
        if (l.var() == us[i - 1]) lu = l;
      Assignment beta{{us[i - 1], !lu.positive()}};
      reduced.push_back(b.reduction(clause_without(c, Clause{lu}), id, std::move(beta)));
    }
    current.clear();
    for (const Clause& c : layer(i - 1)) current.push_back(b.consequence(c, reduced));
  }
  return b.finish();
}

}  // namespace qbfscc
