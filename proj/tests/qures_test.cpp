#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qbfscc/generators.hpp"
#include "qbfscc/qures.hpp"
#include "qbfscc/semantics.hpp"
#include "qbfscc/twosat.hpp"

using namespace qbfscc;

namespace {

Clause C(std::initializer_list<long long> lits) { return Clause::from_dimacs(lits); }

QUResStep ax(std::size_t id, Clause c) { return {id, std::move(c), QRule::axiom, {}}; }
QUResStep res(std::size_t id, Clause c, std::size_t a, std::size_t b) { return {id, std::move(c), QRule::resolve, {a, b}}; }
QUResStep red(std::size_t id, Clause c, std::size_t a) { return {id, std::move(c), QRule::reduce, {a}}; }
QUResStep wk(std::size_t id, Clause c, std::size_t a) { return {id, std::move(c), QRule::weaken, {a}}; }

// EQ(1): x=1, u=2, t=3
QUResProof eq1_refutation() {
  return {{ax(1, C({1, 2, -3})), ax(2, C({3})), res(3, C({1, 2}), 1, 2), red(4, C({1}), 3),
           ax(5, C({-1, -2, -3})), res(6, C({-1, -2}), 5, 2), red(7, C({-1}), 6), res(8, Clause{}, 4, 7)}};
}

}  // namespace

TEST(CheckQures, ResolveAndReduceExamples) {
  Qcnf eq = gen_equality(1);
  QUResProof pi{{ax(1, C({1, 2, -3})), ax(2, C({3})), res(3, C({1, 2}), 1, 2), red(4, C({1}), 3)}};
  EXPECT_TRUE(check_qures(eq, pi, {.refutation = false}));
  EXPECT_FALSE(check_qures(eq, pi));
  EXPECT_TRUE(check_qures(eq, eq1_refutation()));
}

TEST(CheckQures, TautologicalResolventRejected) {
  Qcnf phi({{Quantifier::exists, {1}}, {Quantifier::forall, {2}}}, {C({1, 2}), C({-1, -2})});
  QUResProof pi{{ax(1, C({1, 2})), ax(2, C({-1, -2})), res(3, C({2, -2}), 1, 2)}};
  auto r = check_qures(phi, pi, {.refutation = false});
  EXPECT_FALSE(r);
  EXPECT_EQ(r.step, 3u);
}

TEST(CheckQures, Rejections) {
  Qcnf eq = gen_equality(1);
  auto reject = [&](QUResProof pi) { return !check_qures(eq, pi, {.refutation = false}); };
  EXPECT_TRUE(reject({{ax(1, C({1, 2}))}}));                                        // not in matrix
  EXPECT_TRUE(reject({{ax(1, C({1, 2, -3})), red(2, C({1, -3}), 1)}}));             // u left of t
  EXPECT_TRUE(reject({{ax(1, C({1, 2, -3})), ax(2, C({3})), red(3, C({1}), 2)}}));  // not a subset
  EXPECT_TRUE(reject({{ax(1, C({3})), red(2, Clause{}, 1)}}));                      // existential removed
  EXPECT_TRUE(reject({{ax(1, C({3})), res(2, C({3}), 1, 1)}}));                     // no pivot
  EXPECT_TRUE(reject({{ax(1, C({3})), res(2, Clause{}, 1, 9)}}));                   // dangling
  EXPECT_TRUE(reject({{ax(2, C({3})), ax(1, C({1, 2, -3}))}}));                     // ids decrease
  EXPECT_TRUE(reject({{ax(1, C({3})), wk(2, C({3}), 1)}}));                         // not proper
  EXPECT_TRUE(reject({{ax(1, C({3})), wk(2, C({3, -3}), 1)}}));                     // tautology
  EXPECT_FALSE(reject({{ax(1, C({3})), wk(2, C({3, 1}), 1)}}));
  EXPECT_FALSE(check_qures(eq, QUResProof{}));
}

TEST(CheckQures, StrictModeForbidsUniversalPivot) {
  Qcnf phi({{Quantifier::exists, {1}}, {Quantifier::forall, {2}}, {Quantifier::exists, {3}}},
           {C({1, 2, 3}), C({1, -2, 3})});
  QUResProof pi{{ax(1, C({1, 2, 3})), ax(2, C({1, -2, 3})), res(3, C({1, 3}), 1, 2)}};
  EXPECT_TRUE(check_qures(phi, pi, {.refutation = false}));
  EXPECT_FALSE(check_qures(phi, pi, {.refutation = false, .strict_qres = true}));
}

TEST(Trace, RoundTrip) {
  QUResProof pi = eq1_refutation();
  std::string text = write_qures(pi);
  EXPECT_EQ(text.substr(0, 23), "1 1 2 -3 0 0\n2 3 0 0\n3 ");
  QUResProof back = parse_qures("c comment\n" + text);
  EXPECT_EQ(write_qures(back), text);
  for (std::size_t i = 0; i < pi.size(); ++i) EXPECT_EQ(back.steps[i].rule, pi.steps[i].rule);
  EXPECT_TRUE(check_qures(gen_equality(1), back));
}

TEST(Trace, ParseErrors) {
  EXPECT_THROW(parse_qures("1 3 0\n"), ParseError);
  EXPECT_THROW(parse_qures("1 3 0 0\n2 3 0 1 0\n"), ParseError);
  EXPECT_THROW(parse_qures("2 3 0 0\n1 3 0 0\n"), ParseError);
  EXPECT_THROW(parse_qures("1 x 0 0\n"), ParseError);
  EXPECT_THROW(parse_qures("1 3 0 0\n2 1 0 1 0\n"), ParseError);
  EXPECT_THROW(parse_qures("1 3 0 0\n2 0 1 1 1 0\n"), ParseError);
}

TEST(Normalize, EqualityOneIdempotent) {
  Qcnf eq = gen_equality(1);
  QUResProof pi = eq1_refutation();
  QUResProof n1 = normalize(eq, pi);
  EXPECT_TRUE(check_qures(eq, n1));
  EXPECT_LE(n1.size(), pi.size());
  EXPECT_EQ(write_qures(normalize(eq, n1)), write_qures(n1));
}

TEST(Normalize, BypassesWeakening) {
  Qcnf eq = gen_equality(1);
  QUResProof pi{{ax(1, C({1, 2, -3})), ax(2, C({3})), res(3, C({1, 2}), 1, 2), wk(4, C({1, 2, 3}), 3),
                 ax(5, C({-1, -2, -3})), res(6, C({-1, -2}), 5, 2),
                 red(7, C({-1}), 6), red(8, C({1, 3}), 4), red(9, C({1}), 3), res(10, Clause{}, 9, 7)}};
  ASSERT_FALSE(check_qures(eq, pi));  // step 8 removes u while t is right of it
  pi.steps.erase(pi.steps.begin() + 7);
  ASSERT_TRUE(check_qures(eq, pi)) << check_qures(eq, pi).to_string();
  QUResProof n = normalize(eq, pi);
  EXPECT_TRUE(check_qures(eq, n));
  EXPECT_LT(n.size(), pi.size());
  for (const auto& s : n.steps) EXPECT_NE(s.rule, QRule::weaken);
}

TEST(Normalize, RandomProofsShrinkAndStayValid) {
  for (const Qcnf& phi : oracle::random_false(5, 40, 6)) {
    auto pi = prove_qures_saturate(phi);
    ASSERT_TRUE(pi);
    ASSERT_TRUE(check_qures(phi, *pi));
    QUResProof n = normalize(phi, *pi);
    EXPECT_TRUE(check_qures(phi, n)) << check_qures(phi, n).to_string();
    EXPECT_LE(n.size(), pi->size());
    EXPECT_EQ(write_qures(normalize(phi, n)), write_qures(n));
    for (const auto& s : n.steps)
      if (s.rule == QRule::reduce) {
        const Clause& a = n.steps[n.index_of(s.premises[0])].clause;
        EXPECT_EQ(s.clause, max_reduce(phi, a));
      }
    // at most one reduction on the leftmost block when it is universal
    if (phi.blocks()[0].quantifier == Quantifier::forall) {
      int left = 0;
      for (const auto& s : n.steps)
        if (s.rule == QRule::reduce) {
          Clause removed = clause_without(n.steps[n.index_of(s.premises[0])].clause, s.clause);
          if (std::any_of(removed.begin(), removed.end(), [&](Literal l) { return phi.block_of(l.var()) == 0; })) ++left;
        }
      EXPECT_LE(left, 1);
    }
  }
}

TEST(Saturate, EqualitySizes) {
  for (std::size_t n = 1; n <= 3; ++n) {
    Qcnf eq = gen_equality(n);
    auto pi = prove_qures_saturate(eq);
    ASSERT_TRUE(pi);
    EXPECT_TRUE(check_qures(eq, *pi));
    EXPECT_GE(pi->size(), std::size_t{1} << n);
  }
}

TEST(Saturate, TrueFormulaHasNoRefutation) {
  Qcnf t({{Quantifier::forall, {1}}, {Quantifier::exists, {2}}}, {C({1, 2}), C({-1, 2})});
  EXPECT_FALSE(prove_qures_saturate(t));
  EXPECT_THROW(prove_qures_saturate(gen_equality(5)), CapError);
}

TEST(Saturate, SoundOnRandomInstances) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 120; ++trial) {
    Qcnf phi = oracle::random_qcnf(rng, 2 + trial % 6, 3 + trial % 7, 1 + trial % 3, trial & 1);
    auto pi = prove_qures_saturate(phi);
    EXPECT_EQ(static_cast<bool>(pi), !oracle::truth(phi)) << trial;
    if (pi) EXPECT_TRUE(check_qures(phi, *pi));
  }
}

TEST(Saturate, GoldenEqualityOne) {
  auto pi = prove_qures_saturate(gen_equality(1));
  ASSERT_TRUE(pi);
  EXPECT_TRUE(check_qures(gen_equality(1), *pi));
  EXPECT_EQ(write_qures(*pi),
            "1 1 2 -3 0 0\n"
            "2 -1 -2 -3 0 0\n"
            "3 3 0 0\n"
            "4 -1 -2 0 3 2 0\n"
            "5 -1 0 4 0\n"
            "6 1 2 0 3 1 0\n"
            "7 1 0 6 0\n"
            "8 0 5 7 0\n");
}

TEST(TwoSat, Examples) {
  std::vector<Clause> unsat{C({1, 2}), C({1, -2}), C({-1, 2}), C({-1, -2})};
  TwoSatResult r = solve_2sat(unsat);
  EXPECT_FALSE(r.sat);
  EXPECT_EQ(r.conflict, 1u);
  QUResProof pi = refute_2sat(unsat);
  EXPECT_EQ(pi.size(), 7u);
  EXPECT_TRUE(check_qures(cnf_as_qcnf(unsat, 2), pi));
  // also accepted with the variables existential inside a larger prefix
  Qcnf wider({{Quantifier::forall, {3}}, {Quantifier::exists, {1, 2}}}, unsat);
  EXPECT_TRUE(check_qures(wider, pi));

  std::vector<Clause> one{C({1, 2})};
  TwoSatResult s = solve_2sat(one);
  EXPECT_TRUE(s.sat);
  EXPECT_TRUE(oracle::cnf_value(one, s.model.bindings()));
  EXPECT_THROW(solve_2sat(std::vector<Clause>{C({1, 2, 3})}), Error);
  EXPECT_THROW(refute_2sat(one), DomainError);
}

TEST(TwoSat, AgreesWithBruteForce) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    std::size_t n = 2 + seed % 6;
    std::size_t universe = 4 * n * (n - 1) / 2;
    auto cnf = gen_random_2sat(n, std::min<std::size_t>(universe, 1 + seed % 12), seed);
    if (seed % 5 == 0) cnf.push_back(Clause{Literal(1, seed % 2 == 0)});
    std::vector<VarId> vars;
    for (VarId v = 1; v <= n; ++v) vars.push_back(v);
    bool sat = false;
    for (const auto& a : oracle::all_assignments(vars)) sat = sat || oracle::cnf_value(cnf, a);
    TwoSatResult r = solve_2sat(cnf);
    ASSERT_EQ(r.sat, sat) << seed;
    if (sat) {
      auto m = r.model.bindings();
      for (VarId v : vars) m.emplace(v, false);
      EXPECT_TRUE(oracle::cnf_value(cnf, m));
    } else {
      QUResProof pi = refute_2sat(cnf);
      EXPECT_TRUE(check_qures(cnf_as_qcnf(cnf, static_cast<VarId>(n)), pi)) << seed;
      EXPECT_LE(pi.size(), 3 * cnf.size() + 1);
    }
  }
}

TEST(Sigma2, RefutesFalseComponents) {
  int refuted = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto rq = gen_random_q(6, 1, 9, seed);
    for (const auto& comp : rq.meta.components) {
      Qcnf psi = component_qcnf(comp);
      if (!psi_false(psi)) {
        EXPECT_THROW(refute_sigma2(psi), DomainError);
        continue;
      }
      QUResProof pi = refute_sigma2(psi);
      EXPECT_TRUE(check_qures(psi, pi)) << check_qures(psi, pi).to_string();
      EXPECT_LE(pi.size(), 4 * psi.matrix().size());
      ++refuted;
    }
  }
  EXPECT_GT(refuted, 10);
}

TEST(Restriction, ExistentialClosure) {
  for (const Qcnf& phi : oracle::random_false(9, 30, 6)) {
    QUResProof pi = *prove_qures_saturate(phi);
    std::vector<VarId> ex = phi.exist_vars();
    ex.resize(std::min<std::size_t>(ex.size(), 2));
    for (const auto& alpha : enumerate_assignments(ex)) {
      Qcnf sub = restrict_qcnf(phi, alpha);
      QUResProof r = restrict_proof(phi, pi, alpha);
      EXPECT_TRUE(check_qures(sub, r)) << check_qures(sub, r).to_string();
      EXPECT_LE(r.size(), pi.size());
    }
  }
}

TEST(Restriction, UniversalClosureOnEquality) {
  for (std::size_t n = 1; n <= 3; ++n) {
    Qcnf eq = gen_equality(n);
    QUResProof pi = normalize(eq, *prove_qures_saturate(eq));
    std::vector<VarId> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<VarId>(i + 1);
    std::set<Clause> finals;
    for (const auto& alpha : enumerate_assignments(xs)) {
      Qcnf sub = restrict_qcnf(eq, alpha);
      ASSERT_EQ(sub.blocks()[0].quantifier, Quantifier::forall);
      QUResProof pa = normalize(sub, restrict_proof(eq, pi, alpha));
      ASSERT_TRUE(check_qures(sub, pa));
      Clause c = final_reduction_literals(sub, pa);
      // the final reduction falsifies exactly the copying response
      Assignment copy;
      for (std::size_t i = 0; i < n; ++i) copy.bind(static_cast<VarId>(n + 1 + i), *alpha.value(static_cast<VarId>(i + 1)));
      std::vector<Literal> neg;
      for (Literal l : copy.literals()) neg.push_back(l.negated());
      EXPECT_EQ(c, Clause(neg));
      finals.insert(c);
      // some clause of π contains {¬l : l ∈ β}
      EXPECT_TRUE(std::any_of(pi.steps.begin(), pi.steps.end(), [&](const QUResStep& s) { return c.subset_of(s.clause); }));
      Assignment beta;
      for (Literal l : c) beta.bind(l.var(), !l.positive());
      Qcnf subsub = restrict_qcnf(sub, beta);
      QUResProof pb = restrict_proof(sub, pa, beta);
      EXPECT_TRUE(check_qures(subsub, pb)) << check_qures(subsub, pb).to_string();
    }
    EXPECT_EQ(finals.size(), std::size_t{1} << n);
  }
}

TEST(Soundness, AcceptedRefutationsOnlyForFalseFormulas) {
  for (const Qcnf& phi : oracle::random_false(13, 20, 5)) {
    QUResProof pi = *prove_qures_saturate(phi);
    EXPECT_FALSE(truth(phi));
    for (const auto& s : pi.steps) EXPECT_FALSE(s.clause.is_tautology());
  }
}
