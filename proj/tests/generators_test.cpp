#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qbfscc/generators.hpp"
#include "qbfscc/qdimacs.hpp"
#include "qbfscc/semantics.hpp"

using namespace qbfscc;

namespace {

Clause C(std::initializer_list<long long> lits) { return Clause::from_dimacs(lits); }

}  // namespace

TEST(Equality, OneMatchesDefinition) {
  Qcnf eq = gen_equality(1);
  EXPECT_EQ(eq.matrix(), (std::vector<Clause>{C({1, 2, -3}), C({-1, -2, -3}), C({3})}));
  ASSERT_EQ(eq.blocks().size(), 3u);
  EXPECT_EQ(eq.blocks()[1].quantifier, Quantifier::forall);
}

TEST(Equality, Counting) {
  for (std::size_t n = 1; n <= 5; ++n) {
    Qcnf eq = gen_equality(n);
    EXPECT_EQ(eq.matrix().size(), 2 * n + 1);
    EXPECT_EQ(eq.vars().size(), 3 * n);
    auto width_n = std::count_if(eq.matrix().begin(), eq.matrix().end(), [n](const Clause& c) { return c.size() == n; });
    EXPECT_EQ(width_n, n == 3 ? 2 * 3 + 1 : 1);  // at n=3 the width-3 clauses coincide with the long one
  }
  EXPECT_THROW(gen_equality(0), Error);
}

TEST(Equality, FalseByOracle) {
  for (std::size_t n = 1; n <= 3; ++n) {
    EXPECT_FALSE(truth(gen_equality(n)));
    EXPECT_FALSE(oracle::truth(gen_equality(n)));
  }
}

TEST(Kbkf, OneMatchesDefinition) {
  // y0=1, y1=2, y1'=3, u1=4, y2=5
  Qcnf k = gen_kbkf(1);
  EXPECT_EQ(k.matrix(), (std::vector<Clause>{C({-1}), C({1, -2, -3}), C({2, -4, -5}), C({3, 4, -5}), C({-4, 5}), C({4, 5})}));
  ASSERT_EQ(k.blocks().size(), 3u);
  EXPECT_EQ(k.blocks()[0].vars, (std::vector<VarId>{1, 2, 3}));
  EXPECT_EQ(k.blocks()[1].vars, (std::vector<VarId>{4}));
}

TEST(Kbkf, WeakOneMatchesDefinition) {
  // y0=1, y1=2, y1'=3, u1=4, v1=5, y2=6
  Qcnf k = gen_kbkf_weak(1);
  EXPECT_EQ(k.matrix(), (std::vector<Clause>{C({-1}), C({1, -2, -3}), C({2, -4, -5, -6}), C({3, 4, 5, -6}), C({-4, -5, 6}),
                                             C({4, 5, 6})}));
  ASSERT_EQ(k.blocks().size(), 3u);
  EXPECT_EQ(k.blocks()[0].vars, (std::vector<VarId>{1, 2, 3}));
  EXPECT_EQ(k.blocks()[1].vars, (std::vector<VarId>{4, 5}));
  EXPECT_EQ(k.blocks()[2].vars, (std::vector<VarId>{6}));
}

TEST(Kbkf, DoubledAndWeakShareMatrix) {
  for (std::size_t n = 1; n <= 4; ++n) {
    Qcnf d = gen_kbkf_doubled(n), w = gen_kbkf_weak(n);
    EXPECT_EQ(d.matrix(), w.matrix());
    EXPECT_EQ(d.vars(), w.vars());
    EXPECT_EQ(d.exist_vars(), w.exist_vars());
    // the v's sit with u_n in the weak variant
    const Block& last_u = w.blocks()[w.blocks().size() - 2];
    EXPECT_EQ(last_u.vars.size(), n + 1);
    EXPECT_EQ(gen_kbkf(n).matrix().size(), 4 * n + 2);
  }
}

TEST(Kbkf, AllVariantsFalse) {
  for (std::size_t n = 1; n <= 3; ++n) {
    EXPECT_FALSE(truth(gen_kbkf(n)));
    EXPECT_FALSE(truth(gen_kbkf_doubled(n)));
    EXPECT_FALSE(truth(gen_kbkf_weak(n)));
  }
  EXPECT_FALSE(oracle::truth(gen_kbkf_weak(2)));
}

TEST(RandomQ, Deterministic) {
  auto a = gen_random_q(4, 1, 6, 7), b = gen_random_q(4, 1, 6, 7);
  EXPECT_EQ(write_qdimacs(a.formula), write_qdimacs(b.formula));
  EXPECT_NE(write_qdimacs(a.formula), write_qdimacs(gen_random_q(4, 1, 6, 8).formula));
}

TEST(RandomQ, Structure) {
  auto rq = gen_random_q(4, 1, 6, 7);
  EXPECT_EQ(rq.formula.matrix().size(), 4u * 6 + 1);
  for (const auto& comp : rq.meta.components) {
    std::set<Clause> distinct(comp.clauses.begin(), comp.clauses.end());
    EXPECT_EQ(distinct.size(), comp.clauses.size());
    for (const auto& c : comp.clauses) {
      int xs = 0, ys = 0;
      std::set<VarId> yvars;
      for (Literal l : c) {
        if (std::count(comp.x.begin(), comp.x.end(), l.var())) ++xs;
        if (std::count(comp.y.begin(), comp.y.end(), l.var())) {
          ++ys;
          yvars.insert(l.var());
        }
      }
      EXPECT_EQ(xs, 1);
      EXPECT_EQ(ys, 2);
      EXPECT_EQ(yvars.size(), 2u);
    }
  }
  // numbering: Y blocks, then X blocks, then t
  EXPECT_EQ(rq.meta.components[0].y.front(), 1u);
  EXPECT_EQ(rq.meta.components[0].x.front(), 17u);
  EXPECT_EQ(rq.meta.components[3].t, 24u);
}

TEST(RandomQ, UniverseLimits) {
  EXPECT_EQ(clause_universe_12(3, 1), 24u);
  EXPECT_NO_THROW(gen_random_q(3, 1, 13, 1));
  EXPECT_NO_THROW(gen_random_q(3, 1, 24, 1));
  EXPECT_THROW(gen_random_q(3, 1, 25, 1), Error);
  EXPECT_THROW(gen_random_q(1, 1, 1, 1), Error);
}

TEST(RandomQ, FullUniverseIsEveryClause) {
  auto rq = gen_random_q(3, 1, 24, 3);
  std::set<Clause> all(rq.meta.components[0].clauses.begin(), rq.meta.components[0].clauses.end());
  EXPECT_EQ(all.size(), 24u);
}

TEST(RandomQ, ComponentDecomposition) {
  // Q ≡ ⋁ Ψ_i: Q is false iff every component is false
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto rq = gen_random_q(2, 1, 3, seed);
    bool all_false = true;
    for (const auto& comp : rq.meta.components) all_false = all_false && !oracle::truth(component_qcnf(comp));
    EXPECT_EQ(truth(rq.formula), !all_false) << "seed " << seed;
  }
}

TEST(Random12, StructureAndDeterminism) {
  Qcnf a = gen_random_12qcnf(2, 4, 6, 1), b = gen_random_12qcnf(2, 4, 6, 1);
  EXPECT_EQ(write_qdimacs(a), write_qdimacs(b));
  EXPECT_EQ(a.matrix().size(), 6u);
  for (const auto& c : a.matrix()) {
    auto xs = std::count_if(c.begin(), c.end(), [&](Literal l) { return a.is_universal(l.var()); });
    EXPECT_EQ(xs, 1);
  }
  Qcnf empty = gen_random_12qcnf(2, 4, 0, 1);
  EXPECT_TRUE(empty.matrix().empty());
  EXPECT_TRUE(truth(empty));
}

TEST(Random2Sat, StructureAndDeterminism) {
  auto a = gen_random_2sat(5, 3, 2), b = gen_random_2sat(5, 3, 2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 3u);
  for (const auto& c : a) {
    EXPECT_EQ(c.size(), 2u);
    EXPECT_NE(c.literals()[0].var(), c.literals()[1].var());
  }
  EXPECT_THROW(gen_random_2sat(3, 13, 1), Error);
}

TEST(SplitMix, ReferenceValues) {
  // first outputs of SplitMix64 seeded with 0
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(g.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(g.next(), 0x06C45D188009454FULL);
}
