#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qbfscc/cp.hpp"
#include "qbfscc/generators.hpp"
#include "qbfscc/line.hpp"
#include "qbfscc/pcr.hpp"
#include "qbfscc/qures.hpp"
#include "qbfscc/semantic_proof.hpp"

using namespace qbfscc;

namespace {

Clause C(std::initializer_list<long long> lits) { return Clause::from_dimacs(lits); }

Clause random_clause(std::mt19937_64& rng, VarId nvars, std::size_t maxw) {
  std::vector<Literal> lits;
  std::set<VarId> used;
  std::size_t w = rng() % (maxw + 1);
  while (lits.size() < w) {
    VarId v = 1 + rng() % nvars;
    if (used.insert(v).second) lits.emplace_back(v, rng() & 1);
  }
  return Clause(lits);
}

Formula random_formula(std::mt19937_64& rng, VarId nvars, int depth) {
  if (depth == 0 || rng() % 4 == 0) return Formula::lit(Literal(1 + rng() % nvars, rng() & 1));
  switch (rng() % 3) {
    case 0: return Formula::negation(random_formula(rng, nvars, depth - 1));
    case 1: return Formula::conj({random_formula(rng, nvars, depth - 1), random_formula(rng, nvars, depth - 1)});
    default: return Formula::disj({random_formula(rng, nvars, depth - 1), random_formula(rng, nvars, depth - 1)});
  }
}

std::vector<Line> sample_lines(std::mt19937_64& rng, VarId nvars) {
  Clause c = random_clause(rng, nvars, 4);
  std::vector<Line> out{c, random_formula(rng, nvars, 3)};
  if (!c.is_tautology()) {
    out.push_back(encode_clause_cp(c));
    out.push_back(encode_clause_pcr(c, Field::prime(3)));
  }
  std::map<VarId, BigInt> coeffs;
  for (VarId v = 1; v <= nvars; ++v) coeffs[v] = static_cast<long long>(rng() % 7) - 3;
  out.push_back(LinearInequality(coeffs, static_cast<long long>(rng() % 5) - 2));
  Polynomial p;
  for (int t = 0; t < 3; ++t) {
    Monomial m;
    for (int k = 0; k < 2; ++k) m = monomial_times(m, {static_cast<VarId>(1 + rng() % nvars), static_cast<bool>(rng() & 1)});
    p.add_term(m, static_cast<long long>(rng() % 5) - 2);
  }
  out.push_back(p);
  return out;
}

QUResProof saturate(const Qcnf& phi) {
  auto q = prove_qures_saturate(phi);
  if (!q) throw Error("saturation failed");
  return *q;
}

}  // namespace

TEST(Line, EncodingsShareTheClauseFunction) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    Clause c = random_clause(rng, 5, 4);
    if (c.is_tautology()) continue;
    Line l = c;
    EXPECT_TRUE(lines_equivalent(l, Formula::from_clause(c)));
    EXPECT_TRUE(lines_equivalent(l, encode_clause_cp(c)));
    EXPECT_TRUE(lines_equivalent(l, encode_clause_pcr(c)));
    EXPECT_TRUE(lines_equivalent(l, encode_clause_pcr(c, Field::prime(2))));
  }
}

TEST(Line, RestrictiveClosure) {
  // B_{L[τ]} = B_L restricted by τ, for every adapter
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    for (const Line& l : sample_lines(rng, 4)) {
      Assignment tau;
      for (VarId v = 1; v <= 4; ++v)
        if (rng() % 3 == 0) tau.bind(v, rng() & 1);
      Line r = line_restrict(l, tau);
      for (VarId v : line_vars(r)) EXPECT_FALSE(tau.contains(v));
      for (const auto& rest : oracle::all_assignments({1, 2, 3, 4})) {
        Assignment full = oracle::to_assignment(rest);
        for (const auto& [v, b] : tau.bindings()) full.set(v, b);
        EXPECT_EQ(line_holds(r, full), line_holds(l, full)) << line_to_string(l);
      }
    }
  }
}

TEST(Line, RestrictAndPredicates) {
  Line c = C({1, 2, -3});
  EXPECT_EQ(std::get<Formula>(line_restrict(c, {{1, true}})), Formula::constant(true));
  EXPECT_EQ(std::get<Clause>(line_restrict(c, {{1, false}})), C({2, -3}));
  EXPECT_TRUE(line_is_tautology(Line(C({1, -1}))));
  EXPECT_TRUE(line_is_falsum(Line(Clause{})));
  EXPECT_TRUE(line_is_falsum(Line(LinearInequality({}, 1))));
  EXPECT_TRUE(line_is_falsum(Line(Polynomial::constant({}, 1))));
  EXPECT_FALSE(line_is_falsum(Line(Formula::var(1))));
  Qcnf eq = gen_equality(1);
  EXPECT_TRUE(line_reducible(eq, Line(C({1, 2}))));
  EXPECT_FALSE(line_reducible(eq, c));
  EXPECT_FALSE(line_reducible(eq, Line(Clause{})));
  EXPECT_EQ(line_rightmost_block(eq, c), 2u);
}

TEST(Line, TruthTableConvention) {
  // bit i ↔ AssignmentSpace::at(i); first sorted variable is the most significant
  AssignmentSpace space({1, 2});
  auto t = truth_table(Line(Formula::var(1)), space);
  EXPECT_FALSE(t.test(0));
  EXPECT_FALSE(t.test(1));
  EXPECT_TRUE(t.test(2));
  EXPECT_TRUE(t.test(3));
  EXPECT_THROW(truth_table(Line(Formula::var(1)), AssignmentSpace({1, 2, 3}), 2), CapError);
}

TEST(Line, TextRoundTrip) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial)
    for (const Line& l : sample_lines(rng, 5)) {
      Line back = parse_line(line_kind(l), line_to_string(l));
      EXPECT_EQ(back.index(), l.index());
      EXPECT_TRUE(lines_equivalent(back, l));
      EXPECT_EQ(line_to_string(parse_line(line_kind(back), line_to_string(back))), line_to_string(back));
    }
  EXPECT_THROW(parse_line("cl", "1 2"), ParseError);
  EXPECT_THROW(parse_line("zz", "1 0"), ParseError);
}

TEST(CheckSemantic, QuresRefutationsRejustified) {
  for (std::size_t n = 1; n <= 3; ++n) {
    Qcnf eq = gen_equality(n);
    SemanticProof pi = semantic_from_qures(eq, saturate(eq));
    auto r = check_semantic(eq, pi);
    EXPECT_TRUE(r) << r.to_string();
  }
  for (const Qcnf& phi : oracle::random_false(41, 25, 6)) {
    SemanticProof pi = semantic_from_qures(phi, saturate(phi));
    auto r = check_semantic(phi, pi);
    EXPECT_TRUE(r) << r.to_string();
  }
}

TEST(CheckSemantic, CpAndPcrRefutationsRejustified) {
  for (std::size_t n = 1; n <= 2; ++n) {
    Qcnf eq = gen_equality(n);
    QUResProof q = saturate(eq);
    auto r1 = check_semantic(eq, semantic_from_cp(simulate_qures_in_cp(eq, q)));
    EXPECT_TRUE(r1) << r1.to_string();
    auto r2 = check_semantic(eq, semantic_from_pcr(simulate_qures_in_pcr(eq, q, Field::prime(5))));
    EXPECT_TRUE(r2) << r2.to_string();
  }
}

TEST(CheckSemantic, Rejections) {
  Qcnf eq = gen_equality(1);  // x=1, u=2, t=3
  SemanticProof bad;
  bad.steps.push_back({1, Line(C({1})), SemRule::consequence, {}, 0, {}});
  bad.steps.push_back({2, Line(C({-1})), SemRule::consequence, {1}, 0, {}});
  auto r = check_semantic(eq, bad);
  EXPECT_FALSE(r);
  EXPECT_EQ(r.step, 1u);  // {} does not entail x either

  SemanticProof entail;
  entail.steps.push_back({1, Line(C({1, 2, -3})), SemRule::axiom, {}, 1, {}});
  entail.steps.push_back({2, Line(C({-1})), SemRule::consequence, {1}, 0, {}});
  r = check_semantic(eq, entail);
  EXPECT_FALSE(r);
  EXPECT_EQ(r.step, 2u);

  SemanticProof red;
  red.steps.push_back({1, Line(C({1, 2, -3})), SemRule::axiom, {}, 1, {}});
  red.steps.push_back({2, Line(C({1, -3})), SemRule::reduction, {1}, 0, Assignment{{2, false}}});
  r = check_semantic(eq, red);
  EXPECT_FALSE(r);
  EXPECT_EQ(r.step, 2u);
  EXPECT_NE(r.message.find("rightmost"), std::string::npos);

  SemanticProof wrong_axiom;
  wrong_axiom.steps.push_back({1, Line(C({1, 2})), SemRule::axiom, {}, 0, {}});
  EXPECT_FALSE(check_semantic(eq, wrong_axiom));

  SemanticProof no_conclusion;
  no_conclusion.steps.push_back({1, Line(Formula::constant(true)), SemRule::consequence, {}, 0, {}});
  r = check_semantic(eq, no_conclusion);
  EXPECT_FALSE(r);
  EXPECT_EQ(r.rule, "conclusion");

  SemanticProof wide;
  wide.steps.push_back({1, Line(C({1, 2, -3})), SemRule::axiom, {}, 1, {}});
  EXPECT_THROW(check_semantic(eq, wide, 2), CapError);
}

TEST(CheckSemantic, FormulaAxiomsAndReductions) {
  // ∃x ∀u: (x ∨ u) ∧ (¬x ∨ ¬u), refuted with one formula line
  Qcnf phi({{Quantifier::exists, {1}}, {Quantifier::forall, {2}}}, {C({1, 2}), C({-1, -2})});
  Formula both = Formula::conj({Formula::from_clause(C({1, 2})), Formula::from_clause(C({-1, -2}))});
  SemanticProof pi;
  pi.steps.push_back({1, Line(C({1, 2})), SemRule::axiom, {}, 0, {}});
  pi.steps.push_back({2, Line(Formula::from_clause(C({-1, -2}))), SemRule::axiom, {}, 2, {}});
  pi.steps.push_back({3, Line(both), SemRule::consequence, {1, 2}, 0, {}});
  pi.steps.push_back({4, Line(Formula::var(1)), SemRule::reduction, {3}, 0, Assignment{{2, false}}});
  pi.steps.push_back({5, Line(Formula::lit(Literal(1, false))), SemRule::reduction, {3}, 0, Assignment{{2, true}}});
  pi.steps.push_back({6, Line(Formula::constant(false)), SemRule::consequence, {4, 5}, 0, {}});
  auto r = check_semantic(phi, pi);
  EXPECT_TRUE(r) << r.to_string();
  std::string text = write_semantic(pi);
  EXPECT_EQ(write_semantic(parse_semantic(text)), text);
  EXPECT_TRUE(check_semantic(phi, parse_semantic(text)));
}

TEST(SemanticTrace, RoundTripAndErrors) {
  Qcnf eq = gen_equality(2);
  SemanticProof pi = semantic_from_pcr(simulate_qures_in_pcr(eq, saturate(eq), Field::prime(7)));
  std::string text = write_semantic(pi);
  EXPECT_EQ(write_semantic(parse_semantic(text)), text);
  auto line_of = [](const std::string& t) {
    try {
      parse_semantic(t);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("1 cl 1 0 ; ax\n2 cl 0 ; bogus\n"), 2u);
  EXPECT_EQ(line_of("1 cl 1 0 ax\n"), 1u);
  EXPECT_EQ(line_of("1 bf (and v1 ; sc\n"), 1u);
  EXPECT_EQ(line_of("c x\n1 cl 0 ; red 1\n"), 2u);
}

TEST(SemanticClosure, ExistentialRestriction) {
  std::mt19937_64 rng(77);
  std::size_t tested = 0;
  for (const Qcnf& phi : oracle::random_false(51, 50, 6)) {
    SemanticProof pi = semantic_from_qures(phi, saturate(phi));
    Assignment alpha;
    for (VarId v : phi.exist_vars())
      if (rng() & 1) alpha.bind(v, rng() & 1);
    Qcnf restricted = restrict_qcnf(phi, alpha);
    SemanticProof r = restrict_semantic_existential(phi, pi, alpha);
    auto verdict = check_semantic(restricted, r);
    EXPECT_TRUE(verdict) << verdict.to_string();
    ++tested;
  }
  EXPECT_EQ(tested, 50u);
}

TEST(SemanticClosure, UniversalRestrictionOfEligibleLine) {
  std::mt19937_64 rng(78);
  std::size_t tested = 0;
  while (tested < 50) {
    Qcnf phi = oracle::random_qcnf(rng, 6, 9, 2 + rng() % 2, true);
    if (phi.blocks()[0].quantifier != Quantifier::forall || oracle::truth(phi)) continue;
    SemanticProof pi = semantic_from_qures(phi, saturate(phi));
    auto first = first_eligible_line(phi, pi);
    ASSERT_TRUE(first);
    const Line& l = pi.steps[*first].line;
    for (const Assignment& beta : enumerate_assignments(phi.blocks()[0].vars)) {
      if (!line_is_falsum(line_restrict(l, beta))) {
        EXPECT_THROW(restrict_semantic_universal(phi, pi, beta), DomainError);
        continue;
      }
      SemanticProof r = restrict_semantic_universal(phi, pi, beta);
      auto verdict = check_semantic(restrict_qcnf(phi, beta), r);
      EXPECT_TRUE(verdict) << verdict.to_string();
    }
    ++tested;
  }
}

TEST(SemanticClosure, UniversalRestrictionOfEquality) {
  // ∀u ∃x ∃t: the copy constraints x = u with t selecting; first block universal
  Qcnf phi({{Quantifier::forall, {1}}, {Quantifier::exists, {2}}}, {C({1, 2}), C({1, -2})});
  SemanticProof pi = semantic_from_qures(phi, saturate(phi));
  auto first = first_eligible_line(phi, pi);
  ASSERT_TRUE(first);
  EXPECT_EQ(line_vars(pi.steps[*first].line), std::vector<VarId>{1});
  SemanticProof r = restrict_semantic_universal(phi, pi, {{1, false}});
  EXPECT_TRUE(check_semantic(restrict_qcnf(phi, {{1, false}}), r));
  EXPECT_THROW(restrict_semantic_universal(phi, pi, {{1, true}}), DomainError);
}
