#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qbfscc/cp.hpp"
#include "qbfscc/generators.hpp"
#include "qbfscc/qures.hpp"

using namespace qbfscc;

namespace {

Clause C(std::initializer_list<long long> lits) { return Clause::from_dimacs(lits); }
LinearInequality L(const std::string& s) { return LinearInequality::parse(s); }

CPStep cp_ax(std::size_t id, std::size_t k) {
  CPStep s;
  s.id = id;
  s.rule = CPRule::axiom;
  s.index = k;
  return s;
}

CPStep cp_lin(std::size_t id, std::size_t a, long long ca, std::size_t b, long long cb) {
  CPStep s;
  s.id = id;
  s.rule = CPRule::lin;
  s.premises = {a, b};
  s.c1 = ca;
  s.c2 = cb;
  return s;
}

CPStep cp_div(std::size_t id, std::size_t a, long long c) {
  CPStep s;
  s.id = id;
  s.rule = CPRule::div;
  s.premises = {a};
  s.c1 = c;
  return s;
}

CPStep cp_red(std::size_t id, std::size_t a, Assignment beta) {
  CPStep s;
  s.id = id;
  s.rule = CPRule::reduce;
  s.premises = {a};
  s.beta = std::move(beta);
  return s;
}

// fills in the lines the checker expects
CPProof complete(const Qcnf& phi, std::vector<CPStep> steps) {
  CPProof pi;
  for (auto& s : steps) {
    s.line = cp_expected_line(phi, pi, s);
    pi.steps.push_back(std::move(s));
  }
  return pi;
}

// independent evaluation: Σ over true variables of the coefficient
bool naive_holds(const LinearInequality& l, const std::map<VarId, bool>& tau) {
  BigInt sum = 0;
  for (const auto& [v, c] : l.coeffs())
    if (tau.at(v)) sum += c;
  return sum >= l.constant();
}

}  // namespace

TEST(CpEncoding, Examples) {
  EXPECT_EQ(encode_clause_cp(C({1, -2})), L("1*v1 -1*v2 >= 0"));
  EXPECT_EQ(encode_clause_cp(C({3})), L("1*v3 >= 1"));
  EXPECT_EQ(encode_clause_cp(C({1, 2, -3})), L("1*v1 1*v2 -1*v3 >= 0"));
  EXPECT_EQ(encode_clause_cp(Clause{}), L("0 >= 1"));
  EXPECT_THROW(encode_clause_cp(C({1, -1})), DomainError);
}

TEST(CpEncoding, AgreesWithClauseOnAllAssignments) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Literal> lits;
    std::set<VarId> used;
    std::size_t w = rng() % 5;
    while (lits.size() < w) {
      VarId v = 1 + rng() % 6;
      if (used.insert(v).second) lits.emplace_back(v, rng() & 1);
    }
    Clause c(lits);
    LinearInequality e = encode_clause_cp(c);
    std::vector<VarId> vars(used.begin(), used.end());
    for (const auto& tau : oracle::all_assignments(vars))
      EXPECT_EQ(naive_holds(e, tau), oracle::clause_value(c, tau)) << c.to_string();
  }
}

TEST(CpInequality, TextAndPredicates) {
  EXPECT_EQ(L("2*v1 -1*v3 >= 0").to_string(), "2*v1 -1*v3 >= 0");
  EXPECT_EQ(L("0 >= 1").to_string(), "0 >= 1");
  EXPECT_TRUE(L("0 >= 1").is_contradiction());
  EXPECT_FALSE(L("0 >= 0").is_contradiction());
  EXPECT_TRUE(L("-1*v1 >= -1").is_tautology());
  EXPECT_FALSE(L("1*v1 >= 1").is_tautology());
  EXPECT_EQ(L("0*v2 1*v1 >= 1"), L("1*v1 >= 1"));
  EXPECT_THROW(L("2*v1"), ParseError);
  EXPECT_THROW(L("2v1 >= 0"), ParseError);
  EXPECT_THROW(L("1*v1 1*v1 >= 0"), ParseError);
  EXPECT_THROW(L("1*v0 >= 0"), ParseError);
  BigInt huge("123456789012345678901234567890");
  LinearInequality big({{1, huge}}, huge);
  EXPECT_EQ(LinearInequality::parse(big.to_string()), big);
}

TEST(CpRules, LinAndDivide) {
  // x ∨ y, x ∨ ¬y  ⟹  2x ≥ 1  ⟹  x ≥ 1
  Qcnf phi({{Quantifier::exists, {1, 2}}}, {C({1, 2}), C({1, -2})});
  CPProof pi = complete(phi, {cp_ax(1, 1), cp_ax(2, 2), cp_lin(3, 1, 1, 2, 1), cp_div(4, 3, 2)});
  EXPECT_EQ(pi.steps[2].line, L("2*v1 >= 1"));
  EXPECT_EQ(pi.steps[3].line, L("1*v1 >= 1"));
  EXPECT_TRUE(check_cp(phi, pi, false));
  EXPECT_FALSE(check_cp(phi, pi));
}

TEST(CpRules, CeilingOfNegativeConstant) {
  EXPECT_EQ(ceil_div(-3, 2), -1);
  EXPECT_EQ(ceil_div(3, 2), 2);
  EXPECT_EQ(ceil_div(4, 2), 2);
  EXPECT_EQ(ceil_div(-4, 2), -2);
}

TEST(CpRules, ReduceOnEquality) {
  Qcnf eq = gen_equality(1);  // x=1, u=2, t=3
  // x + u - t ≥ 0 plus t ≥ 1 gives x + u ≥ 1; reduce u ↦ 0 gives x ≥ 1
  CPProof pi = complete(eq, {cp_ax(1, 1), cp_ax(2, 3), cp_lin(3, 1, 1, 2, 1), cp_red(4, 3, {{2, false}})});
  EXPECT_EQ(pi.steps[2].line, L("1*v1 1*v2 >= 1"));
  EXPECT_EQ(pi.steps[3].line, L("1*v1 >= 1"));
  EXPECT_TRUE(check_cp(eq, pi, false));
}

TEST(CpRules, Rejections) {
  Qcnf eq = gen_equality(1);
  auto expect_reject = [&](CPProof pi) { EXPECT_FALSE(check_cp(eq, pi, false)); };
  {
    CPProof pi = complete(eq, {cp_ax(1, 1), cp_ax(2, 3), cp_lin(3, 1, 1, 2, 1)});
    pi.steps.push_back(cp_div(4, 3, 2));  // 2 does not divide 1
    pi.steps.back().line = L("0 >= 0");
    expect_reject(pi);
  }
  {
    CPProof pi = complete(eq, {cp_ax(1, 1), cp_ax(2, 3)});
    pi.steps.push_back(cp_lin(3, 1, -1, 2, 1));
    pi.steps.back().line = combine(pi.steps[0].line, -1, pi.steps[1].line, 1);
    expect_reject(pi);
  }
  {
    // u is left of t: not in the rightmost block
    CPProof pi = complete(eq, {cp_ax(1, 1)});
    pi.steps.push_back(cp_red(2, 1, {{2, false}}));
    pi.steps.back().line = pi.steps[0].line.restrict({{2, false}});
    expect_reject(pi);
  }
  {
    // reducing an existential
    CPProof pi = complete(eq, {cp_ax(1, 1), cp_ax(2, 3), cp_lin(3, 1, 1, 2, 1)});
    pi.steps.push_back(cp_red(4, 3, {{1, false}}));
    pi.steps.back().line = pi.steps[2].line.restrict({{1, false}});
    expect_reject(pi);
  }
  {
    CPProof pi = complete(eq, {cp_ax(1, 1)});
    pi.steps[0].line = L("1*v1 >= 0");  // wrong line
    expect_reject(pi);
  }
  {
    CPProof pi = complete(eq, {cp_ax(1, 1)});
    pi.steps.push_back(cp_lin(2, 1, 1, 7, 1));  // dangling
    expect_reject(pi);
  }
  // accepted derivation without a contradiction is not a refutation
  EXPECT_FALSE(check_cp(eq, complete(eq, {cp_ax(1, 1)})));
}

TEST(CpSimulation, EqualityRefutationsAccepted) {
  for (std::size_t n = 1; n <= 3; ++n) {
    Qcnf eq = gen_equality(n);
    auto q = prove_qures_saturate(eq);
    ASSERT_TRUE(q);
    CPProof pi = simulate_qures_in_cp(eq, *q);
    auto r = check_cp(eq, pi);
    EXPECT_TRUE(r) << r.to_string();
  }
}

TEST(CpSimulation, RandomRefutationsAccepted) {
  for (const Qcnf& phi : oracle::random_false(17, 30, 6)) {
    auto q = prove_qures_saturate(phi);
    ASSERT_TRUE(q);
    CPProof pi = simulate_qures_in_cp(phi, *q);
    auto r = check_cp(phi, pi);
    EXPECT_TRUE(r) << r.to_string();
  }
}

TEST(CpSoundness, EveryLineIsImpliedByItsPremises) {
  // Boolean semantics: any total assignment satisfying a step's premises
  // satisfies the step (reductions are checked on the reduced assignment).
  for (const Qcnf& phi : oracle::random_false(23, 15, 5)) {
    auto q = prove_qures_saturate(phi);
    ASSERT_TRUE(q);
    CPProof pi = simulate_qures_in_cp(phi, *q);
    std::vector<VarId> all;
    for (VarId v = 1; v <= phi.num_vars(); ++v) all.push_back(v);
    for (const auto& s : pi.steps) {
      for (const auto& tau : oracle::all_assignments(all)) {
        auto premises_hold = [&](const std::map<VarId, bool>& t) {
          for (std::size_t p : s.premises)
            if (!naive_holds(pi.step(p).line, t)) return false;
          if (s.rule == CPRule::axiom) return oracle::clause_value(phi.matrix()[s.index - 1], t);
          return true;
        };
        if (s.rule == CPRule::reduce) {
          // line holds whenever the antecedent holds with β substituted
          auto t = tau;
          for (auto [v, b] : s.beta.bindings()) t[v] = b;
          if (premises_hold(t)) EXPECT_TRUE(naive_holds(s.line, tau));
        } else if (premises_hold(tau)) {
          EXPECT_TRUE(naive_holds(s.line, tau)) << "step " << s.id;
        }
      }
    }
  }
}

TEST(CpResponse, SignRule) {
  // x=1 ∃, u1=2 u2=3 ∀
  Qcnf phi({{Quantifier::exists, {1}}, {Quantifier::forall, {2, 3}}}, {C({1, 2, 3})});
  Assignment beta = cp_response(phi, L("2*v1 3*v2 -1*v3 >= 2"));
  EXPECT_EQ(beta, (Assignment{{2, false}, {3, true}}));
  EXPECT_THROW(cp_response(phi, L("2*v1 >= 2")), DomainError);
}

TEST(CpResponse, FalsifiesRestrictedLine) {
  // x - u ≥ 0 under x ↦ 0 becomes -u ≥ 0; the sign rule picks u ↦ 1
  Qcnf phi({{Quantifier::exists, {1}}, {Quantifier::forall, {2}}}, {C({1, -2})});
  LinearInequality l = L("1*v1 -1*v2 >= 0");
  Assignment alpha{{1, false}};
  LinearInequality r = l.restrict(alpha);
  Assignment beta = cp_response(phi, r);
  EXPECT_EQ(beta, (Assignment{{2, true}}));
  EXPECT_FALSE(cp_line_eval(l, {{1, false}, {2, true}}));
}

TEST(CpResponse, SignRuleMinimisesLeftSide) {
  std::mt19937_64 rng(3);
  Qcnf phi({{Quantifier::exists, {1, 2}}, {Quantifier::forall, {3, 4, 5}}}, {C({1, 3})});
  for (int trial = 0; trial < 100; ++trial) {
    std::map<VarId, BigInt> coeffs;
    for (VarId v = 1; v <= 5; ++v) coeffs[v] = static_cast<long long>(rng() % 9) - 4;
    coeffs[3] = coeffs[3] == 0 ? 1 : coeffs[3];
    LinearInequality l(coeffs, static_cast<long long>(rng() % 7) - 3);
    for (const auto& alpha : oracle::all_assignments({1, 2})) {
      LinearInequality r = l.restrict(oracle::to_assignment(alpha));
      if (!rightmost_block(phi, r.vars())) continue;
      Assignment beta = cp_response(phi, r);
      // if any universal response falsifies r, the sign rule does
      bool some = false;
      for (const auto& u : oracle::all_assignments(r.vars()))
        if (!naive_holds(r, u)) some = true;
      auto t = alpha;
      for (auto [v, b] : beta.bindings()) t[v] = b;
      for (VarId v : r.vars())
        if (!t.count(v)) t[v] = false;
      if (some) EXPECT_FALSE(naive_holds(l, t));
    }
  }
}

TEST(CpLineEval, Examples) {
  LinearInequality l = L("2*v1 3*v2 -1*v3 >= 2");
  EXPECT_TRUE(cp_line_eval(l, {{1, true}, {2, false}, {3, false}}));
  EXPECT_FALSE(cp_line_eval(l, {{1, false}, {2, false}, {3, true}}));
  EXPECT_TRUE(cp_line_eval(l, {{1, false}, {2, true}, {3, true}}));
  EXPECT_THROW(cp_line_eval(l, {{1, true}}), Error);
}

TEST(CpTrace, RoundTrip) {
  Qcnf eq = gen_equality(2);
  auto q = prove_qures_saturate(eq);
  ASSERT_TRUE(q);
  CPProof pi = simulate_qures_in_cp(eq, *q);
  std::string text = write_cp(pi);
  CPProof back = parse_cp(text);
  EXPECT_EQ(write_cp(back), text);
  EXPECT_TRUE(check_cp(eq, back));
  EXPECT_EQ(write_cp(parse_cp("c comment\n1 ax 3 : 1*v5 1*v6 >= 1\n")), "1 ax 3 : 1*v5 1*v6 >= 1\n");
}

TEST(CpTrace, ParseErrors) {
  auto line_of = [](const std::string& text) {
    try {
      parse_cp(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("1 ax 1 : 1*v1 >= 0\n2 bogus : 0 >= 1\n"), 2u);
  EXPECT_EQ(line_of("1 ax 1 1*v1 >= 0\n"), 1u);
  EXPECT_EQ(line_of("1 lin 1 2 : 0 >= 1\n"), 1u);
  EXPECT_EQ(line_of("2 ax 1 : 0 >= 0\n1 ax 1 : 0 >= 0\n"), 2u);
  EXPECT_EQ(line_of("1 red 1 2 2 : 0 >= 0\n"), 1u);
}
