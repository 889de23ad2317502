#pragma once

// Cutting Planes with universal reduction: integer linear inequalities over
// 0/1 variables, the proof checker, a text format, the sign-rule response,
// and a step-by-step simulation of QU-Res refutations.

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qbfscc/core.hpp"
#include "qbfscc/qures.hpp"

namespace qbfscc {

using BigInt = boost::multiprecision::cpp_int;

/// Σ coeff(v)·v ≥ constant. Zero coefficients are never stored.
class LinearInequality {
 public:
  LinearInequality() = default;
  LinearInequality(std::map<VarId, BigInt> coeffs, BigInt constant) : coeffs_(std::move(coeffs)), constant_(std::move(constant)) {
    std::erase_if(coeffs_, [](const auto& kv) { return kv.second == 0; });
  }

  const std::map<VarId, BigInt>& coeffs() const { return coeffs_; }
  const BigInt& constant() const { return constant_; }
  BigInt coeff(VarId v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? BigInt(0) : it->second;
  }

  std::vector<VarId> vars() const {
    std::vector<VarId> out;
    for (const auto& kv : coeffs_) out.push_back(kv.first);
    return out;
  }

  /// Variable-free with a positive right-hand side: 0 ≥ A, A ≥ 1.
  bool is_contradiction() const { return coeffs_.empty() && constant_ > 0; }

  /// True under every 0/1 assignment: the minimum of the left side reaches A.
  bool is_tautology() const {
    BigInt low = 0;
    for (const auto& kv : coeffs_)
      if (kv.second < 0) low += kv.second;
    return low >= constant_;
  }

  bool holds(const DenseAssignment& tau) const {
    BigInt sum = 0;
    for (const auto& [v, c] : coeffs_) {
      int b = tau.get(v);
      if (b < 0) throw Error("assignment is not total: variable " + std::to_string(v) + " unbound");
      if (b) sum += c;
    }
    return sum >= constant_;
  }

  /// Substitutes the assigned variables.
  LinearInequality restrict(const Assignment& tau) const {
    std::map<VarId, BigInt> out;
    BigInt k = constant_;
    for (const auto& [v, c] : coeffs_) {
      if (auto b = tau.value(v)) {
        if (*b) k -= c;
      } else {
        out.emplace(v, c);
      }
    }
    return LinearInequality(std::move(out), std::move(k));
  }

  friend LinearInequality combine(const LinearInequality& a, const BigInt& ca, const LinearInequality& b, const BigInt& cb) {
    std::map<VarId, BigInt> out;
    for (const auto& [v, c] : a.coeffs_) out[v] += ca * c;
    for (const auto& [v, c] : b.coeffs_) out[v] += cb * c;
    return LinearInequality(std::move(out), ca * a.constant_ + cb * b.constant_);
  }

  std::string to_string() const {
    std::ostringstream out;
    if (coeffs_.empty()) out << "0";
    bool first = true;
    for (const auto& [v, c] : coeffs_) {
      if (!first) out << " ";
      first = false;
      out << c << "*v" << v;
    }
    out << " >= " << constant_;
    return out.str();
  }

  static LinearInequality parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string tok;
    std::map<VarId, BigInt> coeffs;
    bool seen_ge = false;
    std::optional<BigInt> constant;
    while (in >> tok) {
      if (tok == ">=") {
        if (seen_ge) throw ParseError("repeated '>='");
        seen_ge = true;
        continue;
      }
      if (seen_ge) {
        if (constant) throw ParseError("trailing token '" + tok + "'");
        constant = parse_big(tok);
        continue;
      }
      if (tok == "0") continue;
      auto star = tok.find("*v");
      if (star == std::string::npos) throw ParseError("expected a term like 2*v3, got '" + tok + "'");
      BigInt c = parse_big(tok.substr(0, star));
      long long v = 0;
      try {
        std::size_t used = 0;
        v = std::stoll(tok.substr(star + 2), &used);
        if (used != tok.size() - star - 2) throw std::invalid_argument("junk");
      } catch (const std::exception&) {
        throw ParseError("bad variable in term '" + tok + "'");
      }
      if (v <= 0) throw ParseError("bad variable in term '" + tok + "'");
      if (coeffs.count(static_cast<VarId>(v))) throw ParseError("variable v" + std::to_string(v) + " repeated");
      coeffs[static_cast<VarId>(v)] = c;
    }
    if (!constant) throw ParseError("missing '>= A'");
    return LinearInequality(std::move(coeffs), std::move(*constant));
  }

  static BigInt parse_big(const std::string& s) {
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size() || s.find_first_not_of("0123456789", start) != std::string::npos)
      throw ParseError("expected an integer, got '" + s + "'");
    return BigInt(s);
  }

  bool operator==(const LinearInequality&) const = default;

 private:
  std::map<VarId, BigInt> coeffs_;
  BigInt constant_ = 0;
};

/// Σ_{x∈c} x − Σ_{¬x∈c} x ≥ 1 − #negative literals.
inline LinearInequality encode_clause_cp(const Clause& c) {
  if (c.is_tautology()) throw DomainError("tautological clause " + c.to_string() + " has no CP encoding");
  std::map<VarId, BigInt> coeffs;
  long long neg = 0;
  for (Literal l : c) {
    coeffs[l.var()] = l.positive() ? 1 : -1;
    neg += !l.positive();
  }
  return LinearInequality(std::move(coeffs), 1 - neg);
}

enum class CPRule { axiom, bool_lower, bool_upper, lin, div, reduce, trivial };

inline const char* cp_rule_name(CPRule r) {
  switch (r) {
    case CPRule::axiom: return "ax";
    case CPRule::bool_lower: return "bl";
    case CPRule::bool_upper: return "bu";
    case CPRule::lin: return "lin";
    case CPRule::div: return "div";
    case CPRule::reduce: return "red";
    case CPRule::trivial: return "triv";
  }
  return "?";
}

struct CPStep {
  std::size_t id = 0;
  LinearInequality line;
  CPRule rule = CPRule::axiom;
  std::vector<std::size_t> premises;  // lin: i, j; div, red: i
  std::size_t index = 0;              // ax: 1-based matrix clause; bl/bu: variable
  BigInt c1 = 0, c2 = 0;              // lin multipliers; div: c1 is the divisor
  Assignment beta;                    // red
};

struct CPProof {
  std::vector<CPStep> steps;

  std::size_t size() const { return steps.size(); }
  std::size_t index_of(std::size_t id) const {
    auto it = std::lower_bound(steps.begin(), steps.end(), id, [](const CPStep& s, std::size_t v) { return s.id < v; });
    if (it == steps.end() || it->id != id) throw Error("unknown step id " + std::to_string(id));
    return static_cast<std::size_t>(it - steps.begin());
  }
  const CPStep& step(std::size_t id) const { return steps[index_of(id)]; }
};

inline BigInt ceil_div(const BigInt& a, const BigInt& c) {
  BigInt q = a / c;  // truncates toward zero
  if (a % c != 0 && a > 0) ++q;
  return q;
}

/// The line a step must carry, given the already checked earlier steps.
inline LinearInequality cp_expected_line(const Qcnf& phi, const CPProof& pi, const CPStep& s) {
  auto ante = [&](std::size_t k) -> const LinearInequality& { return pi.step(s.premises.at(k)).line; };
  switch (s.rule) {
    case CPRule::axiom:
      if (s.index == 0 || s.index > phi.matrix().size()) throw Error("axiom index out of range");
      return encode_clause_cp(phi.matrix()[s.index - 1]);
    case CPRule::bool_lower:
      return LinearInequality({{static_cast<VarId>(s.index), 1}}, 0);
    case CPRule::bool_upper:
      return LinearInequality({{static_cast<VarId>(s.index), -1}}, -1);
    case CPRule::trivial:
      return LinearInequality({}, -1);
    case CPRule::lin:
      if (s.c1 < 0 || s.c2 < 0) throw Error("negative multiplier");
      return combine(ante(0), s.c1, ante(1), s.c2);
    case CPRule::div: {
      if (s.c1 <= 0) throw Error("divisor must be positive");
      std::map<VarId, BigInt> out;
      for (const auto& [v, c] : ante(0).coeffs()) {
        if (c % s.c1 != 0) throw Error("divisor does not divide the coefficient of v" + std::to_string(v));
        out.emplace(v, c / s.c1);
      }
      return LinearInequality(std::move(out), ceil_div(ante(0).constant(), s.c1));
    }
    case CPRule::reduce: {
      const LinearInequality& a = ante(0);
      std::string why = reduction_violation(phi, a.vars(), s.beta);
      if (!why.empty()) throw Error(why);
      return a.restrict(s.beta);
    }
  }
  throw Error("unknown rule");
}

inline CheckResult check_cp(const Qcnf& phi, const CPProof& pi, bool refutation = true) {
  std::set<std::size_t> known;
  for (std::size_t i = 0; i < pi.steps.size(); ++i) {
    const CPStep& s = pi.steps[i];
    auto reject = [&](const std::string& msg) { return CheckResult::reject(s.id, cp_rule_name(s.rule), msg); };
    if (i > 0 && s.id <= pi.steps[i - 1].id) return reject("step ids must be strictly increasing");
    std::size_t need = s.rule == CPRule::lin ? 2 : (s.rule == CPRule::div || s.rule == CPRule::reduce) ? 1 : 0;
    if (s.premises.size() != need) return reject("expected " + std::to_string(need) + " antecedents");
    for (std::size_t p : s.premises)
      if (!known.count(p)) return reject("dangling antecedent id " + std::to_string(p));
    if ((s.rule == CPRule::bool_lower || s.rule == CPRule::bool_upper) && !phi.quantified(static_cast<VarId>(s.index)))
      return reject("variable " + std::to_string(s.index) + " not in the formula");
    for (VarId v : s.line.vars())
      if (!phi.quantified(v)) return reject("variable " + std::to_string(v) + " not in the formula");
    LinearInequality expected;
    try {
      expected = cp_expected_line(phi, pi, s);
    } catch (const Error& e) {
      return reject(e.what());
    }
    if (!(expected == s.line)) return reject("expected " + expected.to_string() + ", got " + s.line.to_string());
    known.insert(s.id);
  }
  if (refutation) {
    if (pi.steps.empty()) return CheckResult::reject(0, "conclusion", "empty proof");
    if (!pi.steps.back().line.is_contradiction())
      return CheckResult::reject(pi.steps.back().id, "conclusion", "last line is not a contradiction 0 >= A with A >= 1");
  }
  return CheckResult::accept();
}

// ---- text format: <id> <rule> <args> : <terms> >= A ----

inline std::string write_cp(const CPProof& pi) {
  std::ostringstream out;
  for (const auto& s : pi.steps) {
    out << s.id << " " << cp_rule_name(s.rule);
    switch (s.rule) {
      case CPRule::axiom:
      case CPRule::bool_lower:
      case CPRule::bool_upper:
        out << " " << s.index;
        break;
      case CPRule::trivial:
        break;
      case CPRule::lin:
        out << " " << s.premises[0] << " " << s.c1 << " " << s.premises[1] << " " << s.c2;
        break;
      case CPRule::div:
        out << " " << s.premises[0] << " " << s.c1;
        break;
      case CPRule::reduce:
        out << " " << s.premises[0];
        for (Literal l : s.beta.literals()) out << " " << l.to_dimacs();
        break;
    }
    out << " : " << s.line.to_string() << "\n";
  }
  return out.str();
}

inline CPProof parse_cp(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  CPProof pi;
  while (std::getline(in, line)) {
    ++lineno;
    auto colon = line.find(':');
    std::istringstream head(line.substr(0, colon));
    std::vector<std::string> toks;
    for (std::string t; head >> t;) toks.push_back(t);
    if (toks.empty() || toks[0] == "c") {
      if (colon != std::string::npos && toks.empty()) throw ParseError(lineno, "missing step id");
      continue;
    }
    if (colon == std::string::npos) throw ParseError(lineno, "missing ':' before the inequality");
    try {
      auto num = [&](std::size_t k) -> long long {
        if (k >= toks.size()) throw ParseError("missing argument");
        std::size_t used = 0;
        long long v = 0;
        try {
          v = std::stoll(toks[k], &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != toks[k].size() || used == 0) throw ParseError("expected an integer, got '" + toks[k] + "'");
        return v;
      };
      auto nonneg = [&](std::size_t k) {
        long long v = num(k);
        if (v <= 0) throw ParseError("expected a positive integer, got '" + toks[k] + "'");
        return static_cast<std::size_t>(v);
      };
      auto arity = [&](std::size_t n) {
        if (toks.size() != n) throw ParseError("wrong number of arguments for '" + toks[1] + "'");
      };
      CPStep s;
      s.id = nonneg(0);
      if (toks.size() < 2) throw ParseError("missing rule");
      const std::string& r = toks[1];
      if (r == "ax" || r == "bl" || r == "bu") {
        arity(3);
        s.rule = r == "ax" ? CPRule::axiom : r == "bl" ? CPRule::bool_lower : CPRule::bool_upper;
        s.index = nonneg(2);
      } else if (r == "triv") {
        arity(2);
        s.rule = CPRule::trivial;
      } else if (r == "lin") {
        arity(6);
        s.rule = CPRule::lin;
        s.premises = {nonneg(2), nonneg(4)};
        s.c1 = LinearInequality::parse_big(toks[3]);
        s.c2 = LinearInequality::parse_big(toks[5]);
      } else if (r == "div") {
        arity(4);
        s.rule = CPRule::div;
        s.premises = {nonneg(2)};
        s.c1 = LinearInequality::parse_big(toks[3]);
      } else if (r == "red") {
        if (toks.size() < 3) throw ParseError("missing argument");
        s.rule = CPRule::reduce;
        s.premises = {nonneg(2)};
        for (std::size_t k = 3; k < toks.size(); ++k) {
          Literal l = Literal::from_dimacs(num(k));
          if (s.beta.contains(l.var())) throw ParseError("variable bound twice in reduction");
          s.beta.bind(l.var(), l.positive());
        }
      } else {
        throw ParseError("unknown rule '" + r + "'");
      }
      s.line = LinearInequality::parse(line.substr(colon + 1));
      if (!pi.steps.empty() && s.id <= pi.steps.back().id) throw ParseError("step ids must be strictly increasing");
      pi.steps.push_back(std::move(s));
    } catch (const ParseError& e) {
      if (e.line()) throw;
      throw ParseError(lineno, e.what());
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return pi;
}

/// Sign rule: u ↦ 0 when its coefficient is non-negative, else 1, for the
/// variables of L's rightmost (universal) block.
inline Assignment cp_response(const Qcnf& phi, const LinearInequality& L) {
  auto vars = L.vars();
  auto right = rightmost_block(phi, vars);
  if (!right || phi.blocks()[*right].quantifier != Quantifier::forall) throw DomainError("line " + L.to_string() + " is not reducible");
  Assignment beta;
  for (VarId v : vars)
    if (phi.block_of(v) == *right) beta.bind(v, L.coeff(v) < 0);
  return beta;
}

inline bool cp_line_eval(const LinearInequality& L, const Assignment& tau) {
  DenseAssignment d(L.vars().empty() ? 0 : L.vars().back());
  d.assign(tau.project(L.vars()));
  return L.holds(d);
}

/// CP+∀red refutation simulating a QU-Res refutation line by line: clause
/// sums are rounded with Boolean axioms and division by 2, reductions are
/// split per universal block, weakenings add Boolean axioms.
inline CPProof simulate_qures_in_cp(const Qcnf& phi, const QUResProof& pi) {
  if (auto r = check_qures(phi, pi); !r) throw Error("cannot simulate a rejected proof: " + r.to_string());
  CPProof out;
  auto push = [&](CPStep s) {
    s.id = out.steps.size() + 1;
    s.line = cp_expected_line(phi, out, s);
    out.steps.push_back(std::move(s));
    return out.steps.back().id;
  };
  std::map<Clause, std::size_t> axioms;
  for (std::size_t k = 0; k < phi.matrix().size(); ++k) axioms.emplace(phi.matrix()[k], k + 1);
  auto boolean = [&](VarId v, bool lower) {
    CPStep s;
    s.rule = lower ? CPRule::bool_lower : CPRule::bool_upper;
    s.index = v;
    return push(std::move(s));
  };
  auto lin = [&](std::size_t a, std::size_t b) {
    CPStep s;
    s.rule = CPRule::lin;
    s.premises = {a, b};
    s.c1 = 1;
    s.c2 = 1;
    return push(std::move(s));
  };
  std::map<std::size_t, std::size_t> map;
  for (const auto& s : pi.steps) {
    std::size_t id = 0;
    switch (s.rule) {
      case QRule::axiom: {
        CPStep a;
        a.rule = CPRule::axiom;
        a.index = axioms.at(s.clause);
        id = push(std::move(a));
        break;
      }
      case QRule::resolve: {
        id = lin(map.at(s.premises[0]), map.at(s.premises[1]));
        for (Literal l : s.clause) {
          BigInt c = out.steps.back().line.coeff(l.var());
          if (c == 1 || c == -1) id = lin(id, boolean(l.var(), c == 1));
        }
        if (!s.clause.empty()) {
          CPStep d;
          d.rule = CPRule::div;
          d.premises = {id};
          d.c1 = 2;
          id = push(std::move(d));
        }
        break;
      }
      case QRule::reduce: {
        id = map.at(s.premises[0]);
        const Clause& ante = pi.steps[pi.index_of(s.premises[0])].clause;
        Clause removed = clause_without(ante, s.clause);
        std::map<std::size_t, Assignment, std::greater<>> by_block;
        for (Literal l : removed) by_block[phi.block_of(l.var())].bind(l.var(), !l.positive());
        for (auto& [b, beta] : by_block) {
          CPStep r;
          r.rule = CPRule::reduce;
          r.premises = {id};
          r.beta = beta;
          id = push(std::move(r));
        }
        break;
      }
      case QRule::weaken: {
        id = map.at(s.premises[0]);
        const Clause& ante = pi.steps[pi.index_of(s.premises[0])].clause;
        for (Literal l : clause_without(s.clause, ante)) id = lin(id, boolean(l.var(), l.positive()));
        break;
      }
    }
    if (!(out.steps[id - 1].line == encode_clause_cp(s.clause)))
      throw Error("simulation of step " + std::to_string(s.id) + " produced " + out.steps[id - 1].line.to_string());
    map[s.id] = id;
  }
  return out;
}

}  // namespace qbfscc
