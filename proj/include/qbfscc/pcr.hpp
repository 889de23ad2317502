#pragma once

// Polynomial Calculus with Resolution and universal reduction over ℚ or
// GF(p). Each Boolean variable x has two algebraic variables x and x̄; a
// Boolean assignment τ gives x the value 1−τ(x) and x̄ the value τ(x), so a
// clause {x, ¬y} becomes the single monomial x·ȳ and holds iff it is 0.

#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qbfscc/core.hpp"
#include "qbfscc/cp.hpp"
#include "qbfscc/qures.hpp"

namespace qbfscc {

using Rational = boost::multiprecision::cpp_rational;

/// ℚ (p = 0) or GF(p) for a prime p.
class Field {
 public:
  Field() = default;
  static Field rationals() { return Field(); }
  static Field prime(std::uint64_t p) {
    if (p < 2) throw DomainError("field characteristic must be a prime");
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) throw DomainError(std::to_string(p) + " is not prime");
    Field f;
    f.p_ = p;
    return f;
  }

  std::uint64_t characteristic() const { return p_; }
  bool is_rational() const { return p_ == 0; }

  /// Canonical representative: an integer in [0, p) for GF(p).
  Rational norm(const Rational& x) const {
    if (!p_) return x;
    BigInt num = boost::multiprecision::numerator(x), den = boost::multiprecision::denominator(x);
    BigInt p = p_;
    BigInt d = ((den % p) + p) % p;
    if (d == 0) throw DomainError("denominator divisible by the characteristic");
    BigInt n = ((num % p) + p) % p;
    return Rational((n * inverse(d, p)) % p);
  }

  std::string to_string() const { return p_ ? "GF(" + std::to_string(p_) + ")" : "Q"; }

  static Field parse(const std::string& s) {
    if (s == "Q") return rationals();
    if (s.size() > 4 && s.rfind("GF(", 0) == 0 && s.back() == ')') {
      std::string inner = s.substr(3, s.size() - 4);
      if (inner.find_first_not_of("0123456789") != std::string::npos || inner.empty()) throw ParseError("bad field '" + s + "'");
      return prime(std::stoull(inner));
    }
    throw ParseError("unknown field '" + s + "'");
  }

  bool operator==(const Field&) const = default;

 private:
  static BigInt inverse(BigInt a, const BigInt& p) {
    // a^(p-2) mod p
    BigInt result = 1, e = p - 2;
    while (e > 0) {
      if ((e & 1) != 0) result = (result * a) % p;
      a = (a * a) % p;
      e >>= 1;
    }
    return result;
  }

  std::uint64_t p_ = 0;
};

struct AlgebraicVar {
  VarId base = 0;
  bool barred = false;

  auto operator<=>(const AlgebraicVar&) const = default;

  std::string to_string() const { return (barred ? "~v" : "v") + std::to_string(base); }
  static AlgebraicVar parse(const std::string& s) {
    std::size_t i = 0;
    bool barred = false;
    if (i < s.size() && s[i] == '~') {
      barred = true;
      ++i;
    }
    if (i >= s.size() || s[i] != 'v') throw ParseError("expected a variable like v3 or ~v3, got '" + s + "'");
    std::string digits = s.substr(i + 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits == "0" || digits.size() > 9)
      throw ParseError("bad variable '" + s + "'");
    return {static_cast<VarId>(std::stoul(digits)), barred};
  }
};

/// Product of algebraic variables with positive exponents, sorted.
using Monomial = std::vector<std::pair<AlgebraicVar, std::uint32_t>>;

inline Monomial monomial_times(Monomial m, AlgebraicVar v) {
  auto it = std::lower_bound(m.begin(), m.end(), v, [](const auto& e, AlgebraicVar x) { return e.first < x; });
  if (it != m.end() && it->first == v) ++it->second;
  else m.insert(it, {v, 1});
  return m;
}

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(Field f) : field_(f) {}

  static Polynomial constant(Field f, const Rational& c) {
    Polynomial p(f);
    p.add_term({}, c);
    return p;
  }
  static Polynomial monomial(Field f, Monomial m, const Rational& c = 1) {
    Polynomial p(f);
    p.add_term(std::move(m), c);
    return p;
  }

  const Field& field() const { return field_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const { return terms_.size() == 1 && terms_.begin()->first.empty() && terms_.begin()->second == 1; }

  void add_term(Monomial m, const Rational& c) {
    Rational& slot = terms_[m];
    slot = field_.norm(slot + c);
    if (slot == 0) terms_.erase(m);
  }

  /// Underlying Boolean variables, sorted.
  std::vector<VarId> vars() const {
    std::set<VarId> s;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m) s.insert(v.base);
    return {s.begin(), s.end()};
  }

  friend Polynomial lin_combine(const Polynomial& a, const Rational& ca, const Polynomial& b, const Rational& cb) {
    if (!(a.field_ == b.field_)) throw Error("field mismatch");
    Polynomial out(a.field_);
    for (const auto& [m, c] : a.terms_) out.add_term(m, a.field_.norm(ca) * c);
    for (const auto& [m, c] : b.terms_) out.add_term(m, a.field_.norm(cb) * c);
    return out;
  }

  Polynomial times(AlgebraicVar v) const {
    Polynomial out(field_);
    for (const auto& [m, c] : terms_) out.add_term(monomial_times(m, v), c);
    return out;
  }

  /// Substitutes x := 1−τ(x), x̄ := τ(x) for the assigned variables.
  Polynomial restrict(const Assignment& tau) const {
    Polynomial out(field_);
    for (const auto& [m, c] : terms_) {
      Monomial rest;
      bool zero = false;
      for (const auto& [v, e] : m) {
        auto b = tau.value(v.base);
        if (!b) {
          rest.emplace_back(v, e);
          continue;
        }
        if ((v.barred ? *b : !*b) == false) zero = true;
      }
      if (!zero) out.add_term(std::move(rest), c);
    }
    return out;
  }

  /// Value under a total Boolean assignment to vars().
  Rational eval(const DenseAssignment& tau) const {
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
      bool one = true;
      for (const auto& [v, e] : m) {
        int b = tau.get(v.base);
        if (b < 0) throw Error("assignment is not total: variable " + std::to_string(v.base) + " unbound");
        if ((v.barred ? b == 1 : b == 0) == false) {
          one = false;
          break;
        }
      }
      if (one) sum += c;
    }
    return field_.norm(sum);
  }
  bool holds(const DenseAssignment& tau) const { return eval(tau) == 0; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) out << " + ";
      first = false;
      out << c;
      for (const auto& [v, e] : m) {
        out << " * " << v.to_string();
        if (e > 1) out << "^" << e;
      }
    }
    return out.str();
  }

  static Polynomial parse(Field f, std::string_view text) {
    std::string spaced;
    for (char ch : text) {
      if (ch == '*' || ch == '+') {
        spaced += ' ';
        spaced += ch;
        spaced += ' ';
      } else {
        spaced += ch;
      }
    }
    std::istringstream in(spaced);
    std::vector<std::string> toks;
    for (std::string t; in >> t;) toks.push_back(t);
    Polynomial p(f);
    if (toks.size() == 1 && toks[0] == "0") return p;
    std::size_t i = 0;
    while (i < toks.size()) {
      Rational c = 1;
      Monomial m;
      bool expect_factor = true;
      bool first_factor = true;
      while (i < toks.size() && toks[i] != "+") {
        if (!expect_factor) {
          if (toks[i] != "*") throw ParseError("expected '*' or '+', got '" + toks[i] + "'");
          expect_factor = true;
          ++i;
          continue;
        }
        const std::string& t = toks[i];
        if (!t.empty() && (t[0] == 'v' || t[0] == '~')) {
          auto caret = t.find('^');
          AlgebraicVar v = AlgebraicVar::parse(t.substr(0, caret));
          std::uint32_t e = 1;
          if (caret != std::string::npos) {
            std::string es = t.substr(caret + 1);
            if (es.empty() || es.size() > 6 || es.find_first_not_of("0123456789") != std::string::npos || es == "0")
              throw ParseError("bad exponent in '" + t + "'");
            e = static_cast<std::uint32_t>(std::stoul(es));
          }
          for (std::uint32_t k = 0; k < e; ++k) m = monomial_times(m, v);
        } else {
          if (!first_factor) throw ParseError("coefficient must come first in a term");
          c = parse_rational(t);
        }
        first_factor = false;
        expect_factor = false;
        ++i;
      }
      if (expect_factor) throw ParseError("dangling operator");
      p.add_term(std::move(m), c);
      if (i < toks.size()) {
        ++i;
        if (i == toks.size()) throw ParseError("dangling '+'");
      }
    }
    return p;
  }

  static Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    auto integer = [&](const std::string& x) {
      std::size_t start = (!x.empty() && x[0] == '-') ? 1 : 0;
      if (start == x.size() || x.find_first_not_of("0123456789", start) != std::string::npos)
        throw ParseError("expected a rational, got '" + s + "'");
      return BigInt(x);
    };
    if (slash == std::string::npos) return Rational(integer(s));
    BigInt den = integer(s.substr(slash + 1));
    if (den <= 0) throw ParseError("bad denominator in '" + s + "'");
    return Rational(integer(s.substr(0, slash)), den);
  }

  bool operator==(const Polynomial& o) const { return field_ == o.field_ && terms_ == o.terms_; }

 private:
  Field field_;
  std::map<Monomial, Rational> terms_;
};

inline AlgebraicVar twin(Literal l) { return {l.var(), !l.positive()}; }

/// ∏ t(l) with t(x) = x and t(¬x) = x̄.
inline Polynomial encode_clause_pcr(const Clause& c, Field f = {}) {
  Monomial m;
  for (Literal l : c) m = monomial_times(m, twin(l));
  return Polynomial::monomial(f, std::move(m));
}

enum class PCRRule { axiom, boolax, compax, lin, mul, reduce };

inline const char* pcr_rule_name(PCRRule r) {
  switch (r) {
    case PCRRule::axiom: return "ax";
    case PCRRule::boolax: return "boolax";
    case PCRRule::compax: return "compax";
    case PCRRule::lin: return "lin";
    case PCRRule::mul: return "mul";
    case PCRRule::reduce: return "red";
  }
  return "?";
}

struct PCRStep {
  std::size_t id = 0;
  Polynomial poly;
  PCRRule rule = PCRRule::axiom;
  std::vector<std::size_t> premises;
  std::size_t index = 0;  // ax: 1-based matrix clause; compax: variable
  AlgebraicVar var;       // boolax, mul
  Rational a = 0, b = 0;  // lin
  Assignment beta;        // red
};

struct PCRProof {
  Field field;
  std::vector<PCRStep> steps;

  std::size_t size() const { return steps.size(); }
  /// Total number of monomials over all lines.
  std::size_t monomials() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.poly.size();
    return n;
  }
  std::size_t index_of(std::size_t id) const {
    auto it = std::lower_bound(steps.begin(), steps.end(), id, [](const PCRStep& s, std::size_t v) { return s.id < v; });
    if (it == steps.end() || it->id != id) throw Error("unknown step id " + std::to_string(id));
    return static_cast<std::size_t>(it - steps.begin());
  }
  const PCRStep& step(std::size_t id) const { return steps[index_of(id)]; }
};

inline Polynomial pcr_expected_poly(const Qcnf& phi, const PCRProof& pi, const PCRStep& s) {
  const Field& f = pi.field;
  auto ante = [&](std::size_t k) -> const Polynomial& { return pi.step(s.premises.at(k)).poly; };
  switch (s.rule) {
    case PCRRule::axiom:
      if (s.index == 0 || s.index > phi.matrix().size()) throw Error("axiom index out of range");
      return encode_clause_pcr(phi.matrix()[s.index - 1], f);
    case PCRRule::boolax: {
      Polynomial p(f);
      p.add_term(monomial_times(monomial_times({}, s.var), s.var), 1);
      p.add_term(monomial_times({}, s.var), -1);
      return p;
    }
    case PCRRule::compax: {
      VarId x = static_cast<VarId>(s.index);
      Polynomial p(f);
      p.add_term(monomial_times({}, {x, false}), 1);
      p.add_term(monomial_times({}, {x, true}), 1);
      p.add_term({}, -1);
      return p;
    }
    case PCRRule::lin:
      return lin_combine(ante(0), s.a, ante(1), s.b);
    case PCRRule::mul:
      return ante(0).times(s.var);
    case PCRRule::reduce: {
      const Polynomial& a = ante(0);
      std::string why = reduction_violation(phi, a.vars(), s.beta);
      if (!why.empty()) throw Error(why);
      return a.restrict(s.beta);
    }
  }
  throw Error("unknown rule");
}

inline CheckResult check_pcr(const Qcnf& phi, const PCRProof& pi, bool refutation = true) {
  std::set<std::size_t> known;
  for (std::size_t i = 0; i < pi.steps.size(); ++i) {
    const PCRStep& s = pi.steps[i];
    auto reject = [&](const std::string& msg) { return CheckResult::reject(s.id, pcr_rule_name(s.rule), msg); };
    if (i > 0 && s.id <= pi.steps[i - 1].id) return reject("step ids must be strictly increasing");
    if (!(s.poly.field() == pi.field)) return reject("field mismatch: line over " + s.poly.field().to_string());
    std::size_t need = s.rule == PCRRule::lin ? 2 : (s.rule == PCRRule::mul || s.rule == PCRRule::reduce) ? 1 : 0;
    if (s.premises.size() != need) return reject("expected " + std::to_string(need) + " antecedents");
    for (std::size_t p : s.premises)
      if (!known.count(p)) return reject("dangling antecedent id " + std::to_string(p));
    VarId named = s.rule == PCRRule::compax ? static_cast<VarId>(s.index) : (s.rule == PCRRule::boolax || s.rule == PCRRule::mul) ? s.var.base : 1;
    if (!phi.quantified(named)) return reject("variable " + std::to_string(named) + " not in the formula");
    for (VarId v : s.poly.vars())
      if (!phi.quantified(v)) return reject("variable " + std::to_string(v) + " not in the formula");
    Polynomial expected;
    try {
      expected = pcr_expected_poly(phi, pi, s);
    } catch (const Error& e) {
      return reject(e.what());
    }
    if (!(expected == s.poly)) return reject("expected " + expected.to_string() + ", got " + s.poly.to_string());
    known.insert(s.id);
  }
  if (refutation) {
    if (pi.steps.empty()) return CheckResult::reject(0, "conclusion", "empty proof");
    if (!pi.steps.back().poly.is_one()) return CheckResult::reject(pi.steps.back().id, "conclusion", "last line is not the constant 1");
  }
  return CheckResult::accept();
}

// ---- text format: header "p pcr field=F", then <id> <rule> <args> : <poly> ----

inline std::string write_pcr(const PCRProof& pi) {
  std::ostringstream out;
  out << "p pcr field=" << pi.field.to_string() << "\n";
  for (const auto& s : pi.steps) {
    out << s.id << " " << pcr_rule_name(s.rule);
    switch (s.rule) {
      case PCRRule::axiom:
      case PCRRule::compax:
        out << " " << s.index;
        break;
      case PCRRule::boolax:
        out << " " << s.var.to_string();
        break;
      case PCRRule::lin:
        out << " " << s.premises[0] << " " << s.a << " " << s.premises[1] << " " << s.b;
        break;
      case PCRRule::mul:
        out << " " << s.premises[0] << " " << s.var.to_string();
        break;
      case PCRRule::reduce:
        out << " " << s.premises[0];
        for (Literal l : s.beta.literals()) out << " " << l.to_dimacs();
        break;
    }
    out << " : " << s.poly.to_string() << "\n";
  }
  return out.str();
}

inline PCRProof parse_pcr(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  PCRProof pi;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream probe(line);
    std::string first;
    probe >> first;
    if (first.empty() || first == "c") continue;
    try {
      if (first == "p") {
        if (header) throw ParseError("duplicate header");
        std::string kind, field;
        probe >> kind >> field;
        if (kind != "pcr" || field.rfind("field=", 0) != 0) throw ParseError("expected 'p pcr field=Q|GF(p)'");
        pi.field = Field::parse(field.substr(6));
        header = true;
        continue;
      }
      if (!header) throw ParseError("missing 'p pcr' header");
      auto colon = line.find(':');
      if (colon == std::string::npos) throw ParseError("missing ':' before the polynomial");
      std::istringstream head(line.substr(0, colon));
      std::vector<std::string> toks;
      for (std::string t; head >> t;) toks.push_back(t);
      auto pos = [&](std::size_t k) {
        if (k >= toks.size()) throw ParseError("missing argument");
        const std::string& t = toks[k];
        if (t.empty() || t.size() > 18 || t.find_first_not_of("0123456789") != std::string::npos || std::stoull(t) == 0)
          throw ParseError("expected a positive integer, got '" + t + "'");
        return static_cast<std::size_t>(std::stoull(t));
      };
      auto arity = [&](std::size_t n) {
        if (toks.size() != n) throw ParseError("wrong number of arguments for '" + toks[1] + "'");
      };
      PCRStep s;
      s.id = pos(0);
      if (toks.size() < 2) throw ParseError("missing rule");
      const std::string& r = toks[1];
      if (r == "ax" || r == "compax") {
        arity(3);
        s.rule = r == "ax" ? PCRRule::axiom : PCRRule::compax;
        s.index = pos(2);
      } else if (r == "boolax") {
        arity(3);
        s.rule = PCRRule::boolax;
        s.var = AlgebraicVar::parse(toks[2]);
      } else if (r == "lin") {
        arity(6);
        s.rule = PCRRule::lin;
        s.premises = {pos(2), pos(4)};
        s.a = Polynomial::parse_rational(toks[3]);
        s.b = Polynomial::parse_rational(toks[5]);
      } else if (r == "mul") {
        arity(4);
        s.rule = PCRRule::mul;
        s.premises = {pos(2)};
        s.var = AlgebraicVar::parse(toks[3]);
      } else if (r == "red") {
        if (toks.size() < 3) throw ParseError("missing argument");
        s.rule = PCRRule::reduce;
        s.premises = {pos(2)};
        for (std::size_t k = 3; k < toks.size(); ++k) {
          long long v = 0;
          try {
            std::size_t used = 0;
            v = std::stoll(toks[k], &used);
            if (used != toks[k].size()) throw std::invalid_argument("junk");
          } catch (const std::exception&) {
            throw ParseError("expected a literal, got '" + toks[k] + "'");
          }
          Literal l = Literal::from_dimacs(v);
          if (s.beta.contains(l.var())) throw ParseError("variable bound twice in reduction");
          s.beta.bind(l.var(), l.positive());
        }
      } else {
        throw ParseError("unknown rule '" + r + "'");
      }
      s.poly = Polynomial::parse(pi.field, line.substr(colon + 1));
      if (!pi.steps.empty() && s.id <= pi.steps.back().id) throw ParseError("step ids must be strictly increasing");
      pi.steps.push_back(std::move(s));
    } catch (const ParseError& e) {
      if (e.line()) throw;
      throw ParseError(lineno, e.what());
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (!header) throw ParseError("missing 'p pcr' header");
  return pi;
}

inline Rational pcr_line_eval(const Polynomial& p, const Assignment& tau) {
  auto vars = p.vars();
  DenseAssignment d(vars.empty() ? 0 : vars.back());
  d.assign(tau.project(vars));
  return p.eval(d);
}

/// Number N of distinct monomials over the U-variables in L = Σ f_j·v_j,
/// where U is the rightmost block of L.
inline std::size_t pcr_u_monomials(const Qcnf& phi, const Polynomial& p) {
  auto vars = p.vars();
  auto right = rightmost_block(phi, vars);
  if (!right) return 0;
  std::set<Monomial> parts;
  for (const auto& [m, c] : p.terms()) {
    Monomial u;
    for (const auto& e : m)
      if (phi.block_of(e.first.base) == *right) u.push_back(e);
    parts.insert(std::move(u));
  }
  return parts.size();
}

/// PCR+∀red refutation simulating a QU-Res refutation: resolution on x
/// multiplies both antecedents up to the common monomial M, adds them and
/// subtracts (x + x̄ − 1)·M.
inline PCRProof simulate_qures_in_pcr(const Qcnf& phi, const QUResProof& pi, Field f = {}) {
  if (auto r = check_qures(phi, pi); !r) throw Error("cannot simulate a rejected proof: " + r.to_string());
  PCRProof out;
  out.field = f;
  auto push = [&](PCRStep s) {
    s.id = out.steps.size() + 1;
    s.poly = pcr_expected_poly(phi, out, s);
    out.steps.push_back(std::move(s));
    return out.steps.back().id;
  };
  auto mul = [&](std::size_t id, AlgebraicVar v) {
    PCRStep s;
    s.rule = PCRRule::mul;
    s.premises = {id};
    s.var = v;
    return push(std::move(s));
  };
  auto lin = [&](std::size_t i, const Rational& a, std::size_t j, const Rational& b) {
    PCRStep s;
    s.rule = PCRRule::lin;
    s.premises = {i, j};
    s.a = a;
    s.b = b;
    return push(std::move(s));
  };
  std::map<Clause, std::size_t> axioms;
  for (std::size_t k = 0; k < phi.matrix().size(); ++k) axioms.emplace(phi.matrix()[k], k + 1);
  std::map<std::size_t, std::size_t> map;
  for (const auto& s : pi.steps) {
    std::size_t id = 0;
    switch (s.rule) {
      case QRule::axiom: {
        PCRStep a;
        a.rule = PCRRule::axiom;
        a.index = axioms.at(s.clause);
        id = push(std::move(a));
        break;
      }
      case QRule::resolve: {
        const Clause& ca = pi.steps[pi.index_of(s.premises[0])].clause;
        const Clause& cb = pi.steps[pi.index_of(s.premises[1])].clause;
        VarId x = *unique_pivot(ca, cb);
        std::size_t ia = map.at(s.premises[0]), ib = map.at(s.premises[1]);
        for (Literal l : cb)
          if (l.var() != x && !ca.contains(l)) ia = mul(ia, twin(l));
        for (Literal l : ca)
          if (l.var() != x && !cb.contains(l)) ib = mul(ib, twin(l));
        PCRStep c;
        c.rule = PCRRule::compax;
        c.index = x;
        std::size_t ic = push(std::move(c));
        for (Literal l : s.clause) ic = mul(ic, twin(l));
        id = lin(lin(ia, 1, ib, 1), 1, ic, -1);
        break;
      }
      case QRule::reduce: {
        id = map.at(s.premises[0]);
        Clause removed = clause_without(pi.steps[pi.index_of(s.premises[0])].clause, s.clause);
        std::map<std::size_t, Assignment, std::greater<>> by_block;
        for (Literal l : removed) by_block[phi.block_of(l.var())].bind(l.var(), !l.positive());
        for (auto& [b, beta] : by_block) {
          PCRStep r;
          r.rule = PCRRule::reduce;
          r.premises = {id};
          r.beta = beta;
          id = push(std::move(r));
        }
        break;
      }
      case QRule::weaken:
        id = map.at(s.premises[0]);
        for (Literal l : clause_without(s.clause, pi.steps[pi.index_of(s.premises[0])].clause)) id = mul(id, twin(l));
        break;
    }
    if (!(out.steps[id - 1].poly == encode_clause_pcr(s.clause, f)))
      throw Error("simulation of step " + std::to_string(s.id) + " produced " + out.steps[id - 1].poly.to_string());
    map[s.id] = id;
  }
  return out;
}

}  // namespace qbfscc
