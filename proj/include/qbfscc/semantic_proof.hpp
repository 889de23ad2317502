#pragma once

// Semantic P+∀red refutations. Each step is an axiom, a semantic
// consequence of declared earlier steps, or a reduction L_j[β] with β on the
// rightmost (universal) block of L_j. Checking is by truth tables.
//
// Text: <id> <kind> <line> ; ax [k] | sc [i ...] | red j <lits>

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qbfscc/cp.hpp"
#include "qbfscc/line.hpp"
#include "qbfscc/pcr.hpp"
#include "qbfscc/qures.hpp"

namespace qbfscc {

enum class SemRule { axiom, consequence, reduction };

inline const char* sem_rule_name(SemRule r) {
  switch (r) {
    case SemRule::axiom: return "ax";
    case SemRule::consequence: return "sc";
    case SemRule::reduction: return "red";
  }
  return "?";
}

struct SemStep {
  std::size_t id = 0;
  Line line;
  SemRule rule = SemRule::axiom;
  std::vector<std::size_t> premises;  // sc: any number; red: one
  std::size_t axiom = 0;              // 1-based matrix clause, 0 = any
  Assignment beta;                    // red
};

struct SemanticProof {
  std::vector<SemStep> steps;

  std::size_t size() const { return steps.size(); }
  std::size_t index_of(std::size_t id) const {
    auto it = std::lower_bound(steps.begin(), steps.end(), id, [](const SemStep& s, std::size_t v) { return s.id < v; });
    if (it == steps.end() || it->id != id) throw Error("unknown step id " + std::to_string(id));
    return static_cast<std::size_t>(it - steps.begin());
  }
  const SemStep& step(std::size_t id) const { return steps[index_of(id)]; }
  std::vector<Line> lines() const {
    std::vector<Line> out;
    for (const auto& s : steps) out.push_back(s.line);
    return out;
  }
};

/// premises ⊨ conclusion, by enumeration over the union of their variables.
inline bool entails(std::span<const Line* const> premises, const Line& conclusion, std::size_t cap = kDefaultSemanticCap) {
  std::vector<const Line*> all(premises.begin(), premises.end());
  all.push_back(&conclusion);
  AssignmentSpace space(union_vars(all));
  if (space.width() > cap)
    throw CapError("entailment over " + std::to_string(space.width()) + " variables exceeds cap " + std::to_string(cap));
  const auto& vars = space.vars();
  DenseAssignment d(vars.empty() ? 0 : vars.back());
  for (std::uint64_t i = 0; i < space.count(); ++i) {
    for (std::size_t j = 0; j < vars.size(); ++j) d.set(vars[j], space.bit(i, j));
    bool all_hold = true;
    for (const Line* p : premises)
      if (!line_holds(*p, d)) {
        all_hold = false;
        break;
      }
    if (all_hold && !line_holds(conclusion, d)) return false;
  }
  return true;
}

/// Throws CapError when a step's truth table exceeds `cap` variables.
inline CheckResult check_semantic(const Qcnf& phi, const SemanticProof& pi, std::size_t cap = kDefaultSemanticCap) {
  std::set<std::size_t> known;
  for (std::size_t i = 0; i < pi.steps.size(); ++i) {
    const SemStep& s = pi.steps[i];
    auto reject = [&](const std::string& msg) { return CheckResult::reject(s.id, sem_rule_name(s.rule), msg); };
    if (i > 0 && s.id <= pi.steps[i - 1].id) return reject("step ids must be strictly increasing");
    for (VarId v : line_vars(s.line))
      if (!phi.quantified(v)) return reject("variable " + std::to_string(v) + " not in the formula");
    for (std::size_t p : s.premises)
      if (!known.count(p)) return reject("dangling antecedent id " + std::to_string(p));
    switch (s.rule) {
      case SemRule::axiom: {
        if (s.axiom > phi.matrix().size()) return reject("axiom index out of range");
        bool found = false;
        for (std::size_t k = 0; k < phi.matrix().size() && !found; ++k)
          if ((s.axiom == 0 || s.axiom == k + 1) && lines_equivalent(s.line, Line(phi.matrix()[k]), cap)) found = true;
        if (!found) return reject("line is not equivalent to " + (s.axiom ? "matrix clause " + std::to_string(s.axiom) : std::string("any matrix clause")));
        break;
      }
      case SemRule::consequence: {
        std::vector<const Line*> prem;
        for (std::size_t p : s.premises) prem.push_back(&pi.step(p).line);
        if (!entails(prem, s.line, cap)) return reject("line does not follow from the declared premises");
        break;
      }
      case SemRule::reduction: {
        if (s.premises.size() != 1) return reject("expected 1 antecedent");
        const Line& ante = pi.step(s.premises[0]).line;
        auto vars = line_vars(ante);
        std::string why = reduction_violation(phi, vars, s.beta);
        if (!why.empty()) return reject(why);
        if (!lines_equivalent(s.line, line_restrict(ante, s.beta), cap)) return reject("line is not equivalent to the reduced antecedent");
        break;
      }
    }
    known.insert(s.id);
  }
  if (pi.steps.empty()) return CheckResult::reject(0, "conclusion", "empty proof");
  if (!line_is_falsum(pi.steps.back().line, cap)) return CheckResult::reject(pi.steps.back().id, "conclusion", "last line is not unsatisfiable");
  return CheckResult::accept();
}

// ---- text format ----

inline std::string write_semantic(const SemanticProof& pi) {
  std::ostringstream out;
  for (const auto& s : pi.steps) {
    out << s.id << " " << line_kind(s.line) << " " << line_to_string(s.line) << " ; " << sem_rule_name(s.rule);
    switch (s.rule) {
      case SemRule::axiom:
        if (s.axiom) out << " " << s.axiom;
        break;
      case SemRule::consequence:
        for (std::size_t p : s.premises) out << " " << p;
        break;
      case SemRule::reduction:
        out << " " << s.premises[0];
        for (Literal l : s.beta.literals()) out << " " << l.to_dimacs();
        break;
    }
    out << "\n";
  }
  return out.str();
}

inline SemanticProof parse_semantic(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  SemanticProof pi;
  auto number = [](const std::string& t) {
    if (t.empty() || t.size() > 18 || t.find_first_not_of("0123456789") != std::string::npos || std::stoull(t) == 0)
      throw ParseError("expected a positive integer, got '" + t + "'");
    return static_cast<std::size_t>(std::stoull(t));
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream probe(line);
    std::string first;
    probe >> first;
    if (first.empty() || first == "c") continue;
    try {
      auto semi = line.rfind(';');
      if (semi == std::string::npos) throw ParseError("missing ';' before the justification");
      std::istringstream head(line.substr(0, semi));
      std::string id, kind;
      head >> id >> kind;
      SemStep s;
      s.id = number(id);
      std::string body;
      std::getline(head, body);
      s.line = parse_line(kind, body);
      std::istringstream just(line.substr(semi + 1));
      std::vector<std::string> toks;
      for (std::string t; just >> t;) toks.push_back(t);
      if (toks.empty()) throw ParseError("missing justification");
      if (toks[0] == "ax") {
        s.rule = SemRule::axiom;
        if (toks.size() > 2) throw ParseError("ax takes at most one argument");
        if (toks.size() == 2) s.axiom = number(toks[1]);
      } else if (toks[0] == "sc") {
        s.rule = SemRule::consequence;
        for (std::size_t k = 1; k < toks.size(); ++k) s.premises.push_back(number(toks[k]));
      } else if (toks[0] == "red") {
        s.rule = SemRule::reduction;
        if (toks.size() < 3) throw ParseError("red needs an antecedent and literals");
        s.premises = {number(toks[1])};
        for (std::size_t k = 2; k < toks.size(); ++k) {
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
        throw ParseError("unknown justification '" + toks[0] + "'");
      }
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

// ---- conversions from the syntactic systems ----

namespace detail {

class SemBuilder {
 public:
  std::size_t axiom(Line l, std::size_t k) {
    SemStep s;
    s.line = std::move(l);
    s.rule = SemRule::axiom;
    s.axiom = k;
    return push(std::move(s));
  }
  std::size_t consequence(Line l, std::vector<std::size_t> premises) {
    SemStep s;
    s.line = std::move(l);
    s.rule = SemRule::consequence;
    s.premises = std::move(premises);
    return push(std::move(s));
  }
  std::size_t reduction(Line l, std::size_t from, Assignment beta) {
    SemStep s;
    s.line = std::move(l);
    s.rule = SemRule::reduction;
    s.premises = {from};
    s.beta = std::move(beta);
    return push(std::move(s));
  }
  const Line& line(std::size_t id) const { return pi_.steps[id - 1].line; }
  SemanticProof finish() { return std::move(pi_); }

 private:
  std::size_t push(SemStep s) {
    s.id = pi_.steps.size() + 1;
    pi_.steps.push_back(std::move(s));
    return pi_.steps.back().id;
  }
  SemanticProof pi_;
};

inline std::size_t axiom_index(const Qcnf& phi, const Clause& c) {
  for (std::size_t k = 0; k < phi.matrix().size(); ++k)
    if (phi.matrix()[k] == c) return k + 1;
  throw Error("clause " + c.to_string() + " is not in the matrix");
}

/// A restricted axiom stays an axiom of the restricted formula unless it
/// became a tautology, which follows from nothing.
inline void restrict_axiom(const Qcnf& phi, const Qcnf& restricted, const SemStep& s, const Assignment& tau, SemStep& r,
                           std::size_t cap) {
  if (line_is_tautology(r.line, cap)) {
    r.rule = SemRule::consequence;
    r.premises.clear();
    return;
  }
  r.rule = SemRule::axiom;
  if (s.axiom)
    if (auto c = restrict_clause(phi.matrix()[s.axiom - 1], tau)) r.axiom = axiom_index(restricted, *c);
}

}  // namespace detail

/// Resolution and weakening become consequences; a reduction touching
/// several universal blocks is split, rightmost block first.
inline SemanticProof semantic_from_qures(const Qcnf& phi, const QUResProof& pi) {
  detail::SemBuilder b;
  std::map<std::size_t, std::size_t> map;
  for (const auto& s : pi.steps) {
    std::size_t id = 0;
    switch (s.rule) {
      case QRule::axiom:
        id = b.axiom(s.clause, detail::axiom_index(phi, s.clause));
        break;
      case QRule::resolve:
        id = b.consequence(s.clause, {map.at(s.premises[0]), map.at(s.premises[1])});
        break;
      case QRule::weaken:
        id = b.consequence(s.clause, {map.at(s.premises[0])});
        break;
      case QRule::reduce: {
        id = map.at(s.premises[0]);
        Clause cur = std::get<Clause>(b.line(id));
        Clause removed = clause_without(cur, s.clause);
        std::map<std::size_t, Clause, std::greater<>> by_block;
        for (Literal l : removed) by_block[phi.block_of(l.var())] = clause_union(by_block[phi.block_of(l.var())], Clause{l});
        for (auto& [blk, lits] : by_block) {
          Assignment beta;
          for (Literal l : lits) beta.bind(l.var(), !l.positive());
          cur = clause_without(cur, lits);
          id = b.reduction(cur, id, std::move(beta));
        }
        break;
      }
    }
    map[s.id] = id;
  }
  return b.finish();
}

/// Boolean axioms become consequences of nothing; lin and div become
/// consequences of their antecedents.
inline SemanticProof semantic_from_cp(const CPProof& pi) {
  detail::SemBuilder b;
  std::map<std::size_t, std::size_t> map;
  for (const auto& s : pi.steps) {
    std::vector<std::size_t> prem;
    for (std::size_t p : s.premises) prem.push_back(map.at(p));
    std::size_t id = 0;
    switch (s.rule) {
      case CPRule::axiom: id = b.axiom(s.line, s.index); break;
      case CPRule::reduce: id = b.reduction(s.line, prem[0], s.beta); break;
      default: id = b.consequence(s.line, std::move(prem)); break;
    }
    map[s.id] = id;
  }
  return b.finish();
}

inline SemanticProof semantic_from_pcr(const PCRProof& pi) {
  detail::SemBuilder b;
  std::map<std::size_t, std::size_t> map;
  for (const auto& s : pi.steps) {
    std::vector<std::size_t> prem;
    for (std::size_t p : s.premises) prem.push_back(map.at(p));
    std::size_t id = 0;
    switch (s.rule) {
      case PCRRule::axiom: id = b.axiom(s.poly, s.index); break;
      case PCRRule::reduce: id = b.reduction(s.poly, prem[0], s.beta); break;
      default: id = b.consequence(s.poly, std::move(prem)); break;
    }
    map[s.id] = id;
  }
  return b.finish();
}

// ---- restriction closure ----

/// π[α] for an existential α, refuting Φ[α]. Satisfied axioms and
/// reductions whose block vanished become consequences.
namespace detail {

// The restricted antecedent no longer mentions the reduced block.
inline bool reduction_vanished(const Qcnf& phi, const Line& ante, const Assignment& beta) {
  for (VarId v : line_vars(ante))
    if (phi.block_of(v) == phi.block_of(beta.vars().front())) return false;
  return true;
}

}  // namespace detail

inline SemanticProof restrict_semantic_existential(const Qcnf& phi, const SemanticProof& pi, const Assignment& alpha,
                                                   std::size_t cap = kDefaultSemanticCap) {
  for (const auto& [v, b] : alpha.bindings())
    if (!phi.quantified(v) || phi.is_universal(v)) throw DomainError("restriction must assign existential variables only");
  Qcnf restricted = restrict_qcnf(phi, alpha);
  SemanticProof out;
  for (const auto& s : pi.steps) {
    SemStep r;
    r.id = s.id;
    r.line = line_restrict(s.line, alpha);
    switch (s.rule) {
      case SemRule::axiom:
        detail::restrict_axiom(phi, restricted, s, alpha, r, cap);
        break;
      case SemRule::consequence:
        r.rule = SemRule::consequence;
        r.premises = s.premises;
        break;
      case SemRule::reduction: {
        r.premises = s.premises;
        if (detail::reduction_vanished(phi, out.step(s.premises[0]).line, s.beta)) {
          r.rule = SemRule::consequence;
        } else {
          r.rule = SemRule::reduction;
          r.beta = s.beta;
        }
        break;
      }
    }
    out.steps.push_back(std::move(r));
  }
  return out;
}

/// Index of the first line that is not a tautology and whose variables lie
/// in the first block; nullopt if there is none.
inline std::optional<std::size_t> first_eligible_line(const Qcnf& phi, const SemanticProof& pi, std::size_t cap = kDefaultSemanticCap) {
  if (phi.blocks().empty()) return std::nullopt;
  for (std::size_t i = 0; i < pi.steps.size(); ++i) {
    bool inside = true;
    for (VarId v : line_vars(pi.steps[i].line))
      if (phi.block_of(v) != 0) inside = false;
    if (inside && !line_is_tautology(pi.steps[i].line, cap)) return i;
  }
  return std::nullopt;
}

/// π[β] for β on a universal first block that falsifies the first eligible
/// line L. Reductions on that block become consequences: of nothing before
/// L, of L after it.
inline SemanticProof restrict_semantic_universal(const Qcnf& phi, const SemanticProof& pi, const Assignment& beta,
                                                 std::size_t cap = kDefaultSemanticCap) {
  if (phi.blocks().empty() || phi.blocks()[0].quantifier != Quantifier::forall) throw DomainError("first block is not universal");
  for (const auto& [v, b] : beta.bindings())
    if (!phi.quantified(v) || phi.block_of(v) != 0) throw DomainError("restriction must assign first-block variables only");
  auto first = first_eligible_line(phi, pi, cap);
  if (!first) throw DomainError("no eligible line");
  const SemStep& eligible = pi.steps[*first];
  if (!line_is_falsum(line_restrict(eligible.line, beta), cap)) throw DomainError("assignment does not falsify the first eligible line");
  Qcnf restricted = restrict_qcnf(phi, beta);
  SemanticProof out;
  for (std::size_t i = 0; i < pi.steps.size(); ++i) {
    const SemStep& s = pi.steps[i];
    SemStep r;
    r.id = s.id;
    r.line = line_restrict(s.line, beta);
    r.premises = s.premises;
    switch (s.rule) {
      case SemRule::axiom:
        detail::restrict_axiom(phi, restricted, s, beta, r, cap);
        break;
      case SemRule::consequence:
        r.rule = SemRule::consequence;
        break;
      case SemRule::reduction:
        if (!s.beta.empty() && phi.block_of(s.beta.vars().front()) == 0) {
          r.rule = SemRule::consequence;
          r.premises.clear();
          if (i > *first) r.premises = {eligible.id};
        } else if (detail::reduction_vanished(phi, out.step(s.premises[0]).line, s.beta)) {
          r.rule = SemRule::consequence;
        } else {
          r.rule = SemRule::reduction;
          r.beta = s.beta;
        }
        break;
    }
    out.steps.push_back(std::move(r));
  }
  return out;
}

}  // namespace qbfscc
