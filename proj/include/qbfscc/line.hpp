#pragma once

// A proof line of any system, seen through its Boolean function B_L.
// Clauses, formulas, linear inequalities and polynomials share one variant;
// truth tables are exhaustive over an AssignmentSpace and capped.

#include <boost/dynamic_bitset.hpp>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qbfscc/core.hpp"
#include "qbfscc/cp.hpp"
#include "qbfscc/formula.hpp"
#include "qbfscc/pcr.hpp"

namespace qbfscc {

inline constexpr std::size_t kDefaultSemanticCap = 22;

using Line = std::variant<Clause, Formula, LinearInequality, Polynomial>;

inline std::vector<VarId> line_vars(const Line& l) {
  return std::visit([](const auto& x) -> std::vector<VarId> { return x.vars(); }, l);
}

/// B_L under a dense assignment binding every variable of the line.
inline bool line_holds(const Line& l, const DenseAssignment& tau) {
  struct Visitor {
    const DenseAssignment& tau;
    bool operator()(const Clause& c) const {
      for (Literal lit : c) {
        int v = tau.value(lit);
        if (v < 0) throw Error("assignment is not total: variable " + std::to_string(lit.var()) + " unbound");
        if (v == 1) return true;
      }
      return false;
    }
    bool operator()(const Formula& f) const { return f.eval(tau); }
    bool operator()(const LinearInequality& q) const { return q.holds(tau); }
    bool operator()(const Polynomial& p) const { return p.holds(tau); }
  };
  return std::visit(Visitor{tau}, l);
}

inline bool line_holds(const Line& l, const Assignment& tau) {
  auto vars = line_vars(l);
  DenseAssignment d(vars.empty() ? 0 : vars.back());
  d.assign(tau.project(vars));
  return line_holds(l, d);
}

/// L[τ]. A clause satisfied by τ becomes the formula true.
inline Line line_restrict(const Line& l, const Assignment& tau) {
  struct Visitor {
    const Assignment& tau;
    Line operator()(const Clause& c) const {
      if (auto r = restrict_clause(c, tau)) return *r;
      return Formula::constant(true);
    }
    Line operator()(const Formula& f) const { return f.restrict(tau); }
    Line operator()(const LinearInequality& q) const { return q.restrict(tau); }
    Line operator()(const Polynomial& p) const { return p.restrict(tau); }
  };
  return std::visit(Visitor{tau}, l);
}

inline std::vector<VarId> union_vars(std::span<const Line* const> lines) {
  std::vector<VarId> out;
  for (const Line* l : lines) {
    auto v = line_vars(*l);
    out.insert(out.end(), v.begin(), v.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Bit i is B_L at space.at(i); `space` must contain vars(L).
inline boost::dynamic_bitset<> truth_table(const Line& l, const AssignmentSpace& space, std::size_t cap = kDefaultSemanticCap) {
  if (space.width() > cap)
    throw CapError("truth table over " + std::to_string(space.width()) + " variables exceeds cap " + std::to_string(cap));
  const auto& vars = space.vars();
  DenseAssignment d(vars.empty() ? 0 : vars.back());
  boost::dynamic_bitset<> out(space.count());
  for (std::uint64_t i = 0; i < space.count(); ++i) {
    for (std::size_t j = 0; j < vars.size(); ++j) d.set(vars[j], space.bit(i, j));
    if (line_holds(l, d)) out.set(i);
  }
  return out;
}

inline bool line_is_tautology(const Line& l, std::size_t cap = kDefaultSemanticCap) {
  return truth_table(l, AssignmentSpace(line_vars(l)), cap).all();
}
inline bool line_is_falsum(const Line& l, std::size_t cap = kDefaultSemanticCap) {
  return truth_table(l, AssignmentSpace(line_vars(l)), cap).none();
}

/// Same Boolean function, compared over the union of both variable sets.
inline bool lines_equivalent(const Line& a, const Line& b, std::size_t cap = kDefaultSemanticCap) {
  const Line* both[] = {&a, &b};
  AssignmentSpace space(union_vars(both));
  return truth_table(a, space, cap) == truth_table(b, space, cap);
}

inline std::optional<std::size_t> line_rightmost_block(const Qcnf& phi, const Line& l) {
  auto vars = line_vars(l);
  return rightmost_block(phi, vars);
}

/// Nonempty with a universal rightmost block.
inline bool line_reducible(const Qcnf& phi, const Line& l) {
  auto b = line_rightmost_block(phi, l);
  return b && phi.blocks()[*b].quantifier == Quantifier::forall;
}

inline const char* line_kind(const Line& l) {
  static const char* names[] = {"cl", "bf", "cp", "pcr"};
  return names[l.index()];
}

inline std::string line_to_string(const Line& l) {
  struct Visitor {
    std::string operator()(const Clause& c) const {
      std::string s;
      for (Literal lit : c) s += std::to_string(lit.to_dimacs()) + " ";
      return s + "0";
    }
    std::string operator()(const Formula& f) const { return f.to_string(); }
    std::string operator()(const LinearInequality& q) const { return q.to_string(); }
    std::string operator()(const Polynomial& p) const { return p.field().to_string() + " " + p.to_string(); }
  };
  return std::visit(Visitor{}, l);
}

inline Line parse_line(std::string_view kind, std::string_view text) {
  std::string s(text);
  if (kind == "cl") {
    std::istringstream in(s);
    std::vector<long long> lits;
    std::string tok;
    bool closed = false;
    while (in >> tok) {
      if (closed) throw ParseError("text after the terminating 0");
      long long v = 0;
      try {
        std::size_t used = 0;
        v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("junk");
      } catch (const std::exception&) {
        throw ParseError("expected a literal, got '" + tok + "'");
      }
      if (v == 0) closed = true;
      else lits.push_back(v);
    }
    if (!closed) throw ParseError("clause line must end with 0");
    return Clause::from_dimacs(lits);
  }
  if (kind == "bf") return Formula::parse(s);
  if (kind == "cp") return LinearInequality::parse(s);
  if (kind == "pcr") {
    std::istringstream in(s);
    std::string field;
    in >> field;
    std::string rest;
    std::getline(in, rest);
    return Polynomial::parse(Field::parse(field), rest);
  }
  throw ParseError("unknown line kind '" + std::string(kind) + "'");
}

}  // namespace qbfscc
