#pragma once

// QDIMACS reading and writing.

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qbfscc/core.hpp"

namespace qbfscc {

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline long long parse_int(const std::string& tok, std::size_t lineno) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(lineno, "expected an integer, got '" + tok + "'");
  }
  if (used != tok.size()) throw ParseError(lineno, "expected an integer, got '" + tok + "'");
  return v;
}

}  // namespace detail

inline Qcnf parse_qdimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  bool in_matrix = false;
  long long num_vars = 0;
  long long num_clauses = 0;
  std::vector<Block> blocks;
  std::vector<Clause> matrix;
  std::vector<bool> seen;

  auto check_var = [&](long long lit) {
    long long v = lit < 0 ? -lit : lit;
    if (v > num_vars)
      throw ParseError(lineno, "variable " + std::to_string(v) + " out of range (header declares " +
                                   std::to_string(num_vars) + ")");
    return static_cast<VarId>(v);
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "c") continue;
    if (!have_header) {
      if (toks[0] != "p") throw ParseError(lineno, "expected header 'p cnf V C'");
      if (toks.size() != 4 || toks[1] != "cnf") throw ParseError(lineno, "malformed header");
      num_vars = detail::parse_int(toks[2], lineno);
      num_clauses = detail::parse_int(toks[3], lineno);
      if (num_vars < 0 || num_clauses < 0) throw ParseError(lineno, "malformed header");
      seen.assign(static_cast<std::size_t>(num_vars) + 1, false);
      have_header = true;
      continue;
    }
    if (toks[0] == "p") throw ParseError(lineno, "duplicate header");
    if (toks.back() != "0") throw ParseError(lineno, "unterminated line");
    if (toks[0] == "a" || toks[0] == "e") {
      if (in_matrix) throw ParseError(lineno, "quantifier line after clauses");
      Block b{toks[0] == "a" ? Quantifier::forall : Quantifier::exists, {}};
      for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
        long long v = detail::parse_int(toks[i], lineno);
        if (v <= 0) throw ParseError(lineno, "quantified variable must be positive");
        VarId id = check_var(v);
        if (seen[id]) throw ParseError(lineno, "variable " + std::to_string(id) + " quantified twice");
        seen[id] = true;
        b.vars.push_back(id);
      }
      if (b.vars.empty()) continue;
      if (!blocks.empty() && blocks.back().quantifier == b.quantifier) {
        blocks.back().vars.insert(blocks.back().vars.end(), b.vars.begin(), b.vars.end());
      } else {
        blocks.push_back(std::move(b));
      }
      continue;
    }
    in_matrix = true;
    std::vector<Literal> lits;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
      long long l = detail::parse_int(toks[i], lineno);
      if (l == 0) throw ParseError(lineno, "0 inside a clause");
      VarId v = check_var(l);
      if (!seen[v]) throw ParseError(lineno, "free variable " + std::to_string(v));
      lits.push_back(Literal::from_dimacs(l));
    }
    matrix.emplace_back(std::move(lits));
  }
  if (!have_header) throw ParseError(lineno, "missing header");
  if (static_cast<long long>(matrix.size()) != num_clauses)
    throw ParseError(lineno, "header declares " + std::to_string(num_clauses) + " clauses, found " +
                                 std::to_string(matrix.size()));
  return Qcnf(std::move(blocks), std::move(matrix), static_cast<VarId>(num_vars));
}

/// Canonical form: sorted literals, adjacent same-quantifier blocks merged,
/// variables sorted within blocks.
inline std::string write_qdimacs(const Qcnf& phi, const std::vector<std::string>& comments = {}) {
  std::ostringstream out;
  for (const auto& c : comments) out << "c " << c << "\n";
  Qcnf norm = phi.normalized();
  out << "p cnf " << norm.num_vars() << " " << norm.matrix().size() << "\n";
  for (const auto& b : norm.blocks()) {
    out << quantifier_letter(b.quantifier);
    for (VarId v : b.vars) out << " " << v;
    out << " 0\n";
  }
  for (const auto& c : norm.matrix()) {
    for (Literal l : c) out << l.to_dimacs() << " ";
    out << "0\n";
  }
  return out.str();
}

/// Plain DIMACS for a CNF over variables 1..num_vars.
inline std::string write_dimacs(std::span<const Clause> cnf, VarId num_vars) {
  std::ostringstream out;
  out << "p cnf " << num_vars << " " << cnf.size() << "\n";
  for (const auto& c : cnf) {
    for (Literal l : c) out << l.to_dimacs() << " ";
    out << "0\n";
  }
  return out.str();
}

}  // namespace qbfscc
