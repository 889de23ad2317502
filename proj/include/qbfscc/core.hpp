#pragma once

// Core data model: literals, clauses, prefixes, QCNFs, assignments,
// restriction and evaluation.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qbfscc/errors.hpp"

namespace qbfscc {

/// 1-based variable index.
using VarId = std::uint32_t;

/// Default cap on the number of variables an exhaustive oracle enumerates.
inline constexpr std::size_t kDefaultVarCap = 24;

class Literal {
 public:
  constexpr Literal() = default;
  constexpr Literal(VarId var, bool positive) : var_(var), positive_(positive) {}

  static Literal from_dimacs(long long lit) {
    if (lit == 0) throw Error("literal 0 is not a literal");
    return Literal(static_cast<VarId>(std::llabs(lit)), lit > 0);
  }

  constexpr VarId var() const { return var_; }
  constexpr bool positive() const { return positive_; }
  constexpr Literal negated() const { return Literal(var_, !positive_); }
  long long to_dimacs() const { return positive_ ? static_cast<long long>(var_) : -static_cast<long long>(var_); }

  /// Truth value of the literal when its variable takes `value`.
  constexpr bool satisfied_by(bool value) const { return value == positive_; }

  // Ordered by variable, then negative before positive.
  constexpr auto operator<=>(const Literal&) const = default;

 private:
  VarId var_ = 0;
  bool positive_ = true;
};

/// A set of literals kept sorted and duplicate-free. Tautological clauses are
/// representable; proof systems that forbid them check is_tautology().
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
  }
  Clause(std::initializer_list<Literal> lits) : Clause(std::vector<Literal>(lits)) {}

  static Clause from_dimacs(std::span<const long long> lits) {
    std::vector<Literal> out;
    out.reserve(lits.size());
    for (long long l : lits) out.push_back(Literal::from_dimacs(l));
    return Clause(std::move(out));
  }
  static Clause from_dimacs(std::initializer_list<long long> lits) {
    return from_dimacs(std::span<const long long>(lits.begin(), lits.size()));
  }

  const std::vector<Literal>& literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }

  bool contains(Literal l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

  bool is_tautology() const {
    for (std::size_t i = 1; i < lits_.size(); ++i)
      if (lits_[i].var() == lits_[i - 1].var()) return true;
    return false;
  }

  std::vector<VarId> vars() const {
    std::vector<VarId> out;
    for (Literal l : lits_)
      if (out.empty() || out.back() != l.var()) out.push_back(l.var());
    return out;
  }

  bool subset_of(const Clause& other) const {
    return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < lits_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(lits_[i].to_dimacs());
    }
    return s + "}";
  }

  auto operator<=>(const Clause&) const = default;

 private:
  std::vector<Literal> lits_;
};

inline Clause clause_union(const Clause& a, const Clause& b) {
  std::vector<Literal> lits(a.literals());
  lits.insert(lits.end(), b.begin(), b.end());
  return Clause(std::move(lits));
}

inline Clause clause_without(const Clause& c, const Clause& removed) {
  std::vector<Literal> lits;
  std::set_difference(c.begin(), c.end(), removed.begin(), removed.end(), std::back_inserter(lits));
  return Clause(std::move(lits));
}

enum class Quantifier { exists, forall };

inline char quantifier_letter(Quantifier q) { return q == Quantifier::exists ? 'e' : 'a'; }

struct Block {
  Quantifier quantifier = Quantifier::exists;
  std::vector<VarId> vars;  // sorted

  bool operator==(const Block&) const = default;
};

/// Partial map VarId -> {0,1}.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const VarId, bool>> init) {
    for (const auto& [v, b] : init) bind(v, b);
  }

  static Assignment from_literals(std::span<const Literal> lits) {
    Assignment a;
    for (Literal l : lits) a.bind(l.var(), l.positive());
    return a;
  }

  void bind(VarId v, bool value) {
    if (v == 0) throw Error("variable 0 cannot be bound");
    auto [it, inserted] = values_.emplace(v, value);
    if (!inserted) throw Error("variable " + std::to_string(v) + " bound twice");
  }
  /// Binds or overwrites.
  void set(VarId v, bool value) { values_[v] = value; }

  std::optional<bool> value(VarId v) const {
    auto it = values_.find(v);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(VarId v) const { return values_.count(v) != 0; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::map<VarId, bool>& bindings() const { return values_; }

  std::vector<VarId> vars() const {
    std::vector<VarId> out;
    out.reserve(values_.size());
    for (const auto& kv : values_) out.push_back(kv.first);
    return out;
  }

  /// The projection of the assignment to `vars`.
  Assignment project(std::span<const VarId> vars) const {
    Assignment out;
    for (VarId v : vars)
      if (auto b = value(v)) out.values_.emplace(v, *b);
    return out;
  }

  /// Union of two assignments; they must agree where both are defined.
  Assignment merged(const Assignment& other) const {
    Assignment out = *this;
    for (const auto& [v, b] : other.values_) {
      auto [it, inserted] = out.values_.emplace(v, b);
      if (!inserted && it->second != b) throw Error("conflicting assignments to variable " + std::to_string(v));
    }
    return out;
  }

  std::vector<Literal> literals() const {
    std::vector<Literal> out;
    for (const auto& [v, b] : values_) out.emplace_back(v, b);
    return out;
  }

  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;

 private:
  std::map<VarId, bool> values_;
};

/// Assignment-indexed view of a fixed sorted variable list. Index bit
/// (k-1-j) holds the value of vars[j], so counting 0..2^k-1 enumerates
/// assignments in lexicographic order over the sorted VarIds.
class AssignmentSpace {
 public:
  AssignmentSpace() = default;
  explicit AssignmentSpace(std::vector<VarId> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
    if (vars_.size() > 63) throw CapError("assignment space over more than 63 variables");
  }

  const std::vector<VarId>& vars() const { return vars_; }
  std::size_t width() const { return vars_.size(); }
  std::uint64_t count() const { return std::uint64_t{1} << vars_.size(); }

  bool bit(std::uint64_t index, std::size_t j) const { return (index >> (vars_.size() - 1 - j)) & 1u; }

  Assignment at(std::uint64_t index) const {
    Assignment a;
    for (std::size_t j = 0; j < vars_.size(); ++j) a.set(vars_[j], bit(index, j));
    return a;
  }

  /// Index of the projection of `a` onto this space; `a` must bind every var.
  std::uint64_t index_of(const Assignment& a) const {
    std::uint64_t idx = 0;
    for (VarId v : vars_) {
      auto b = a.value(v);
      if (!b) throw Error("assignment does not bind variable " + std::to_string(v));
      idx = (idx << 1) | (*b ? 1u : 0u);
    }
    return idx;
  }

 private:
  std::vector<VarId> vars_;
};

/// All 2^|vars| total assignments, lexicographic over the sorted VarIds.
inline std::vector<Assignment> enumerate_assignments(std::vector<VarId> vars, std::size_t cap = kDefaultVarCap) {
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() > cap)
    throw CapError("enumerating " + std::to_string(vars.size()) + " variables exceeds cap " + std::to_string(cap));
  AssignmentSpace space(std::move(vars));
  std::vector<Assignment> out;
  out.reserve(space.count());
  for (std::uint64_t i = 0; i < space.count(); ++i) out.push_back(space.at(i));
  return out;
}

/// Drops falsified literals; std::nullopt when some literal is satisfied.
inline std::optional<Clause> restrict_clause(const Clause& c, const Assignment& tau) {
  std::vector<Literal> kept;
  for (Literal l : c) {
    auto b = tau.value(l.var());
    if (!b) {
      kept.push_back(l);
    } else if (l.satisfied_by(*b)) {
      return std::nullopt;
    }
  }
  return Clause(std::move(kept));
}

/// Closed prenex CNF. Variable ids need not be contiguous after restriction;
/// num_vars() is the largest id the formula may mention.
class Qcnf {
 public:
  Qcnf() = default;
  Qcnf(std::vector<Block> blocks, std::vector<Clause> matrix, VarId num_vars = 0)
      : blocks_(std::move(blocks)), matrix_(std::move(matrix)), num_vars_(num_vars) {
    for (auto& b : blocks_) std::sort(b.vars.begin(), b.vars.end());
    for (const auto& b : blocks_)
      for (VarId v : b.vars) num_vars_ = std::max(num_vars_, v);
    block_of_.assign(num_vars_ + 1, -1);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      for (VarId v : blocks_[i].vars) {
        if (v == 0) throw Error("variable 0 in prefix");
        if (block_of_[v] != -1) throw Error("variable " + std::to_string(v) + " quantified twice");
        block_of_[v] = static_cast<int>(i);
      }
    }
    for (const auto& c : matrix_)
      for (Literal l : c)
        if (l.var() > num_vars_ || block_of_[l.var()] == -1)
          throw Error("free variable " + std::to_string(l.var()) + " in matrix");
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Clause>& matrix() const { return matrix_; }
  VarId num_vars() const { return num_vars_; }

  const std::map<VarId, std::string>& names() const { return names_; }
  void set_name(VarId v, std::string name) { names_[v] = std::move(name); }

  bool quantified(VarId v) const { return v < block_of_.size() && block_of_[v] != -1; }

  /// Index of the block quantifying v; throws for unknown variables.
  std::size_t block_of(VarId v) const {
    if (!quantified(v)) throw Error("unknown variable " + std::to_string(v));
    return static_cast<std::size_t>(block_of_[v]);
  }
  Quantifier quantifier_of(VarId v) const { return blocks_[block_of(v)].quantifier; }
  bool is_universal(VarId v) const { return quantifier_of(v) == Quantifier::forall; }
  bool is_existential(VarId v) const { return quantifier_of(v) == Quantifier::exists; }

  /// x <_Q y.
  bool left_of(VarId x, VarId y) const { return block_of(x) < block_of(y); }

  std::vector<VarId> vars() const { return collect([](Quantifier) { return true; }); }
  std::vector<VarId> exist_vars() const {
    return collect([](Quantifier q) { return q == Quantifier::exists; });
  }
  std::vector<VarId> univ_vars() const {
    return collect([](Quantifier q) { return q == Quantifier::forall; });
  }

  std::size_t num_universal_blocks() const {
    return static_cast<std::size_t>(std::count_if(blocks_.begin(), blocks_.end(), [](const Block& b) {
      return b.quantifier == Quantifier::forall && !b.vars.empty();
    }));
  }

  /// Merges adjacent blocks with the same quantifier and drops empty ones.
  Qcnf normalized() const {
    std::vector<Block> merged;
    for (const auto& b : blocks_) {
      if (b.vars.empty()) continue;
      if (!merged.empty() && merged.back().quantifier == b.quantifier) {
        merged.back().vars.insert(merged.back().vars.end(), b.vars.begin(), b.vars.end());
        std::sort(merged.back().vars.begin(), merged.back().vars.end());
      } else {
        merged.push_back(b);
      }
    }
    Qcnf out(std::move(merged), matrix_, num_vars_);
    out.names_ = names_;
    return out;
  }

  bool operator==(const Qcnf& o) const { return blocks_ == o.blocks_ && matrix_ == o.matrix_; }

 private:
  template <class Pred>
  std::vector<VarId> collect(Pred pred) const {
    std::vector<VarId> out;
    for (const auto& b : blocks_)
      if (pred(b.quantifier)) out.insert(out.end(), b.vars.begin(), b.vars.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Block> blocks_;
  std::vector<Clause> matrix_;
  VarId num_vars_ = 0;
  std::vector<int> block_of_;
  std::map<VarId, std::string> names_;
};

/// Φ[τ]: assigned variables leave the prefix (empty blocks are dropped, the
/// remaining blocks keep their identity), satisfied clauses are removed and
/// falsified literals deleted.
inline Qcnf restrict_qcnf(const Qcnf& phi, const Assignment& tau) {
  for (const auto& [v, b] : tau.bindings())
    if (!phi.quantified(v)) throw Error("assignment binds unknown variable " + std::to_string(v));
  std::vector<Block> blocks;
  for (const auto& b : phi.blocks()) {
    Block nb{b.quantifier, {}};
    for (VarId v : b.vars)
      if (!tau.contains(v)) nb.vars.push_back(v);
    if (!nb.vars.empty()) blocks.push_back(std::move(nb));
  }
  std::vector<Clause> matrix;
  for (const auto& c : phi.matrix())
    if (auto r = restrict_clause(c, tau)) matrix.push_back(std::move(*r));
  Qcnf out(std::move(blocks), std::move(matrix), phi.num_vars());
  for (const auto& [v, name] : phi.names())
    if (!tau.contains(v)) out.set_name(v, name);
  return out;
}

/// Index of the rightmost block of phi containing one of `vars`.
inline std::optional<std::size_t> rightmost_block(const Qcnf& phi, std::span<const VarId> vars) {
  std::optional<std::size_t> out;
  for (VarId v : vars) {
    std::size_t b = phi.block_of(v);
    if (!out || b > *out) out = b;
  }
  return out;
}

/// Checks that β is a nonempty assignment to a universal block that is the
/// rightmost block of a line over `line_vars`; returns an error message or "".
inline std::string reduction_violation(const Qcnf& phi, std::span<const VarId> line_vars, const Assignment& beta) {
  if (beta.empty()) return "empty reduction assignment";
  auto right = rightmost_block(phi, line_vars);
  for (const auto& [v, b] : beta.bindings()) {
    if (!phi.quantified(v)) return "variable " + std::to_string(v) + " not in the formula";
    if (!phi.is_universal(v)) return "variable " + std::to_string(v) + " is existential";
    if (!right || phi.block_of(v) != *right) return "variable " + std::to_string(v) + " is not in the rightmost block of the line";
  }
  return "";
}

inline std::vector<VarId> matrix_vars(std::span<const Clause> cnf) {
  std::vector<VarId> out;
  for (const auto& c : cnf)
    for (Literal l : c) out.push_back(l.var());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// φ[τ] for τ total on vars(φ).
inline bool eval_matrix(std::span<const Clause> cnf, const Assignment& tau) {
  for (const auto& c : cnf) {
    bool sat = false;
    for (Literal l : c) {
      auto b = tau.value(l.var());
      if (!b) throw Error("assignment is not total: variable " + std::to_string(l.var()) + " unbound");
      if (l.satisfied_by(*b)) sat = true;
    }
    if (!sat) return false;
  }
  return true;
}

/// Dense assignment indexed by VarId for inner loops: -1 unassigned, 0, 1.
class DenseAssignment {
 public:
  explicit DenseAssignment(VarId num_vars = 0) : vals_(num_vars + 1, -1) {}

  void set(VarId v, bool b) { vals_[v] = b ? 1 : 0; }
  void unset(VarId v) { vals_[v] = -1; }
  int get(VarId v) const { return vals_[v]; }
  bool assigned(VarId v) const { return vals_[v] >= 0; }
  /// 1 true, 0 false, -1 unassigned.
  int value(Literal l) const {
    int v = vals_[l.var()];
    if (v < 0) return -1;
    return (v == 1) == l.positive() ? 1 : 0;
  }
  void assign(const Assignment& a) {
    for (const auto& [v, b] : a.bindings()) set(v, b);
  }

 private:
  std::vector<signed char> vals_;
};

}  // namespace qbfscc
