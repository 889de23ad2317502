#pragma once

// Response maps for reducible lines: for each assignment α to the outer
// variables X = vars(L) \ U, a response on U = vars(L) ∩ rightmost block
// that falsifies L[α] whenever L[α] is not a tautology.

#include <boost/dynamic_bitset.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qbfscc/cp.hpp"
#include "qbfscc/hitting_set.hpp"
#include "qbfscc/line.hpp"
#include "qbfscc/pcr.hpp"

namespace qbfscc {

class ResponseMap {
 public:
  ResponseMap() = default;
  /// Constant map to β (an index into the U space).
  static ResponseMap constant(AssignmentSpace x, AssignmentSpace u, std::uint64_t beta) {
    ResponseMap r(std::move(x), std::move(u));
    r.constant_ = true;
    r.table_ = {beta};
    return r;
  }
  static ResponseMap table(AssignmentSpace x, AssignmentSpace u, std::vector<std::uint64_t> t) {
    ResponseMap r(std::move(x), std::move(u));
    if (t.size() != r.x_.count()) throw Error("response table size does not match the outer space");
    r.table_ = std::move(t);
    return r;
  }

  const AssignmentSpace& x_space() const { return x_; }
  const AssignmentSpace& u_space() const { return u_; }
  bool is_constant() const { return constant_; }

  std::uint64_t respond_index(std::uint64_t alpha) const { return constant_ ? table_.front() : table_.at(alpha); }
  /// α must bind every outer variable; extra bindings are ignored.
  Assignment respond(const Assignment& alpha) const { return u_.at(respond_index(constant_ ? 0 : x_.index_of(alpha))); }

  std::size_t range() const {
    std::set<std::uint64_t> s(table_.begin(), table_.end());
    return s.size();
  }

 private:
  ResponseMap(AssignmentSpace x, AssignmentSpace u) : x_(std::move(x)), u_(std::move(u)) {}

  AssignmentSpace x_, u_;
  bool constant_ = false;
  std::vector<std::uint64_t> table_;
};

/// Outer and universal spaces of a reducible line; DomainError otherwise.
inline std::pair<AssignmentSpace, AssignmentSpace> response_spaces(const Qcnf& phi, const Line& l) {
  if (!line_reducible(phi, l)) throw DomainError("line is not reducible");
  std::size_t right = *line_rightmost_block(phi, l);
  std::vector<VarId> x, u;
  for (VarId v : line_vars(l)) (phi.block_of(v) == right ? u : x).push_back(v);
  return {AssignmentSpace(std::move(x)), AssignmentSpace(std::move(u))};
}

/// W(α) for every α: bit β is set iff L[α ∪ β] is false.
inline std::vector<boost::dynamic_bitset<>> falsifying_sets(const Qcnf& phi, const Line& l, std::size_t cap = kDefaultSemanticCap) {
  auto [x, u] = response_spaces(phi, l);
  if (x.width() + u.width() > cap)
    throw CapError("response sets over " + std::to_string(x.width() + u.width()) + " variables exceed cap " + std::to_string(cap));
  auto vars = line_vars(l);
  DenseAssignment d(vars.back());
  std::vector<boost::dynamic_bitset<>> out(x.count(), boost::dynamic_bitset<>(u.count()));
  for (std::uint64_t a = 0; a < x.count(); ++a) {
    for (std::size_t j = 0; j < x.width(); ++j) d.set(x.vars()[j], x.bit(a, j));
    for (std::uint64_t b = 0; b < u.count(); ++b) {
      for (std::size_t j = 0; j < u.width(); ++j) d.set(u.vars()[j], u.bit(b, j));
      if (!line_holds(l, d)) out[a].set(b);
    }
  }
  return out;
}

/// Audit: R(α) falsifies L[α] whenever L[α] is not a tautology.
inline std::string audit_response_map(const Qcnf& phi, const Line& l, const ResponseMap& r, std::size_t cap = kDefaultSemanticCap) {
  auto [x, u] = response_spaces(phi, l);
  if (x.vars() != r.x_space().vars() || u.vars() != r.u_space().vars()) return "response map spaces do not match the line";
  auto w = falsifying_sets(phi, l, cap);
  for (std::uint64_t a = 0; a < w.size(); ++a)
    if (w[a].any() && !w[a].test(r.respond_index(a)))
      return "response " + std::to_string(r.respond_index(a)) + " does not falsify the line under outer assignment " + std::to_string(a);
  return "";
}

struct MinResponse {
  std::size_t range = 1;
  ResponseMap map;
};

/// Smallest range of any response map, by exact minimum hitting set over
/// the nonempty W(α); tautological restrictions reuse the first response.
inline MinResponse min_response_range(const Qcnf& phi, const Line& l, std::size_t cap = kDefaultSemanticCap) {
  auto [x, u] = response_spaces(phi, l);
  auto w = falsifying_sets(phi, l, cap);
  std::vector<boost::dynamic_bitset<>> sets;
  std::set<boost::dynamic_bitset<>> seen;
  for (const auto& s : w)
    if (s.any() && seen.insert(s).second) sets.push_back(s);
  std::vector<std::size_t> hit = sets.empty() ? std::vector<std::size_t>{} : min_hitting_set(u.count(), sets);
  std::uint64_t fallback = hit.empty() ? 0 : hit.front();
  std::vector<std::uint64_t> table(x.count(), fallback);
  for (std::uint64_t a = 0; a < x.count(); ++a)
    for (std::size_t h : hit)
      if (w[a].test(h)) {
        table[a] = h;
        break;
      }
  ResponseMap map = ResponseMap::table(x, u, std::move(table));
  return {map.range(), map};
}

/// Greedy map: reuse the earliest chosen response that falsifies L[α],
/// otherwise choose the first fresh falsifying one. For polynomial lines the
/// range is at most the number of distinct U-monomials.
inline ResponseMap greedy_response_map(const Qcnf& phi, const Line& l, std::size_t cap = kDefaultSemanticCap) {
  auto [x, u] = response_spaces(phi, l);
  auto w = falsifying_sets(phi, l, cap);
  std::vector<std::uint64_t> chosen;
  std::vector<std::optional<std::uint64_t>> pick(x.count());
  for (std::uint64_t a = 0; a < x.count(); ++a) {
    if (w[a].none()) continue;
    for (std::uint64_t c : chosen)
      if (w[a].test(c)) {
        pick[a] = c;
        break;
      }
    if (!pick[a]) {
      pick[a] = w[a].find_first();
      chosen.push_back(*pick[a]);
    }
  }
  std::uint64_t fallback = chosen.empty() ? 0 : chosen.front();
  std::vector<std::uint64_t> table(x.count());
  for (std::uint64_t a = 0; a < x.count(); ++a) table[a] = pick[a].value_or(fallback);
  return ResponseMap::table(x, u, std::move(table));
}

inline ResponseMap clause_response_map(const Qcnf& phi, const Clause& c) {
  auto [x, u] = response_spaces(phi, c);
  Assignment beta;
  for (Literal l : c)
    if (phi.block_of(l.var()) == phi.block_of(u.vars().front())) beta.set(l.var(), !l.positive());
  return ResponseMap::constant(x, u, u.index_of(beta));
}

inline ResponseMap cp_response_map(const Qcnf& phi, const LinearInequality& l) {
  auto [x, u] = response_spaces(phi, l);
  return ResponseMap::constant(x, u, u.index_of(cp_response(phi, l)));
}

/// The map a line's own system provides: constant for clauses and
/// inequalities, greedy for polynomials, minimum for formulas.
inline ResponseMap default_response_map(const Qcnf& phi, const Line& l, std::size_t cap = kDefaultSemanticCap) {
  switch (l.index()) {
    case 0: return clause_response_map(phi, std::get<Clause>(l));
    case 2: return cp_response_map(phi, std::get<LinearInequality>(l));
    case 3: return greedy_response_map(phi, l, cap);
    default: return min_response_range(phi, l, cap).map;
  }
}

/// One entry per line; nullopt for lines that are not reducible.
using ResponseMapSet = std::vector<std::optional<ResponseMap>>;

inline ResponseMapSet default_response_maps(const Qcnf& phi, const std::vector<Line>& lines, std::size_t cap = kDefaultSemanticCap) {
  ResponseMapSet out;
  for (const auto& l : lines) {
    if (line_reducible(phi, l)) out.push_back(default_response_map(phi, l, cap));
    else out.push_back(std::nullopt);
  }
  return out;
}

inline ResponseMapSet min_response_maps(const Qcnf& phi, const std::vector<Line>& lines, std::size_t cap = kDefaultSemanticCap) {
  ResponseMapSet out;
  for (const auto& l : lines) {
    if (line_reducible(phi, l)) out.push_back(min_response_range(phi, l, cap).map);
    else out.push_back(std::nullopt);
  }
  return out;
}

/// Largest range in the set, at least 1.
inline std::size_t set_capacity(const ResponseMapSet& maps) {
  std::size_t c = 1;
  for (const auto& m : maps)
    if (m) c = std::max(c, m->range());
  return c;
}

struct CapacityReport {
  std::size_t capacity = 1;
  std::optional<std::size_t> line;  // index of a line attaining it
  std::size_t reducible_lines = 0;
};

/// Maximum over reducible lines of the minimum response range.
inline CapacityReport capacity(const Qcnf& phi, const std::vector<Line>& lines, std::size_t cap = kDefaultSemanticCap) {
  CapacityReport r;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!line_reducible(phi, lines[i])) continue;
    ++r.reducible_lines;
    std::size_t k = min_response_range(phi, lines[i], cap).range;
    if (!r.line || k > r.capacity) {
      r.capacity = std::max(r.capacity, k);
      r.line = i;
    }
  }
  return r;
}

}  // namespace qbfscc
