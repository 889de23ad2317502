#pragma once

// Size-Cost-Capacity: size(π) · capacity(π) ≥ cost(Φ) for an accepted
// refutation π. QU-Res and CP refutations also satisfy size ≥ cost, PCR
// refutations size² ≥ cost, with size the total number of monomials.

#include <optional>
#include <string>
#include <vector>

#include "qbfscc/cp.hpp"
#include "qbfscc/line.hpp"
#include "qbfscc/pcr.hpp"
#include "qbfscc/qures.hpp"
#include "qbfscc/response.hpp"
#include "qbfscc/semantic_proof.hpp"
#include "qbfscc/semantics.hpp"

namespace qbfscc {

struct SCCOptions {
  std::size_t var_cap = kDefaultVarCap;
  std::size_t semantic_cap = kDefaultSemanticCap;
  std::uint64_t strategy_budget = kDefaultStrategyBudget;
};

struct SCCReport {
  std::string system;
  std::size_t size = 0;
  std::size_t cost = 0;
  std::size_t capacity = 1;
  double ratio = 0;  // cost / capacity, the lower bound on size
  bool inequality = false;
  std::optional<bool> size_at_least_cost;       // QU-Res, CP
  std::optional<bool> size_squared_at_least_cost;  // PCR
  bool holds = false;
  std::vector<std::size_t> cost_block_ranges;
  std::optional<std::size_t> capacity_line;  // 1-based
  std::size_t reduction_steps = 0;
};

namespace detail {

inline SCCReport finish_scc(const Qcnf& phi, std::string system, std::size_t size, const std::vector<Line>& lines,
                            std::size_t reductions, const SCCOptions& opt) {
  SCCReport r;
  r.system = std::move(system);
  r.size = size;
  r.reduction_steps = reductions;
  CostReport c = cost_exact_general(phi, opt.strategy_budget, opt.var_cap);
  r.cost = c.cost;
  r.cost_block_ranges = c.block_ranges;
  CapacityReport cap = capacity(phi, lines, opt.semantic_cap);
  r.capacity = cap.capacity;
  if (cap.line) r.capacity_line = *cap.line + 1;
  r.ratio = static_cast<double>(r.cost) / static_cast<double>(r.capacity);
  r.inequality = r.size * r.capacity >= r.cost;
  r.holds = r.inequality;
  if (r.system == "qures" || r.system == "cp") {
    r.size_at_least_cost = r.size >= r.cost;
    r.holds = r.holds && *r.size_at_least_cost;
  }
  if (r.system == "pcr") {
    r.size_squared_at_least_cost = r.size * r.size >= r.cost;
    r.holds = r.holds && *r.size_squared_at_least_cost;
  }
  return r;
}

inline void require(const CheckResult& r) {
  if (!r) throw VerificationError("proof rejected: " + r.to_string());
}

}  // namespace detail

inline SCCReport verify_scc(const Qcnf& phi, const QUResProof& pi, const SCCOptions& opt = {}) {
  detail::require(check_qures(phi, pi));
  std::vector<Line> lines;
  std::size_t red = 0;
  for (const auto& s : pi.steps) {
    lines.push_back(s.clause);
    red += s.rule == QRule::reduce;
  }
  return detail::finish_scc(phi, "qures", pi.size(), lines, red, opt);
}

inline SCCReport verify_scc(const Qcnf& phi, const CPProof& pi, const SCCOptions& opt = {}) {
  detail::require(check_cp(phi, pi));
  std::vector<Line> lines;
  std::size_t red = 0;
  for (const auto& s : pi.steps) {
    lines.push_back(s.line);
    red += s.rule == CPRule::reduce;
  }
  return detail::finish_scc(phi, "cp", pi.size(), lines, red, opt);
}

inline SCCReport verify_scc(const Qcnf& phi, const PCRProof& pi, const SCCOptions& opt = {}) {
  detail::require(check_pcr(phi, pi));
  std::vector<Line> lines;
  std::size_t red = 0;
  for (const auto& s : pi.steps) {
    lines.push_back(s.poly);
    red += s.rule == PCRRule::reduce;
  }
  return detail::finish_scc(phi, "pcr", pi.monomials(), lines, red, opt);
}

inline SCCReport verify_scc(const Qcnf& phi, const SemanticProof& pi, const SCCOptions& opt = {}) {
  detail::require(check_semantic(phi, pi, opt.semantic_cap));
  std::size_t red = 0;
  for (const auto& s : pi.steps) red += s.rule == SemRule::reduction;
  return detail::finish_scc(phi, "semantic", pi.size(), pi.lines(), red, opt);
}

}  // namespace qbfscc
