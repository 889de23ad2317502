#pragma once

// Random Q(n,m,c) study: per trial, whether every component Ψ_i is false,
// how many admit no constant response, and the counting bound on cost.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qbfscc/generators.hpp"
#include "qbfscc/rng.hpp"
#include "qbfscc/semantics.hpp"
#include "qbfscc/twosat.hpp"

namespace qbfscc {

struct StudyRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // formula seed, reproducible with gen randq
  std::size_t n = 0, m = 0, cn = 0;
  bool all_components_false = false;
  std::size_t k_nonconstant = 0;
  double bound = 1.0;
  std::optional<std::size_t> exact_cost;
  double runtime_ms = 0;
};

struct StudyOptions {
  std::size_t n = 30, m = 3, cn = 45;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  bool exact_cost = false;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::size_t var_cap = kDefaultVarCap;
  std::uint64_t strategy_budget = kDefaultStrategyBudget;
};

inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) { return SplitMix64::substream(seed, trial).next(); }

inline StudyRow study_trial(const StudyOptions& opt, std::size_t trial) {
  auto start = std::chrono::steady_clock::now();
  StudyRow row;
  row.trial = trial;
  row.seed = trial_seed(opt.seed, trial);
  row.n = opt.n;
  row.m = opt.m;
  row.cn = opt.cn;
  RandomQ q = gen_random_q(opt.n, opt.m, opt.cn, row.seed);
  LowerBoundReport lb = cost_lower_bound_q(q.meta);
  row.all_components_false = lb.certified;
  row.k_nonconstant = lb.k;
  row.bound = lb.bound;
  if (opt.exact_cost && lb.certified) row.exact_cost = cost_exact_general(q.formula, opt.strategy_budget, opt.var_cap).cost;
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

/// Runs trials concurrently; rows come back in trial order. The first
/// exception thrown by any trial is rethrown.
template <class Fn>
auto parallel_trials(std::size_t trials, std::size_t threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Row = decltype(fn(std::size_t{}));
  std::vector<std::optional<Row>> slots(trials);
  std::vector<std::exception_ptr> errors(trials);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(trials, 1));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < trials;) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Row> out;
  out.reserve(trials);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline std::vector<StudyRow> random_study(const StudyOptions& opt) {
  return parallel_trials(opt.trials, opt.threads, [&](std::size_t i) { return study_trial(opt, i); });
}

struct StudySummary {
  std::size_t trials = 0;
  double all_false_fraction = 0;
  double mean_k_nonconstant = 0;
  double mean_k_over_n = 0;
};

inline StudySummary summarize(const std::vector<StudyRow>& rows) {
  StudySummary s;
  s.trials = rows.size();
  if (rows.empty()) return s;
  double all = 0, k = 0, kn = 0;
  for (const auto& r : rows) {
    all += r.all_components_false;
    k += static_cast<double>(r.k_nonconstant);
    kn += static_cast<double>(r.k_nonconstant) / static_cast<double>(r.n);
  }
  s.all_false_fraction = all / static_cast<double>(rows.size());
  s.mean_k_nonconstant = k / static_cast<double>(rows.size());
  s.mean_k_over_n = kn / static_cast<double>(rows.size());
  return s;
}

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline std::string study_csv(const std::vector<StudyRow>& rows, bool timing = false) {
  std::ostringstream out;
  out << "trial,seed,n,m,cn,all_components_false,k_nonconstant,bound,exact_cost" << (timing ? ",runtime_ms" : "") << "\n";
  for (const auto& r : rows) {
    out << r.trial << ',' << r.seed << ',' << r.n << ',' << r.m << ',' << r.cn << ',' << (r.all_components_false ? "true" : "false")
        << ',' << r.k_nonconstant << ',' << format_real(r.bound) << ',';
    if (r.exact_cost) out << *r.exact_cost;
    if (timing) out << ',' << format_real(r.runtime_ms);
    out << "\n";
  }
  return out.str();
}

/// Fraction of unsatisfiable uniform random 2-CNFs.
inline double two_sat_unsat_fraction(std::size_t n, std::size_t clauses, std::size_t trials, std::uint64_t seed,
                                     std::size_t threads = 0) {
  auto unsat = parallel_trials(trials, threads, [&](std::size_t i) {
    return !solve_2sat(gen_random_2sat(n, clauses, trial_seed(seed, i))).sat;
  });
  return static_cast<double>(std::count(unsat.begin(), unsat.end(), true)) / static_cast<double>(std::max<std::size_t>(trials, 1));
}

}  // namespace qbfscc
