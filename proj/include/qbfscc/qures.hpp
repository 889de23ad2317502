#pragma once

// QU-Resolution: proofs, checker, trace format, normal form, restriction,
// and a small saturation prover.

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qbfscc/core.hpp"

namespace qbfscc {

enum class QRule { axiom, resolve, reduce, weaken };

inline const char* rule_name(QRule r) {
  switch (r) {
    case QRule::axiom: return "axiom";
    case QRule::resolve: return "resolve";
    case QRule::reduce: return "reduce";
    case QRule::weaken: return "weaken";
  }
  return "?";
}

struct QUResStep {
  std::size_t id = 0;
  Clause clause;
  QRule rule = QRule::axiom;
  std::vector<std::size_t> premises;  // ids
};

struct QUResProof {
  std::vector<QUResStep> steps;

  std::size_t size() const { return steps.size(); }
  const QUResStep& conclusion() const {
    if (steps.empty()) throw Error("empty proof");
    return steps.back();
  }
  /// Position of the step with the given id.
  std::size_t index_of(std::size_t id) const {
    auto it = std::lower_bound(steps.begin(), steps.end(), id,
                               [](const QUResStep& s, std::size_t v) { return s.id < v; });
    if (it == steps.end() || it->id != id) throw Error("unknown step id " + std::to_string(id));
    return static_cast<std::size_t>(it - steps.begin());
  }
};

/// Outcome of a proof check; `step` is the offending step id when !ok.
struct CheckResult {
  bool ok = true;
  std::size_t step = 0;
  std::string rule;
  std::string message;

  explicit operator bool() const { return ok; }
  static CheckResult accept() { return {}; }
  static CheckResult reject(std::size_t step, std::string rule, std::string message) {
    return {false, step, std::move(rule), std::move(message)};
  }
  std::string to_string() const {
    if (ok) return "accepted";
    return "step " + std::to_string(step) + " (" + rule + "): " + message;
  }
};

struct QUResOptions {
  bool refutation = true;  // conclusion must be the empty clause
  bool strict_qres = false;  // forbid universal pivots
};

/// The unique variable on which a and b clash, if exactly one exists.
inline std::optional<VarId> unique_pivot(const Clause& a, const Clause& b) {
  std::optional<VarId> pivot;
  for (Literal l : a)
    if (b.contains(l.negated())) {
      if (pivot) return std::nullopt;
      pivot = l.var();
    }
  return pivot;
}

inline Clause resolvent(const Clause& a, const Clause& b, VarId pivot) {
  std::vector<Literal> lits;
  for (Literal l : a)
    if (l.var() != pivot) lits.push_back(l);
  for (Literal l : b)
    if (l.var() != pivot) lits.push_back(l);
  return Clause(std::move(lits));
}

/// Universal literals of c that may be removed: those right of every existential of c.
inline Clause reducible_literals(const Qcnf& phi, const Clause& c) {
  std::size_t max_e = 0;
  bool any_e = false;
  for (Literal l : c)
    if (phi.is_existential(l.var())) {
      any_e = true;
      max_e = std::max(max_e, phi.block_of(l.var()));
    }
  std::vector<Literal> out;
  for (Literal l : c)
    if (phi.is_universal(l.var()) && (!any_e || phi.block_of(l.var()) > max_e)) out.push_back(l);
  return Clause(std::move(out));
}

/// Maximal universal reduction of c.
inline Clause max_reduce(const Qcnf& phi, const Clause& c) { return clause_without(c, reducible_literals(phi, c)); }

inline CheckResult check_qures(const Qcnf& phi, const QUResProof& pi, QUResOptions opt = {}) {
  std::map<std::size_t, std::size_t> pos;
  std::set<Clause> matrix(phi.matrix().begin(), phi.matrix().end());
  for (std::size_t i = 0; i < pi.steps.size(); ++i) {
    const QUResStep& s = pi.steps[i];
    auto reject = [&](const std::string& msg) { return CheckResult::reject(s.id, rule_name(s.rule), msg); };
    if (i > 0 && s.id <= pi.steps[i - 1].id) return reject("step ids must be strictly increasing");
    for (Literal l : s.clause)
      if (!phi.quantified(l.var())) return reject("variable " + std::to_string(l.var()) + " not in the formula");
    if (s.clause.is_tautology()) return reject("tautological clause " + s.clause.to_string());
    std::vector<const Clause*> ants;
    for (std::size_t p : s.premises) {
      auto it = pos.find(p);
      if (it == pos.end()) return reject("dangling antecedent id " + std::to_string(p));
      ants.push_back(&pi.steps[it->second].clause);
    }
    switch (s.rule) {
      case QRule::axiom:
        if (!ants.empty()) return reject("axiom with antecedents");
        if (!matrix.count(s.clause)) return reject("clause " + s.clause.to_string() + " is not in the matrix");
        break;
      case QRule::resolve: {
        if (ants.size() != 2) return reject("resolution needs two antecedents");
        auto pivot = unique_pivot(*ants[0], *ants[1]);
        if (!pivot) return reject("antecedents do not clash on exactly one variable");
        if (opt.strict_qres && phi.is_universal(*pivot))
          return reject("universal pivot " + std::to_string(*pivot) + " in strict Q-Res mode");
        Clause r = resolvent(*ants[0], *ants[1], *pivot);
        if (!(r == s.clause)) return reject("expected resolvent " + r.to_string() + ", got " + s.clause.to_string());
        break;
      }
      case QRule::reduce: {
        if (ants.size() != 1) return reject("reduction needs one antecedent");
        const Clause& a = *ants[0];
        if (!s.clause.subset_of(a) || s.clause == a) return reject("reduction result is not a proper subset");
        Clause removed = clause_without(a, s.clause);
        Clause allowed = reducible_literals(phi, a);
        for (Literal l : removed) {
          if (!phi.is_universal(l.var())) return reject("removed literal " + std::to_string(l.to_dimacs()) + " is existential");
          if (!allowed.contains(l))
            return reject("removed literal " + std::to_string(l.to_dimacs()) + " is left of an existential in the clause");
        }
        break;
      }
      case QRule::weaken: {
        if (ants.size() != 1) return reject("weakening needs one antecedent");
        if (!ants[0]->subset_of(s.clause) || s.clause == *ants[0]) return reject("weakening result is not a proper superset");
        break;
      }
    }
    pos[s.id] = i;
  }
  if (opt.refutation) {
    if (pi.steps.empty()) return CheckResult::reject(0, "conclusion", "empty proof");
    if (!pi.steps.back().clause.empty())
      return CheckResult::reject(pi.steps.back().id, "conclusion", "last clause is not empty");
  }
  return CheckResult::accept();
}

// ---- trace format: <id> <lit>* 0 <ant>* 0 ----

inline std::string write_qures(const QUResProof& pi) {
  std::ostringstream out;
  for (const auto& s : pi.steps) {
    out << s.id;
    for (Literal l : s.clause) out << " " << l.to_dimacs();
    out << " 0";
    for (std::size_t p : s.premises) out << " " << p;
    out << " 0\n";
  }
  return out.str();
}

inline QUResProof parse_qures(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  QUResProof pi;
  std::map<std::size_t, Clause> known;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<long long> nums;
    std::string tok;
    bool comment = false;
    while (ls >> tok) {
      if (nums.empty() && tok == "c") {
        comment = true;
        break;
      }
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw ParseError(lineno, "expected an integer, got '" + tok + "'");
      }
      if (used != tok.size()) throw ParseError(lineno, "expected an integer, got '" + tok + "'");
      nums.push_back(v);
    }
    if (comment || nums.empty()) continue;
    if (nums[0] <= 0) throw ParseError(lineno, "step id must be positive");
    QUResStep s;
    s.id = static_cast<std::size_t>(nums[0]);
    if (!pi.steps.empty() && s.id <= pi.steps.back().id) throw ParseError(lineno, "step ids must be strictly increasing");
    std::size_t i = 1;
    std::vector<Literal> lits;
    for (; i < nums.size() && nums[i] != 0; ++i) lits.push_back(Literal::from_dimacs(nums[i]));
    if (i == nums.size()) throw ParseError(lineno, "unterminated literal list");
    s.clause = Clause(std::move(lits));
    for (++i; i < nums.size() && nums[i] != 0; ++i) {
      if (nums[i] < 0) throw ParseError(lineno, "negative antecedent id");
      s.premises.push_back(static_cast<std::size_t>(nums[i]));
    }
    if (i != nums.size() - 1) throw ParseError(lineno, "unterminated antecedent list");
    switch (s.premises.size()) {
      case 0:
        s.rule = QRule::axiom;
        break;
      case 2:
        s.rule = QRule::resolve;
        break;
      case 1: {
        auto it = known.find(s.premises[0]);
        if (it == known.end()) throw ParseError(lineno, "antecedent " + std::to_string(s.premises[0]) + " not defined");
        const Clause& a = it->second;
        if (s.clause == a) throw ParseError(lineno, "clause equals its antecedent");
        if (s.clause.subset_of(a)) s.rule = QRule::reduce;
        else if (a.subset_of(s.clause)) s.rule = QRule::weaken;
        else throw ParseError(lineno, "single-antecedent step is neither a reduction nor a weakening");
        break;
      }
      default:
        throw ParseError(lineno, "too many antecedents");
    }
    known[s.id] = s.clause;
    pi.steps.push_back(std::move(s));
  }
  return pi;
}

// ---- proof surgery ----

namespace detail {

/// Builds a proof incrementally with clause deduplication, then prunes to
/// the ancestors of the conclusion and renumbers from 1.
class ProofBuilder {
 public:
  /// Returns the index of an existing identical clause or appends.
  std::size_t add(Clause c, QRule rule, std::vector<std::size_t> prem) {
    if (auto it = index_.find(c); it != index_.end()) return it->second;
    std::size_t idx = steps_.size();
    index_.emplace(c, idx);
    steps_.push_back({idx, std::move(c), rule, std::move(prem)});
    return idx;
  }
  const Clause& clause(std::size_t idx) const { return steps_[idx].clause; }

  QUResProof finish(std::size_t conclusion) const {
    std::vector<bool> keep(steps_.size(), false);
    keep[conclusion] = true;
    for (std::size_t i = conclusion + 1; i-- > 0;)
      if (keep[i])
        for (std::size_t p : steps_[i].premises) keep[p] = true;
    std::vector<std::size_t> newid(steps_.size(), 0);
    QUResProof out;
    for (std::size_t i = 0; i <= conclusion; ++i) {
      if (!keep[i]) continue;
      newid[i] = out.steps.size() + 1;
      QUResStep s = steps_[i];
      s.id = newid[i];
      for (auto& p : s.premises) p = newid[p];
      out.steps.push_back(std::move(s));
    }
    return out;
  }

 private:
  std::vector<QUResStep> steps_;  // id field holds the builder index
  std::map<Clause, std::size_t> index_;
};

}  // namespace detail

/// Normal form: weakenings and redundant resolutions are bypassed, each
/// reduction is made maximal, duplicate clauses merged, and the proof is cut
/// at its first empty clause and pruned to that clause's ancestors.
inline QUResProof normalize(const Qcnf& phi, const QUResProof& pi) {
  if (auto r = check_qures(phi, pi, {.refutation = true}); !r) throw Error("cannot normalize a rejected proof: " + r.to_string());
  detail::ProofBuilder b;
  std::map<std::size_t, std::size_t> map;  // old id -> builder index
  for (const auto& s : pi.steps) {
    std::size_t idx = 0;
    switch (s.rule) {
      case QRule::axiom:
        idx = b.add(s.clause, QRule::axiom, {});
        break;
      case QRule::weaken:
        idx = map.at(s.premises[0]);
        break;
      case QRule::resolve: {
        std::size_t ia = map.at(s.premises[0]), ib = map.at(s.premises[1]);
        const Clause& ca = pi.steps[pi.index_of(s.premises[0])].clause;
        const Clause& cb = pi.steps[pi.index_of(s.premises[1])].clause;
        VarId p = *unique_pivot(ca, cb);
        Literal la = ca.contains(Literal(p, true)) ? Literal(p, true) : Literal(p, false);
        if (!b.clause(ia).contains(la)) {
          idx = ia;
        } else if (!b.clause(ib).contains(la.negated())) {
          idx = ib;
        } else {
          idx = b.add(resolvent(b.clause(ia), b.clause(ib), p), QRule::resolve, {ia, ib});
        }
        break;
      }
      case QRule::reduce: {
        std::size_t ia = map.at(s.premises[0]);
        Clause r = max_reduce(phi, b.clause(ia));
        idx = r == b.clause(ia) ? ia : b.add(std::move(r), QRule::reduce, {ia});
        break;
      }
    }
    map[s.id] = idx;
    if (b.clause(idx).empty()) return b.finish(idx);
  }
  throw Error("normalization did not reach the empty clause");
}

/// π[τ]: the proof replayed on restricted clauses, with satisfied clauses
/// dropped. Result refutes Φ[τ] for existential τ, and for a first-block
/// universal τ falsifying the reduced clause of a normalized proof.
inline QUResProof restrict_proof(const Qcnf& phi, const QUResProof& pi, const Assignment& tau) {
  for (const auto& [v, val] : tau.bindings())
    if (!phi.quantified(v)) throw DomainError("variable " + std::to_string(v) + " is not in the prefix");
  detail::ProofBuilder b;
  std::map<std::size_t, std::optional<std::size_t>> map;  // nullopt = ⊤
  for (const auto& s : pi.steps) {
    std::optional<Clause> target = restrict_clause(s.clause, tau);
    std::optional<std::size_t> idx;
    auto fail = [&]() {
      return Error("restriction breaks step " + std::to_string(s.id) + " (" + rule_name(s.rule) + ")");
    };
    if (!target) {
      map[s.id] = std::nullopt;
      continue;
    }
    switch (s.rule) {
      case QRule::axiom:
        idx = b.add(*target, QRule::axiom, {});
        break;
      case QRule::weaken:
        idx = map.at(s.premises[0]);
        if (!idx) throw fail();
        break;
      case QRule::resolve: {
        auto ia = map.at(s.premises[0]), ib = map.at(s.premises[1]);
        const Clause& ca = pi.steps[pi.index_of(s.premises[0])].clause;
        const Clause& cb = pi.steps[pi.index_of(s.premises[1])].clause;
        VarId p = *unique_pivot(ca, cb);
        Literal la = ca.contains(Literal(p, true)) ? Literal(p, true) : Literal(p, false);
        if (ia && !b.clause(*ia).contains(la)) {
          idx = ia;
        } else if (ib && !b.clause(*ib).contains(la.negated())) {
          idx = ib;
        } else if (ia && ib) {
          idx = b.add(resolvent(b.clause(*ia), b.clause(*ib), p), QRule::resolve, {*ia, *ib});
        } else {
          throw fail();
        }
        break;
      }
      case QRule::reduce: {
        auto ia = map.at(s.premises[0]);
        if (!ia) throw fail();
        const Clause& ante = pi.steps[pi.index_of(s.premises[0])].clause;
        Clause removed = clause_without(ante, s.clause);
        Clause r = clause_without(b.clause(*ia), removed);
        idx = r == b.clause(*ia) ? *ia : b.add(std::move(r), QRule::reduce, {*ia});
        break;
      }
    }
    map[s.id] = idx;
    if (b.clause(*idx).empty()) return b.finish(*idx);
  }
  throw Error("restricted proof does not reach the empty clause");
}

/// U-literals of the antecedent of the reduction that yields the first
/// empty clause of a normalized refutation whose first block is universal.
inline Clause final_reduction_literals(const Qcnf& phi, const QUResProof& pi) {
  for (const auto& s : pi.steps) {
    if (!s.clause.empty()) continue;
    if (s.rule == QRule::axiom) return Clause{};
    if (s.rule != QRule::reduce) throw Error("empty clause is not derived by reduction");
    const Clause& ante = pi.steps[pi.index_of(s.premises[0])].clause;
    for (Literal l : ante)
      if (phi.block_of(l.var()) != 0) throw Error("final reduction does not act on the first block");
    return ante;
  }
  throw Error("no empty clause");
}

struct SaturationLimits {
  std::size_t var_cap = 14;
  std::size_t clause_cap = 200'000;
};

/// Given-clause saturation under resolution and maximal reduction with
/// forward subsumption, clauses processed by width then lexicographically.
/// Returns nullopt when saturation ends without the empty clause.
inline std::optional<QUResProof> prove_qures_saturate(const Qcnf& phi, SaturationLimits lim = {}) {
  if (phi.vars().size() > lim.var_cap)
    throw CapError("saturation over " + std::to_string(phi.vars().size()) + " variables exceeds cap " +
                   std::to_string(lim.var_cap));
  if (phi.matrix().size() > lim.clause_cap) throw CapError("matrix exceeds saturation clause cap");
  detail::ProofBuilder b;
  auto order = [](const std::pair<std::size_t, Clause>& x, const std::pair<std::size_t, Clause>& y) {
    if (x.second.size() != y.second.size()) return x.second.size() > y.second.size();
    return y.second < x.second;
  };
  std::priority_queue<std::pair<std::size_t, Clause>, std::vector<std::pair<std::size_t, Clause>>, decltype(order)> queue(order);
  std::set<Clause> seen;
  std::vector<std::size_t> processed;
  std::size_t generated = 0;

  auto subsumed = [&](const Clause& c) {
    for (std::size_t p : processed)
      if (b.clause(p).subset_of(c)) return true;
    return false;
  };
  // Adds c (derived at builder index idx) after maximal reduction; returns
  // the index of the empty clause if reached.
  auto offer = [&](std::size_t idx) -> std::optional<std::size_t> {
    Clause r = max_reduce(phi, b.clause(idx));
    if (!(r == b.clause(idx))) idx = b.add(std::move(r), QRule::reduce, {idx});
    const Clause& c = b.clause(idx);
    if (c.empty()) return idx;
    if (seen.insert(c).second) {
      if (++generated > lim.clause_cap) throw CapError("saturation exceeded clause cap");
      queue.emplace(idx, c);
    }
    return std::nullopt;
  };

  for (const auto& c : phi.matrix()) {
    if (c.is_tautology()) continue;
    if (auto e = offer(b.add(c, QRule::axiom, {}))) return b.finish(*e);
  }
  while (!queue.empty()) {
    auto [gi, g] = queue.top();
    queue.pop();
    if (subsumed(g)) continue;
    for (std::size_t hi : processed) {
      const Clause& h = b.clause(hi);
      auto pivot = unique_pivot(h, g);
      if (!pivot) continue;
      Clause r = resolvent(h, g, *pivot);
      if (seen.count(r) || subsumed(r)) continue;
      if (auto e = offer(b.add(std::move(r), QRule::resolve, {hi, gi}))) return b.finish(*e);
    }
    processed.push_back(gi);
  }
  return std::nullopt;
}

}  // namespace qbfscc
