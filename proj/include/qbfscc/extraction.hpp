#pragma once

// Round-based strategy extraction from a refutation with a response map set.
// Round i: with σ the play so far and α_i the move on the existential block
// before U_i, take the first line F over blocks up to U_i with F[σ ∪ α_i]
// not a tautology. If F's rightmost block is U_i its map answers; otherwise
// the map of the first line whose rightmost block is U_i does, and if there
// is no such line the answer is all zeros.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qbfscc/line.hpp"
#include "qbfscc/response.hpp"
#include "qbfscc/semantics.hpp"

namespace qbfscc {

class ExtractionSession {
 public:
  ExtractionSession(const Qcnf& phi, std::vector<Line> lines, ResponseMapSet maps, std::size_t cap = kDefaultSemanticCap)
      : data_(std::make_shared<Data>(Data{phi, std::move(lines), std::move(maps), cap, {}, {}})) {
    Data& d = *data_;
    if (d.maps.size() != d.lines.size()) throw Error("one response map slot per line is required");
    for (std::size_t i = 0; i < d.lines.size(); ++i) {
      for (VarId v : line_vars(d.lines[i]))
        if (!d.phi.quantified(v)) throw Error("line " + std::to_string(i + 1) + " uses a variable outside the prefix");
      if (line_reducible(d.phi, d.lines[i]) != d.maps[i].has_value())
        throw Error("line " + std::to_string(i + 1) + (d.maps[i] ? " is not reducible but has a map" : " is reducible but has no map"));
      if (d.maps[i]) {
        std::string why = audit_response_map(d.phi, d.lines[i], *d.maps[i], d.cap);
        if (!why.empty()) throw Error("map of line " + std::to_string(i + 1) + ": " + why);
      }
    }
    for (std::size_t b = 0; b < d.phi.blocks().size(); ++b)
      if (d.phi.blocks()[b].quantifier == Quantifier::forall && !d.phi.blocks()[b].vars.empty()) d.rounds.push_back(b);
    for (const auto& l : d.lines) d.block_last.push_back(line_rightmost_block(d.phi, l));
  }

  std::size_t num_rounds() const { return data_->rounds.size(); }
  std::size_t round() const { return next_; }
  /// Universal block answered in round i.
  std::size_t round_block(std::size_t i) const { return data_->rounds.at(i); }
  /// Existential variables the caller assigns before round i.
  std::vector<VarId> round_inputs(std::size_t i) const {
    const auto& rounds = data_->rounds;
    std::size_t lo = i == 0 ? 0 : rounds.at(i - 1) + 1;
    std::vector<VarId> out;
    for (std::size_t b = lo; b < rounds.at(i); ++b)
      if (data_->phi.blocks()[b].quantifier == Quantifier::exists)
        for (VarId v : data_->phi.blocks()[b].vars) out.push_back(v);
    return out;
  }
  const Assignment& play() const { return sigma_; }
  std::size_t defaulted_rounds() const { return defaulted_; }

  /// Binds α_i, then returns β_i on the whole block U_i.
  Assignment play_round(const Assignment& alpha) {
    const Data& d = *data_;
    if (next_ >= d.rounds.size()) throw Error("no rounds left");
    std::vector<VarId> inputs = round_inputs(next_);
    if (alpha.size() != inputs.size()) throw Error("round " + std::to_string(next_ + 1) + " expects an assignment to its existential block");
    for (VarId v : inputs)
      if (!alpha.contains(v)) throw Error("round " + std::to_string(next_ + 1) + " expects variable " + std::to_string(v));
    for (const auto& [v, b] : alpha.bindings()) sigma_.bind(v, b);
    const std::size_t ub = d.rounds[next_];
    std::optional<std::size_t> f;
    for (std::size_t i = 0; i < d.lines.size() && !f; ++i) {
      if (d.block_last[i] && *d.block_last[i] > ub) continue;
      if (!line_is_tautology(line_restrict(d.lines[i], sigma_), d.cap)) f = i;
    }
    std::optional<std::size_t> source;
    if (f && d.block_last[*f] == ub) {
      source = f;
    } else {
      for (std::size_t i = 0; i < d.lines.size() && !source; ++i)
        if (d.block_last[i] == ub) source = i;
    }
    Assignment beta;
    for (VarId v : d.phi.blocks()[ub].vars) beta.set(v, false);
    if (source) {
      Assignment answer = d.maps[*source]->respond(sigma_);
      for (const auto& [v, b] : answer.bindings()) beta.set(v, b);
    } else {
      ++defaulted_;
    }
    for (const auto& [v, b] : beta.bindings()) sigma_.bind(v, b);
    ++next_;
    return beta;
  }

 private:
  struct Data {
    Qcnf phi;
    std::vector<Line> lines;
    ResponseMapSet maps;
    std::size_t cap;
    std::vector<std::size_t> rounds;
    std::vector<std::optional<std::size_t>> block_last;
  };
  std::shared_ptr<Data> data_;
  std::size_t next_ = 0;
  std::size_t defaulted_ = 0;
  Assignment sigma_;
};

struct ExtractionResult {
  Strategy strategy;
  std::size_t defaulted_plays = 0;  // plays in which some round used the all-zero default
};

/// Tabulates the extracted strategy over every existential assignment.
inline ExtractionResult extract_strategy(const Qcnf& phi, const std::vector<Line>& lines, const ResponseMapSet& maps,
                                         std::size_t cap = kDefaultVarCap) {
  ExtractionSession proto(phi, lines, maps);
  AssignmentSpace e(phi.exist_vars()), u(phi.univ_vars());
  if (e.width() > cap) throw CapError("extraction over " + std::to_string(e.width()) + " existential variables exceeds cap");
  std::vector<std::uint64_t> table(e.count());
  std::size_t defaulted = 0;
  // Depth-first over rounds so that each prefix is played once.
  std::vector<std::vector<VarId>> inputs;
  for (std::size_t i = 0; i < proto.num_rounds(); ++i) inputs.push_back(proto.round_inputs(i));
  auto rec = [&](auto&& self, const ExtractionSession& session) -> void {
    std::size_t i = session.round();
    if (i == session.num_rounds()) {
      // existential variables after the last round do not influence the answer
      std::vector<VarId> rest;
      for (VarId v : e.vars())
        if (!session.play().contains(v)) rest.push_back(v);
      AssignmentSpace tail(rest);
      std::uint64_t answer = u.index_of(session.play());
      for (std::uint64_t t = 0; t < tail.count(); ++t) {
        Assignment full = session.play(), rest_t = tail.at(t);
        for (const auto& [v, b] : rest_t.bindings()) full.bind(v, b);
        table[e.index_of(full)] = answer;
      }
      if (session.defaulted_rounds()) defaulted += tail.count();
      return;
    }
    AssignmentSpace in(inputs[i]);
    for (std::uint64_t a = 0; a < in.count(); ++a) {
      ExtractionSession next = session;
      next.play_round(in.at(a));
      self(self, next);
    }
  };
  rec(rec, proto);
  return {Strategy(std::move(e), std::move(u), std::move(table)), defaulted};
}

inline ExtractionResult extract_strategy(const Qcnf& phi, const std::vector<Line>& lines, std::size_t cap = kDefaultVarCap) {
  return extract_strategy(phi, lines, default_response_maps(phi, lines), cap);
}

}  // namespace qbfscc
