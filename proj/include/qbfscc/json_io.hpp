#pragma once

// JSON views of reports, metadata and strategy tables.

#include <json.hpp>

#include "qbfscc/generators.hpp"
#include "qbfscc/qures.hpp"
#include "qbfscc/response.hpp"
#include "qbfscc/scc.hpp"
#include "qbfscc/semantics.hpp"
#include "qbfscc/study.hpp"

namespace qbfscc {

using Json = nlohmann::ordered_json;

inline Json literals_json(const Assignment& a) {
  Json out = Json::array();
  for (Literal l : a.literals()) out.push_back(l.to_dimacs());
  return out;
}

inline Json to_json(const CheckResult& r) {
  Json j{{"accepted", r.ok}};
  if (!r.ok) {
    j["step"] = r.step;
    j["rule"] = r.rule;
    j["message"] = r.message;
  }
  return j;
}

inline Json to_json(const CostReport& c) { return {{"cost", c.cost}, {"block_ranges", c.block_ranges}}; }

inline Json to_json(const CapacityReport& c) {
  Json j{{"capacity", c.capacity}, {"reducible_lines", c.reducible_lines}};
  j["line"] = c.line ? Json(*c.line + 1) : Json(nullptr);
  return j;
}

inline Json to_json(const LowerBoundReport& r) {
  return {{"status", r.status}, {"components_false", r.components_false}, {"k", r.k},
          {"N", r.N},           {"bound", r.bound},                       {"log2_bound", r.log2_bound}};
}

inline Json to_json(const SCCReport& r) {
  Json j{{"system", r.system}, {"size", r.size},         {"cost", r.cost},       {"capacity", r.capacity},
         {"ratio", r.ratio},   {"inequality", r.inequality}};
  if (r.size_at_least_cost) j["size_at_least_cost"] = *r.size_at_least_cost;
  if (r.size_squared_at_least_cost) j["size_squared_at_least_cost"] = *r.size_squared_at_least_cost;
  j["holds"] = r.holds;
  j["cost_block_ranges"] = r.cost_block_ranges;
  j["capacity_line"] = r.capacity_line ? Json(*r.capacity_line) : Json(nullptr);
  j["reduction_steps"] = r.reduction_steps;
  return j;
}

inline Json to_json(const StudyRow& r, bool timing = false) {
  Json j{{"trial", r.trial},
         {"seed", r.seed},
         {"n", r.n},
         {"m", r.m},
         {"cn", r.cn},
         {"all_components_false", r.all_components_false},
         {"k_nonconstant", r.k_nonconstant},
         {"bound", r.bound}};
  j["exact_cost"] = r.exact_cost ? Json(*r.exact_cost) : Json(nullptr);
  if (timing) j["runtime_ms"] = r.runtime_ms;
  return j;
}

inline Json to_json(const RandomQMeta& meta) {
  Json comps = Json::array();
  for (const auto& c : meta.components) {
    Json clauses = Json::array();
    for (const auto& cl : c.clauses) {
      Json lits = Json::array();
      for (Literal l : cl) lits.push_back(l.to_dimacs());
      clauses.push_back(lits);
    }
    comps.push_back({{"y", c.y}, {"x", c.x}, {"t", c.t}, {"clauses", clauses}});
  }
  return {{"family", "randq"}, {"n", meta.n}, {"m", meta.m}, {"cn", meta.cn}, {"seed", meta.seed}, {"components", comps}};
}

/// One row per existential assignment: the play and the universal answer.
inline Json to_json(const Strategy& s) {
  Json rows = Json::array();
  for (std::uint64_t a = 0; a < s.exist_space().count(); ++a)
    rows.push_back({{"exists", literals_json(s.exist_space().at(a))}, {"forall", literals_json(s.univ_space().at(s.table()[a]))}});
  return {{"exist_vars", s.exist_space().vars()}, {"univ_vars", s.univ_space().vars()}, {"table", rows}};
}

inline Strategy strategy_from_json(const Json& j) {
  try {
    AssignmentSpace e(j.at("exist_vars").get<std::vector<VarId>>()), u(j.at("univ_vars").get<std::vector<VarId>>());
    const Json& rows = j.at("table");
    if (rows.size() != e.count()) throw ParseError("strategy table needs " + std::to_string(e.count()) + " rows");
    std::vector<std::uint64_t> table(e.count());
    std::vector<bool> seen(e.count());
    for (const Json& row : rows) {
      auto read = [](const Json& lits) {
        Assignment a;
        for (long long d : lits.get<std::vector<long long>>()) {
          Literal l = Literal::from_dimacs(d);
          a.bind(l.var(), l.positive());
        }
        return a;
      };
      Assignment ex = read(row.at("exists")), un = read(row.at("forall"));
      if (ex.size() != e.width() || un.size() != u.width()) throw ParseError("strategy row does not assign every variable");
      std::uint64_t idx = e.index_of(ex);
      if (seen[idx]) throw ParseError("strategy row repeated");
      seen[idx] = true;
      table[idx] = u.index_of(un);
    }
    return Strategy(std::move(e), std::move(u), std::move(table));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed strategy: ") + ex.what());
  }
}

}  // namespace qbfscc
