#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "qbfscc/json_io.hpp"
#include "qbfscc/qdimacs.hpp"
#include "qbfscc/self_test.hpp"

using namespace qbfscc;

namespace {

constexpr int kVerificationFailure = 1;
constexpr int kUsage = 2;
constexpr int kCap = 3;

struct Caps {
  std::size_t var_cap = kDefaultVarCap;
  std::size_t semantic_cap = kDefaultSemanticCap;
  std::uint64_t strategy_budget = kDefaultStrategyBudget;
};

std::string slurp(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string csv_cell(const Json& v) {
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
    return s;
  }
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_real(v.get<double>());
  return v.dump();
}

std::string report(const Json& j, const std::string& format) {
  if (format == "json") return j.dump(2) + "\n";
  std::string head, row;
  for (auto it = j.begin(); it != j.end(); ++it) {
    head += (head.empty() ? "" : ",") + it.key();
    row += (it == j.begin() ? "" : ",") + csv_cell(it.value());
  }
  return head + "\n" + row + "\n";
}

// A proof of any system, kept alongside its lines.
struct LoadedProof {
  std::string system;
  std::variant<QUResProof, CPProof, PCRProof, SemanticProof> proof;

  CheckResult check(const Qcnf& phi, const Caps& caps) const {
    return std::visit(
        [&](const auto& p) -> CheckResult {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, QUResProof>) return check_qures(phi, p);
          else if constexpr (std::is_same_v<P, CPProof>) return check_cp(phi, p);
          else if constexpr (std::is_same_v<P, PCRProof>) return check_pcr(phi, p);
          else return check_semantic(phi, p, caps.semantic_cap);
        },
        proof);
  }

  std::vector<Line> lines() const {
    return std::visit(
        [](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          std::vector<Line> out;
          if constexpr (std::is_same_v<P, SemanticProof>) {
            out = p.lines();
          } else {
            for (const auto& s : p.steps) {
              if constexpr (std::is_same_v<P, QUResProof>) out.push_back(s.clause);
              else if constexpr (std::is_same_v<P, CPProof>) out.push_back(s.line);
              else out.push_back(s.poly);
            }
          }
          return out;
        },
        proof);
  }

  SCCReport scc(const Qcnf& phi, const Caps& caps) const {
    SCCOptions opt{caps.var_cap, caps.semantic_cap, caps.strategy_budget};
    return std::visit([&](const auto& p) { return verify_scc(phi, p, opt); }, proof);
  }
};

LoadedProof load_proof(const std::string& system, const std::string& path) {
  std::string text = slurp(path);
  if (system == "qures") return {system, parse_qures(text)};
  if (system == "cp") return {system, parse_cp(text)};
  if (system == "pcr") return {system, parse_pcr(text)};
  return {system, parse_semantic(text)};
}

const std::vector<std::string> kSystems{"qures", "cp", "pcr", "sem"};

struct ProofArgs {
  std::string system, formula, proof;
};

void proof_args(CLI::App* cmd, ProofArgs& a) {
  cmd->add_option("system", a.system, "proof system")->required()->check(CLI::IsMember(kSystems));
  cmd->add_option("formula", a.formula, "QDIMACS file, - for stdin")->required();
  cmd->add_option("proof", a.proof, "proof trace")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QBF proof checking, strategy extraction and size-cost-capacity analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  Caps caps;
  std::string format = "json";
  app.add_option("--var-cap", caps.var_cap, "maximum variables for exhaustive oracles")->capture_default_str();
  app.add_option("--semantic-cap", caps.semantic_cap, "maximum variables per truth table")->capture_default_str();
  app.add_option("--strategy-budget", caps.strategy_budget, "restricted-game evaluations for exact cost")->capture_default_str();
  auto* format_opt = app.add_option("--format", format, "report format; random-study defaults to csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "write a formula family as QDIMACS");
  std::string family, out_path, meta_path;
  std::size_t n = 2, m = 1, cn = 0, clauses = 0;
  std::uint64_t seed = 1;
  gen->add_option("family", family)->required()->check(CLI::IsMember({"eq", "kbkf", "kbkf-d", "kbkf-w", "randq", "12qcnf", "2sat"}));
  gen->add_option("-n", n, "size parameter")->capture_default_str();
  gen->add_option("-m,--m", m, "universal variables per component")->capture_default_str();
  gen->add_option("--cn", cn, "clauses per component (randq)");
  gen->add_option("--clauses", clauses, "clause count (12qcnf, 2sat)");
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("-o,--output", out_path, "output file");
  gen->add_option("--meta", meta_path, "write generator metadata as JSON");

  // check
  auto* check = app.add_subcommand("check", "verify a proof trace");
  ProofArgs check_args;
  proof_args(check, check_args);
  bool partial = false;
  check->add_flag("--derivation", partial, "accept derivations that do not end in falsum");

  // prove
  auto* prove = app.add_subcommand("prove", "produce a refutation");
  std::string prove_system, prove_formula, mode = "saturate", emit_as = "qures", field_text = "Q";
  bool do_normalize = false;
  prove->add_option("system", prove_system)->required()->check(CLI::IsMember({"qures"}));
  prove->add_option("formula", prove_formula)->required();
  prove->add_option("--mode", mode)->check(CLI::IsMember({"saturate", "sigma2"}))->capture_default_str();
  prove->add_flag("--normalize", do_normalize, "normalize the refutation");
  prove->add_option("--emit", emit_as, "translate the refutation")->check(CLI::IsMember(kSystems))->capture_default_str();
  prove->add_option("--field", field_text, "PCR field, Q or GF(p)")->capture_default_str();
  prove->add_option("-o,--output", out_path);

  // truth, cost
  auto* truth_cmd = app.add_subcommand("truth", "evaluate a formula");
  std::string formula_path;
  truth_cmd->add_option("formula", formula_path)->required();
  auto* cost_cmd = app.add_subcommand("cost", "exact cost of a false formula");
  std::string cost_formula;
  bool witness = false;
  cost_cmd->add_option("formula", cost_formula)->required();
  cost_cmd->add_flag("--witness", witness, "include a minimum-cost strategy");

  // capacity, extract, scc
  auto* cap_cmd = app.add_subcommand("capacity", "capacity of an accepted proof");
  ProofArgs cap_args;
  proof_args(cap_cmd, cap_args);
  auto* extract = app.add_subcommand("extract", "extract and verify a universal strategy");
  ProofArgs extract_args;
  proof_args(extract, extract_args);
  std::string maps_kind = "default";
  extract->add_option("--maps", maps_kind, "response maps")->check(CLI::IsMember({"default", "min"}))->capture_default_str();
  extract->add_option("-o,--output", out_path, "strategy table");
  auto* scc = app.add_subcommand("scc", "size-cost-capacity report");
  ProofArgs scc_args;
  proof_args(scc, scc_args);

  // random-study
  auto* study = app.add_subcommand("random-study", "random Q(n,m,c) study as CSV");
  StudyOptions so;
  bool timing = false;
  study->add_option("--n", so.n)->capture_default_str();
  study->add_option("--m", so.m)->capture_default_str();
  study->add_option("--cn", so.cn)->capture_default_str();
  study->add_option("--trials", so.trials)->capture_default_str();
  study->add_option("--seed", so.seed)->capture_default_str();
  study->add_option("--threads", so.threads, "0 uses every core")->capture_default_str();
  study->add_flag("--exact-cost", so.exact_cost, "compute exact cost when every component is false");
  study->add_flag("--timing", timing, "add runtime_ms");
  study->add_option("-o,--output", out_path);

  // self-test
  auto* self = app.add_subcommand("self-test", "run the acceptance criteria");
  std::vector<int> only;
  self->add_option("--only", only, "criterion ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    auto read_formula = [](const std::string& p) { return parse_qdimacs(slurp(p)); };

    if (*gen) {
      Qcnf phi;
      std::optional<Json> meta;
      if (family == "eq") phi = gen_equality(n);
      else if (family == "kbkf") phi = gen_kbkf(n);
      else if (family == "kbkf-d") phi = gen_kbkf_doubled(n);
      else if (family == "kbkf-w") phi = gen_kbkf_weak(n);
      else if (family == "randq") {
        RandomQ q = gen_random_q(n, m, cn ? cn : n, seed);
        phi = q.formula;
        meta = to_json(q.meta);
      } else if (family == "12qcnf") {
        phi = gen_random_12qcnf(m, n, clauses ? clauses : n, seed);
        meta = Json{{"family", family}, {"m", m}, {"n", n}, {"clauses", phi.matrix().size()}, {"seed", seed}};
      } else {
        auto cnf = gen_random_2sat(n, clauses ? clauses : n, seed);
        phi = cnf_as_qcnf(std::move(cnf), static_cast<VarId>(n));
        meta = Json{{"family", family}, {"n", n}, {"clauses", phi.matrix().size()}, {"seed", seed}};
      }
      if (!meta) meta = Json{{"family", family}, {"n", n}};
      emit(out_path, write_qdimacs(phi));
      if (!meta_path.empty()) emit(meta_path, meta->dump(2) + "\n");
      return 0;
    }

    if (*check) {
      Qcnf phi = read_formula(check_args.formula);
      LoadedProof p = load_proof(check_args.system, check_args.proof);
      CheckResult r;
      if (partial) {
        if (auto* q = std::get_if<QUResProof>(&p.proof)) r = check_qures(phi, *q, {false, false});
        else if (auto* c = std::get_if<CPProof>(&p.proof)) r = check_cp(phi, *c, false);
        else if (auto* y = std::get_if<PCRProof>(&p.proof)) r = check_pcr(phi, *y, false);
        else throw DomainError("semantic traces are always checked as refutations");
      } else {
        r = p.check(phi, caps);
      }
      Json j{{"system", p.system}};
      j.update(to_json(r));
      std::cout << report(j, format);
      return r.ok ? 0 : kVerificationFailure;
    }

    if (*prove) {
      Qcnf phi = read_formula(prove_formula);
      QUResProof pi;
      if (mode == "sigma2") {
        pi = refute_sigma2(phi);
      } else {
        auto q = prove_qures_saturate(phi, {caps.var_cap, 200'000});
        if (!q) throw VerificationError("saturation ended without a refutation; the formula may be true");
        pi = *q;
      }
      if (do_normalize) pi = normalize(phi, pi);
      std::string text;
      if (emit_as == "qures") text = write_qures(pi);
      else if (emit_as == "cp") text = write_cp(simulate_qures_in_cp(phi, pi));
      else if (emit_as == "pcr") text = write_pcr(simulate_qures_in_pcr(phi, pi, Field::parse(field_text)));
      else text = write_semantic(semantic_from_qures(phi, pi));
      emit(out_path, text);
      return 0;
    }

    if (*truth_cmd) {
      Qcnf phi = read_formula(formula_path);
      std::cout << report(Json{{"truth", truth(phi, caps.var_cap)}}, format);
      return 0;
    }

    if (*cost_cmd) {
      Qcnf phi = read_formula(cost_formula);
      CostReport c = cost_exact_general(phi, caps.strategy_budget, caps.var_cap);
      Json j = to_json(c);
      if (witness) j["witness"] = to_json(c.witness);
      std::cout << report(j, format);
      return 0;
    }

    auto accepted = [&](const ProofArgs& a) {
      Qcnf phi = read_formula(a.formula);
      LoadedProof p = load_proof(a.system, a.proof);
      CheckResult r = p.check(phi, caps);
      if (!r) throw VerificationError("proof rejected: " + r.to_string());
      return std::pair{std::move(phi), std::move(p)};
    };

    if (*cap_cmd) {
      auto [phi, p] = accepted(cap_args);
      std::cout << report(to_json(capacity(phi, p.lines(), caps.semantic_cap)), format);
      return 0;
    }

    if (*extract) {
      auto [phi, p] = accepted(extract_args);
      std::vector<Line> lines = p.lines();
      ResponseMapSet maps = maps_kind == "min" ? min_response_maps(phi, lines, caps.semantic_cap)
                                               : default_response_maps(phi, lines, caps.semantic_cap);
      ExtractionResult r = extract_strategy(phi, lines, maps, caps.var_cap);
      StrategyVerdict v = verify_strategy(phi, r.strategy);
      emit(out_path, to_json(r.strategy).dump(2) + "\n");
      Json j{{"winning", v.ok}, {"cost", r.strategy.cost(phi)}, {"block_ranges", r.strategy.block_ranges(phi)},
             {"defaulted_plays", r.defaulted_plays}};
      if (!v.ok) j["message"] = v.message;
      std::cerr << report(j, format);
      return v.ok ? 0 : kVerificationFailure;
    }

    if (*scc) {
      Qcnf phi = read_formula(scc_args.formula);
      LoadedProof p = load_proof(scc_args.system, scc_args.proof);
      SCCReport r = p.scc(phi, caps);
      std::cout << report(to_json(r), format);
      return r.holds ? 0 : kVerificationFailure;
    }

    if (*study) {
      so.var_cap = caps.var_cap;
      so.strategy_budget = caps.strategy_budget;
      std::vector<StudyRow> rows = random_study(so);
      if (format_opt->count() && format == "json") {
        Json arr = Json::array();
        for (const auto& r : rows) arr.push_back(to_json(r, timing));
        emit(out_path, arr.dump(2) + "\n");
      } else {
        emit(out_path, study_csv(rows, timing));
      }
      return 0;
    }

    if (*self) {
      bool all = true;
      for (const auto& c : acceptance_criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        CriterionResult r = run_criterion(c);
        std::cout << format_criterion(r) << std::endl;
        all = all && r.passed;
      }
      return all ? 0 : kVerificationFailure;
    }
  } catch (const CapError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerificationFailure;
  }
  return 0;
}
