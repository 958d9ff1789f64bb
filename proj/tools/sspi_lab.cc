// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: simulate, verify, game, tight-example, mechanism.

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sspi/analysis.h"
#include "sspi/coin_game.h"
#include "sspi/experiment.h"
#include "sspi/instance.h"
#include "sspi/mechanism.h"

namespace {

using sspi::FormatNumber;
using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsage = 2;
constexpr int kCapExceeded = 3;

struct Globals {
  uint64_t seed = 1;
  int64_t trials = 10000;
  std::string out;
  std::string format = "json";
  bool omit_timing = false;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Write(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) {
    throw UsageError("cannot write " + g.out + ": " + std::strerror(errno));
  }
  f << text;
  if (!f.flush()) {
    throw UsageError("write failed for " + g.out + ": " +
                     std::strerror(errno));
  }
}

Json Num(double v) {
  if (!std::isfinite(v)) return FormatNumber(v);
  return std::strtod(FormatNumber(v).c_str(), nullptr);
}

std::vector<sspi::ElementRealization> RealizationsFor(
    const sspi::Instance& inst, uint64_t seed) {
  if (inst.realizations) return *inst.realizations;
  sspi::Rng rng = sspi::StreamFor(seed, 0);
  std::vector<sspi::ElementRealization> out;
  for (int e = 0; e < static_cast<int>(inst.distributions.size()); ++e) {
    out.push_back(sspi::DrawRealization(e, inst.distributions[e], rng));
  }
  return out;
}

std::string LemmaCsv(const std::vector<sspi::LemmaReport>& reports) {
  std::ostringstream os;
  os << "lemma,pass,relation,lhs,rhs,denominator,checked,violations\n";
  for (const auto& r : reports) {
    os << r.lemma << ',' << (r.pass ? "true" : "false") << ',' << r.relation
       << ',' << FormatNumber(r.lhs) << ',' << FormatNumber(r.rhs) << ",2^"
       << r.exponent << ',' << r.checked << ',' << r.violations << "\n";
  }
  return os.str();
}

std::string LemmaJson(const std::vector<sspi::LemmaReport>& reports,
                      const std::string& instance) {
  Json arr = Json::array();
  for (const auto& r : reports) {
    Json j;
    j["lemma"] = r.lemma;
    j["pass"] = r.pass;
    j["relation"] = r.relation;
    j["lhs"] = Num(r.lhs);
    j["rhs"] = Num(r.rhs);
    j["denominator"] = "2^" + std::to_string(r.exponent);
    j["checked"] = r.checked;
    j["violations"] = r.violations;
    Json rows = Json::array();
    for (const auto& ic : r.per_index) {
      rows.push_back({{"index", ic.index},
                      {"part", ic.part},
                      {"lhs", ic.lhs},
                      {"rhs", ic.rhs},
                      {"ok", ic.ok}});
    }
    j["per_index"] = rows;
    if (!r.note.empty()) j["note"] = r.note;
    arr.push_back(j);
  }
  Json root;
  root["instance"] = instance;
  root["reports"] = arr;
  return root.dump(2) + "\n";
}

int RunVerify(const Globals& g, const std::string& lemma,
              const std::string& path) {
  std::vector<sspi::LemmaId> ids;
  if (lemma == "all") {
    ids = sspi::AllLemmas();
  } else {
    try {
      ids.push_back(sspi::ParseLemmaId(lemma));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  std::optional<sspi::Instance> inst;
  bool needs_instance = !(ids.size() == 1 && ids[0] == sspi::LemmaId::kGameValue);
  if (needs_instance) {
    if (path.empty()) throw UsageError("verify needs --instance");
    inst = sspi::LoadInstance(path);
  }
  std::vector<sspi::LemmaReport> reports;
  for (sspi::LemmaId id : ids) {
    if (id == sspi::LemmaId::kGameValue) {
      reports.push_back(sspi::VerifyLemma(id, sspi::TruncatedPartition::Rank1(1),
                                          {}));
      continue;
    }
    if (!sspi::LemmaApplies(id, inst->structure)) {
      if (lemma == "all") continue;
      throw UsageError(std::string(sspi::LemmaName(id)) +
                       " does not apply to " +
                       sspi::KindName(inst->structure));
    }
    auto rz = RealizationsFor(*inst, g.seed);
    reports.push_back(sspi::VerifyLemma(id, inst->structure, rz));
  }
  Write(g, g.format == "csv" ? LemmaCsv(reports)
                             : LemmaJson(reports, inst ? inst->name : ""));
  for (const auto& r : reports) {
    if (!r.pass) return kVerificationFailed;
  }
  return kOk;
}

int RunGame(const Globals& g, int rr, int rb, const std::string& mode) {
  Json j;
  j["r_R"] = rr;
  j["r_B"] = rb;
  j["mode"] = mode;
  std::string value_text;
  double value = 0.0;
  bool pass = true;
  if (mode == "optimal") {
    j["strategy"] = "blue-first";
    sspi::Rational v = sspi::StrategyValue(rr, rb, sspi::BlueFirst);
    value_text = v.ToString();
    value = v.ToDouble();
    pass = v == sspi::Rational(1, 4);
  } else if (mode == "exhaustive") {
    j["strategy"] = "minimax";
    sspi::Rational v = sspi::ExhaustiveGameValue(rr, rb);
    value_text = v.ToString();
    value = v.ToDouble();
    pass = v == sspi::Rational(1, 4);
  } else if (mode == "mc") {
    j["strategy"] = "blue-first";
    sspi::GameEstimate est =
        sspi::SimulateGame(rr, rb, sspi::BlueFirst, g.trials, g.seed);
    value = est.frequency;
    value_text = FormatNumber(value);
    j["trials"] = est.trials;
    j["p2_wins"] = est.p2_wins;
    j["std_error"] = Num(est.std_error);
    j["seed"] = g.seed;
    pass = std::abs(value - 0.25) <= std::max(0.002, 3 * est.std_error);
  } else {
    throw UsageError("game --mode must be optimal, exhaustive or mc");
  }
  j["p2_win_probability"] = value_text;
  j["value"] = Num(value);
  j["matches_quarter"] = pass;
  if (g.format == "csv") {
    Write(g, "r_R,r_B,mode,p2_win_probability,value,matches_quarter\n" +
                 std::to_string(rr) + "," + std::to_string(rb) + "," + mode +
                 "," + value_text + "," + FormatNumber(value) + "," +
                 (pass ? "true" : "false") + "\n");
  } else {
    Write(g, j.dump(2) + "\n");
  }
  return pass ? kOk : kVerificationFailed;
}

std::string MechanismText(const Globals& g, const sspi::MechanismEstimate& m,
                          const std::string& instance) {
  auto opt = [](const std::optional<double>& v) {
    return v ? FormatNumber(*v) : std::string();
  };
  if (g.format == "csv") {
    std::ostringstream os;
    os << "policy,adversary,trials,welfare_ratio,welfare_ci,welfare_bound,"
          "revenue_ratio,revenue_ci,revenue_bound,revenue_benchmark,regime,"
          "seed\n"
       << m.policy << ',' << m.adversary << ',' << m.trials << ','
       << FormatNumber(m.welfare.ratio) << ','
       << FormatNumber(m.welfare.half_width) << ',' << opt(m.welfare_bound)
       << ',' << FormatNumber(m.revenue.ratio) << ','
       << FormatNumber(m.revenue.half_width) << ',' << opt(m.revenue_bound)
       << ',' << m.revenue_benchmark << ',' << m.regime << ',' << m.seed
       << "\n";
    return os.str();
  }
  Json j;
  j["instance"] = instance;
  j["policy"] = m.policy;
  j["adversary"] = m.adversary;
  j["trials"] = m.trials;
  j["seed"] = m.seed;
  j["payment_rule"] = m.payment_rule;
  j["welfare"] = {{"E_OPT", Num(m.welfare.numerator)},
                  {"E_MECH", Num(m.welfare.denominator)},
                  {"ratio", Num(m.welfare.ratio)},
                  {"ci95", Num(m.welfare.half_width)}};
  j["revenue"] = {{"benchmark_kind", m.revenue_benchmark},
                  {"benchmark", Num(m.revenue.numerator)},
                  {"E_MECH", Num(m.revenue.denominator)},
                  {"ratio", Num(m.revenue.ratio)},
                  {"ci95", Num(m.revenue.half_width)}};
  j["regime"] = m.regime;
  j["welfare_bound"] = m.welfare_bound ? Num(*m.welfare_bound) : Json();
  j["revenue_bound"] = m.revenue_bound ? Num(*m.revenue_bound) : Json();
  j["ir_violations"] = m.ir_violations;
  j["reserve_violations"] = m.reserve_violations;
  return j.dump(2) + "\n";
}

sspi::PolicyKind Policy(const std::string& name) {
  try {
    return sspi::ParsePolicyKind(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

sspi::ArrivalMode Adversary(const std::string& name) {
  try {
    return sspi::ParseArrivalMode(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-sample prophet inequality lab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--trials", g.trials, "Monte Carlo trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_flag("--omit-timing", g.omit_timing,
               "Write wall time as 0 for byte-identical reruns");

  std::string instance_path, policy = "rank1", adversary = "increasing";
  bool exact = false, continue_scan = false;
  auto* simulate = app.add_subcommand("simulate", "Estimate E[OPT]/E[ALG]");
  simulate->add_option("--instance", instance_path)->required();
  simulate->add_option("--policy", policy)->capture_default_str();
  simulate->add_option("--adversary", adversary,
                       "fixed|increasing|random|exhaustive-min")
      ->capture_default_str();
  simulate->add_flag("--exact", exact, "Enumerate all configurations");
  simulate->add_flag("--continue-scan", continue_scan,
                     "Transversal: scan past taken R-nodes");

  std::string lemma;
  auto* verify = app.add_subcommand("verify", "Check a lemma exactly");
  verify->add_option("--lemma", lemma, "Lemma id or 'all'")->required();
  verify->add_option("--instance", instance_path);

  int rr = 1, rb = 2;
  std::string game_mode = "exhaustive";
  auto* game = app.add_subcommand("game", "Nested-bins coin game");
  game->add_option("--rr", rr)->capture_default_str();
  game->add_option("--rb", rb)->capture_default_str();
  game->add_option("--mode", game_mode)
      ->check(CLI::IsMember({"optimal", "exhaustive", "mc"}))
      ->capture_default_str();

  int k = 200;
  auto* tight = app.add_subcommand("tight-example", "Star graph example");
  tight->add_option("--k", k)->capture_default_str();

  auto* mechanism = app.add_subcommand("mechanism", "Posted-price mechanism");
  mechanism->add_option("--instance", instance_path)->required();
  mechanism->add_option("--policy", policy)->capture_default_str();
  mechanism->add_option("--adversary", adversary, "fixed|increasing|random")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate || *mechanism) {
      sspi::Instance inst = sspi::LoadInstance(instance_path);
      sspi::PolicyKind kind = Policy(policy);
      sspi::PolicyOptions options =
          sspi::OptionsFor(inst, kind, continue_scan);
      if (*simulate) {
        sspi::RatioRequest req{.policy = kind,
                               .adversary = Adversary(adversary),
                               .exact = exact,
                               .trials = g.trials,
                               .seed = g.seed,
                               .options = options};
        std::ostringstream os;
        sspi::EmitReport(sspi::EstimateRatio(inst, req),
                         sspi::ParseReportFormat(g.format), os,
                         g.omit_timing);
        Write(g, os.str());
        return kOk;
      }
      auto est = sspi::EstimateMechanismRatios(
          kind, inst.structure, inst.distributions, inst.regime, g.trials,
          g.seed, Adversary(adversary), options);
      Write(g, MechanismText(g, est, inst.name));
      return kOk;
    }
    if (*verify) return RunVerify(g, lemma, instance_path);
    if (*game) return RunGame(g, rr, rb, game_mode);
    if (*tight) {
      std::ostringstream os;
      sspi::EmitReport(sspi::TightExample(k, g.trials, g.seed),
                       sspi::ParseReportFormat(g.format), os, g.omit_timing);
      Write(g, os.str());
      return kOk;
    }
  } catch (const sspi::CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const std::exception& e) {
    // Bad instances, bad flag combinations and IO failures.
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
