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

#include "sspi/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "sspi/parallel.h"

namespace sspi {

PolicyOptions OptionsFor(const Instance& instance, PolicyKind kind,
                         bool transversal_continue_scan) {
  PolicyOptions options;
  options.transversal_continue_scan = transversal_continue_scan;
  if (kind == PolicyKind::kReductionCustom) {
    if (!instance.partition) {
      throw std::invalid_argument(
          "reduction-custom needs a partition block in the instance");
    }
    const PartitionSpec& p = *instance.partition;
    options.scheme =
        std::make_shared<FixedScheme>(p.queried, p.groups, p.alpha);
  }
  return options;
}

AdversaryOutcome PlayAgainst(const OnlinePolicy& policy,
                             std::span<const TaggedValue> rewards,
                             ArrivalMode adversary, Rng& rng) {
  AdversaryOutcome out;
  if (adversary == ArrivalMode::kExhaustiveMin) {
    if (!policy.ClosedFormMin(rewards) &&
        policy.element_count() > kExhaustiveOrderCap) {
      throw CapExceeded("exhaustive-min adversary", kExhaustiveOrderCap,
                        policy.element_count());
    }
    OrderSearchResult r = MinOverOrders(policy, rewards);
    out.value = r.value;
    out.z_violations = r.z_violations;
    return out;
  }
  ArrivalOrder order = AdversarialOrder(policy, rewards, adversary, &rng);
  PolicyTrace trace = RunPolicy(policy, rewards, order.order);
  for (const ArrivalRecord& rec : trace.decisions) {
    if (!rec.accepted) continue;
    out.value += rewards[rec.element].value;
    if (!(rewards[rec.element] > policy.samples()[rec.element])) {
      ++out.z_violations;
    }
  }
  return out;
}

std::string FormatNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string ExactMean::ToString() const {
  double ip;
  if (std::modf(numerator, &ip) == 0.0 && std::fabs(numerator) < 9.0e15) {
    int64_t num = static_cast<int64_t>(numerator);
    uint64_t g = std::gcd(static_cast<uint64_t>(num < 0 ? -num : num),
                          denominator);
    if (g == 0) g = 1;
    return std::to_string(num / static_cast<int64_t>(g)) + "/" +
           std::to_string(denominator / g);
  }
  return FormatNumber(numerator) + "/" + std::to_string(denominator);
}

namespace {

constexpr double kZ95 = 1.959963984540054;

struct Sums {
  double alg = 0, opt = 0, opt_prime = 0;
  double alg2 = 0, opt2 = 0, opt_prime2 = 0, opt_alg = 0;
  int64_t z_violations = 0;

  void Add(double a, double o, double p) {
    alg += a;
    opt += o;
    opt_prime += p;
    alg2 += a * a;
    opt2 += o * o;
    opt_prime2 += p * p;
    opt_alg += o * a;
  }
  void Merge(const Sums& s) {
    alg += s.alg;
    opt += s.opt;
    opt_prime += s.opt_prime;
    alg2 += s.alg2;
    opt2 += s.opt2;
    opt_prime2 += s.opt_prime2;
    opt_alg += s.opt_alg;
    z_violations += s.z_violations;
  }
};

double HalfWidth(double sum, double sum2, int64_t t) {
  double mean = sum / t;
  double var = std::max(0.0, sum2 / t - mean * mean);
  return kZ95 * std::sqrt(var / t);
}

double Ratio(double opt, double alg) {
  if (alg > 0) return opt / alg;
  return opt > 0 ? std::numeric_limits<double>::infinity() : 1.0;
}

double Millis(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// Vertex orders to average over for the exact graphic reduction.
std::vector<std::vector<int>> AllSigmas(const FeasibilityStructure& fs) {
  const auto* g = std::get_if<Graphic>(&fs);
  if (!g) {
    throw std::invalid_argument("reduction-graphic needs a graphic structure");
  }
  const int v = g->num_vertices();
  if (v > kSigmaEnumerationCap) {
    throw CapExceeded("vertex order enumeration", kSigmaEnumerationCap, v);
  }
  std::vector<int> sigma(v);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

}  // namespace

RatioReport ExactRatio(const FeasibilityStructure& fs,
                       std::span<const ElementRealization> realizations,
                       const RatioRequest& req) {
  const auto start = std::chrono::steady_clock::now();
  const int n = ElementCount(fs);
  if (n > kExactElementCap) {
    throw CapExceeded("exact enumeration", kExactElementCap, n);
  }
  if (static_cast<int>(realizations.size()) != n) {
    throw std::invalid_argument("one realization per element required");
  }
  if (req.adversary == ArrivalMode::kRandom) {
    throw std::invalid_argument(
        "exact mode supports fixed, increasing and exhaustive-min adversaries");
  }
  const SamplePath path = SamplePath::Build(realizations);

  std::vector<PolicyOptions> variants;
  if (req.policy == PolicyKind::kReductionGraphic && !req.options.scheme) {
    for (auto& sigma : AllSigmas(fs)) {
      PolicyOptions o = req.options;
      o.scheme = std::make_shared<GraphicScheme>(std::move(sigma));
      variants.push_back(std::move(o));
    }
  } else {
    variants.push_back(req.options);
  }

  const uint64_t configs = uint64_t{1} << n;
  constexpr uint64_t kBlock = 16;
  const int64_t blocks = static_cast<int64_t>((configs + kBlock - 1) / kBlock);
  std::vector<Sums> parts(blocks);
  ParallelFor(blocks, [&](int64_t b) {
    Rng unused(0);
    const uint64_t end = std::min<uint64_t>(configs, (b + 1) * kBlock);
    for (uint64_t mask = b * kBlock; mask < end; ++mask) {
      RewardsAndSamples rs = Split(path, Configuration::FromMask(path, mask));
      double alg = 0.0;
      for (const PolicyOptions& o : variants) {
        auto policy = PreparePolicy(req.policy, fs, rs.samples, unused, o);
        AdversaryOutcome got =
            PlayAgainst(*policy, rs.rewards, req.adversary, unused);
        alg += got.value;
        parts[b].z_violations += got.z_violations;
      }
      const double opt = OptimalSolution(fs, rs.rewards).total;
      const double opt_prime = GreedyProphet(fs, rs.rewards).total;
      parts[b].alg += alg;
      parts[b].opt += opt;
      parts[b].opt_prime += opt_prime;
    }
  });
  Sums total;
  for (const Sums& s : parts) total.Merge(s);

  RatioReport r;
  r.policy = std::string(PolicyName(req.policy));
  r.adversary = std::string(ArrivalModeName(req.adversary));
  r.mode = "exact";
  r.seed = req.seed;
  r.alg_exact = ExactMean{total.alg, configs * variants.size()};
  r.opt_exact = ExactMean{total.opt, configs};
  r.opt_prime_exact = ExactMean{total.opt_prime, configs};
  r.e_alg = r.alg_exact->value();
  r.e_opt = r.opt_exact->value();
  r.e_opt_prime = r.opt_prime_exact->value();
  r.ratio = Ratio(r.e_opt, r.e_alg);
  r.z_violations = total.z_violations;
  if (variants.size() > 1) {
    r.notes.push_back("averaged over all " + std::to_string(variants.size()) +
                      " vertex orders");
  }
  r.wall_ms = Millis(start);
  return r;
}

RatioReport EstimateRatio(const Instance& instance, const RatioRequest& req) {
  if (req.exact) {
    RatioReport r;
    if (instance.realizations) {
      r = ExactRatio(instance.structure, *instance.realizations, req);
    } else {
      Rng rng = StreamFor(req.seed, 0);
      std::vector<ElementRealization> drawn;
      for (int e = 0; e < static_cast<int>(instance.distributions.size());
           ++e) {
        drawn.push_back(DrawRealization(e, instance.distributions[e], rng));
      }
      r = ExactRatio(instance.structure, drawn, req);
      r.notes.push_back("realizations drawn once from the seed");
    }
    r.instance = instance.name;
    return r;
  }

  const auto start = std::chrono::steady_clock::now();
  if (req.trials <= 0) throw std::invalid_argument("trials must be positive");
  const int n = ElementCount(instance.structure);
  constexpr int64_t kBlock = 256;
  const int64_t blocks = (req.trials + kBlock - 1) / kBlock;
  std::vector<Sums> parts(blocks);
  ParallelFor(blocks, [&](int64_t b) {
    const int64_t end = std::min(req.trials, (b + 1) * kBlock);
    std::vector<ElementRealization> rz(n);
    for (int64_t t = b * kBlock; t < end; ++t) {
      Rng rng = StreamFor(req.seed, static_cast<uint64_t>(t));
      for (int e = 0; e < n; ++e) {
        rz[e] = DrawRealization(e, instance.distributions[e], rng);
      }
      CoinAssignment ca = AssignCoins(rz, rng);
      const auto& rs = ca.values;
      auto policy =
          PreparePolicy(req.policy, instance.structure, rs.samples, rng,
                        req.options);
      AdversaryOutcome got =
          PlayAgainst(*policy, rs.rewards, req.adversary, rng);
      parts[b].Add(got.value, OptimalSolution(instance.structure,
                                              rs.rewards).total,
                   GreedyProphet(instance.structure, rs.rewards).total);
      parts[b].z_violations += got.z_violations;
    }
  });
  Sums total;
  for (const Sums& s : parts) total.Merge(s);

  const int64_t t = req.trials;
  RatioReport r;
  r.instance = instance.name;
  r.policy = std::string(PolicyName(req.policy));
  r.adversary = std::string(ArrivalModeName(req.adversary));
  r.mode = "mc";
  r.trials = t;
  r.seed = req.seed;
  r.e_alg = total.alg / t;
  r.e_opt = total.opt / t;
  r.e_opt_prime = total.opt_prime / t;
  r.alg_ci = HalfWidth(total.alg, total.alg2, t);
  r.opt_ci = HalfWidth(total.opt, total.opt2, t);
  r.opt_prime_ci = HalfWidth(total.opt_prime, total.opt_prime2, t);
  r.ratio = Ratio(r.e_opt, r.e_alg);
  if (r.e_alg > 0) {
    double var_alg = total.alg2 / t - r.e_alg * r.e_alg;
    double var_opt = total.opt2 / t - r.e_opt * r.e_opt;
    double cov = total.opt_alg / t - r.e_opt * r.e_alg;
    double var_d = var_opt - 2 * r.ratio * cov + r.ratio * r.ratio * var_alg;
    r.ratio_ci = kZ95 * std::sqrt(std::max(0.0, var_d) / t) / r.e_alg;
  }
  r.z_violations = total.z_violations;
  r.wall_ms = Millis(start);
  return r;
}

Instance TightExampleInstance(int k) {
  if (k < 2) throw std::invalid_argument("tight example needs k >= 2");
  std::vector<Edge> edges;
  for (int i = 1; i <= k; ++i) edges.push_back({0, i});
  Instance inst{
      .name = "star-" + std::to_string(k),
      .structure = Graphic(k + 1, edges),
      .distributions = std::vector<Distribution>(
          k, Distribution::UniformLaw(1.0 - 1.0 / k, 1.0)),
      .realizations = std::nullopt,
      .regime = "",
      .partition = std::nullopt};
  return inst;
}

RatioReport TightExample(int k, int64_t trials, uint64_t seed) {
  RatioRequest req;
  req.policy = PolicyKind::kReductionGraphic;
  req.adversary = ArrivalMode::kExhaustiveMin;
  req.trials = trials;
  req.seed = seed;
  return EstimateRatio(TightExampleInstance(k), req);
}

ReportFormat ParseReportFormat(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw std::invalid_argument("unknown format '" + name + "' (csv|json)");
}

std::string CsvHeader() {
  return "policy,adversary,mode,e_alg,e_opt,e_opt_prime,ratio,ci,seed,wall_ms";
}

namespace {

// Numbers go through the 12-digit text form so JSON and CSV agree.
nlohmann::ordered_json JsonNumber(double v) {
  if (!std::isfinite(v)) return FormatNumber(v);
  return std::strtod(FormatNumber(v).c_str(), nullptr);
}

std::string ExpectationText(const std::optional<ExactMean>& exact, double v) {
  return exact ? exact->ToString() : FormatNumber(v);
}

}  // namespace

void EmitReport(const RatioReport& r, ReportFormat format, std::ostream& out,
                bool omit_timing) {
  const double wall = omit_timing ? 0.0 : r.wall_ms;
  if (format == ReportFormat::kCsv) {
    out << CsvHeader() << "\n"
        << r.policy << ',' << r.adversary << ',' << r.mode << ','
        << ExpectationText(r.alg_exact, r.e_alg) << ','
        << ExpectationText(r.opt_exact, r.e_opt) << ','
        << ExpectationText(r.opt_prime_exact, r.e_opt_prime) << ','
        << FormatNumber(r.ratio) << ','
        << (r.ratio_ci ? FormatNumber(*r.ratio_ci) : "") << ',' << r.seed
        << ',' << FormatNumber(wall) << "\n";
    return;
  }
  nlohmann::ordered_json j;
  j["instance"] = r.instance;
  j["policy"] = r.policy;
  j["adversary"] = r.adversary;
  j["mode"] = r.mode;
  if (r.mode == "exact") {
    j["trials"] = "exact";
  } else {
    j["trials"] = r.trials;
  }
  j["seed"] = r.seed;
  if (r.alg_exact) {
    j["E_ALG"] = r.alg_exact->ToString();
    j["E_OPT"] = r.opt_exact->ToString();
    j["E_OPT_PRIME"] = r.opt_prime_exact->ToString();
    j["values"] = {{"E_ALG", JsonNumber(r.e_alg)},
                   {"E_OPT", JsonNumber(r.e_opt)},
                   {"E_OPT_PRIME", JsonNumber(r.e_opt_prime)}};
  } else {
    j["E_ALG"] = JsonNumber(r.e_alg);
    j["E_OPT"] = JsonNumber(r.e_opt);
    j["E_OPT_PRIME"] = JsonNumber(r.e_opt_prime);
    nlohmann::ordered_json ci;
    if (r.alg_ci) ci["E_ALG"] = JsonNumber(*r.alg_ci);
    if (r.opt_ci) ci["E_OPT"] = JsonNumber(*r.opt_ci);
    if (r.opt_prime_ci) ci["E_OPT_PRIME"] = JsonNumber(*r.opt_prime_ci);
    if (r.ratio_ci) ci["ratio"] = JsonNumber(*r.ratio_ci);
    j["ci95"] = ci;
  }
  j["ratio"] = JsonNumber(r.ratio);
  j["z_violations"] = r.z_violations;
  j["wall_ms"] = JsonNumber(wall);
  j["notes"] = r.notes;
  out << j.dump(2) << "\n";
}

}  // namespace sspi
