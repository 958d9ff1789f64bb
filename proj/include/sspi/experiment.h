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

#ifndef SSPI_EXPERIMENT_H_
#define SSPI_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sspi/core.h"
#include "sspi/instance.h"
#include "sspi/policies.h"

namespace sspi {

// Policy options implied by the instance: the custom partition scheme when
// the instance has one.
PolicyOptions OptionsFor(const Instance& instance, PolicyKind kind,
                         bool transversal_continue_scan = false);

struct AdversaryOutcome {
  double value = 0.0;          // collected total
  int64_t z_violations = 0;    // acceptances with reward <= own sample
};

// Collected total under the adversary. exhaustive-min uses the closed form
// when the policy has one and otherwise searches all orders, which throws
// CapExceeded beyond kExhaustiveOrderCap. Random mode draws from `rng`.
AdversaryOutcome PlayAgainst(const OnlinePolicy& policy,
                             std::span<const TaggedValue> rewards,
                             ArrivalMode adversary, Rng& rng);

// An exact expectation: numerator over denominator.
struct ExactMean {
  double numerator = 0.0;
  uint64_t denominator = 1;
  double value() const { return numerator / static_cast<double>(denominator); }
  // "p/d" reduced when the numerator is integral, else "x/d".
  std::string ToString() const;
};

struct RatioReport {
  std::string instance;
  std::string policy;
  std::string adversary;
  std::string mode;  // "mc" or "exact"
  int64_t trials = 0;
  uint64_t seed = 0;
  double e_alg = 0.0, e_opt = 0.0, e_opt_prime = 0.0;
  // Monte Carlo 95% half-widths.
  std::optional<double> alg_ci, opt_ci, opt_prime_ci, ratio_ci;
  // Exact mode expectations.
  std::optional<ExactMean> alg_exact, opt_exact, opt_prime_exact;
  double ratio = 0.0;  // E[OPT] / E[ALG]
  int64_t z_violations = 0;
  double wall_ms = 0.0;
  std::vector<std::string> notes;
};

struct RatioRequest {
  PolicyKind policy = PolicyKind::kRank1;
  ArrivalMode adversary = ArrivalMode::kIncreasing;
  bool exact = false;
  int64_t trials = 10000;
  uint64_t seed = 1;
  PolicyOptions options;
};

inline constexpr int kExactElementCap = 16;
inline constexpr int kSigmaEnumerationCap = 6;

// Monte Carlo: trial t draws its realizations, coins, policy randomness and
// order from StreamFor(seed, t). Exact: enumerates every configuration of
// the instance's fixed realizations (or one seeded draw when absent) and,
// for the graphic reduction, every vertex order. Throws CapExceeded beyond
// kExactElementCap elements, kSigmaEnumerationCap vertices or the order
// search cap.
RatioReport EstimateRatio(const Instance& instance, const RatioRequest& req);

// Exact expectations for fixed realizations.
RatioReport ExactRatio(const FeasibilityStructure& fs,
                       std::span<const ElementRealization> realizations,
                       const RatioRequest& req);

// Star with k leaves and IID U[1-1/k, 1] edges under the graphic reduction
// against the order-minimizing adversary. Throws std::invalid_argument for
// k < 2.
RatioReport TightExample(int k, int64_t trials, uint64_t seed);
Instance TightExampleInstance(int k);

enum class ReportFormat { kCsv, kJson };
ReportFormat ParseReportFormat(const std::string& name);

// Deterministic field order, 12 significant digits. With omit_timing the
// wall time is written as 0 so reruns are byte-identical.
void EmitReport(const RatioReport& report, ReportFormat format,
                std::ostream& out, bool omit_timing = false);
std::string CsvHeader();
std::string FormatNumber(double v);

}  // namespace sspi

#endif  // SSPI_EXPERIMENT_H_
