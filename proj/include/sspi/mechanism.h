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

#ifndef SSPI_MECHANISM_H_
#define SSPI_MECHANISM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sspi/core.h"
#include "sspi/feasibility.h"
#include "sspi/policies.h"

namespace sspi {

struct MechanismOutcome {
  std::string policy;
  PolicyTrace allocation;           // step 1, the policy run on pricing samples
  std::vector<int> step1_winners;
  std::vector<int> winners;         // after the reserve filter
  std::vector<double> reserves;     // r-hat per agent
  std::vector<double> payments;     // per agent, zero for non-winners
  double welfare = 0.0;
  double revenue = 0.0;
};

// Two-step posted-price mechanism: run the policy prepared on `pricing`
// against `valuations` in `order`, then keep winners with v_i >= r-hat_i.
// A surviving winner pays max(price at acceptance, r-hat_i). Throws
// std::invalid_argument on length mismatches.
MechanismOutcome RunOpm(const OnlinePolicy& policy,
                        std::span<const double> reserves,
                        std::span<const TaggedValue> valuations,
                        std::span<const int> order);

// Convenience form for plain numbers (tie tokens zero).
MechanismOutcome RunOpm(PolicyKind kind, const FeasibilityStructure& fs,
                        std::span<const double> pricing,
                        std::span<const double> reserves,
                        std::span<const double> valuations,
                        std::span<const int> order, Rng& rng,
                        const PolicyOptions& options = {});

// Welfare guarantee of the mechanism built on the policy, as tabulated for
// MHR or identical regular agents; empty for an unknown alpha.
std::optional<double> TableWelfareBound(PolicyKind kind,
                                        const PolicyOptions& options = {});

// Ratio of means with a delta-method 95% half-width.
struct RatioEstimate {
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  double half_width = 0.0;
};

struct MechanismEstimate {
  std::string policy;
  std::string adversary;
  int64_t trials = 0;
  uint64_t seed = 0;
  RatioEstimate welfare;  // E[optimal welfare] / E[mechanism welfare]
  RatioEstimate revenue;  // benchmark / E[mechanism revenue]
  // "best-posted-price" on single-item instances, otherwise
  // "welfare-optimum" (an upper bound on any revenue benchmark).
  std::string revenue_benchmark;
  // "mhr", "identical-regular" or "none"; bounds are set only when labeled.
  std::string regime;
  std::optional<double> welfare_bound;
  std::optional<double> revenue_bound;
  std::string payment_rule;
  // Invariant audits over all trials; both should be zero.
  int64_t ir_violations = 0;
  int64_t reserve_violations = 0;
};

// Monte Carlo estimate. `declared_regime` is the instance's regime field
// ("identical-regular" labels the run even without MHR laws). The adversary
// must be fixed (identity), increasing or random.
MechanismEstimate EstimateMechanismRatios(
    PolicyKind kind, const FeasibilityStructure& fs,
    std::span<const Distribution> distributions,
    const std::string& declared_regime, int64_t trials, uint64_t seed,
    ArrivalMode adversary = ArrivalMode::kIncreasing,
    const PolicyOptions& options = {});

}  // namespace sspi

#endif  // SSPI_MECHANISM_H_
