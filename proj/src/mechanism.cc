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

#include "sspi/mechanism.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "sspi/parallel.h"

namespace sspi {

MechanismOutcome RunOpm(const OnlinePolicy& policy,
                        std::span<const double> reserves,
                        std::span<const TaggedValue> valuations,
                        std::span<const int> order) {
  const int n = policy.element_count();
  if (static_cast<int>(reserves.size()) != n ||
      static_cast<int>(valuations.size()) != n) {
    throw std::invalid_argument("mechanism needs one reserve and one valuation "
                                "per agent");
  }
  MechanismOutcome out;
  out.policy = std::string(PolicyName(policy.kind()));
  out.allocation = RunPolicy(policy, valuations, order);
  out.reserves.assign(reserves.begin(), reserves.end());
  out.payments.assign(n, 0.0);
  for (const ArrivalRecord& rec : out.allocation.decisions) {
    if (!rec.accepted) continue;
    const int i = rec.element;
    out.step1_winners.push_back(i);
    const double v = valuations[i].value;
    if (v < reserves[i]) continue;
    out.winners.push_back(i);
    out.payments[i] = std::max(rec.price, reserves[i]);
    out.welfare += v;
    out.revenue += out.payments[i];
  }
  return out;
}

namespace {

std::vector<TaggedValue> Untagged(std::span<const double> values) {
  std::vector<TaggedValue> out;
  out.reserve(values.size());
  for (size_t e = 0; e < values.size(); ++e) {
    out.push_back(MakeTaggedValue(values[e], 0.0, static_cast<int>(e)));
  }
  return out;
}

}  // namespace

MechanismOutcome RunOpm(PolicyKind kind, const FeasibilityStructure& fs,
                        std::span<const double> pricing,
                        std::span<const double> reserves,
                        std::span<const double> valuations,
                        std::span<const int> order, Rng& rng,
                        const PolicyOptions& options) {
  const size_t n = static_cast<size_t>(ElementCount(fs));
  if (pricing.size() != n || reserves.size() != n || valuations.size() != n) {
    throw std::invalid_argument("mechanism vectors must have one entry per "
                                "agent (" + std::to_string(n) + ")");
  }
  auto policy = PreparePolicy(kind, fs, Untagged(pricing), rng, options);
  return RunOpm(*policy, reserves, Untagged(valuations), order);
}

std::optional<double> TableWelfareBound(PolicyKind kind,
                                        const PolicyOptions& options) {
  switch (kind) {
    case PolicyKind::kRank1:
      return 4.0;
    case PolicyKind::kMatching:
      return 64.0;
    case PolicyKind::kTransversal:
    case PolicyKind::kLaminar:
      return 16.0;
    case PolicyKind::kReductionGraphic:
      return 8.0;
    case PolicyKind::kReductionCustom:
      if (options.scheme) return 4.0 * options.scheme->alpha();
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

struct Moments {
  double a = 0, b = 0, aa = 0, bb = 0, ab = 0;
  double rev = 0, rev2 = 0;
  int64_t ir_violations = 0;
  int64_t reserve_violations = 0;

  void Merge(const Moments& o) {
    a += o.a;
    b += o.b;
    aa += o.aa;
    bb += o.bb;
    ab += o.ab;
    rev += o.rev;
    rev2 += o.rev2;
    ir_violations += o.ir_violations;
    reserve_violations += o.reserve_violations;
  }
};

constexpr double kZ95 = 1.959963984540054;

// Delta method for mean(A)/mean(B) on paired draws.
RatioEstimate PairedRatio(const Moments& m, int64_t t) {
  RatioEstimate r;
  r.numerator = m.a / t;
  r.denominator = m.b / t;
  if (r.denominator <= 0.0) {
    r.ratio = r.half_width = std::numeric_limits<double>::infinity();
    return r;
  }
  r.ratio = r.numerator / r.denominator;
  double var_a = m.aa / t - r.numerator * r.numerator;
  double var_b = m.bb / t - r.denominator * r.denominator;
  double cov = m.ab / t - r.numerator * r.denominator;
  double var_d = var_a - 2 * r.ratio * cov + r.ratio * r.ratio * var_b;
  r.half_width =
      kZ95 * std::sqrt(std::max(0.0, var_d) / t) / r.denominator;
  return r;
}

// Fixed benchmark over mean(B).
RatioEstimate FixedOverMean(double benchmark, double sum, double sum2,
                            int64_t t) {
  RatioEstimate r;
  r.numerator = benchmark;
  r.denominator = sum / t;
  if (r.denominator <= 0.0) {
    r.ratio = r.half_width = std::numeric_limits<double>::infinity();
    return r;
  }
  r.ratio = benchmark / r.denominator;
  double var = std::max(0.0, sum2 / t - r.denominator * r.denominator);
  r.half_width = kZ95 * r.ratio * std::sqrt(var / t) / r.denominator;
  return r;
}

// Revenue of the best single posted price against the empirical law of the
// highest valuation; candidate prices are the observed maxima.
double BestPostedPrice(std::vector<double> maxima) {
  std::sort(maxima.begin(), maxima.end(), std::greater<>());
  const double t = static_cast<double>(maxima.size());
  double best = 0.0;
  for (size_t i = 0; i < maxima.size(); ++i) {
    best = std::max(best, maxima[i] * static_cast<double>(i + 1) / t);
  }
  return best;
}

bool SingleItem(PolicyKind kind, const FeasibilityStructure& fs) {
  if (kind == PolicyKind::kRank1) return true;
  const auto* p = std::get_if<TruncatedPartition>(&fs);
  return p && p->total_capacity() == 1;
}

}  // namespace

MechanismEstimate EstimateMechanismRatios(
    PolicyKind kind, const FeasibilityStructure& fs,
    std::span<const Distribution> distributions,
    const std::string& declared_regime, int64_t trials, uint64_t seed,
    ArrivalMode adversary, const PolicyOptions& options) {
  const int n = ElementCount(fs);
  if (static_cast<int>(distributions.size()) != n) {
    throw std::invalid_argument("one distribution per agent required");
  }
  if (trials <= 0) throw std::invalid_argument("trials must be positive");
  if (adversary == ArrivalMode::kExhaustiveMin) {
    throw std::invalid_argument(
        "mechanism runs support fixed, increasing and random orders");
  }
  const bool single_item = SingleItem(kind, fs);
  constexpr int64_t kBlock = 1024;
  const int64_t blocks = (trials + kBlock - 1) / kBlock;
  std::vector<Moments> parts(blocks);
  std::vector<double> maxima(single_item ? trials : 0);

  ParallelFor(blocks, [&](int64_t blk) {
    Moments& m = parts[blk];
    const int64_t end = std::min(trials, (blk + 1) * kBlock);
    std::uniform_real_distribution<double> token(0.0, 1.0);
    for (int64_t t = blk * kBlock; t < end; ++t) {
      Rng rng = StreamFor(seed, static_cast<uint64_t>(t));
      std::vector<TaggedValue> pricing(n), valuations(n);
      std::vector<double> reserves(n);
      for (int e = 0; e < n; ++e) {
        const Distribution& d = distributions[e];
        pricing[e] = MakeTaggedValue(d.Sample(rng), token(rng), e);
        valuations[e] = MakeTaggedValue(d.Sample(rng), token(rng), e);
        reserves[e] = d.Sample(rng);
      }
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      if (adversary == ArrivalMode::kIncreasing) {
        order = IncreasingOrder(valuations);
      } else if (adversary == ArrivalMode::kRandom) {
        std::shuffle(order.begin(), order.end(), rng);
      }
      auto policy = PreparePolicy(kind, fs, pricing, rng, options);
      MechanismOutcome out = RunOpm(*policy, reserves, valuations, order);
      const double opt = OptimalSolution(fs, valuations).total;
      m.a += opt;
      m.b += out.welfare;
      m.aa += opt * opt;
      m.bb += out.welfare * out.welfare;
      m.ab += opt * out.welfare;
      m.rev += out.revenue;
      m.rev2 += out.revenue * out.revenue;
      for (int i : out.winners) {
        if (out.payments[i] > valuations[i].value) ++m.ir_violations;
      }
      for (int i : out.winners) {
        bool in_step1 = std::find(out.step1_winners.begin(),
                                  out.step1_winners.end(),
                                  i) != out.step1_winners.end();
        if (!in_step1 || valuations[i].value < reserves[i]) {
          ++m.reserve_violations;
        }
      }
      if (single_item) {
        double top = 0.0;
        for (const TaggedValue& v : valuations) top = std::max(top, v.value);
        maxima[t] = top;
      }
    }
  });
  Moments total;
  for (const Moments& m : parts) total.Merge(m);

  MechanismEstimate est;
  est.policy = std::string(PolicyName(kind));
  est.adversary = std::string(ArrivalModeName(adversary));
  est.trials = trials;
  est.seed = seed;
  est.payment_rule = "max(price at acceptance, lazy reserve)";
  est.welfare = PairedRatio(total, trials);
  if (single_item) {
    est.revenue_benchmark = "best-posted-price";
    est.revenue = FixedOverMean(BestPostedPrice(std::move(maxima)),
                                total.rev, total.rev2, trials);
  } else {
    est.revenue_benchmark = "welfare-optimum";
    est.revenue =
        FixedOverMean(total.a / trials, total.rev, total.rev2, trials);
  }
  const bool all_mhr =
      std::all_of(distributions.begin(), distributions.end(),
                  [](const Distribution& d) { return d.mhr(); });
  std::optional<double> bound = TableWelfareBound(kind, options);
  if (declared_regime == "identical-regular") {
    est.regime = "identical-regular";
    est.welfare_bound = bound;
    est.revenue_bound = bound;
  } else if (all_mhr) {
    est.regime = "mhr";
    est.welfare_bound = bound;
    if (bound) est.revenue_bound = *bound * std::numbers::e;
  } else {
    est.regime = "none";
  }
  est.ir_violations = total.ir_violations;
  est.reserve_violations = total.reserve_violations;
  return est;
}

}  // namespace sspi
