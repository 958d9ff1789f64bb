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

#include "sspi/core.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sspi {

CapExceeded::CapExceeded(const std::string& what, int cap, int requested)
    : std::runtime_error(what + ": requested " + std::to_string(requested) +
                         ", cap is " + std::to_string(cap)),
      cap_(cap),
      requested_(requested) {}

Rng StreamFor(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream),
                    static_cast<uint32_t>(stream >> 32), 0x5eedu};
  return Rng(seq);
}

TaggedValue MakeTaggedValue(double value, double tiebreak, int element) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument("value must be finite and non-negative");
  }
  if (!(tiebreak >= 0.0 && tiebreak <= 1.0)) {
    throw std::invalid_argument("tiebreak must lie in [0,1]");
  }
  if (element < 0) throw std::invalid_argument("element id must be >= 0");
  return {value, tiebreak, element};
}

std::strong_ordering Compare(const TaggedValue& a, const TaggedValue& b) {
  if (a.value < b.value) return std::strong_ordering::less;
  if (a.value > b.value) return std::strong_ordering::greater;
  if (a.tiebreak < b.tiebreak) return std::strong_ordering::less;
  if (a.tiebreak > b.tiebreak) return std::strong_ordering::greater;
  return a.element <=> b.element;
}

Distribution Distribution::Point(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument("point mass must be finite and non-negative");
  }
  return Distribution(PointMass{value}, true);
}

Distribution Distribution::DiscreteLaw(std::vector<double> values,
                                       std::vector<double> weights) {
  if (values.empty() || values.size() != weights.size()) {
    throw std::invalid_argument(
        "discrete law needs matching non-empty values and weights");
  }
  double total = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw std::invalid_argument("discrete support must be non-negative");
    }
    if (!(weights[i] > 0.0)) {
      throw std::invalid_argument("discrete weights must be positive");
    }
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("discrete weights must sum to 1");
  }
  return Distribution(Discrete{std::move(values), std::move(weights)}, false);
}

Distribution Distribution::UniformLaw(double low, double high) {
  if (!std::isfinite(low) || !std::isfinite(high) || low < 0.0 ||
      !(low < high)) {
    throw std::invalid_argument("uniform law needs 0 <= a < b");
  }
  return Distribution(Uniform{low, high}, true);
}

Distribution Distribution::ExponentialLaw(double rate) {
  if (!std::isfinite(rate) || !(rate > 0.0)) {
    throw std::invalid_argument("exponential rate must be positive");
  }
  return Distribution(Exponential{rate}, true);
}

double Distribution::Sample(Rng& rng) const {
  struct Visitor {
    Rng& rng;
    double operator()(const PointMass& p) const { return p.value; }
    double operator()(const Discrete& d) const {
      std::discrete_distribution<size_t> pick(d.weights.begin(),
                                              d.weights.end());
      return d.values[pick(rng)];
    }
    double operator()(const Uniform& u) const {
      return std::uniform_real_distribution<double>(u.low, u.high)(rng);
    }
    double operator()(const Exponential& e) const {
      return std::exponential_distribution<double>(e.rate)(rng);
    }
  };
  return std::visit(Visitor{rng}, kind_);
}

std::string Distribution::Describe() const {
  std::ostringstream out;
  struct Visitor {
    std::ostringstream& out;
    void operator()(const PointMass& p) const { out << "point(" << p.value << ")"; }
    void operator()(const Discrete& d) const {
      out << "discrete(";
      for (size_t i = 0; i < d.values.size(); ++i) {
        out << (i ? "," : "") << d.values[i] << ":" << d.weights[i];
      }
      out << ")";
    }
    void operator()(const Uniform& u) const {
      out << "uniform(" << u.low << "," << u.high << ")";
    }
    void operator()(const Exponential& e) const {
      out << "exponential(" << e.rate << ")";
    }
  };
  std::visit(Visitor{out}, kind_);
  return out.str();
}

bool operator==(const Distribution& a, const Distribution& b) {
  if (a.mhr_ != b.mhr_ || a.kind_.index() != b.kind_.index()) return false;
  return a.Describe() == b.Describe();
}

ElementRealization MakeRealization(int element, const TaggedValue& a,
                                   const TaggedValue& b) {
  if (a.element != element || b.element != element) {
    throw std::invalid_argument("realization carries a foreign element id");
  }
  auto order = Compare(a, b);
  if (order == std::strong_ordering::equal) {
    throw std::invalid_argument("the two draws of an element must differ");
  }
  return order == std::strong_ordering::greater
             ? ElementRealization{element, a, b}
             : ElementRealization{element, b, a};
}

ElementRealization FixedRealization(int element, double y, double z) {
  if (y < z) throw std::invalid_argument("fixed realization needs y >= z");
  return MakeRealization(element, MakeTaggedValue(y, 0.75, element),
                         MakeTaggedValue(z, 0.25, element));
}

ElementRealization DrawRealization(int element, const Distribution& d,
                                   Rng& rng) {
  std::uniform_real_distribution<double> token(0.0, 1.0);
  for (;;) {
    TaggedValue a = MakeTaggedValue(d.Sample(rng), token(rng), element);
    TaggedValue b = MakeTaggedValue(d.Sample(rng), token(rng), element);
    if (a != b) return MakeRealization(element, a, b);
  }
}

SamplePath SamplePath::Build(std::span<const ElementRealization> realizations) {
  if (realizations.empty()) {
    throw std::invalid_argument("sample path needs at least one element");
  }
  const int n = static_cast<int>(realizations.size());
  std::vector<bool> seen(n, false);
  SamplePath path;
  path.entries_.reserve(2 * n);
  for (const ElementRealization& r : realizations) {
    if (r.element < 0 || r.element >= n) {
      throw std::invalid_argument("element ids must be 0..n-1");
    }
    if (seen[r.element]) {
      throw std::invalid_argument("duplicate element id " +
                                  std::to_string(r.element));
    }
    if (Compare(r.y, r.z) != std::strong_ordering::greater) {
      throw std::invalid_argument("realization must satisfy y > z");
    }
    seen[r.element] = true;
    path.entries_.push_back({r.y, r.element, Label::kY});
    path.entries_.push_back({r.z, r.element, Label::kZ});
  }
  std::sort(path.entries_.begin(), path.entries_.end(),
            [](const Entry& a, const Entry& b) { return a.w > b.w; });
  path.y_index_.assign(n, -1);
  path.z_index_.assign(n, -1);
  for (int j = 0; j < 2 * n; ++j) {
    const Entry& e = path.entries_[j];
    (e.label == Label::kY ? path.y_index_ : path.z_index_)[e.element] = j;
  }
  return path;
}

int SamplePath::partner(int j) const {
  const Entry& e = entries_.at(j);
  return e.label == Label::kY ? z_index_[e.element] : y_index_[e.element];
}

Configuration::Configuration(const SamplePath& path, std::vector<Coin> coins)
    : coins_(std::move(coins)) {
  if (static_cast<int>(coins_.size()) != path.size()) {
    throw std::invalid_argument("configuration length must be 2n");
  }
  for (int e = 0; e < path.element_count(); ++e) {
    if (coins_[path.y_index(e)] == coins_[path.z_index(e)]) {
      throw std::invalid_argument(
          "an element's two coins must differ (one H, one T)");
    }
  }
}

Configuration Configuration::FromMask(const SamplePath& path, uint64_t mask) {
  if (path.element_count() > 64) {
    throw std::invalid_argument("a 64-bit mask covers at most 64 elements");
  }
  std::vector<Coin> y_coins(path.element_count());
  for (int e = 0; e < path.element_count(); ++e) {
    y_coins[e] = (mask >> e) & 1 ? Coin::kTails : Coin::kHeads;
  }
  return FromElementCoins(path, y_coins);
}

Configuration Configuration::FromElementCoins(const SamplePath& path,
                                              std::span<const Coin> y_coins) {
  if (static_cast<int>(y_coins.size()) != path.element_count()) {
    throw std::invalid_argument("need one coin per element");
  }
  Configuration c;
  c.coins_.resize(path.size());
  for (int e = 0; e < path.element_count(); ++e) {
    c.coins_[path.y_index(e)] = y_coins[e];
    c.coins_[path.z_index(e)] = Opposite(y_coins[e]);
  }
  return c;
}

RewardsAndSamples Split(const SamplePath& path, const Configuration& config) {
  assert(config.size() == path.size());
  const int n = path.element_count();
  RewardsAndSamples out;
  out.rewards.resize(n);
  out.samples.resize(n);
  for (int j = 0; j < path.size(); ++j) {
    const auto& entry = path[j];
    (config[j] == Coin::kHeads ? out.rewards : out.samples)[entry.element] =
        entry.w;
  }
  return out;
}

CoinAssignment AssignCoins(std::span<const ElementRealization> realizations,
                           Rng& rng) {
  SamplePath path = SamplePath::Build(realizations);
  std::bernoulli_distribution fair(0.5);
  std::vector<Coin> y_coins(path.element_count());
  for (Coin& c : y_coins) c = fair(rng) ? Coin::kHeads : Coin::kTails;
  Configuration config = Configuration::FromElementCoins(path, y_coins);
  RewardsAndSamples values = Split(path, config);
  return {std::move(path), std::move(config), std::move(values)};
}

ConfigurationRange EnumerateConfigurations(const SamplePath& path) {
  const int n = path.element_count();
  if (n > kExhaustiveCap) {
    throw CapExceeded("configuration enumeration", kExhaustiveCap, n);
  }
  return ConfigurationRange(&path, uint64_t{1} << n);
}

double ExactCount::ToDouble() const {
  return std::ldexp(static_cast<double>(numerator), -exponent);
}

std::string ExactCount::ToString() const {
  return std::to_string(numerator) + "/2^" + std::to_string(exponent);
}

Rational::Rational(int64_t num, int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::ToString() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  int64_t g = std::gcd(a.den_, b.den_);
  return Rational(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g),
                  a.den_ / g * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ <=>
         static_cast<__int128>(b.num_) * a.den_;
}

}  // namespace sspi
