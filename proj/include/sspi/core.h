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

#ifndef SSPI_CORE_H_
#define SSPI_CORE_H_

#include <compare>
#include <cstdint>
#include <iterator>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sspi {

// Raised whenever an exhaustive routine is asked to go beyond its size cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, int cap, int requested);
  int cap() const { return cap_; }
  int requested() const { return requested_; }

 private:
  int cap_;
  int requested_;
};

using Rng = std::mt19937_64;

// Independent stream for trial `stream` of a run seeded with `seed`.
// Streams depend only on (seed, stream), so work can be split across
// threads without changing results.
Rng StreamFor(uint64_t seed, uint64_t stream);

// A reward or sample together with its tie-break token. Ordering is
// lexicographic on (value, tiebreak, element).
struct TaggedValue {
  double value = 0.0;
  double tiebreak = 0.0;
  int element = 0;

  friend auto operator<=>(const TaggedValue&, const TaggedValue&) = default;
  friend bool operator==(const TaggedValue&, const TaggedValue&) = default;
};

// Validates the fields; throws std::invalid_argument on negative or
// non-finite values, tokens outside [0,1] or negative element ids.
TaggedValue MakeTaggedValue(double value, double tiebreak, int element);

std::strong_ordering Compare(const TaggedValue& a, const TaggedValue& b);

class Distribution {
 public:
  struct PointMass {
    double value;
  };
  struct Discrete {
    std::vector<double> values;
    std::vector<double> weights;
  };
  struct Uniform {
    double low;
    double high;
  };
  struct Exponential {
    double rate;
  };
  using Kind = std::variant<PointMass, Discrete, Uniform, Exponential>;

  static Distribution Point(double value);
  static Distribution DiscreteLaw(std::vector<double> values,
                                  std::vector<double> weights);
  static Distribution UniformLaw(double low, double high);
  static Distribution ExponentialLaw(double rate);

  const Kind& kind() const { return kind_; }

  // Monotone hazard rate assertion. Defaults to true for point masses and
  // the uniform and exponential laws, false for discrete laws; callers may
  // override it.
  bool mhr() const { return mhr_; }
  Distribution& set_mhr(bool mhr) {
    mhr_ = mhr;
    return *this;
  }

  double Sample(Rng& rng) const;
  std::string Describe() const;

  friend bool operator==(const Distribution& a, const Distribution& b);

 private:
  Distribution(Kind kind, bool mhr) : kind_(std::move(kind)), mhr_(mhr) {}

  Kind kind_;
  bool mhr_;
};

// Two independent draws for one element, relabeled so that y > z.
struct ElementRealization {
  int element = 0;
  TaggedValue y;
  TaggedValue z;
};

// Orders the two draws. Throws std::invalid_argument if they are identical
// in every field or carry a foreign element id.
ElementRealization MakeRealization(int element, const TaggedValue& a,
                                   const TaggedValue& b);

// Convenience for fixed pairs: values (y, z) with tokens (0.75, 0.25).
ElementRealization FixedRealization(int element, double y, double z);

ElementRealization DrawRealization(int element, const Distribution& d,
                                   Rng& rng);

enum class Coin : uint8_t { kHeads, kTails };
enum class Label : uint8_t { kY, kZ };

inline Coin Opposite(Coin c) {
  return c == Coin::kHeads ? Coin::kTails : Coin::kHeads;
}

// The 2n values sorted in decreasing order. Indices are 0-based.
class SamplePath {
 public:
  struct Entry {
    TaggedValue w;
    int element;
    Label label;
  };

  // Throws std::invalid_argument on an empty list or element ids that are
  // not exactly {0, ..., n-1}.
  static SamplePath Build(std::span<const ElementRealization> realizations);

  int size() const { return static_cast<int>(entries_.size()); }
  int element_count() const { return static_cast<int>(y_index_.size()); }
  const Entry& operator[](int j) const { return entries_[j]; }
  const std::vector<Entry>& entries() const { return entries_; }

  int element(int j) const { return entries_[j].element; }
  double value(int j) const { return entries_[j].w.value; }
  bool is_y(int j) const { return entries_[j].label == Label::kY; }
  int partner(int j) const;
  int y_index(int e) const { return y_index_[e]; }
  int z_index(int e) const { return z_index_[e]; }

 private:
  std::vector<Entry> entries_;
  std::vector<int> y_index_;
  std::vector<int> z_index_;
};

// One outcome of the n fair coins, recorded at every path index.
// Heads at an index means that value is a reward; tails means a sample.
class Configuration {
 public:
  // Throws std::invalid_argument when an element's two coins agree or the
  // length does not match the path.
  Configuration(const SamplePath& path, std::vector<Coin> coins);

  // Bit e of `mask` set means element e's Y-value is the sample.
  static Configuration FromMask(const SamplePath& path, uint64_t mask);
  static Configuration FromElementCoins(const SamplePath& path,
                                        std::span<const Coin> y_coins);

  int size() const { return static_cast<int>(coins_.size()); }
  Coin operator[](int j) const { return coins_[j]; }
  const std::vector<Coin>& coins() const { return coins_; }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  Configuration() = default;
  std::vector<Coin> coins_;
};

// Rewards and samples indexed by element id.
struct RewardsAndSamples {
  std::vector<TaggedValue> rewards;
  std::vector<TaggedValue> samples;
};

RewardsAndSamples Split(const SamplePath& path, const Configuration& config);

struct CoinAssignment {
  SamplePath path;
  Configuration config;
  RewardsAndSamples values;
};

// Deferred decisions: one fair coin per element decides whether Y is the
// reward (heads) or the sample (tails).
CoinAssignment AssignCoins(std::span<const ElementRealization> realizations,
                           Rng& rng);

inline constexpr int kExhaustiveCap = 20;

// All 2^n configurations of a path, in mask order.
class ConfigurationRange {
 public:
  class Iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Configuration;
    using difference_type = std::ptrdiff_t;

    Iterator(const SamplePath* path, uint64_t mask)
        : path_(path), mask_(mask) {}
    Configuration operator*() const {
      return Configuration::FromMask(*path_, mask_);
    }
    Iterator& operator++() {
      ++mask_;
      return *this;
    }
    bool operator==(const Iterator& other) const {
      return mask_ == other.mask_;
    }

   private:
    const SamplePath* path_;
    uint64_t mask_;
  };

  Iterator begin() const { return {path_, 0}; }
  Iterator end() const { return {path_, count_}; }
  uint64_t size() const { return count_; }

 private:
  friend ConfigurationRange EnumerateConfigurations(const SamplePath& path);
  ConfigurationRange(const SamplePath* path, uint64_t count)
      : path_(path), count_(count) {}

  const SamplePath* path_;
  uint64_t count_;
};

// Throws CapExceeded when n > kExhaustiveCap.
ConfigurationRange EnumerateConfigurations(const SamplePath& path);

// Count of equiprobable configurations, read as numerator / 2^exponent.
struct ExactCount {
  uint64_t numerator = 0;
  int exponent = 0;

  double ToDouble() const;
  std::string ToString() const;
  friend bool operator==(const ExactCount&, const ExactCount&) = default;
};

// Small exact rational with power-of-two-friendly arithmetic.
class Rational {
 public:
  Rational() = default;
  Rational(int64_t num, int64_t den = 1);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  double ToDouble() const { return static_cast<double>(num_) / den_; }
  std::string ToString() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

 private:
  int64_t num_ = 0;
  int64_t den_ = 1;
};

}  // namespace sspi

#endif  // SSPI_CORE_H_
