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

#ifndef SSPI_POLICIES_H_
#define SSPI_POLICIES_H_

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sspi/core.h"
#include "sspi/feasibility.h"

namespace sspi {

enum class PolicyKind {
  kRank1,
  kMatching,
  kTransversal,
  kLaminar,
  kReductionGraphic,
  kReductionCustom,
};

std::string_view PolicyName(PolicyKind kind);
// Throws std::invalid_argument on an unknown name.
PolicyKind ParsePolicyKind(std::string_view name);

// Reads the reward of the arriving element and remembers whether it did.
class RewardProbe {
 public:
  explicit RewardProbe(const TaggedValue& reward) : reward_(reward) {}
  const TaggedValue& Read() {
    read_ = true;
    return reward_;
  }
  bool read() const { return read_; }

 private:
  TaggedValue reward_;
  bool read_ = false;
};

struct Decision {
  bool accepted = false;
  const char* reason = "";
  // The bar the reward had to clear; for a sale this is the critical price.
  double price = 0.0;
  // Resource taken on acceptance (vertex pair, R-node or group).
  int slot = -1;
};

// Mutable online state. `load` is indexed by the policy's resources.
struct OnlineState {
  std::vector<int> load;
  std::vector<int> accepted;
  std::vector<int> slot_of;  // per element, -1 when not accepted
  uint64_t accepted_mask = 0;  // valid for the first 64 elements
};

// A threshold of the offline phase. An empty value means a zero
// threshold: any strictly positive reward clears it.
struct Threshold {
  std::string key;
  std::optional<TaggedValue> value;
};

bool Clears(const TaggedValue& reward, const std::optional<TaggedValue>& bar);

// A policy after its offline phase. Offer never mutates; Commit and Revert
// apply or undo an accepted decision so order searches can backtrack.
class OnlinePolicy {
 public:
  virtual ~OnlinePolicy() = default;

  virtual PolicyKind kind() const = 0;
  int element_count() const { return static_cast<int>(samples_.size()); }
  const std::vector<TaggedValue>& samples() const { return samples_; }
  const std::vector<Threshold>& thresholds() const { return thresholds_; }

  virtual OnlineState InitialState() const = 0;
  virtual Decision Offer(const OnlineState& state, int element,
                         RewardProbe& probe) const = 0;
  virtual void Commit(OnlineState& state, int element,
                      const Decision& d) const;
  virtual void Revert(OnlineState& state, int element,
                      const Decision& d) const;

  // Extra state bits that the accepted set alone does not determine.
  virtual uint64_t StateKey(const OnlineState&) const { return 0; }

  // Exact minimum of the collected total over all arrival orders when a
  // closed form exists.
  virtual std::optional<double> ClosedFormMin(
      std::span<const TaggedValue> rewards) const {
    (void)rewards;
    return std::nullopt;
  }

 protected:
  explicit OnlinePolicy(std::vector<TaggedValue> samples)
      : samples_(std::move(samples)) {}

  virtual void Occupy(OnlineState& state, int element, int slot,
                      int delta) const = 0;

  std::vector<TaggedValue> samples_;
  std::vector<Threshold> thresholds_;
};

// Reads samples on the queried set only, so audits can check what a
// partition scheme observed.
class SampleOracle {
 public:
  explicit SampleOracle(std::span<const TaggedValue> samples)
      : samples_(samples) {}
  const TaggedValue& Query(int element);
  const std::vector<int>& queried() const { return queried_; }

 private:
  std::span<const TaggedValue> samples_;
  std::vector<int> queried_;
};

// Turns a matroid into a simple partition matroid on E' outside the
// queried set.
class PartitionScheme {
 public:
  virtual ~PartitionScheme() = default;
  virtual double alpha() const = 0;
  virtual SimplePartition Partition(const FeasibilityStructure& fs,
                                    SampleOracle& oracle, Rng& rng) const = 0;
};

// Random vertex order; each edge joins its sigma-smaller endpoint's group.
// A fixed sigma makes the scheme deterministic.
class GraphicScheme : public PartitionScheme {
 public:
  GraphicScheme() = default;
  explicit GraphicScheme(std::vector<int> sigma) : sigma_(std::move(sigma)) {}
  double alpha() const override { return 2.0; }
  SimplePartition Partition(const FeasibilityStructure& fs,
                            SampleOracle& oracle, Rng& rng) const override;

 private:
  std::optional<std::vector<int>> sigma_;
};

// User-supplied groups with a fixed queried set.
class FixedScheme : public PartitionScheme {
 public:
  FixedScheme(std::vector<int> queried, std::vector<std::vector<int>> groups,
              double alpha);
  double alpha() const override { return alpha_; }
  SimplePartition Partition(const FeasibilityStructure& fs,
                            SampleOracle& oracle, Rng& rng) const override;

  const std::vector<int>& queried() const { return queried_; }
  const std::vector<std::vector<int>>& groups() const { return groups_; }

 private:
  std::vector<int> queried_;
  std::vector<std::vector<int>> groups_;
  double alpha_;
};

inline constexpr int64_t kTransversalCheckCap = int64_t{1} << 20;

// Throws std::invalid_argument when a group meets the queried set or some
// choice of one element per group is dependent in `fs`. The enumeration of
// choices is capped at kTransversalCheckCap.
void ValidatePartition(const FeasibilityStructure& fs,
                       const SimplePartition& partition,
                       std::span<const int> queried);

struct PolicyOptions {
  // Transversal: keep scanning past an R-node already taken online.
  bool transversal_continue_scan = false;
  // Required for kReductionCustom; kReductionGraphic defaults to a random
  // sigma when unset.
  std::shared_ptr<const PartitionScheme> scheme;
};

// Runs the offline phase. Throws std::invalid_argument when the policy does
// not fit the structure or the sample vector has the wrong length.
std::unique_ptr<OnlinePolicy> PreparePolicy(PolicyKind kind,
                                            const FeasibilityStructure& fs,
                                            std::span<const TaggedValue> samples,
                                            Rng& rng,
                                            const PolicyOptions& options = {});

enum class ArrivalMode { kFixed, kIncreasing, kRandom, kExhaustiveMin };

std::string_view ArrivalModeName(ArrivalMode mode);
ArrivalMode ParseArrivalMode(std::string_view name);

struct ArrivalOrder {
  std::vector<int> order;
  ArrivalMode mode = ArrivalMode::kFixed;
};

struct ArrivalRecord {
  int element = 0;
  std::optional<TaggedValue> reward;  // empty when the policy never read it
  bool accepted = false;
  std::string reason;
  double price = 0.0;
  int slot = -1;
};

struct PolicyTrace {
  std::string policy;
  std::vector<Threshold> thresholds;
  std::vector<ArrivalRecord> decisions;
  Solution chosen;
};

// Throws std::invalid_argument unless `order` is a permutation.
PolicyTrace RunPolicy(const OnlinePolicy& policy,
                      std::span<const TaggedValue> rewards,
                      std::span<const int> order);

std::vector<int> IncreasingOrder(std::span<const TaggedValue> rewards);

inline constexpr int kExhaustiveOrderCap = 8;
inline constexpr int kOrderSearchCap = 16;

// Objective on the state after every element has arrived.
using FinalObjective = std::function<double(const OnlineState&)>;

struct OrderSearchResult {
  double value = 0.0;
  std::vector<int> order;  // a minimizing order
  // Acceptances seen anywhere in the search whose reward did not exceed
  // the element's own sample.
  int64_t z_violations = 0;
  int64_t states = 0;
};

// Minimum of `objective` over every arrival order, by memoized search on
// (arrived set, policy state). Defaults to the collected total. Throws
// CapExceeded beyond kOrderSearchCap elements.
OrderSearchResult MinOverOrders(const OnlinePolicy& policy,
                                std::span<const TaggedValue> rewards,
                                const FinalObjective& objective = nullptr);

// Throws CapExceeded for exhaustive-min beyond kExhaustiveOrderCap; random
// mode needs `rng`, fixed mode needs `fixed`.
ArrivalOrder AdversarialOrder(const OnlinePolicy& policy,
                              std::span<const TaggedValue> rewards,
                              ArrivalMode mode, Rng* rng = nullptr,
                              std::span<const int> fixed = {});

double CollectedTotal(const OnlineState& state,
                      std::span<const TaggedValue> rewards);

}  // namespace sspi

#endif  // SSPI_POLICIES_H_
