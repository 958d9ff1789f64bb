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

#include "sspi/policies.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace sspi {
namespace {

constexpr const char* kAbove = "above threshold";
constexpr const char* kBelow = "below threshold";

const std::optional<TaggedValue>& Larger(const std::optional<TaggedValue>& a,
                                         const std::optional<TaggedValue>& b) {
  if (!a) return b;
  if (!b) return a;
  return *a > *b ? a : b;
}

double PriceOf(const std::optional<TaggedValue>& bar) {
  return bar ? bar->value : 0.0;
}

void CheckSamples(const FeasibilityStructure& fs,
                  std::span<const TaggedValue> samples) {
  if (static_cast<int>(samples.size()) != ElementCount(fs)) {
    throw std::invalid_argument("one sample per element is required");
  }
}

// Sums of tagged values, compared lexicographically on (value sum, tiebreak
// sum, element sum). This is the order of sums under the infinitesimal
// perturbation value + eps*tiebreak + eps^2*element, so it agrees with the
// order the greedy uses on single values.
struct PairSum {
  double value = 0.0;
  double tiebreak = 0.0;
  int64_t element = 0;
  void Add(const TaggedValue& t) {
    value += t.value;
    tiebreak += t.tiebreak;
    element += t.element;
  }
};

bool Greater(const PairSum& a, const PairSum& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.tiebreak != b.tiebreak) return a.tiebreak > b.tiebreak;
  return a.element > b.element;
}

class Rank1Policy : public OnlinePolicy {
 public:
  explicit Rank1Policy(std::span<const TaggedValue> samples)
      : OnlinePolicy({samples.begin(), samples.end()}) {
    for (const TaggedValue& s : samples_) {
      if (!bar_ || s > *bar_) bar_ = s;
    }
    thresholds_.push_back({"max-sample", bar_});
  }

  PolicyKind kind() const override { return PolicyKind::kRank1; }

  OnlineState InitialState() const override {
    OnlineState s;
    s.load.assign(1, 0);
    s.slot_of.assign(element_count(), -1);
    return s;
  }

  Decision Offer(const OnlineState& state, int element,
                 RewardProbe& probe) const override {
    (void)element;
    Decision d;
    d.price = PriceOf(bar_);
    if (state.load[0] > 0) {
      d.reason = "already collected";
      return d;
    }
    d.accepted = Clears(probe.Read(), bar_);
    d.reason = d.accepted ? kAbove : kBelow;
    d.slot = 0;
    return d;
  }

  std::optional<double> ClosedFormMin(
      std::span<const TaggedValue> rewards) const override {
    // The adversary shows the smallest clearing reward first.
    std::optional<double> best;
    for (const TaggedValue& r : rewards) {
      if (Clears(r, bar_) && (!best || r.value < *best)) best = r.value;
    }
    return best.value_or(0.0);
  }

 protected:
  void Occupy(OnlineState& state, int, int, int delta) const override {
    state.load[0] += delta;
  }

 private:
  std::optional<TaggedValue> bar_;
};

class MatchingPolicy : public OnlinePolicy {
 public:
  MatchingPolicy(const GeneralMatching& g, std::span<const TaggedValue> samples)
      : OnlinePolicy({samples.begin(), samples.end()}), g_(g) {
    vertex_bar_.assign(g.num_vertices(), std::nullopt);
    for (int e : MaximalMatching(g, samples).chosen) {
      vertex_bar_[g.edge(e).u] = samples[e];
      vertex_bar_[g.edge(e).v] = samples[e];
    }
    for (int u = 0; u < g.num_vertices(); ++u) {
      thresholds_.push_back({"vertex " + std::to_string(u), vertex_bar_[u]});
    }
  }

  PolicyKind kind() const override { return PolicyKind::kMatching; }

  OnlineState InitialState() const override {
    OnlineState s;
    s.load.assign(g_.num_vertices(), 0);
    s.slot_of.assign(element_count(), -1);
    return s;
  }

  Decision Offer(const OnlineState& state, int element,
                 RewardProbe& probe) const override {
    const Edge& ed = g_.edge(element);
    const auto& bar = Larger(vertex_bar_[ed.u], vertex_bar_[ed.v]);
    Decision d;
    d.price = PriceOf(bar);
    if (!Clears(probe.Read(), bar)) {
      d.reason = kBelow;
      return d;
    }
    if (state.load[ed.u] > 0 || state.load[ed.v] > 0) {
      d.reason = "endpoint matched";
      return d;
    }
    d.accepted = true;
    d.reason = kAbove;
    d.slot = 0;
    return d;
  }

 protected:
  void Occupy(OnlineState& state, int element, int, int delta) const override {
    state.load[g_.edge(element).u] += delta;
    state.load[g_.edge(element).v] += delta;
  }

 private:
  GeneralMatching g_;
  std::vector<std::optional<TaggedValue>> vertex_bar_;
};

class TransversalPolicy : public OnlinePolicy {
 public:
  TransversalPolicy(const Transversal& t, std::span<const TaggedValue> samples,
                    bool continue_scan)
      : OnlinePolicy({samples.begin(), samples.end()}),
        t_(t),
        continue_scan_(continue_scan) {
    if (continue_scan_ && t.num_right() > 64) {
      throw std::invalid_argument(
          "continue-scan variant supports at most 64 R-nodes");
    }
    right_bar_.assign(t.num_right(), std::nullopt);
    Solution s = OrderedMaximalMatching(t, samples);
    for (size_t i = 0; i < s.chosen.size(); ++i) {
      right_bar_[s.assignment[i]] = samples[s.chosen[i]];
    }
    for (int r = 0; r < t.num_right(); ++r) {
      thresholds_.push_back({"right " + std::to_string(r), right_bar_[r]});
    }
  }

  PolicyKind kind() const override { return PolicyKind::kTransversal; }

  OnlineState InitialState() const override {
    OnlineState s;
    s.load.assign(t_.num_right(), 0);
    s.slot_of.assign(element_count(), -1);
    return s;
  }

  Decision Offer(const OnlineState& state, int element,
                 RewardProbe& probe) const override {
    const TaggedValue& reward = probe.Read();
    Decision d;
    d.reason = "no admissible node";
    for (int r : t_.ordered_neighbors(element)) {
      std::optional<TaggedValue> bar =
          Larger(right_bar_[r], samples_[element]);
      if (!Clears(reward, bar)) continue;
      d.price = PriceOf(bar);
      if (state.load[r] == 0) {
        d.accepted = true;
        d.reason = kAbove;
        d.slot = r;
        return d;
      }
      d.reason = "node taken";
      if (!continue_scan_) return d;
    }
    return d;
  }

  uint64_t StateKey(const OnlineState& state) const override {
    if (!continue_scan_) return 0;
    uint64_t key = 0;
    for (int r = 0; r < t_.num_right(); ++r) {
      if (state.load[r] > 0) key |= uint64_t{1} << r;
    }
    return key;
  }

 protected:
  void Occupy(OnlineState& state, int, int slot, int delta) const override {
    state.load[slot] += delta;
  }

 private:
  Transversal t_;
  bool continue_scan_;
  std::vector<std::optional<TaggedValue>> right_bar_;
};

class LaminarPolicy : public OnlinePolicy {
 public:
  LaminarPolicy(const TruncatedPartition& p,
                std::span<const TaggedValue> samples)
      : OnlinePolicy({samples.begin(), samples.end()}), p_(p) {
    FeasibilityStructure fs = p;
    const int n = p.element_count();
    std::vector<char> in_opt(n, 0);
    for (int e : MatroidGreedyOpt(fs, samples).chosen) in_opt[e] = 1;
    const std::vector<int> order = DecreasingOrder(samples);
    plus_.resize(n);
    minus_.resize(n);
    for (int e = 0; e < n; ++e) {
      // Best independent set forced to contain e, by greedy after
      // contracting e.
      GreedyState state(fs);
      state.Add(e, 0);
      std::vector<char> in_forced(n, 0);
      for (int f : order) {
        if (f == e || state.Probe(f) < 0) continue;
        state.Add(f, 0);
        in_forced[f] = 1;
      }
      // Compare X_e + sum(F \ O) with sum(O \ F), F excluding e itself, so
      // common elements cancel exactly.
      for (int f = 0; f < n; ++f) {
        if (in_forced[f] && !in_opt[f]) plus_[e].Add(samples[f]);
        if (in_opt[f] && !in_forced[f]) minus_[e].Add(samples[f]);
      }
      thresholds_.push_back(
          {"critical " + std::to_string(e),
           TaggedValue{minus_[e].value - plus_[e].value, 0.0, e}});
    }
  }

  PolicyKind kind() const override { return PolicyKind::kLaminar; }

  OnlineState InitialState() const override {
    OnlineState s;
    s.load.assign(p_.num_groups() + 1, 0);
    s.slot_of.assign(element_count(), -1);
    return s;
  }

  Decision Offer(const OnlineState& state, int element,
                 RewardProbe& probe) const override {
    Decision d;
    d.price = minus_[element].value - plus_[element].value;
    int g = p_.group_of(element);
    if (state.load[g] >= p_.capacity(g) ||
        state.load[p_.num_groups()] >= p_.total_capacity()) {
      d.reason = "infeasible";
      return d;
    }
    PairSum with = plus_[element];
    with.Add(probe.Read());
    if (!Greater(with, minus_[element])) {
      d.reason = "no gain over sample optimum";
      return d;
    }
    d.accepted = true;
    d.reason = "improves sample optimum";
    d.slot = g;
    return d;
  }

 protected:
  void Occupy(OnlineState& state, int element, int, int delta) const override {
    state.load[p_.group_of(element)] += delta;
    state.load[p_.num_groups()] += delta;
  }

 private:
  TruncatedPartition p_;
  std::vector<PairSum> plus_;
  std::vector<PairSum> minus_;
};

class ReductionPolicy : public OnlinePolicy {
 public:
  ReductionPolicy(PolicyKind kind, SimplePartition partition,
                  std::span<const TaggedValue> samples)
      : OnlinePolicy({samples.begin(), samples.end()}),
        kind_(kind),
        partition_(std::move(partition)) {
    group_bar_.assign(partition_.num_groups(), std::nullopt);
    for (int e = 0; e < partition_.element_count(); ++e) {
      int g = partition_.group_of(e);
      if (g < 0) continue;
      if (!group_bar_[g] || samples[e] > *group_bar_[g]) {
        group_bar_[g] = samples[e];
      }
    }
    for (int g = 0; g < partition_.num_groups(); ++g) {
      thresholds_.push_back({"group " + std::to_string(g), group_bar_[g]});
    }
  }

  PolicyKind kind() const override { return kind_; }
  const SimplePartition& partition() const { return partition_; }

  OnlineState InitialState() const override {
    OnlineState s;
    s.load.assign(partition_.num_groups(), 0);
    s.slot_of.assign(element_count(), -1);
    return s;
  }

  Decision Offer(const OnlineState& state, int element,
                 RewardProbe& probe) const override {
    Decision d;
    int g = partition_.group_of(element);
    if (g < 0) {
      d.reason = "outside E'";
      return d;
    }
    d.price = PriceOf(group_bar_[g]);
    if (state.load[g] > 0) {
      d.reason = "group filled";
      return d;
    }
    d.accepted = Clears(probe.Read(), group_bar_[g]);
    d.reason = d.accepted ? kAbove : kBelow;
    d.slot = g;
    return d;
  }

  std::optional<double> ClosedFormMin(
      std::span<const TaggedValue> rewards) const override {
    // Groups are independent single-choice instances; in each one the
    // adversary shows the smallest clearing reward first.
    std::vector<std::optional<double>> best(partition_.num_groups());
    for (int e = 0; e < partition_.element_count(); ++e) {
      int g = partition_.group_of(e);
      if (g < 0 || !Clears(rewards[e], group_bar_[g])) continue;
      if (!best[g] || rewards[e].value < *best[g]) best[g] = rewards[e].value;
    }
    double total = 0.0;
    for (const auto& b : best) total += b.value_or(0.0);
    return total;
  }

 protected:
  void Occupy(OnlineState& state, int, int slot, int delta) const override {
    state.load[slot] += delta;
  }

 private:
  PolicyKind kind_;
  SimplePartition partition_;
  std::vector<std::optional<TaggedValue>> group_bar_;
};

struct SearchKey {
  uint64_t sets;
  uint64_t extra;
  bool operator==(const SearchKey&) const = default;
};

struct SearchKeyHash {
  size_t operator()(const SearchKey& k) const {
    uint64_t h = k.sets * 0x9e3779b97f4a7c15ULL;
    h ^= k.extra + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2);
    return static_cast<size_t>(h);
  }
};

class OrderSearcher {
 public:
  OrderSearcher(const OnlinePolicy& policy, std::span<const TaggedValue> rewards,
                const FinalObjective& objective)
      : policy_(policy),
        rewards_(rewards),
        objective_(objective),
        n_(policy.element_count()),
        full_((uint64_t{1} << n_) - 1),
        state_(policy.InitialState()) {}

  double Solve(uint64_t arrived) {
    if (arrived == full_) return objective_(state_);
    SearchKey key{arrived | (state_.accepted_mask << n_),
                  policy_.StateKey(state_)};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.first;
    double best = std::numeric_limits<double>::infinity();
    int best_next = -1;
    for (int e = 0; e < n_; ++e) {
      if (arrived >> e & 1) continue;
      RewardProbe probe(rewards_[e]);
      Decision d = policy_.Offer(state_, e, probe);
      double v;
      if (d.accepted) {
        if (!(rewards_[e] > policy_.samples()[e])) ++z_violations_;
        policy_.Commit(state_, e, d);
        v = Solve(arrived | uint64_t{1} << e);
        policy_.Revert(state_, e, d);
      } else {
        v = Solve(arrived | uint64_t{1} << e);
      }
      if (v < best) {
        best = v;
        best_next = e;
      }
    }
    memo_.emplace(key, std::make_pair(best, best_next));
    return best;
  }

  std::vector<int> Reconstruct() {
    std::vector<int> order;
    OnlineState state = policy_.InitialState();
    std::swap(state, state_);
    uint64_t arrived = 0;
    while (arrived != full_) {
      SearchKey key{arrived | (state_.accepted_mask << n_),
                    policy_.StateKey(state_)};
      int e = memo_.at(key).second;
      RewardProbe probe(rewards_[e]);
      Decision d = policy_.Offer(state_, e, probe);
      if (d.accepted) policy_.Commit(state_, e, d);
      arrived |= uint64_t{1} << e;
      order.push_back(e);
    }
    std::swap(state, state_);
    return order;
  }

  int64_t z_violations() const { return z_violations_; }
  int64_t states() const { return static_cast<int64_t>(memo_.size()); }

 private:
  const OnlinePolicy& policy_;
  std::span<const TaggedValue> rewards_;
  const FinalObjective& objective_;
  int n_;
  uint64_t full_;
  OnlineState state_;
  std::unordered_map<SearchKey, std::pair<double, int>, SearchKeyHash> memo_;
  int64_t z_violations_ = 0;
};

void CheckRewards(const OnlinePolicy& policy,
                  std::span<const TaggedValue> rewards) {
  if (static_cast<int>(rewards.size()) != policy.element_count()) {
    throw std::invalid_argument("one reward per element is required");
  }
}

}  // namespace

std::string_view PolicyName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kRank1:
      return "rank1";
    case PolicyKind::kMatching:
      return "matching";
    case PolicyKind::kTransversal:
      return "transversal";
    case PolicyKind::kLaminar:
      return "laminar";
    case PolicyKind::kReductionGraphic:
      return "reduction-graphic";
    case PolicyKind::kReductionCustom:
      return "reduction-custom";
  }
  return "unknown";
}

PolicyKind ParsePolicyKind(std::string_view name) {
  for (PolicyKind k :
       {PolicyKind::kRank1, PolicyKind::kMatching, PolicyKind::kTransversal,
        PolicyKind::kLaminar, PolicyKind::kReductionGraphic,
        PolicyKind::kReductionCustom}) {
    if (PolicyName(k) == name) return k;
  }
  throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

bool Clears(const TaggedValue& reward, const std::optional<TaggedValue>& bar) {
  return bar ? reward > *bar : reward.value > 0.0;
}

void OnlinePolicy::Commit(OnlineState& state, int element,
                          const Decision& d) const {
  state.accepted.push_back(element);
  state.slot_of[element] = d.slot;
  if (element < 64) state.accepted_mask |= uint64_t{1} << element;
  Occupy(state, element, d.slot, +1);
}

void OnlinePolicy::Revert(OnlineState& state, int element,
                          const Decision& d) const {
  state.accepted.pop_back();
  state.slot_of[element] = -1;
  if (element < 64) state.accepted_mask &= ~(uint64_t{1} << element);
  Occupy(state, element, d.slot, -1);
}

const TaggedValue& SampleOracle::Query(int element) {
  queried_.push_back(element);
  return samples_[element];
}

SimplePartition GraphicScheme::Partition(const FeasibilityStructure& fs,
                                         SampleOracle&, Rng& rng) const {
  const auto* g = std::get_if<Graphic>(&fs);
  if (g == nullptr) {
    throw std::invalid_argument("graphic scheme needs a graphic matroid");
  }
  return sigma_ ? GraphicPartition(*g, *sigma_) : GraphicPartition(*g, rng);
}

FixedScheme::FixedScheme(std::vector<int> queried,
                         std::vector<std::vector<int>> groups, double alpha)
    : queried_(std::move(queried)), groups_(std::move(groups)), alpha_(alpha) {
  if (!(alpha_ >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
}

SimplePartition FixedScheme::Partition(const FeasibilityStructure& fs,
                                       SampleOracle& oracle, Rng&) const {
  const int n = ElementCount(fs);
  for (int e : queried_) {
    if (e < 0 || e >= n) throw std::invalid_argument("queried id out of range");
    oracle.Query(e);
  }
  std::vector<int> group_of(n, -1);
  for (size_t g = 0; g < groups_.size(); ++g) {
    for (int e : groups_[g]) {
      if (e < 0 || e >= n) throw std::invalid_argument("group id out of range");
      if (group_of[e] >= 0) {
        throw std::invalid_argument("partition groups overlap at element " +
                                    std::to_string(e));
      }
      group_of[e] = static_cast<int>(g);
    }
  }
  return SimplePartition(std::move(group_of),
                         static_cast<int>(groups_.size()));
}

void ValidatePartition(const FeasibilityStructure& fs,
                       const SimplePartition& partition,
                       std::span<const int> queried) {
  if (partition.element_count() != ElementCount(fs)) {
    throw std::invalid_argument("partition and structure sizes differ");
  }
  for (int e : queried) {
    if (partition.in_ground_set(e)) {
      throw std::invalid_argument("group contains queried element " +
                                  std::to_string(e));
    }
  }
  std::vector<std::vector<int>> groups;
  int64_t choices = 1;
  for (auto& g : partition.Groups()) {
    if (g.empty()) continue;
    choices *= static_cast<int64_t>(g.size());
    if (choices > kTransversalCheckCap) {
      throw CapExceeded("transversal enumeration",
                        static_cast<int>(kTransversalCheckCap),
                        static_cast<int>(std::min<int64_t>(
                            choices, std::numeric_limits<int>::max())));
    }
    groups.push_back(std::move(g));
  }
  // Independence is downward closed, so full transversals suffice.
  std::vector<size_t> pick(groups.size(), 0);
  std::vector<int> set(groups.size());
  for (;;) {
    for (size_t i = 0; i < groups.size(); ++i) set[i] = groups[i][pick[i]];
    if (!IsIndependent(fs, set)) {
      throw std::invalid_argument(
          "a transversal of the partition is dependent in the matroid");
    }
    size_t i = 0;
    while (i < groups.size() && ++pick[i] == groups[i].size()) pick[i++] = 0;
    if (i == groups.size()) break;
  }
}

std::unique_ptr<OnlinePolicy> PreparePolicy(PolicyKind kind,
                                            const FeasibilityStructure& fs,
                                            std::span<const TaggedValue> samples,
                                            Rng& rng,
                                            const PolicyOptions& options) {
  CheckSamples(fs, samples);
  auto mismatch = [&](const char* needs) {
    return std::invalid_argument(std::string(PolicyName(kind)) +
                                 " policy needs " + needs + ", got " +
                                 KindName(fs));
  };
  switch (kind) {
    case PolicyKind::kRank1: {
      const auto* p = std::get_if<TruncatedPartition>(&fs);
      if (p == nullptr || p->total_capacity() != 1) {
        throw mismatch("a rank-1 structure");
      }
      return std::make_unique<Rank1Policy>(samples);
    }
    case PolicyKind::kMatching: {
      const auto* g = std::get_if<GeneralMatching>(&fs);
      if (g == nullptr) throw mismatch("a matching structure");
      return std::make_unique<MatchingPolicy>(*g, samples);
    }
    case PolicyKind::kTransversal: {
      const auto* t = std::get_if<Transversal>(&fs);
      if (t == nullptr) throw mismatch("a transversal structure");
      return std::make_unique<TransversalPolicy>(
          *t, samples, options.transversal_continue_scan);
    }
    case PolicyKind::kLaminar: {
      const auto* p = std::get_if<TruncatedPartition>(&fs);
      if (p == nullptr) throw mismatch("a truncated partition matroid");
      return std::make_unique<LaminarPolicy>(*p, samples);
    }
    case PolicyKind::kReductionGraphic:
    case PolicyKind::kReductionCustom: {
      if (!IsMatroid(fs)) throw mismatch("a matroid");
      std::shared_ptr<const PartitionScheme> scheme = options.scheme;
      if (!scheme) {
        if (kind == PolicyKind::kReductionCustom) {
          throw std::invalid_argument(
              "reduction-custom needs a partition scheme");
        }
        scheme = std::make_shared<GraphicScheme>();
      }
      SampleOracle oracle(samples);
      SimplePartition partition = scheme->Partition(fs, oracle, rng);
      if (partition.element_count() != ElementCount(fs)) {
        throw std::invalid_argument("partition and structure sizes differ");
      }
      for (int e : oracle.queried()) {
        if (partition.in_ground_set(e)) {
          throw std::invalid_argument(
              "scheme placed a queried element in a group");
        }
      }
      return std::make_unique<ReductionPolicy>(kind, std::move(partition),
                                               samples);
    }
  }
  throw std::invalid_argument("unknown policy kind");
}

std::string_view ArrivalModeName(ArrivalMode mode) {
  switch (mode) {
    case ArrivalMode::kFixed:
      return "fixed";
    case ArrivalMode::kIncreasing:
      return "increasing";
    case ArrivalMode::kRandom:
      return "random";
    case ArrivalMode::kExhaustiveMin:
      return "exhaustive-min";
  }
  return "unknown";
}

ArrivalMode ParseArrivalMode(std::string_view name) {
  for (ArrivalMode m : {ArrivalMode::kFixed, ArrivalMode::kIncreasing,
                        ArrivalMode::kRandom, ArrivalMode::kExhaustiveMin}) {
    if (ArrivalModeName(m) == name) return m;
  }
  throw std::invalid_argument("unknown adversary '" + std::string(name) + "'");
}

PolicyTrace RunPolicy(const OnlinePolicy& policy,
                      std::span<const TaggedValue> rewards,
                      std::span<const int> order) {
  CheckRewards(policy, rewards);
  const int n = policy.element_count();
  std::vector<char> seen(n, 0);
  if (static_cast<int>(order.size()) != n) {
    throw std::invalid_argument("arrival order must list every element");
  }
  for (int e : order) {
    if (e < 0 || e >= n || seen[e]) {
      throw std::invalid_argument("arrival order is not a permutation");
    }
    seen[e] = 1;
  }
  PolicyTrace trace;
  trace.policy = std::string(PolicyName(policy.kind()));
  trace.thresholds = policy.thresholds();
  OnlineState state = policy.InitialState();
  for (int e : order) {
    RewardProbe probe(rewards[e]);
    Decision d = policy.Offer(state, e, probe);
    ArrivalRecord rec;
    rec.element = e;
    if (probe.read()) rec.reward = rewards[e];
    rec.accepted = d.accepted;
    rec.reason = d.reason;
    rec.price = d.price;
    rec.slot = d.slot;
    trace.decisions.push_back(std::move(rec));
    if (!d.accepted) continue;
    policy.Commit(state, e, d);
    trace.chosen.chosen.push_back(e);
    if (policy.kind() == PolicyKind::kTransversal) {
      trace.chosen.assignment.push_back(d.slot);
    }
    trace.chosen.total += rewards[e].value;
  }
  return trace;
}

std::vector<int> IncreasingOrder(std::span<const TaggedValue> rewards) {
  std::vector<int> order = DecreasingOrder(rewards);
  std::reverse(order.begin(), order.end());
  return order;
}

double CollectedTotal(const OnlineState& state,
                      std::span<const TaggedValue> rewards) {
  double total = 0.0;
  for (int e : state.accepted) total += rewards[e].value;
  return total;
}

OrderSearchResult MinOverOrders(const OnlinePolicy& policy,
                                std::span<const TaggedValue> rewards,
                                const FinalObjective& objective) {
  CheckRewards(policy, rewards);
  const int n = policy.element_count();
  OrderSearchResult result;
  if (!objective) {
    if (auto closed = policy.ClosedFormMin(rewards)) {
      // Every acceptance that any order can produce is available from the
      // empty state for the closed-form policies.
      OnlineState start = policy.InitialState();
      for (int e = 0; e < n; ++e) {
        RewardProbe probe(rewards[e]);
        if (policy.Offer(start, e, probe).accepted &&
            !(rewards[e] > policy.samples()[e])) {
          ++result.z_violations;
        }
      }
      result.value = *closed;
      // In increasing order each group's smallest clearing reward comes
      // first, which is what the closed form charges.
      result.order = IncreasingOrder(rewards);
      return result;
    }
  }
  if (n > kOrderSearchCap) {
    throw CapExceeded("arrival order search", kOrderSearchCap, n);
  }
  FinalObjective total = [&](const OnlineState& s) {
    return CollectedTotal(s, rewards);
  };
  OrderSearcher searcher(policy, rewards, objective ? objective : total);
  result.value = searcher.Solve(0);
  result.order = searcher.Reconstruct();
  result.z_violations = searcher.z_violations();
  result.states = searcher.states();
  return result;
}

ArrivalOrder AdversarialOrder(const OnlinePolicy& policy,
                              std::span<const TaggedValue> rewards,
                              ArrivalMode mode, Rng* rng,
                              std::span<const int> fixed) {
  CheckRewards(policy, rewards);
  const int n = policy.element_count();
  ArrivalOrder out;
  out.mode = mode;
  switch (mode) {
    case ArrivalMode::kFixed:
      if (fixed.empty()) {
        out.order.resize(n);
        std::iota(out.order.begin(), out.order.end(), 0);
      } else {
        out.order.assign(fixed.begin(), fixed.end());
      }
      break;
    case ArrivalMode::kIncreasing:
      out.order = IncreasingOrder(rewards);
      break;
    case ArrivalMode::kRandom:
      if (rng == nullptr) throw std::invalid_argument("random order needs rng");
      out.order.resize(n);
      std::iota(out.order.begin(), out.order.end(), 0);
      std::shuffle(out.order.begin(), out.order.end(), *rng);
      break;
    case ArrivalMode::kExhaustiveMin: {
      if (n > kExhaustiveOrderCap) {
        throw CapExceeded("exhaustive-min adversary", kExhaustiveOrderCap, n);
      }
      FinalObjective total = [&](const OnlineState& s) {
        return CollectedTotal(s, rewards);
      };
      OrderSearcher searcher(policy, rewards, total);
      searcher.Solve(0);
      out.order = searcher.Reconstruct();
      break;
    }
  }
  return out;
}

}  // namespace sspi
