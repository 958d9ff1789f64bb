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

// Random small instances and brute-force reference answers for the tests.
// Nothing here calls the library's optimizers, so the two can disagree.

#ifndef SSPI_TESTS_SUPPORT_RANDOM_INSTANCES_H_
#define SSPI_TESTS_SUPPORT_RANDOM_INSTANCES_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "sspi/core.h"
#include "sspi/feasibility.h"
#include "sspi/policies.h"

namespace sspi::testing {

inline int Uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double Token(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Integer values in [1, 20] make ties common, which is where tie-breaking
// bugs hide.
inline std::vector<ElementRealization> RandomRealizations(int n, Rng& rng) {
  std::vector<ElementRealization> out;
  for (int e = 0; e < n; ++e) {
    TaggedValue a{static_cast<double>(Uniform(rng, 1, 20)), Token(rng), e};
    TaggedValue b{static_cast<double>(Uniform(rng, 1, 20)), Token(rng), e};
    if (a == b) b.tiebreak = a.tiebreak < 0.5 ? 0.9 : 0.1;
    out.push_back(MakeRealization(e, a, b));
  }
  return out;
}

inline std::vector<TaggedValue> RandomWeights(int n, Rng& rng) {
  std::vector<TaggedValue> w;
  for (int e = 0; e < n; ++e) {
    w.push_back({static_cast<double>(Uniform(rng, 1, 20)), Token(rng), e});
  }
  return w;
}

// Multigraph: parallel edges allowed.
inline GeneralMatching RandomMatching(int max_vertices, int edges, Rng& rng) {
  int v = Uniform(rng, 2, max_vertices);
  std::vector<Edge> es;
  for (int i = 0; i < edges; ++i) {
    int a = Uniform(rng, 0, v - 1);
    int b = Uniform(rng, 0, v - 2);
    if (b >= a) ++b;
    es.push_back({a, b});
  }
  return GeneralMatching(v, es);
}

inline Transversal RandomTransversal(int max_right, int left, Rng& rng) {
  int r = Uniform(rng, 1, max_right);
  std::vector<std::vector<int>> adj(left);
  for (auto& a : adj) {
    for (int x = 0; x < r; ++x) {
      if (Uniform(rng, 0, 2) > 0) a.push_back(x);
    }
  }
  std::vector<int> order(r);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return Transversal(r, order, adj);
}

inline TruncatedPartition RandomTruncatedPartition(int n, Rng& rng) {
  int groups = Uniform(rng, 1, std::min(n, 3));
  std::vector<int> group_of(n);
  for (int e = 0; e < n; ++e) group_of[e] = e < groups ? e : Uniform(rng, 0, groups - 1);
  std::shuffle(group_of.begin(), group_of.end(), rng);
  std::vector<int> size(groups, 0);
  for (int g : group_of) ++size[g];
  std::vector<int> cap(groups);
  int sum = 0;
  for (int g = 0; g < groups; ++g) {
    cap[g] = Uniform(rng, 1, size[g]);
    sum += cap[g];
  }
  return TruncatedPartition(group_of, cap, Uniform(rng, 1, sum));
}

inline Graphic RandomGraphic(int vertices, int edges, Rng& rng) {
  std::vector<Edge> es;
  for (int i = 0; i < edges; ++i) {
    int a = Uniform(rng, 0, vertices - 1);
    int b = Uniform(rng, 0, vertices - 2);
    if (b >= a) ++b;
    es.push_back({a, b});
  }
  return Graphic(vertices, es);
}

// Brute-force oracles over every subset.

inline bool MatchingOk(const GeneralMatching& g, const std::vector<int>& s) {
  std::vector<int> used(g.num_vertices(), 0);
  for (int e : s) {
    if (used[g.edge(e).u]++ || used[g.edge(e).v]++) return false;
  }
  return true;
}

// Kuhn-style search kept deliberately naive: try every assignment.
inline bool TransversalOk(const Transversal& t, const std::vector<int>& s) {
  std::vector<char> used(t.num_right(), 0);
  std::function<bool(size_t)> place = [&](size_t i) {
    if (i == s.size()) return true;
    for (int r : t.neighbors(s[i])) {
      if (used[r]) continue;
      used[r] = 1;
      if (place(i + 1)) return true;
      used[r] = 0;
    }
    return false;
  };
  return place(0);
}

inline bool TruncatedOk(const TruncatedPartition& p, const std::vector<int>& s) {
  if (static_cast<int>(s.size()) > p.total_capacity()) return false;
  std::vector<int> load(p.num_groups(), 0);
  for (int e : s) {
    if (++load[p.group_of(e)] > p.capacity(p.group_of(e))) return false;
  }
  return true;
}

inline bool ForestOk(const Graphic& g, const std::vector<int>& s) {
  std::vector<int> parent(g.num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (int e : s) {
    int a = find(g.edge(e).u), b = find(g.edge(e).v);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

inline bool BruteIndependent(const FeasibilityStructure& fs,
                             const std::vector<int>& s) {
  if (auto* m = std::get_if<GeneralMatching>(&fs)) return MatchingOk(*m, s);
  if (auto* t = std::get_if<Transversal>(&fs)) return TransversalOk(*t, s);
  if (auto* p = std::get_if<TruncatedPartition>(&fs)) return TruncatedOk(*p, s);
  if (auto* g = std::get_if<Graphic>(&fs)) return ForestOk(*g, s);
  const auto& sp = std::get<SimplePartition>(fs);
  std::vector<int> seen(sp.num_groups(), 0);
  for (int e : s) {
    if (!sp.in_ground_set(e) || seen[sp.group_of(e)]++) return false;
  }
  return true;
}

inline double BruteOptimum(const FeasibilityStructure& fs,
                           const std::vector<double>& w) {
  int n = static_cast<int>(w.size());
  double best = 0.0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> s;
    double total = 0.0;
    for (int e = 0; e < n; ++e) {
      if (mask >> e & 1) {
        s.push_back(e);
        total += w[e];
      }
    }
    if (total > best && BruteIndependent(fs, s)) best = total;
  }
  return best;
}

inline std::vector<double> Values(const std::vector<TaggedValue>& w) {
  std::vector<double> out;
  for (const auto& x : w) out.push_back(x.value);
  return out;
}

// Minimum collected total over all n! orders, by plain permutation.
inline double BruteMinOverOrders(const OnlinePolicy& policy,
                                 const std::vector<TaggedValue>& rewards) {
  std::vector<int> order(rewards.size());
  std::iota(order.begin(), order.end(), 0);
  double best = 1e300;
  do {
    best = std::min(best, RunPolicy(policy, rewards, order).chosen.total);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// Rewards and samples for coin mask `mask`: bit e set means element e's
// larger draw is the sample.
inline void SplitByMask(const std::vector<ElementRealization>& rz,
                        uint64_t mask, std::vector<TaggedValue>& rewards,
                        std::vector<TaggedValue>& samples) {
  rewards.assign(rz.size(), {});
  samples.assign(rz.size(), {});
  for (const auto& r : rz) {
    bool tails = mask >> r.element & 1;
    rewards[r.element] = tails ? r.z : r.y;
    samples[r.element] = tails ? r.y : r.z;
  }
}

}  // namespace sspi::testing

#endif  // SSPI_TESTS_SUPPORT_RANDOM_INSTANCES_H_
