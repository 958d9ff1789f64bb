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

#ifndef SSPI_FEASIBILITY_H_
#define SSPI_FEASIBILITY_H_

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sspi/core.h"

namespace sspi {

struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Elements are edges. Parallel edges are allowed, self-loops are not.
class GeneralMatching {
 public:
  GeneralMatching(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const { return num_vertices_; }
  int element_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool SharesVertex(int a, int b) const;
  bool Parallel(int a, int b) const;

 private:
  int num_vertices_;
  std::vector<Edge> edges_;
};

// Elements are the L-nodes. R-nodes are 0..num_right-1 and `right_order`
// lists them from highest to lowest priority.
class Transversal {
 public:
  Transversal(int num_right, std::vector<int> right_order,
              std::vector<std::vector<int>> adjacency);

  int num_right() const { return num_right_; }
  int element_count() const { return static_cast<int>(adjacency_.size()); }
  const std::vector<int>& right_order() const { return right_order_; }
  int rank_of(int r) const { return rank_.at(r); }
  const std::vector<int>& neighbors(int l) const { return adjacency_.at(l); }
  // Neighbors of l sorted by priority (first = smallest in the R-order).
  const std::vector<int>& ordered_neighbors(int l) const {
    return ordered_.at(l);
  }

 private:
  int num_right_;
  std::vector<int> right_order_;
  std::vector<int> rank_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> ordered_;
};

// Disjoint groups covering the ground set, a capacity per group and one
// global capacity.
class TruncatedPartition {
 public:
  TruncatedPartition(std::vector<int> group_of, std::vector<int> capacity,
                     int total_capacity);

  static TruncatedPartition Rank1(int n);

  int element_count() const { return static_cast<int>(group_of_.size()); }
  int num_groups() const { return static_cast<int>(capacity_.size()); }
  int group_of(int e) const { return group_of_.at(e); }
  int capacity(int g) const { return capacity_.at(g); }
  int total_capacity() const { return total_capacity_; }
  const std::vector<int>& group_sizes() const { return sizes_; }

 private:
  std::vector<int> group_of_;
  std::vector<int> capacity_;
  std::vector<int> sizes_;
  int total_capacity_;
};

// At most one element per group. Elements with group -1 lie outside the
// ground set E' and are never independent.
class SimplePartition {
 public:
  SimplePartition(std::vector<int> group_of, int num_groups);

  int element_count() const { return static_cast<int>(group_of_.size()); }
  int num_groups() const { return num_groups_; }
  int group_of(int e) const { return group_of_.at(e); }
  bool in_ground_set(int e) const { return group_of_.at(e) >= 0; }
  std::vector<std::vector<int>> Groups() const;

 private:
  std::vector<int> group_of_;
  int num_groups_;
};

class Graphic {
 public:
  Graphic(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const { return num_vertices_; }
  int element_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  int num_vertices_;
  std::vector<Edge> edges_;
};

using FeasibilityStructure = std::variant<GeneralMatching, Transversal,
                                          TruncatedPartition, SimplePartition,
                                          Graphic>;

int ElementCount(const FeasibilityStructure& fs);
std::string KindName(const FeasibilityStructure& fs);
bool IsMatroid(const FeasibilityStructure& fs);

// Throws std::out_of_range for unknown element ids.
bool IsIndependent(const FeasibilityStructure& fs, std::span<const int> set);

struct Solution {
  std::vector<int> chosen;
  // Transversal: R-node per chosen element, aligned with `chosen`.
  std::vector<int> assignment;
  double total = 0.0;
};

// Incremental state of the parameterized greedy. For transversal systems
// an element takes the highest-priority free neighbor, so the state is an
// ordered-maximal matching rather than a general independence test.
class GreedyState {
 public:
  explicit GreedyState(const FeasibilityStructure& fs);

  // Slot the element would occupy (the R-node for transversal, 0 for the
  // other kinds), or -1 when adding it would violate feasibility.
  int Probe(int element) const;
  void Add(int element, int slot);
  bool contains(int element) const { return in_set_[element]; }

 private:
  int Find(int x) const;

  const FeasibilityStructure* fs_;
  std::vector<char> in_set_;
  std::vector<int> load_;
  int total_ = 0;
  mutable std::vector<int> parent_;
};

// One pass of Greedy(W, C, side). free[j] is the free-index flag for every
// j; slot[j] is the candidate slot (R-node for transversal) or -1.
struct PathScan {
  std::vector<char> free;
  std::vector<int> slot;
  std::vector<char> taken;
  Solution solution;
};

PathScan ScanPath(const FeasibilityStructure& fs, const SamplePath& path,
                  const Configuration& config, Coin side);

Solution GreedyOnPath(const FeasibilityStructure& fs, const SamplePath& path,
                      const Configuration& config, Coin side);

// Throws std::out_of_range when j is not a valid 0-based index.
bool FreeIndex(const FeasibilityStructure& fs, const SamplePath& path,
               const Configuration& config, int j, Coin side);

Solution MaximalMatching(const GeneralMatching& g,
                         std::span<const TaggedValue> weights);

inline constexpr int kMatchingEdgeCap = 24;

// Exact maximum-weight matching by branch and bound. Throws CapExceeded
// beyond kMatchingEdgeCap edges.
Solution OptimalMatching(const GeneralMatching& g,
                         std::span<const TaggedValue> weights);

Solution OrderedMaximalMatching(const Transversal& t,
                                std::span<const TaggedValue> weights);

// Exact maximum-weight independent set of the transversal matroid.
Solution OptimalTransversal(const Transversal& t,
                            std::span<const TaggedValue> weights);

// Greedy in decreasing weight order with an exact independence oracle;
// optimal for every matroid kind. Rejects GeneralMatching.
Solution MatroidGreedyOpt(const FeasibilityStructure& fs,
                          std::span<const TaggedValue> weights);

// The offline prophet OPT and the greedy-like prophet OPT'.
Solution OptimalSolution(const FeasibilityStructure& fs,
                         std::span<const TaggedValue> weights);
Solution GreedyProphet(const FeasibilityStructure& fs,
                       std::span<const TaggedValue> weights);

// Each edge joins the group of its sigma-smaller endpoint. sigma[v] is the
// position of vertex v.
SimplePartition GraphicPartition(const Graphic& g, std::span<const int> sigma);
SimplePartition GraphicPartition(const Graphic& g, Rng& rng);

// Elements sorted by decreasing weight.
std::vector<int> DecreasingOrder(std::span<const TaggedValue> weights);

}  // namespace sspi

#endif  // SSPI_FEASIBILITY_H_
