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

#include "sspi/feasibility.h"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace sspi {
namespace {

void CheckEdges(int num_vertices, const std::vector<Edge>& edges) {
  if (num_vertices < 0) throw std::invalid_argument("negative vertex count");
  for (size_t e = 0; e < edges.size(); ++e) {
    const Edge& ed = edges[e];
    if (ed.u < 0 || ed.v < 0 || ed.u >= num_vertices || ed.v >= num_vertices) {
      throw std::invalid_argument("edge " + std::to_string(e) +
                                  " references a dangling vertex");
    }
    if (ed.u == ed.v) {
      throw std::invalid_argument("edge " + std::to_string(e) +
                                  " is a self-loop");
    }
  }
}

void CheckElement(const FeasibilityStructure& fs, int e) {
  if (e < 0 || e >= ElementCount(fs)) {
    throw std::out_of_range("unknown element id " + std::to_string(e));
  }
}

// Kuhn's augmenting path search. match_right[r] is the L-node on r or -1.
bool Augment(const Transversal& t, int l, std::vector<int>& match_right,
             std::vector<char>& visited) {
  for (int r : t.ordered_neighbors(l)) {
    if (visited[r]) continue;
    visited[r] = 1;
    if (match_right[r] < 0 || Augment(t, match_right[r], match_right, visited)) {
      match_right[r] = l;
      return true;
    }
  }
  return false;
}

// Tries to extend the matching by l; leaves it unchanged on failure.
bool TryAugment(const Transversal& t, int l, std::vector<int>& match_right) {
  std::vector<int> backup = match_right;
  std::vector<char> visited(t.num_right(), 0);
  if (Augment(t, l, match_right, visited)) return true;
  match_right = std::move(backup);
  return false;
}

struct Dsu {
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int Find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<int> parent;
};

}  // namespace

GeneralMatching::GeneralMatching(int num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  CheckEdges(num_vertices_, edges_);
}

bool GeneralMatching::SharesVertex(int a, int b) const {
  const Edge& x = edges_.at(a);
  const Edge& y = edges_.at(b);
  return x.u == y.u || x.u == y.v || x.v == y.u || x.v == y.v;
}

bool GeneralMatching::Parallel(int a, int b) const {
  const Edge& x = edges_.at(a);
  const Edge& y = edges_.at(b);
  return (x.u == y.u && x.v == y.v) || (x.u == y.v && x.v == y.u);
}

Transversal::Transversal(int num_right, std::vector<int> right_order,
                         std::vector<std::vector<int>> adjacency)
    : num_right_(num_right),
      right_order_(std::move(right_order)),
      adjacency_(std::move(adjacency)) {
  if (num_right_ < 0) throw std::invalid_argument("negative R-node count");
  if (static_cast<int>(right_order_.size()) != num_right_) {
    throw std::invalid_argument("R-order must list every R-node once");
  }
  rank_.assign(num_right_, -1);
  for (int k = 0; k < num_right_; ++k) {
    int r = right_order_[k];
    if (r < 0 || r >= num_right_ || rank_[r] >= 0) {
      throw std::invalid_argument("R-order is not a permutation of R");
    }
    rank_[r] = k;
  }
  ordered_.resize(adjacency_.size());
  for (size_t l = 0; l < adjacency_.size(); ++l) {
    std::vector<int> seen = adjacency_[l];
    for (int r : seen) {
      if (r < 0 || r >= num_right_) {
        throw std::invalid_argument("L-node " + std::to_string(l) +
                                    " has a dangling neighbor");
      }
    }
    std::sort(seen.begin(), seen.end(),
              [&](int a, int b) { return rank_[a] < rank_[b]; });
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    ordered_[l] = std::move(seen);
  }
}

TruncatedPartition::TruncatedPartition(std::vector<int> group_of,
                                       std::vector<int> capacity,
                                       int total_capacity)
    : group_of_(std::move(group_of)),
      capacity_(std::move(capacity)),
      total_capacity_(total_capacity) {
  if (capacity_.empty()) throw std::invalid_argument("no groups");
  for (int c : capacity_) {
    if (c < 1) throw std::invalid_argument("capacity must be >= 1");
  }
  if (total_capacity_ < 1) {
    throw std::invalid_argument("global capacity must be >= 1");
  }
  sizes_.assign(capacity_.size(), 0);
  for (int g : group_of_) {
    if (g < 0 || g >= num_groups()) {
      throw std::invalid_argument("groups must cover the ground set");
    }
    ++sizes_[g];
  }
}

TruncatedPartition TruncatedPartition::Rank1(int n) {
  return TruncatedPartition(std::vector<int>(n, 0), {1}, 1);
}

SimplePartition::SimplePartition(std::vector<int> group_of, int num_groups)
    : group_of_(std::move(group_of)), num_groups_(num_groups) {
  if (num_groups_ < 0) throw std::invalid_argument("negative group count");
  for (int g : group_of_) {
    if (g < -1 || g >= num_groups_) {
      throw std::invalid_argument("group id out of range");
    }
  }
}

std::vector<std::vector<int>> SimplePartition::Groups() const {
  std::vector<std::vector<int>> groups(num_groups_);
  for (int e = 0; e < element_count(); ++e) {
    if (group_of_[e] >= 0) groups[group_of_[e]].push_back(e);
  }
  return groups;
}

Graphic::Graphic(int num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  CheckEdges(num_vertices_, edges_);
}

int ElementCount(const FeasibilityStructure& fs) {
  return std::visit([](const auto& s) { return s.element_count(); }, fs);
}

std::string KindName(const FeasibilityStructure& fs) {
  static constexpr const char* kNames[] = {"matching", "transversal",
                                           "truncated-partition",
                                           "simple-partition", "graphic"};
  return kNames[fs.index()];
}

bool IsMatroid(const FeasibilityStructure& fs) {
  return !std::holds_alternative<GeneralMatching>(fs);
}

bool IsIndependent(const FeasibilityStructure& fs, std::span<const int> set) {
  for (int e : set) CheckElement(fs, e);
  std::vector<int> sorted(set.begin(), set.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("element repeated in set");
  }
  if (const auto* g = std::get_if<GeneralMatching>(&fs)) {
    std::vector<char> used(g->num_vertices(), 0);
    for (int e : set) {
      const Edge& ed = g->edge(e);
      if (used[ed.u] || used[ed.v]) return false;
      used[ed.u] = used[ed.v] = 1;
    }
    return true;
  }
  if (const auto* t = std::get_if<Transversal>(&fs)) {
    std::vector<int> match_right(t->num_right(), -1);
    for (int l : set) {
      std::vector<char> visited(t->num_right(), 0);
      if (!Augment(*t, l, match_right, visited)) return false;
    }
    return true;
  }
  if (const auto* p = std::get_if<TruncatedPartition>(&fs)) {
    if (static_cast<int>(set.size()) > p->total_capacity()) return false;
    std::vector<int> count(p->num_groups(), 0);
    for (int e : set) {
      if (++count[p->group_of(e)] > p->capacity(p->group_of(e))) return false;
    }
    return true;
  }
  if (const auto* p = std::get_if<SimplePartition>(&fs)) {
    std::vector<char> used(p->num_groups(), 0);
    for (int e : set) {
      int g = p->group_of(e);
      if (g < 0 || used[g]) return false;
      used[g] = 1;
    }
    return true;
  }
  const auto& g = std::get<Graphic>(fs);
  Dsu dsu(g.num_vertices());
  for (int e : set) {
    if (!dsu.Union(g.edge(e).u, g.edge(e).v)) return false;
  }
  return true;
}

GreedyState::GreedyState(const FeasibilityStructure& fs)
    : fs_(&fs), in_set_(ElementCount(fs), 0) {
  if (const auto* g = std::get_if<GeneralMatching>(&fs)) {
    load_.assign(g->num_vertices(), 0);
  } else if (const auto* t = std::get_if<Transversal>(&fs)) {
    load_.assign(t->num_right(), 0);
  } else if (const auto* p = std::get_if<TruncatedPartition>(&fs)) {
    load_.assign(p->num_groups(), 0);
  } else if (const auto* p = std::get_if<SimplePartition>(&fs)) {
    load_.assign(p->num_groups(), 0);
  } else {
    const auto& gr = std::get<Graphic>(fs);
    parent_.resize(gr.num_vertices());
    std::iota(parent_.begin(), parent_.end(), 0);
  }
}

int GreedyState::Find(int x) const {
  while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
  return x;
}

int GreedyState::Probe(int element) const {
  const FeasibilityStructure& fs = *fs_;
  if (const auto* g = std::get_if<GeneralMatching>(&fs)) {
    const Edge& ed = g->edge(element);
    return load_[ed.u] == 0 && load_[ed.v] == 0 ? 0 : -1;
  }
  if (const auto* t = std::get_if<Transversal>(&fs)) {
    for (int r : t->ordered_neighbors(element)) {
      if (load_[r] == 0) return r;
    }
    return -1;
  }
  if (const auto* p = std::get_if<TruncatedPartition>(&fs)) {
    int g = p->group_of(element);
    return load_[g] < p->capacity(g) && total_ < p->total_capacity() ? 0 : -1;
  }
  if (const auto* p = std::get_if<SimplePartition>(&fs)) {
    int g = p->group_of(element);
    return g >= 0 && load_[g] == 0 ? 0 : -1;
  }
  const Edge& ed = std::get<Graphic>(fs).edge(element);
  return Find(ed.u) != Find(ed.v) ? 0 : -1;
}

void GreedyState::Add(int element, int slot) {
  assert(!in_set_[element]);
  in_set_[element] = 1;
  ++total_;
  const FeasibilityStructure& fs = *fs_;
  if (const auto* g = std::get_if<GeneralMatching>(&fs)) {
    ++load_[g->edge(element).u];
    ++load_[g->edge(element).v];
  } else if (std::holds_alternative<Transversal>(fs)) {
    ++load_[slot];
  } else if (const auto* p = std::get_if<TruncatedPartition>(&fs)) {
    ++load_[p->group_of(element)];
  } else if (const auto* p = std::get_if<SimplePartition>(&fs)) {
    ++load_[p->group_of(element)];
  } else {
    const Edge& ed = std::get<Graphic>(fs).edge(element);
    parent_[Find(ed.u)] = Find(ed.v);
  }
}

PathScan ScanPath(const FeasibilityStructure& fs, const SamplePath& path,
                  const Configuration& config, Coin side) {
  if (config.size() != path.size()) {
    throw std::invalid_argument("configuration and path lengths differ");
  }
  if (ElementCount(fs) != path.element_count()) {
    throw std::invalid_argument("path and structure sizes differ");
  }
  const int m = path.size();
  PathScan scan;
  scan.free.assign(m, 0);
  scan.slot.assign(m, -1);
  scan.taken.assign(m, 0);
  GreedyState state(fs);
  for (int j = 0; j < m; ++j) {
    int e = path.element(j);
    if (state.contains(e)) {
      // The partner index was taken on this side, so C_j is the other side.
      // Adding e_j again would not grow the solution, so j is not free.
      assert(config[j] != side);
      scan.free[j] = 0;
      continue;
    }
    int slot = state.Probe(e);
    scan.free[j] = slot >= 0;
    scan.slot[j] = slot;
    if (slot >= 0 && config[j] == side) {
      state.Add(e, slot);
      scan.taken[j] = 1;
      scan.solution.chosen.push_back(e);
      if (std::holds_alternative<Transversal>(fs)) {
        scan.solution.assignment.push_back(slot);
      }
      scan.solution.total += path.value(j);
    }
  }
  return scan;
}

Solution GreedyOnPath(const FeasibilityStructure& fs, const SamplePath& path,
                      const Configuration& config, Coin side) {
  return ScanPath(fs, path, config, side).solution;
}

bool FreeIndex(const FeasibilityStructure& fs, const SamplePath& path,
               const Configuration& config, int j, Coin side) {
  if (j < 0 || j >= path.size()) {
    throw std::out_of_range("path index " + std::to_string(j));
  }
  if (config.size() != path.size()) {
    throw std::invalid_argument("configuration and path lengths differ");
  }
  GreedyState state(fs);
  for (int i = 0; i < j; ++i) {
    if (config[i] != side) continue;
    int slot = state.Probe(path.element(i));
    if (slot >= 0) state.Add(path.element(i), slot);
  }
  int e = path.element(j);
  return !state.contains(e) && state.Probe(e) >= 0;
}

std::vector<int> DecreasingOrder(std::span<const TaggedValue> weights) {
  std::vector<int> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return weights[a] > weights[b]; });
  return order;
}

namespace {

void CheckWeights(int n, std::span<const TaggedValue> weights) {
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("weights must cover every element");
  }
}

Solution GreedyInOrder(const FeasibilityStructure& fs,
                       std::span<const TaggedValue> weights) {
  CheckWeights(ElementCount(fs), weights);
  Solution s;
  GreedyState state(fs);
  for (int e : DecreasingOrder(weights)) {
    int slot = state.Probe(e);
    if (slot < 0) continue;
    state.Add(e, slot);
    s.chosen.push_back(e);
    if (std::holds_alternative<Transversal>(fs)) s.assignment.push_back(slot);
    s.total += weights[e].value;
  }
  return s;
}

struct MatchingSearch {
  std::vector<Edge> edges;
  std::vector<double> value;
  std::vector<int> id;
  std::vector<char> used;
  std::vector<int> current;
  std::vector<int> best;
  double best_total = -1.0;
  int free_vertices = 0;

  double Bound(size_t from, int budget) const {
    double extra = 0.0;
    std::vector<char> seen = used;
    for (size_t i = from; i < edges.size() && budget > 0; ++i) {
      if (seen[edges[i].u] || seen[edges[i].v]) continue;
      extra += value[i];
      --budget;
    }
    return extra;
  }

  void Run(size_t i, double total) {
    if (total > best_total) {
      best_total = total;
      best = current;
    }
    if (i == edges.size()) return;
    if (total + Bound(i, free_vertices / 2) <= best_total) return;
    const Edge& ed = edges[i];
    if (!used[ed.u] && !used[ed.v]) {
      used[ed.u] = used[ed.v] = 1;
      free_vertices -= 2;
      current.push_back(id[i]);
      Run(i + 1, total + value[i]);
      current.pop_back();
      free_vertices += 2;
      used[ed.u] = used[ed.v] = 0;
    }
    Run(i + 1, total);
  }
};

}  // namespace

Solution MaximalMatching(const GeneralMatching& g,
                         std::span<const TaggedValue> weights) {
  return GreedyInOrder(g, weights);
}

Solution OptimalMatching(const GeneralMatching& g,
                         std::span<const TaggedValue> weights) {
  CheckWeights(g.element_count(), weights);
  if (g.element_count() > kMatchingEdgeCap) {
    throw CapExceeded("exact matching oracle", kMatchingEdgeCap,
                      g.element_count());
  }
  MatchingSearch search;
  for (int e : DecreasingOrder(weights)) {
    if (weights[e].value <= 0.0) continue;
    search.edges.push_back(g.edge(e));
    search.value.push_back(weights[e].value);
    search.id.push_back(e);
  }
  search.used.assign(g.num_vertices(), 0);
  search.free_vertices = g.num_vertices();
  search.Run(0, 0.0);
  Solution s;
  s.chosen = search.best;
  for (int e : s.chosen) s.total += weights[e].value;
  return s;
}

Solution OrderedMaximalMatching(const Transversal& t,
                                std::span<const TaggedValue> weights) {
  return GreedyInOrder(t, weights);
}

Solution OptimalTransversal(const Transversal& t,
                            std::span<const TaggedValue> weights) {
  CheckWeights(t.element_count(), weights);
  std::vector<int> match_right(t.num_right(), -1);
  Solution s;
  for (int l : DecreasingOrder(weights)) {
    if (TryAugment(t, l, match_right)) {
      s.chosen.push_back(l);
      s.total += weights[l].value;
    }
  }
  std::vector<int> right_of(t.element_count(), -1);
  for (int r = 0; r < t.num_right(); ++r) {
    if (match_right[r] >= 0) right_of[match_right[r]] = r;
  }
  for (int l : s.chosen) s.assignment.push_back(right_of[l]);
  return s;
}

Solution MatroidGreedyOpt(const FeasibilityStructure& fs,
                          std::span<const TaggedValue> weights) {
  if (std::holds_alternative<GeneralMatching>(fs)) {
    throw std::invalid_argument("matching is not a matroid");
  }
  if (const auto* t = std::get_if<Transversal>(&fs)) {
    return OptimalTransversal(*t, weights);
  }
  return GreedyInOrder(fs, weights);
}

Solution OptimalSolution(const FeasibilityStructure& fs,
                         std::span<const TaggedValue> weights) {
  if (const auto* g = std::get_if<GeneralMatching>(&fs)) {
    return OptimalMatching(*g, weights);
  }
  return MatroidGreedyOpt(fs, weights);
}

Solution GreedyProphet(const FeasibilityStructure& fs,
                       std::span<const TaggedValue> weights) {
  return GreedyInOrder(fs, weights);
}

SimplePartition GraphicPartition(const Graphic& g, std::span<const int> sigma) {
  if (static_cast<int>(sigma.size()) != g.num_vertices()) {
    throw std::invalid_argument("sigma must rank every vertex");
  }
  std::vector<int> group_of(g.element_count());
  for (int e = 0; e < g.element_count(); ++e) {
    const Edge& ed = g.edge(e);
    group_of[e] = sigma[ed.u] < sigma[ed.v] ? ed.u : ed.v;
  }
  return SimplePartition(std::move(group_of), g.num_vertices());
}

SimplePartition GraphicPartition(const Graphic& g, Rng& rng) {
  std::vector<int> sigma(g.num_vertices());
  std::iota(sigma.begin(), sigma.end(), 0);
  std::shuffle(sigma.begin(), sigma.end(), rng);
  return GraphicPartition(g, sigma);
}

}  // namespace sspi
