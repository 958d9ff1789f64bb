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

#include "sspi/analysis.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sspi/coin_game.h"
#include "sspi/parallel.h"
#include "sspi/policies.h"

namespace sspi {

ConfigurationScan ScanConfiguration(const FeasibilityStructure& fs,
                                    const SamplePath& path,
                                    const Configuration& config) {
  return {ScanPath(fs, path, config, Coin::kHeads),
          ScanPath(fs, path, config, Coin::kTails)};
}

int ExtendedIndex::index() const {
  if (!index_) throw std::logic_error("infinite saturation index");
  return *index_;
}

std::string ExtendedIndex::ToString() const {
  return index_ ? std::to_string(*index_) : "inf";
}

std::strong_ordering operator<=>(const ExtendedIndex& a,
                                 const ExtendedIndex& b) {
  if (a.infinite() || b.infinite()) {
    return static_cast<int>(a.infinite()) <=> static_cast<int>(b.infinite());
  }
  return *a.index_ <=> *b.index_;
}

namespace {

void CheckIndex(const SamplePath& path, int j) {
  if (j < 0 || j >= path.size()) {
    throw std::out_of_range("path index " + std::to_string(j));
  }
}

// Condition 1 shared by every supporting event.
bool YFreeHeads(const SamplePath& path, const Configuration& config,
                const ConfigurationScan& scan, int j) {
  return path.is_y(j) && scan.free_tails(j) && config[j] == Coin::kHeads;
}

}  // namespace

SupportReport SupportingEventMatching(const GeneralMatching& g,
                                      const SamplePath& path,
                                      const Configuration& config,
                                      const ConfigurationScan& scan, int j) {
  CheckIndex(path, j);
  SupportReport rep;
  rep.j = j;
  rep.kind = EventKind::kMatching;
  if (!YFreeHeads(path, config, scan, j)) return rep;
  const int e = path.element(j);
  const int m = path.size();
  int l1 = -1;
  for (int l = j + 1; l < m && l1 < 0; ++l) {
    if (g.SharesVertex(e, path.element(l)) && scan.free_tails(l)) l1 = l;
  }
  if (l1 < 0) {
    rep.missing_l1 = true;
    return rep;
  }
  rep.l1 = l1;
  if (config[l1] != Coin::kTails) return rep;
  const int f = path.element(l1);
  if (f == e || g.Parallel(e, f)) {
    rep.holds = true;
    return rep;
  }
  for (int l = l1 + 1; l < m; ++l) {
    if (g.SharesVertex(e, path.element(l)) && scan.free_tails(l)) {
      rep.l2 = l;
      break;
    }
  }
  rep.holds = !rep.l2 || config[*rep.l2] == Coin::kTails;
  return rep;
}

SupportReport SupportingEventMatching(const GeneralMatching& g,
                                      const SamplePath& path,
                                      const Configuration& config, int j) {
  return SupportingEventMatching(g, path, config,
                                 ScanConfiguration(g, path, config), j);
}

std::optional<int> CandidateNode(const ConfigurationScan& scan, int j) {
  if (!scan.free_tails(j) || scan.tails.slot[j] < 0) return std::nullopt;
  return scan.tails.slot[j];
}

std::optional<int> CandidateNode(const Transversal& t, const SamplePath& path,
                                 const Configuration& config, int j) {
  CheckIndex(path, j);
  return CandidateNode(ScanConfiguration(t, path, config), j);
}

SupportReport SupportingEventTransversal(const Transversal& t,
                                         const SamplePath& path,
                                         const Configuration& config,
                                         const ConfigurationScan& scan, int j,
                                         int r) {
  CheckIndex(path, j);
  if (r < 0 || r >= t.num_right()) {
    throw std::out_of_range("R-node " + std::to_string(r));
  }
  SupportReport rep;
  rep.j = j;
  rep.kind = EventKind::kTransversal;
  rep.r = r;
  if (!YFreeHeads(path, config, scan, j) || CandidateNode(scan, j) != r) {
    return rep;
  }
  for (int l = j + 1; l < path.size(); ++l) {
    if (path.is_y(l) && CandidateNode(scan, l) == r) {
      rep.l1 = l;
      break;
    }
  }
  rep.holds = !rep.l1 || config[*rep.l1] == Coin::kTails;
  return rep;
}

SupportReport SupportingEventTransversal(const Transversal& t,
                                         const SamplePath& path,
                                         const Configuration& config, int j,
                                         int r) {
  return SupportingEventTransversal(t, path, config,
                                    ScanConfiguration(t, path, config), j, r);
}

ExtendedIndex SaturationIndex(const TruncatedPartition& p,
                              const SamplePath& path,
                              const Configuration& config,
                              const ConfigurationScan& scan, int j, Layer layer,
                              Coin side) {
  CheckIndex(path, j);
  const int capacity =
      layer.ground() ? p.total_capacity() : p.capacity(layer.group);
  int count = 0;
  for (int i = j + 1; i < path.size(); ++i) {
    if (!path.is_y(i) || config[i] != side || !scan.free_tails(i)) continue;
    if (!layer.ground() && p.group_of(path.element(i)) != layer.group) continue;
    if (++count == capacity) return ExtendedIndex::Finite(i);
  }
  return ExtendedIndex::Infinite();
}

ExtendedIndex SaturationIndex(const TruncatedPartition& p,
                              const SamplePath& path,
                              const Configuration& config, int j, Layer layer,
                              Coin side) {
  return SaturationIndex(p, path, config, ScanConfiguration(p, path, config),
                         j, layer, side);
}

SupportReport SupportingEventLaminar(const TruncatedPartition& p,
                                     const SamplePath& path,
                                     const Configuration& config,
                                     const ConfigurationScan& scan, int j) {
  CheckIndex(path, j);
  SupportReport rep;
  rep.j = j;
  rep.kind = EventKind::kLaminar;
  if (!YFreeHeads(path, config, scan, j)) return rep;
  const Layer group = Layer::Group(p.group_of(path.element(j)));
  rep.group_tails =
      SaturationIndex(p, path, config, scan, j, group, Coin::kTails);
  rep.group_heads =
      SaturationIndex(p, path, config, scan, j, group, Coin::kHeads);
  rep.ground_tails =
      SaturationIndex(p, path, config, scan, j, Layer::Ground(), Coin::kTails);
  rep.ground_heads =
      SaturationIndex(p, path, config, scan, j, Layer::Ground(), Coin::kHeads);
  auto tails_first = [&](const ExtendedIndex& t, const ExtendedIndex& h) {
    ExtendedIndex first = std::min(t, h);
    return first.infinite() || config[first.index()] == Coin::kTails;
  };
  rep.holds = tails_first(*rep.group_tails, *rep.group_heads) &&
              tails_first(*rep.ground_tails, *rep.ground_heads);
  return rep;
}

SupportReport SupportingEventLaminar(const TruncatedPartition& p,
                                     const SamplePath& path,
                                     const Configuration& config, int j) {
  return SupportingEventLaminar(p, path, config,
                                ScanConfiguration(p, path, config), j);
}

namespace {

constexpr LemmaId kAllLemmas[] = {
    LemmaId::kSymmetry,        LemmaId::kForgetZ,
    LemmaId::kGreedyObjective, LemmaId::kMatchUnique,
    LemmaId::kMatchSufficient, LemmaId::kMatchProb,
    LemmaId::kTransUnique,     LemmaId::kTransSufficient,
    LemmaId::kTransProb,       LemmaId::kLaminarSufficient,
    LemmaId::kLaminarProb,     LemmaId::kGameValue,
};

// Per-block counters; merged by summation in block order.
struct Tally {
  explicit Tally(int m) : a(m, 0), b(m, 0), c(m, 0), d(m, 0) {}
  std::vector<uint64_t> a, b, c, d;
  int64_t checked = 0;
  int64_t violations = 0;
  uint64_t max_count = 0;

  void Merge(const Tally& o) {
    for (size_t j = 0; j < a.size(); ++j) {
      a[j] += o.a[j];
      b[j] += o.b[j];
      c[j] += o.c[j];
      d[j] += o.d[j];
    }
    checked += o.checked;
    violations += o.violations;
    max_count = std::max(max_count, o.max_count);
  }
};

class Visitor {
 public:
  Visitor(LemmaId id, const FeasibilityStructure& fs, const SamplePath& path)
      : id_(id), fs_(fs), path_(path) {}

  void Visit(const Configuration& config, Tally& tally) const {
    const ConfigurationScan scan = ScanConfiguration(fs_, path_, config);
    const int m = path_.size();
    switch (id_) {
      case LemmaId::kSymmetry:
        for (int j = 0; j < m; ++j) {
          bool h = config[j] == Coin::kHeads;
          tally.a[j] += h && scan.free_heads(j);
          tally.b[j] += !h && scan.free_tails(j);
          if (path_.is_y(j)) {
            tally.c[j] += h && scan.free_tails(j);
            tally.d[j] += !h && scan.free_tails(j);
          }
        }
        break;
      case LemmaId::kForgetZ:
      case LemmaId::kGreedyObjective:
        for (int j = 0; j < m; ++j) {
          tally.a[j] += config[j] == Coin::kHeads && scan.free_heads(j);
          tally.b[j] += scan.heads.taken[j];
        }
        break;
      case LemmaId::kMatchUnique:
      case LemmaId::kMatchSufficient:
      case LemmaId::kMatchProb:
        VisitMatching(config, scan, tally);
        break;
      case LemmaId::kTransUnique:
      case LemmaId::kTransSufficient:
      case LemmaId::kTransProb:
        VisitTransversal(config, scan, tally);
        break;
      case LemmaId::kLaminarSufficient:
      case LemmaId::kLaminarProb:
        VisitLaminar(config, scan, tally);
        break;
      case LemmaId::kGameValue:
        break;
    }
  }

 private:
  std::unique_ptr<OnlinePolicy> Prepare(PolicyKind kind,
                                        const RewardsAndSamples& rs) const {
    Rng unused(0);
    return PreparePolicy(kind, fs_, rs.samples, unused);
  }

  void VisitMatching(const Configuration& config, const ConfigurationScan& scan,
                     Tally& tally) const {
    const auto& g = std::get<GeneralMatching>(fs_);
    const int m = path_.size();
    std::vector<int> supported;
    for (int j = 0; j < m; ++j) {
      SupportReport rep = SupportingEventMatching(g, path_, config, scan, j);
      if (rep.missing_l1) ++tally.violations;
      if (rep.holds) supported.push_back(j);
      if (id_ == LemmaId::kMatchProb && path_.is_y(j)) {
        tally.a[j] += rep.holds;
        tally.b[j] += config[j] == Coin::kHeads && scan.free_heads(j);
      }
    }
    if (id_ == LemmaId::kMatchUnique) {
      std::vector<uint64_t> per_vertex(g.num_vertices(), 0);
      for (int j : supported) {
        ++per_vertex[g.edge(path_.element(j)).u];
        ++per_vertex[g.edge(path_.element(j)).v];
      }
      for (uint64_t c : per_vertex) {
        tally.max_count = std::max(tally.max_count, c);
        if (c > 1) ++tally.violations;
      }
      tally.checked += g.num_vertices();
    }
    if (id_ == LemmaId::kMatchSufficient && !supported.empty()) {
      RewardsAndSamples rs = Split(path_, config);
      auto policy = Prepare(PolicyKind::kMatching, rs);
      FinalObjective all_hold = [&](const OnlineState& s) {
        std::vector<double> q(g.num_vertices(), 0.0);
        for (int e : s.accepted) {
          q[g.edge(e).u] = q[g.edge(e).v] = rs.rewards[e].value;
        }
        for (int j : supported) {
          const Edge& ed = g.edge(path_.element(j));
          if (q[ed.u] + q[ed.v] < path_.value(j)) return 0.0;
        }
        return 1.0;
      };
      tally.checked += static_cast<int64_t>(supported.size());
      if (MinOverOrders(*policy, rs.rewards, all_hold).value < 1.0) {
        ++tally.violations;
      }
    }
  }

  void VisitTransversal(const Configuration& config,
                        const ConfigurationScan& scan, Tally& tally) const {
    const auto& t = std::get<Transversal>(fs_);
    const int m = path_.size();
    // (j, r) pairs with the event; r can only be the candidate node of j.
    std::vector<std::pair<int, int>> supported;
    for (int j = 0; j < m; ++j) {
      std::optional<int> r = CandidateNode(scan, j);
      bool holds =
          r && SupportingEventTransversal(t, path_, config, scan, j, *r).holds;
      if (holds) supported.emplace_back(j, *r);
      if (id_ == LemmaId::kTransProb && path_.is_y(j)) {
        tally.a[j] += holds;
        tally.b[j] += config[j] == Coin::kHeads && scan.free_heads(j);
      }
    }
    if (id_ == LemmaId::kTransUnique) {
      std::vector<uint64_t> per_r(t.num_right(), 0);
      for (const auto& [j, r] : supported) ++per_r[r];
      for (uint64_t c : per_r) {
        tally.max_count = std::max(tally.max_count, c);
        if (c > 1) ++tally.violations;
      }
      tally.checked += t.num_right();
    }
    if (id_ == LemmaId::kTransSufficient && !supported.empty()) {
      RewardsAndSamples rs = Split(path_, config);
      auto policy = Prepare(PolicyKind::kTransversal, rs);
      FinalObjective all_hold = [&](const OnlineState& s) {
        std::vector<double> q(t.num_right(), 0.0);
        for (int l : s.accepted) q[s.slot_of[l]] = rs.rewards[l].value;
        for (const auto& [j, r] : supported) {
          if (q[r] < path_.value(j)) return 0.0;
        }
        return 1.0;
      };
      tally.checked += static_cast<int64_t>(supported.size());
      if (MinOverOrders(*policy, rs.rewards, all_hold).value < 1.0) {
        ++tally.violations;
      }
    }
  }

  void VisitLaminar(const Configuration& config, const ConfigurationScan& scan,
                    Tally& tally) const {
    const auto& p = std::get<TruncatedPartition>(fs_);
    const int m = path_.size();
    std::vector<int> supported;
    for (int j = 0; j < m; ++j) {
      bool holds = SupportingEventLaminar(p, path_, config, scan, j).holds;
      if (holds) supported.push_back(j);
      if (id_ == LemmaId::kLaminarProb && path_.is_y(j)) {
        tally.a[j] += holds;
        tally.b[j] += config[j] == Coin::kHeads && scan.free_heads(j);
      }
    }
    if (id_ == LemmaId::kLaminarSufficient && !supported.empty()) {
      RewardsAndSamples rs = Split(path_, config);
      auto policy = Prepare(PolicyKind::kLaminar, rs);
      PolicyTrace trace =
          RunPolicy(*policy, rs.rewards, IncreasingOrder(rs.rewards));
      std::vector<char> got(path_.element_count(), 0);
      for (int e : trace.chosen.chosen) got[e] = 1;
      for (int j : supported) {
        ++tally.checked;
        // Heads at j means the collected reward of e_j is W_j itself.
        if (!got[path_.element(j)]) ++tally.violations;
      }
    }
  }

  LemmaId id_;
  const FeasibilityStructure& fs_;
  const SamplePath& path_;
};

double Weighted(const SamplePath& path, const std::vector<uint64_t>& counts,
                bool y_only, int exponent) {
  double sum = 0.0;
  for (int j = 0; j < path.size(); ++j) {
    if (y_only && !path.is_y(j)) continue;
    sum += path.value(j) * static_cast<double>(counts[j]);
  }
  return std::ldexp(sum, -exponent);
}

LemmaReport GameValueReport() {
  LemmaReport rep;
  rep.lemma = std::string(LemmaName(LemmaId::kGameValue));
  rep.relation = "==";
  rep.rhs = 0.25;
  const Rational quarter(1, 4);
  for (int rr = 1; rr <= kGameRedCap; ++rr) {
    for (int rb = rr + 1; rb <= kGameBlueCap; ++rb) {
      Rational optimal = ExhaustiveGameValue(rr, rb);
      Rational blue_first = StrategyValue(rr, rb, BlueFirst);
      ++rep.checked;
      bool ok = optimal == quarter && blue_first == quarter;
      if (!ok) ++rep.violations;
      rep.note += "(" + std::to_string(rr) + "," + std::to_string(rb) +
                  ")=" + optimal.ToString() + " ";
      rep.lhs = optimal.ToDouble();
    }
  }
  if (!rep.note.empty()) rep.note.pop_back();
  rep.pass = rep.violations == 0;
  return rep;
}

}  // namespace

std::string_view LemmaName(LemmaId id) {
  switch (id) {
    case LemmaId::kSymmetry:
      return "symmetry";
    case LemmaId::kForgetZ:
      return "forget-z";
    case LemmaId::kGreedyObjective:
      return "greedy-objective";
    case LemmaId::kMatchUnique:
      return "match-unique";
    case LemmaId::kMatchSufficient:
      return "match-sufficient";
    case LemmaId::kMatchProb:
      return "match-prob";
    case LemmaId::kTransUnique:
      return "trans-unique";
    case LemmaId::kTransSufficient:
      return "trans-sufficient";
    case LemmaId::kTransProb:
      return "trans-prob";
    case LemmaId::kLaminarSufficient:
      return "laminar-sufficient";
    case LemmaId::kLaminarProb:
      return "laminar-prob";
    case LemmaId::kGameValue:
      return "game-value";
  }
  return "unknown";
}

LemmaId ParseLemmaId(std::string_view name) {
  for (LemmaId id : kAllLemmas) {
    if (LemmaName(id) == name) return id;
  }
  throw std::invalid_argument("unknown lemma id '" + std::string(name) + "'");
}

std::vector<LemmaId> AllLemmas() {
  return {std::begin(kAllLemmas), std::end(kAllLemmas)};
}

bool LemmaApplies(LemmaId id, const FeasibilityStructure& fs) {
  switch (id) {
    case LemmaId::kMatchUnique:
    case LemmaId::kMatchSufficient:
    case LemmaId::kMatchProb:
      return std::holds_alternative<GeneralMatching>(fs);
    case LemmaId::kTransUnique:
    case LemmaId::kTransSufficient:
    case LemmaId::kTransProb:
      return std::holds_alternative<Transversal>(fs);
    case LemmaId::kLaminarSufficient:
    case LemmaId::kLaminarProb:
      return std::holds_alternative<TruncatedPartition>(fs);
    default:
      return true;
  }
}

LemmaReport VerifyLemma(LemmaId id, const FeasibilityStructure& fs,
                        std::span<const ElementRealization> realizations) {
  if (id == LemmaId::kGameValue) return GameValueReport();
  if (!LemmaApplies(id, fs)) {
    throw std::invalid_argument(std::string(LemmaName(id)) +
                                " does not apply to " + KindName(fs));
  }
  const SamplePath path = SamplePath::Build(realizations);
  if (path.element_count() != ElementCount(fs)) {
    throw std::invalid_argument("realizations and structure sizes differ");
  }
  const bool replays = id == LemmaId::kMatchSufficient ||
                       id == LemmaId::kTransSufficient;
  if (replays && path.element_count() > kOrderSearchCap) {
    throw CapExceeded("sufficiency replay", kOrderSearchCap,
                      path.element_count());
  }
  const ConfigurationRange range = EnumerateConfigurations(path);
  const int n = path.element_count();
  const int m = path.size();
  const uint64_t total = range.size();
  constexpr uint64_t kBlock = 64;
  const int64_t blocks = static_cast<int64_t>((total + kBlock - 1) / kBlock);
  std::vector<Tally> tallies(blocks, Tally(m));
  const Visitor visitor(id, fs, path);
  ParallelFor(blocks, [&](int64_t b) {
    uint64_t end = std::min<uint64_t>(total, (b + 1) * kBlock);
    for (uint64_t mask = b * kBlock; mask < end; ++mask) {
      visitor.Visit(Configuration::FromMask(path, mask), tallies[b]);
    }
  });
  Tally t(m);
  for (const Tally& part : tallies) t.Merge(part);

  LemmaReport rep;
  rep.lemma = std::string(LemmaName(id));
  rep.exponent = n;
  rep.checked = t.checked;
  rep.violations = t.violations;
  switch (id) {
    case LemmaId::kSymmetry: {
      rep.relation = "==";
      for (int j = 0; j < m; ++j) {
        rep.per_index.push_back({j, 1, t.a[j], t.b[j], t.a[j] == t.b[j]});
        rep.lhs += static_cast<double>(t.a[j]);
        rep.rhs += static_cast<double>(t.b[j]);
      }
      for (int j = 0; j < m; ++j) {
        if (!path.is_y(j)) continue;
        rep.per_index.push_back({j, 2, t.c[j], t.d[j], t.c[j] == t.d[j]});
      }
      for (const IndexCount& ic : rep.per_index) rep.violations += !ic.ok;
      rep.checked = static_cast<int64_t>(rep.per_index.size());
      break;
    }
    case LemmaId::kForgetZ: {
      rep.relation = ">=";
      rep.lhs = Weighted(path, t.a, true, n);
      rep.rhs = 0.5 * Weighted(path, t.a, false, n);
      for (int e = 0; e < n; ++e) {
        int y = path.y_index(e), z = path.z_index(e);
        rep.per_index.push_back({y, 1, t.a[y], t.a[z], t.a[y] >= t.a[z]});
      }
      rep.checked = 1;
      rep.violations = rep.lhs >= rep.rhs * (1.0 - 1e-12) ? 0 : 1;
      rep.note = "per-index rows compare each element's Y and Z counts";
      break;
    }
    case LemmaId::kGreedyObjective: {
      rep.relation = "==";
      rep.lhs = Weighted(path, t.a, false, n);
      rep.rhs = Weighted(path, t.b, false, n);
      for (int j = 0; j < m; ++j) {
        rep.per_index.push_back({j, 1, t.a[j], t.b[j], t.a[j] == t.b[j]});
        rep.violations += t.a[j] != t.b[j];
      }
      rep.checked = m;
      break;
    }
    case LemmaId::kMatchProb:
    case LemmaId::kTransProb:
    case LemmaId::kLaminarProb: {
      const uint64_t factor = id == LemmaId::kTransProb ? 2 : 4;
      rep.relation = ">=";
      for (int j = 0; j < m; ++j) {
        if (!path.is_y(j)) continue;
        uint64_t lhs = factor * t.a[j];
        bool ok = lhs >= t.b[j];
        rep.per_index.push_back({j, 1, lhs, t.b[j], ok});
        rep.lhs += static_cast<double>(lhs);
        rep.rhs += static_cast<double>(t.b[j]);
        rep.violations += !ok;
        ++rep.checked;
      }
      break;
    }
    case LemmaId::kMatchUnique:
    case LemmaId::kTransUnique:
      rep.relation = "<=";
      rep.lhs = static_cast<double>(t.max_count);
      rep.rhs = 1.0;
      break;
    case LemmaId::kMatchSufficient:
    case LemmaId::kTransSufficient:
    case LemmaId::kLaminarSufficient:
      rep.relation = "all";
      rep.lhs = static_cast<double>(t.checked - t.violations);
      rep.rhs = static_cast<double>(t.checked);
      break;
    case LemmaId::kGameValue:
      break;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

}  // namespace sspi
