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

#ifndef SSPI_ANALYSIS_H_
#define SSPI_ANALYSIS_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sspi/core.h"
#include "sspi/feasibility.h"

namespace sspi {

// Both greedy passes over one configuration.
struct ConfigurationScan {
  PathScan heads;
  PathScan tails;

  bool free_heads(int j) const { return heads.free[j]; }
  bool free_tails(int j) const { return tails.free[j]; }
};

ConfigurationScan ScanConfiguration(const FeasibilityStructure& fs,
                                    const SamplePath& path,
                                    const Configuration& config);

// A path index or infinity; infinity compares above every finite index.
class ExtendedIndex {
 public:
  static ExtendedIndex Infinite() { return ExtendedIndex(); }
  static ExtendedIndex Finite(int index) { return ExtendedIndex(index); }

  bool infinite() const { return !index_.has_value(); }
  // Throws std::logic_error on infinity.
  int index() const;
  std::string ToString() const;

  friend std::strong_ordering operator<=>(const ExtendedIndex& a,
                                          const ExtendedIndex& b);
  friend bool operator==(const ExtendedIndex&, const ExtendedIndex&) = default;

 private:
  ExtendedIndex() = default;
  explicit ExtendedIndex(int index) : index_(index) {}
  std::optional<int> index_;
};

enum class EventKind { kMatching, kTransversal, kLaminar };

struct SupportReport {
  int j = 0;
  EventKind kind = EventKind::kMatching;
  bool holds = false;
  // Matching: the first and second neighbor witnesses. Transversal: l1 is
  // the next Y-index competing for r.
  std::optional<int> l1;
  std::optional<int> l2;
  std::optional<int> r;
  // Matching: a Y-index passing condition 1 without any later neighbor
  // that is free on the sample side. Never expected to happen.
  bool missing_l1 = false;
  // Laminar saturation indices for the element's group and the ground set.
  std::optional<ExtendedIndex> group_tails, group_heads;
  std::optional<ExtendedIndex> ground_tails, ground_heads;
};

SupportReport SupportingEventMatching(const GeneralMatching& g,
                                      const SamplePath& path,
                                      const Configuration& config,
                                      const ConfigurationScan& scan, int j);
SupportReport SupportingEventMatching(const GeneralMatching& g,
                                      const SamplePath& path,
                                      const Configuration& config, int j);

// The R-node l_j would take in the sample-side ordered-maximal matching if
// C_j were tails; empty when j is not free on the sample side.
std::optional<int> CandidateNode(const ConfigurationScan& scan, int j);
std::optional<int> CandidateNode(const Transversal& t, const SamplePath& path,
                                 const Configuration& config, int j);

SupportReport SupportingEventTransversal(const Transversal& t,
                                         const SamplePath& path,
                                         const Configuration& config,
                                         const ConfigurationScan& scan, int j,
                                         int r);
SupportReport SupportingEventTransversal(const Transversal& t,
                                         const SamplePath& path,
                                         const Configuration& config, int j,
                                         int r);

// A layer of the two-layer family: one group or the whole ground set.
struct Layer {
  static Layer Group(int g) { return Layer{g}; }
  static Layer Ground() { return Layer{-1}; }
  bool ground() const { return group < 0; }
  int group = -1;
};

ExtendedIndex SaturationIndex(const TruncatedPartition& p,
                              const SamplePath& path,
                              const Configuration& config,
                              const ConfigurationScan& scan, int j, Layer layer,
                              Coin side);
ExtendedIndex SaturationIndex(const TruncatedPartition& p,
                              const SamplePath& path,
                              const Configuration& config, int j, Layer layer,
                              Coin side);

SupportReport SupportingEventLaminar(const TruncatedPartition& p,
                                     const SamplePath& path,
                                     const Configuration& config,
                                     const ConfigurationScan& scan, int j);
SupportReport SupportingEventLaminar(const TruncatedPartition& p,
                                     const SamplePath& path,
                                     const Configuration& config, int j);

enum class LemmaId {
  kSymmetry,
  kForgetZ,
  kGreedyObjective,
  kMatchUnique,
  kMatchSufficient,
  kMatchProb,
  kTransUnique,
  kTransSufficient,
  kTransProb,
  kLaminarSufficient,
  kLaminarProb,
  kGameValue,
};

std::string_view LemmaName(LemmaId id);
// Throws std::invalid_argument on an unknown id.
LemmaId ParseLemmaId(std::string_view name);
std::vector<LemmaId> AllLemmas();
// Whether the lemma applies to the structure kind.
bool LemmaApplies(LemmaId id, const FeasibilityStructure& fs);

struct IndexCount {
  int index = 0;
  int part = 1;  // which statement of a two-part lemma
  uint64_t lhs = 0;
  uint64_t rhs = 0;
  bool ok = true;
};

// Counts are numbers of configurations out of 2^exponent.
struct LemmaReport {
  std::string lemma;
  bool pass = true;
  std::string relation;
  double lhs = 0.0;
  double rhs = 0.0;
  int exponent = 0;
  int64_t checked = 0;
  int64_t violations = 0;
  std::vector<IndexCount> per_index;
  std::string note;
};

// Enumerates all 2^n configurations for the fixed Y/Z values. Throws
// std::invalid_argument when the lemma does not apply to the structure and
// CapExceeded beyond the enumeration caps.
LemmaReport VerifyLemma(LemmaId id, const FeasibilityStructure& fs,
                        std::span<const ElementRealization> realizations);

}  // namespace sspi

#endif  // SSPI_ANALYSIS_H_
