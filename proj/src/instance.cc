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

#include "sspi/instance.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sspi {

namespace {

std::string Format(int line, const std::string& message,
                   const std::string& source) {
  std::string where = source;
  if (line > 0) {
    where += source.empty() ? "line " + std::to_string(line)
                            : ":" + std::to_string(line);
  }
  return where.empty() ? message : where + ": " + message;
}

}  // namespace

InstanceError::InstanceError(int line, const std::string& message,
                             const std::string& source)
    : std::runtime_error(Format(line, message, source)),
      line_(line),
      message_(message) {}

namespace {

int LineOf(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.line >= 0 ? mark.line + 1 : 0;
}

[[noreturn]] void Fail(const YAML::Node& node, const std::string& message) {
  throw InstanceError(LineOf(node), message);
}

void CheckKeys(const YAML::Node& map, std::initializer_list<const char*> keys,
               const std::string& where) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      Fail(kv.first, "unknown field '" + key + "' in " + where);
    }
  }
}

YAML::Node Require(const YAML::Node& map, const char* key,
                   const std::string& where) {
  YAML::Node node = map[key];
  if (!node) Fail(map, "missing field '" + std::string(key) + "' in " + where);
  return node;
}

template <typename T>
T Scalar(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) Fail(node, what + " must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    Fail(node, what + " has the wrong type ('" + node.Scalar() + "')");
  }
}

int Int(const YAML::Node& node, const std::string& what) {
  return Scalar<int>(node, what);
}

double Number(const YAML::Node& node, const std::string& what) {
  double v = Scalar<double>(node, what);
  if (!std::isfinite(v)) Fail(node, what + " must be finite");
  return v;
}

void RequireSequence(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) Fail(node, what + " must be a list");
}

std::vector<int> IntList(const YAML::Node& node, const std::string& what) {
  RequireSequence(node, what);
  std::vector<int> out;
  for (const auto& item : node) out.push_back(Int(item, what + " entry"));
  return out;
}

std::vector<double> NumberList(const YAML::Node& node,
                               const std::string& what) {
  RequireSequence(node, what);
  std::vector<double> out;
  for (const auto& item : node) out.push_back(Number(item, what + " entry"));
  return out;
}

std::vector<std::vector<int>> IntLists(const YAML::Node& node,
                                       const std::string& what) {
  RequireSequence(node, what);
  std::vector<std::vector<int>> out;
  for (const auto& item : node) out.push_back(IntList(item, what + " entry"));
  return out;
}

std::vector<Edge> Edges(const YAML::Node& node) {
  std::vector<Edge> edges;
  for (const auto& pair : IntLists(node, "edges")) {
    if (pair.size() != 2) Fail(node, "each edge must list two vertices");
    edges.push_back({pair[0], pair[1]});
  }
  return edges;
}

// Group lists to a per-element group id; -1 for elements in no group.
std::vector<int> GroupIds(const YAML::Node& node, int n,
                          const std::vector<std::vector<int>>& groups) {
  std::vector<int> group_of(n, -1);
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int e : groups[g]) {
      if (e < 0 || e >= n) {
        Fail(node, "group element " + std::to_string(e) + " out of range");
      }
      if (group_of[e] >= 0) {
        Fail(node, "groups overlap at element " + std::to_string(e));
      }
      group_of[e] = static_cast<int>(g);
    }
  }
  return group_of;
}

// Builds the structure; constructor errors carry the structure's line.
template <typename Fn>
FeasibilityStructure Build(const YAML::Node& node, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    Fail(node, e.what());
  }
}

FeasibilityStructure ParseStructure(const YAML::Node& s) {
  if (!s.IsMap()) Fail(s, "structure must be a mapping");
  const std::string type =
      Scalar<std::string>(Require(s, "type", "structure"), "structure type");
  if (type == "matching" || type == "graphic") {
    CheckKeys(s, {"type", "vertices", "edges"}, "structure");
    int v = Int(Require(s, "vertices", "structure"), "vertices");
    std::vector<Edge> edges = Edges(Require(s, "edges", "structure"));
    if (edges.empty()) Fail(s, "structure needs at least one edge");
    if (type == "matching") {
      return Build(s, [&] { return GeneralMatching(v, edges); });
    }
    return Build(s, [&] { return Graphic(v, edges); });
  }
  if (type == "transversal") {
    CheckKeys(s, {"type", "right", "right_order", "adjacency"}, "structure");
    int right = Int(Require(s, "right", "structure"), "right");
    std::vector<int> order;
    if (s["right_order"]) {
      order = IntList(s["right_order"], "right_order");
    } else {
      for (int r = 0; r < right; ++r) order.push_back(r);
    }
    auto adjacency = IntLists(Require(s, "adjacency", "structure"),
                              "adjacency");
    if (adjacency.empty()) Fail(s, "structure needs at least one L-node");
    return Build(s, [&] { return Transversal(right, order, adjacency); });
  }
  if (type == "truncated-partition") {
    CheckKeys(s, {"type", "groups", "capacities", "total_capacity"},
              "structure");
    YAML::Node gnode = Require(s, "groups", "structure");
    auto groups = IntLists(gnode, "groups");
    int n = 0;
    for (const auto& g : groups) n += static_cast<int>(g.size());
    std::vector<int> group_of = GroupIds(gnode, n, groups);
    std::vector<int> caps =
        IntList(Require(s, "capacities", "structure"), "capacities");
    if (caps.size() != groups.size()) {
      Fail(s, "capacities must list one value per group");
    }
    for (size_t g = 0; g < caps.size(); ++g) {
      if (caps[g] < 1) Fail(s["capacities"], "capacity must be >= 1");
    }
    int total = Int(Require(s, "total_capacity", "structure"),
                    "total_capacity");
    if (n == 0) Fail(s, "structure needs at least one element");
    return Build(s, [&] { return TruncatedPartition(group_of, caps, total); });
  }
  if (type == "rank1") {
    CheckKeys(s, {"type", "elements"}, "structure");
    int n = Int(Require(s, "elements", "structure"), "elements");
    if (n < 1) Fail(s, "structure needs at least one element");
    return TruncatedPartition::Rank1(n);
  }
  if (type == "simple-partition") {
    CheckKeys(s, {"type", "elements", "groups"}, "structure");
    int n = Int(Require(s, "elements", "structure"), "elements");
    if (n < 1) Fail(s, "structure needs at least one element");
    YAML::Node gnode = Require(s, "groups", "structure");
    auto groups = IntLists(gnode, "groups");
    std::vector<int> group_of = GroupIds(gnode, n, groups);
    return Build(s, [&] {
      return SimplePartition(group_of, static_cast<int>(groups.size()));
    });
  }
  Fail(s["type"], "unknown structure type '" + type + "'");
}

Distribution ParseDistribution(const YAML::Node& d) {
  if (!d.IsMap()) Fail(d, "distribution must be a mapping");
  CheckKeys(d, {"point", "uniform", "discrete", "exponential", "mhr"},
            "distribution");
  std::optional<Distribution> out;
  int kinds = 0;
  try {
    if (d["point"]) {
      ++kinds;
      out = Distribution::Point(Number(d["point"], "point"));
    }
    if (d["uniform"]) {
      ++kinds;
      auto b = NumberList(d["uniform"], "uniform");
      if (b.size() != 2) Fail(d["uniform"], "uniform needs [low, high]");
      out = Distribution::UniformLaw(b[0], b[1]);
    }
    if (d["exponential"]) {
      ++kinds;
      out = Distribution::ExponentialLaw(
          Number(d["exponential"], "exponential rate"));
    }
    if (d["discrete"]) {
      ++kinds;
      YAML::Node dn = d["discrete"];
      if (!dn.IsMap()) Fail(dn, "discrete needs values and weights");
      CheckKeys(dn, {"values", "weights"}, "discrete");
      out = Distribution::DiscreteLaw(
          NumberList(Require(dn, "values", "discrete"), "values"),
          NumberList(Require(dn, "weights", "discrete"), "weights"));
    }
  } catch (const std::invalid_argument& e) {
    Fail(d, e.what());
  }
  if (kinds != 1) {
    Fail(d, "distribution needs exactly one of point, uniform, discrete, "
            "exponential");
  }
  if (d["mhr"]) out->set_mhr(Scalar<bool>(d["mhr"], "mhr"));
  return *out;
}

std::vector<Distribution> ParseDistributions(const YAML::Node& node, int n) {
  if (node.IsMap()) return std::vector<Distribution>(n, ParseDistribution(node));
  RequireSequence(node, "distributions");
  std::vector<Distribution> out;
  for (const auto& d : node) out.push_back(ParseDistribution(d));
  if (static_cast<int>(out.size()) != n) {
    Fail(node, "distributions must list one entry per element (" +
                   std::to_string(n) + "), got " +
                   std::to_string(out.size()));
  }
  return out;
}

std::vector<ElementRealization> ParseRealizations(const YAML::Node& node,
                                                  int n) {
  RequireSequence(node, "realizations");
  if (static_cast<int>(node.size()) != n) {
    Fail(node, "realizations must list one [y, z] pair per element");
  }
  std::vector<ElementRealization> out;
  int e = 0;
  for (const auto& pair : node) {
    auto v = NumberList(pair, "realization");
    if (v.size() != 2) Fail(pair, "realization must be a [y, z] pair");
    if (v[0] < v[1] || v[1] < 0) {
      Fail(pair, "realization needs y >= z >= 0");
    }
    out.push_back(FixedRealization(e++, v[0], v[1]));
  }
  return out;
}

PartitionSpec ParsePartition(const YAML::Node& node, int n) {
  if (!node.IsMap()) Fail(node, "partition must be a mapping");
  CheckKeys(node, {"queried", "groups", "alpha"}, "partition");
  PartitionSpec spec;
  if (node["queried"]) spec.queried = IntList(node["queried"], "queried");
  YAML::Node gnode = Require(node, "groups", "partition");
  spec.groups = IntLists(gnode, "groups");
  GroupIds(gnode, n, spec.groups);
  for (int q : spec.queried) {
    if (q < 0 || q >= n) Fail(node["queried"], "queried element out of range");
    for (const auto& g : spec.groups) {
      if (std::find(g.begin(), g.end(), q) != g.end()) {
        Fail(gnode, "group contains queried element " + std::to_string(q));
      }
    }
  }
  spec.alpha = Number(Require(node, "alpha", "partition"), "alpha");
  if (spec.alpha < 1) Fail(node["alpha"], "alpha must be >= 1");
  return spec;
}

}  // namespace

Instance ParseInstance(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw InstanceError(e.mark.line + 1, e.msg);
  }
  if (!root.IsMap()) throw InstanceError(1, "instance must be a mapping");
  CheckKeys(root,
            {"name", "structure", "distributions", "realizations", "regime",
             "partition"},
            "instance");
  Instance inst{.name = "",
                .structure = ParseStructure(Require(root, "structure",
                                                    "instance")),
                .distributions = {},
                .realizations = std::nullopt,
                .regime = "",
                .partition = std::nullopt};
  if (root["name"]) inst.name = Scalar<std::string>(root["name"], "name");
  const int n = ElementCount(inst.structure);
  inst.distributions =
      ParseDistributions(Require(root, "distributions", "instance"), n);
  if (root["realizations"]) {
    inst.realizations = ParseRealizations(root["realizations"], n);
  }
  if (root["regime"]) {
    inst.regime = Scalar<std::string>(root["regime"], "regime");
    if (inst.regime != "mhr" && inst.regime != "identical-regular") {
      Fail(root["regime"], "regime must be mhr or identical-regular");
    }
  }
  if (root["partition"]) {
    inst.partition = ParsePartition(root["partition"], n);
  }
  return inst;
}

Instance LoadInstance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ParseInstance(buf.str());
  } catch (const InstanceError& e) {
    throw InstanceError(e.line(), e.message(), path);
  }
}

}  // namespace sspi
