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

#ifndef SSPI_INSTANCE_H_
#define SSPI_INSTANCE_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sspi/core.h"
#include "sspi/feasibility.h"

namespace sspi {

// A schema or validation error; line is 1-based, 0 when unknown.
class InstanceError : public std::runtime_error {
 public:
  // With a source the message reads "source:line: message".
  InstanceError(int line, const std::string& message,
                const std::string& source = "");
  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  int line_;
  std::string message_;
};

struct PartitionSpec {
  std::vector<int> queried;
  std::vector<std::vector<int>> groups;
  double alpha = 1.0;
};

struct Instance {
  std::string name;
  FeasibilityStructure structure;
  std::vector<Distribution> distributions;  // one per element
  // Fixed (Y, Z) pairs for exact runs and lemma checks.
  std::optional<std::vector<ElementRealization>> realizations;
  std::string regime;  // "", "mhr" or "identical-regular"
  std::optional<PartitionSpec> partition;
};

// Parses the YAML instance format (JSON is accepted too). Throws
// InstanceError.
Instance ParseInstance(std::string_view text);
// Throws InstanceError on a bad file and std::runtime_error when the file
// cannot be read.
Instance LoadInstance(const std::string& path);

}  // namespace sspi

#endif  // SSPI_INSTANCE_H_
