// Copyright 2026 The qcoop Authors
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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcoop/lindblad.hpp"

namespace qcoop::cli {

enum class Status { pass, fail, info };

/// One compared quantity. `reference` and `computed` are preformatted.
struct Row {
  std::string label;
  std::string reference;
  std::string computed;
  std::string delta;
  Status status = Status::info;
};

struct Report {
  std::string title;
  std::vector<Row> rows;
  /// Extra CSV files (name, contents), e.g. spectra of optimized fields.
  std::vector<std::pair<std::string, std::string>> files;

  bool passed() const;
};

struct ReproduceOptions {
  std::vector<std::uint64_t> seeds{1};
  int threads = 1;
  double fluence_weight = 0.05;
  PropagationConfig propagation;
};

/// Known ids: table-I .. table-VI, figure-2, figure-3, figure-4.
std::vector<std::string> reproduce_ids();

/// Throws ConfigError for an unknown id.
Report reproduce(std::string_view id, const ReproduceOptions& options);

std::string to_markdown(const Report& report);
std::string to_csv(const Report& report);

}  // namespace qcoop::cli
