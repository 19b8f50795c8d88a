/*
 * Copyright 2026 The Singulock Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SINGULOCK_TOOLS_CLI_HPP_
#define SINGULOCK_TOOLS_CLI_HPP_

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "singulock/report.hpp"

namespace singulock::cli {

enum class OutputFormat { kJson, kText };

struct AnalysisConfig {
  std::string input;
  AnalysisOptions analysis;
  OutputFormat format = OutputFormat::kJson;
  std::optional<std::string> output;  // report destination, stdout when absent
  std::optional<std::string> dot;
  std::optional<std::string> csv;
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace singulock::cli

#endif  // SINGULOCK_TOOLS_CLI_HPP_
