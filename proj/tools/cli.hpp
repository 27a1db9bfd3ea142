/*
 * Copyright 2026 The WrinkleForge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace wrinkleforge::cli {

enum ExitCode { kOk = 0, kUsage = 1, kDataError = 2, kRuntimeFailure = 3 };

struct CommandResult {
  int exit_code = kOk;
  std::optional<std::filesystem::path> report_path;
};

/// Runs one subcommand. `args` excludes the program name.
CommandResult dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Names of all subcommands, in help order.
const std::vector<std::string>& subcommands();

/// Closest subcommand by edit distance, if reasonably close.
std::optional<std::string> suggest(const std::string& name);

}  // namespace wrinkleforge::cli
