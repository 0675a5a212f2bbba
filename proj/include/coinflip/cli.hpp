// Copyright 2026 The coinflip Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file cli.hpp
/// Command-line front end: subcommand dispatch and structured report
/// emission (text, json, csv).

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "coinflip/analysis.hpp"
#include "coinflip/engine.hpp"
#include "coinflip/verify.hpp"

namespace coinflip::cli {

enum class OutputFormat { text, json, csv };

OutputFormat format_from_string(const std::string& name);

/// One parsed invocation. Every field has a defined default; the seed
/// default can be overridden by the COINFLIP_SEED environment variable
/// (an explicit --seed always wins).
struct RunConfig {
  std::string subcommand;
  std::string protocol = "ours";
  double lambda = 0.859;
  int k = 2;
  double eta = 0.0;
  long trials = 100000;
  std::uint64_t seed = 42;
  std::string adversary = "none";
  OutputFormat format = OutputFormat::text;
  std::string output_path;
  std::string dump_transcripts;
  int k_max = 10;
  int target_x = 0;
};

/// Runs one subcommand. `args` excludes the program name. Returns 0 on
/// success, 1 on bad arguments, 2 on a property-suite failure.
int dispatch(std::vector<std::string> args, std::ostream& out,
             std::ostream& err);

std::string emit(const analysis::BoundsReport& report, OutputFormat format);
std::string emit(const analysis::OptimizationResult& result,
                 OutputFormat format);
std::string emit(const std::vector<analysis::SweepRow>& rows,
                 OutputFormat format);
std::string emit(const engine::RunStats& stats, OutputFormat format);
std::string emit(const std::vector<verify::CheckResult>& checks,
                 OutputFormat format);

/// Writes atomically: a temp file in the target directory, then a rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace coinflip::cli
