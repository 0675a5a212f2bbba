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

#include "coinflip/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace coinflip::cli {

using nlohmann::ordered_json;

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

ordered_json to_json(const analysis::BoundsReport& r) {
  ordered_json j;
  j["protocol"] = r.protocol;
  j["lambda"] = r.lambda;
  j["k"] = r.k;
  j["p_alice_upper"] = r.p_alice_upper;
  if (r.p_alice_lower.has_value()) j["p_alice_lower"] = *r.p_alice_lower;
  j["p_bob"] = r.p_bob;
  j["which_exact"] = {{"alice", r.which_exact.alice}, {"bob", r.which_exact.bob}};
  return j;
}

ordered_json to_json(const analysis::OptimizationResult& r) {
  ordered_json j;
  j["lambda_star"] = r.lambda_star;
  j["p_star"] = r.p_star;
  j["bias"] = r.bias;
  j["solver"] = r.solver;
  j["iterations"] = r.iterations;
  j["tolerance"] = r.tolerance;
  j["boundary"] = r.boundary;
  return j;
}

ordered_json to_json(const analysis::SweepRow& r) {
  ordered_json j;
  j["k"] = r.k;
  j["lambda_star_lower"] = r.lambda_star_lower;
  j["p_lower"] = r.p_lower;
  j["lambda_star_upper"] = r.lambda_star_upper;
  j["p_upper"] = r.p_upper;
  return j;
}

ordered_json to_json(const engine::RunStats& s) {
  ordered_json j;
  j["trials"] = s.trials;
  j["freq_x0"] = s.freq_x0;
  j["freq_x1"] = s.freq_x1;
  j["freq_abort"] = s.freq_abort;
  j["mean_restarts"] = s.mean_restarts;
  if (s.adversary_win_rate.has_value())
    j["adversary_win_rate"] = *s.adversary_win_rate;
  j["discarded_trials"] = s.discarded_trials;
  return j;
}

ordered_json to_json(const verify::CheckResult& c) {
  ordered_json j;
  j["name"] = c.name;
  j["passed"] = c.passed;
  j["instances"] = c.instances;
  j["worst_slack"] = c.worst_slack;
  return j;
}

}  // namespace

OutputFormat format_from_string(const std::string& name) {
  if (name == "text") return OutputFormat::text;
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  throw std::invalid_argument("format must be one of text, json, csv");
}

std::string emit(const analysis::BoundsReport& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      return to_json(r).dump(2) + "\n";
    case OutputFormat::csv: {
      std::string out =
          "protocol,lambda,k,p_alice_upper,p_alice_lower,p_bob,alice_exact,"
          "bob_exact\n";
      out += r.protocol + "," + fixed6(r.lambda) + "," + std::to_string(r.k) +
             "," + fixed6(r.p_alice_upper) + ",";
      if (r.p_alice_lower.has_value()) out += fixed6(*r.p_alice_lower);
      out += "," + fixed6(r.p_bob) + "," + bool_str(r.which_exact.alice) + "," +
             bool_str(r.which_exact.bob) + "\n";
      return out;
    }
    case OutputFormat::text: {
      std::string out = "protocol=" + r.protocol + " lambda=" + fixed6(r.lambda) +
                        " k=" + std::to_string(r.k) +
                        " p_alice_upper=" + fixed6(r.p_alice_upper);
      if (r.p_alice_lower.has_value())
        out += " p_alice_lower=" + fixed6(*r.p_alice_lower);
      out += " p_bob=" + fixed6(r.p_bob);
      out += std::string(" alice_exact=") + bool_str(r.which_exact.alice) +
             " bob_exact=" + bool_str(r.which_exact.bob) + "\n";
      return out;
    }
  }
  return {};
}

std::string emit(const analysis::OptimizationResult& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      return to_json(r).dump(2) + "\n";
    case OutputFormat::csv: {
      std::string out = "lambda_star,p_star,bias,solver,iterations,tolerance,boundary\n";
      out += fixed6(r.lambda_star) + "," + fixed6(r.p_star) + "," +
             fixed6(r.bias) + "," + r.solver + "," +
             std::to_string(r.iterations) + "," + sci(r.tolerance) + "," +
             bool_str(r.boundary) + "\n";
      return out;
    }
    case OutputFormat::text: {
      std::string out = "lambda*=" + fixed6(r.lambda_star) +
                        " P*=" + fixed6(r.p_star) + " bias=" + fixed6(r.bias) +
                        "\n";
      out += "solver=" + r.solver + " iterations=" + std::to_string(r.iterations) +
             " tolerance=" + sci(r.tolerance) +
             " boundary=" + bool_str(r.boundary) + "\n";
      return out;
    }
  }
  return {};
}

std::string emit(const std::vector<analysis::SweepRow>& rows,
                 OutputFormat format) {
  switch (format) {
    case OutputFormat::json: {
      ordered_json j = ordered_json::array();
      for (const auto& r : rows) j.push_back(to_json(r));
      return j.dump(2) + "\n";
    }
    case OutputFormat::csv: {
      std::string out = "k,lambda_star_lower,p_lower,lambda_star_upper,p_upper\n";
      for (const auto& r : rows) {
        out += std::to_string(r.k) + "," + fixed6(r.lambda_star_lower) + "," +
               fixed6(r.p_lower) + "," + fixed6(r.lambda_star_upper) + "," +
               fixed6(r.p_upper) + "\n";
      }
      return out;
    }
    case OutputFormat::text: {
      std::string out;
      for (const auto& r : rows) {
        out += "k=" + std::to_string(r.k) +
               " lambda*_lower=" + fixed6(r.lambda_star_lower) +
               " p_lower=" + fixed6(r.p_lower) +
               " lambda*_upper=" + fixed6(r.lambda_star_upper) +
               " p_upper=" + fixed6(r.p_upper) + "\n";
      }
      return out;
    }
  }
  return {};
}

std::string emit(const engine::RunStats& s, OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      return to_json(s).dump(2) + "\n";
    case OutputFormat::csv: {
      std::string out =
          "trials,freq_x0,freq_x1,freq_abort,mean_restarts,adversary_win_rate,"
          "discarded_trials\n";
      out += std::to_string(s.trials) + "," + fixed6(s.freq_x0) + "," +
             fixed6(s.freq_x1) + "," + fixed6(s.freq_abort) + "," +
             fixed6(s.mean_restarts) + ",";
      if (s.adversary_win_rate.has_value()) out += fixed6(*s.adversary_win_rate);
      out += "," + std::to_string(s.discarded_trials) + "\n";
      return out;
    }
    case OutputFormat::text: {
      std::string out = "trials=" + std::to_string(s.trials) +
                        " freq_x0=" + fixed6(s.freq_x0) +
                        " freq_x1=" + fixed6(s.freq_x1) +
                        " freq_abort=" + fixed6(s.freq_abort) +
                        " mean_restarts=" + fixed6(s.mean_restarts);
      if (s.adversary_win_rate.has_value())
        out += " adversary_win_rate=" + fixed6(*s.adversary_win_rate);
      out += " discarded_trials=" + std::to_string(s.discarded_trials) + "\n";
      return out;
    }
  }
  return {};
}

std::string emit(const std::vector<verify::CheckResult>& checks,
                 OutputFormat format) {
  switch (format) {
    case OutputFormat::json: {
      ordered_json j = ordered_json::array();
      for (const auto& c : checks) j.push_back(to_json(c));
      return j.dump(2) + "\n";
    }
    case OutputFormat::csv: {
      std::string out = "name,passed,instances,worst_slack\n";
      for (const auto& c : checks) {
        out += "\"" + c.name + "\"," + bool_str(c.passed) + "," +
               std::to_string(c.instances) + "," + sci(c.worst_slack) + "\n";
      }
      return out;
    }
    case OutputFormat::text: {
      std::string out;
      long passed = 0;
      for (const auto& c : checks) {
        out += std::string(c.passed ? "[PASS] " : "[FAIL] ") + c.name + " (n=" +
               std::to_string(c.instances) +
               ", worst_slack=" + sci(c.worst_slack) + ")\n";
        if (c.passed) ++passed;
      }
      out += std::to_string(passed) + "/" + std::to_string(checks.size()) +
             " checks passed\n";
      return out;
    }
  }
  return {};
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
    if (!stream) {
      throw std::runtime_error("cannot open output file: " + tmp.string());
    }
    stream << content;
  }
  fs::rename(tmp, target);
}

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("COINFLIP_SEED")) {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw std::invalid_argument(
          "COINFLIP_SEED must be an unsigned 64-bit integer");
    }
    return parsed;
  }
  return 42;
}

void deliver(const std::string& text, const std::string& output_path,
             std::ostream& out) {
  if (output_path.empty()) {
    out << text;
  } else {
    write_file_atomic(output_path, text);
  }
}

}  // namespace

int dispatch(std::vector<std::string> args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"loss-tolerant quantum coin flipping: simulation and bounds"};
  app.require_subcommand(1);

  RunConfig config;
  try {
    config.seed = default_seed();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  std::string format_name = "text";

  const auto lambda_range =
      CLI::Range(0.5, 1.0).description("lambda must lie in [0.5, 1]");
  const auto eta_check = CLI::Validator(
      [](std::string& value) -> std::string {
        const double v = std::stod(value);
        if (v < 0.0 || v >= 1.0) return "eta must lie in [0, 1)";
        return {};
      },
      "eta in [0, 1)");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_name, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--output", config.output_path,
                    "write the report to this file (atomic)");
  };

  auto* bounds = app.add_subcommand("bounds", "closed-form cheating bounds");
  bounds->add_option("--protocol", config.protocol, "protocol family")
      ->check(CLI::IsMember({"berlin", "ours", "kfold"}));
  bounds->add_option("--lambda", config.lambda, "encoding parameter")
      ->check(lambda_range);
  bounds->add_option("--k", config.k, "repetition count (kfold only)")
      ->check(CLI::Range(1, 64));
  add_common(bounds);

  auto* optimize = app.add_subcommand("optimize", "minimax lambda search");
  optimize->add_option("--protocol", config.protocol, "Alice curve family")
      ->check(CLI::IsMember({"berlin", "ours", "kfold-upper", "kfold-lower"}));
  optimize->add_option("--k", config.k, "repetition count (kfold curves)")
      ->check(CLI::Range(1, 64));
  add_common(optimize);

  auto* sweep = app.add_subcommand("sweep", "repetition comparison rows");
  sweep->add_option("--k-max", config.k_max, "largest repetition count")
      ->check(CLI::Range(3, 20));
  add_common(sweep);

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo protocol runs");
  simulate->add_option("--protocol", config.protocol, "protocol to run")
      ->check(CLI::IsMember({"berlin", "ours"}));
  simulate->add_option("--lambda", config.lambda, "encoding parameter")
      ->check(lambda_range);
  simulate->add_option("--eta", config.eta, "per-register loss probability")
      ->check(eta_check);
  simulate->add_option("--trials", config.trials, "number of executions")
      ->check(CLI::Range(1L, 100000000L));
  simulate->add_option("--seed", config.seed, "RNG seed");
  simulate->add_option("--adversary", config.adversary, "cheating strategy")
      ->check(CLI::IsMember({"none", "bob-discriminate", "alice-product"}));
  simulate->add_option("--target-x", config.target_x,
                       "outcome a cheating Bob pushes toward")
      ->check(CLI::Range(0, 1));
  simulate->add_option("--dump-transcripts", config.dump_transcripts,
                       "write every transcript to this file (honest runs)");
  add_common(simulate);

  auto* verify_cmd =
      app.add_subcommand("verify", "run the full invariant/property suite");
  verify_cmd->add_option("--seed", config.seed, "RNG seed");
  add_common(verify_cmd);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  config.format = format_from_string(format_name);

  try {
    if (bounds->parsed()) {
      config.subcommand = "bounds";
      const states::LambdaParam l(config.lambda);
      analysis::BoundsReport report;
      if (config.protocol == "berlin") report = analysis::berlin_bounds(l);
      else if (config.protocol == "ours") report = analysis::ours_bounds(l);
      else report = analysis::kfold_bounds(config.k, l);
      deliver(emit(report, config.format), config.output_path, out);
      return 0;
    }

    if (optimize->parsed()) {
      config.subcommand = "optimize";
      const auto curve = analysis::alice_curve_from_string(config.protocol);
      deliver(emit(analysis::optimize_lambda(curve, config.k), config.format),
              config.output_path, out);
      return 0;
    }

    if (sweep->parsed()) {
      config.subcommand = "sweep";
      deliver(emit(analysis::sweep_k(config.k_max), config.format),
              config.output_path, out);
      return 0;
    }

    if (simulate->parsed()) {
      config.subcommand = "simulate";
      const states::LambdaParam l(config.lambda);
      const auto proto = engine::protocol_from_string(config.protocol);
      engine::RunStats stats;
      if (config.adversary == "none") {
        std::string transcripts;
        engine::TranscriptSink sink;
        if (!config.dump_transcripts.empty()) {
          sink = [&transcripts](const engine::Transcript& t) {
            transcripts += t.to_lines();
            transcripts += "\n";
          };
        }
        stats = engine::run_honest(proto, l, engine::ChannelModel{config.eta},
                                   config.trials, config.seed, sink);
        if (!config.dump_transcripts.empty()) {
          write_file_atomic(config.dump_transcripts, transcripts);
        }
      } else {
        if (config.eta != 0.0) {
          err << "error: adversary runs use a lossless channel; --eta must be 0\n";
          return 1;
        }
        if (!config.dump_transcripts.empty()) {
          err << "error: transcript dumping is only available for honest runs\n";
          return 1;
        }
        if (config.adversary == "bob-discriminate") {
          stats = engine::adversary_bob_discriminate(
              proto, l, config.target_x, config.trials, config.seed);
        } else {
          stats = engine::adversary_alice_product(
              l, proto == engine::Protocol::ours ? 2 : 1, config.trials,
              config.seed);
        }
      }
      deliver(emit(stats, config.format), config.output_path, out);
      return 0;
    }

    if (verify_cmd->parsed()) {
      config.subcommand = "verify";
      const auto checks = verify::run_all(config.seed);
      deliver(emit(checks, config.format), config.output_path, out);
      const bool all_passed =
          std::all_of(checks.begin(), checks.end(),
                      [](const verify::CheckResult& c) { return c.passed; });
      return all_passed ? 0 : 2;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  err << "error: no subcommand given\n";
  return 1;
}

}  // namespace coinflip::cli
