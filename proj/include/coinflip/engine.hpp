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

/// \file engine.hpp
/// Executable state machines for the one-register commit protocol and its
/// encrypted two-register extension over a lossy channel, concrete cheating
/// strategies for both parties, and the purification-sampling oracle that
/// checks the fidelity bound on Alice's success probability.

#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coinflip/qmath.hpp"
#include "coinflip/states.hpp"

namespace coinflip::engine {

/// Which protocol the state machine runs: `berlin` is the one-register
/// baseline, `ours` the encrypted two-register extension.
enum class Protocol { berlin, ours };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);

/// Independent per-register erasure with probability eta; a lost register
/// yields a "measurement failed" report, never a wrong outcome.
struct ChannelModel {
  double loss_probability = 0.0;
};

enum class MessageTag {
  commit_states,
  failure_report,
  success_report,
  r_reveal,
  c_prime,
  bc_reveal,
  verdict,
};

std::string to_string(MessageTag tag);

struct Message {
  MessageTag tag;
  char sender;  // 'A' or 'B'
  std::string payload;
};

constexpr int kOutcomeAbort = -1;

/// Ordered record of one protocol execution. Message order follows the
/// protocol's numbered steps; the verdict is the final message and carries
/// the outcome (0, 1, or abort).
struct Transcript {
  Protocol protocol = Protocol::ours;
  long round_restarts = 0;
  std::vector<Message> messages;
  int outcome = kOutcomeAbort;
  bool discarded = false;  // restart cap reached; trial not counted

  /// One message per line: "<step tag> <sender> <payload>".
  std::string to_lines() const;
};

/// Aggregate statistics over a batch of simulated executions.
struct RunStats {
  long trials = 0;
  double freq_x0 = 0.0;
  double freq_x1 = 0.0;
  double freq_abort = 0.0;
  double mean_restarts = 0.0;
  std::optional<double> adversary_win_rate;
  long discarded_trials = 0;
};

/// Cheating Bob's postselected operation, described by the weights
/// Gamma_{u,v} he assigns to each computational outcome pair and the
/// residual states he keeps. Residual states share one dimension d <= 8.
struct PostselectionAttack {
  std::array<double, 4> gamma{};  // indexed (u,v) as u*2 + v
  std::vector<qmath::PureState> residual_states;
};

/// What Alice discloses at the reveal step.
struct RevealMsg {
  std::vector<int> bases;
  int bit = 0;
};

/// Alice's side of the state machine. Called once per round (commit) and
/// once per trial for the reveals; implementations keep the secrets.
class AliceStrategy {
 public:
  virtual ~AliceStrategy() = default;
  virtual std::vector<qmath::PureState> commit(std::mt19937_64& rng) = 0;
  virtual std::vector<int> reveal_r(std::mt19937_64& rng) = 0;
  virtual RevealMsg reveal(int c_prime, std::mt19937_64& rng) = 0;
};

/// Bob's side. `measure` sees each register as received (empty optional =
/// lost in the channel) and reports success or failure; `check` produces
/// the verdict (outcome bit or abort).
class BobStrategy {
 public:
  virtual ~BobStrategy() = default;
  virtual bool measure(
      const std::vector<std::optional<qmath::PureState>>& received,
      std::mt19937_64& rng) = 0;
  virtual void receive_r(const std::vector<int>& r) = 0;
  virtual int choose_c_prime(std::mt19937_64& rng) = 0;
  virtual int check(const RevealMsg& reveal, const std::vector<int>& r,
                    int c_prime, std::mt19937_64& rng) = 0;
};

/// Drives one full execution: the referee only relays messages between the
/// two strategies and samples channel losses. Restarts from the commit step
/// on a failure report, up to `restart_cap` times.
Transcript run_protocol(Protocol protocol, const ChannelModel& channel,
                        AliceStrategy& alice, BobStrategy& bob,
                        std::mt19937_64& rng, long restart_cap = 10000);

/// Replays the honest execution of one trial; deterministic in
/// (protocol, lambda, eta, seed, trial_index).
Transcript run_single(Protocol protocol, states::LambdaParam lambda,
                      const ChannelModel& channel, std::uint64_t seed,
                      long trial_index);

/// Sink for optional transcript dumping.
using TranscriptSink = std::function<void(const Transcript&)>;

/// Simulates honest executions. Honest parties never abort; the outcome is
/// a fair bit regardless of the loss rate.
RunStats run_honest(Protocol protocol, states::LambdaParam lambda,
                    const ChannelModel& channel, long trials,
                    std::uint64_t seed,
                    const TranscriptSink& sink = nullptr);

/// Cheating Bob measures every register in the computational basis, always
/// reports success, waits for the pad reveal and answers with the
/// maximum-likelihood guess of c xored with his target outcome. Likelihood
/// ties resolve to guess 0 to keep runs reproducible.
RunStats adversary_bob_discriminate(Protocol protocol,
                                    states::LambdaParam lambda, int target_x,
                                    long trials, std::uint64_t seed);

/// Trace distance between the two post-reveal states a postselecting Bob
/// holds, built exactly from the attack description (block-diagonal over
/// the classical pad register). Rejects an all-zero Gamma.
double adversary_bob_postselect(const PostselectionAttack& attack,
                                states::LambdaParam lambda);

/// Cheating Alice commits the optimal single-qubit state independently in
/// each of k registers (k = 1 plays the baseline protocol, k = 2 the
/// encrypted one with the pad fixed to zero) and reveals c = c'.
RunStats adversary_alice_product(states::LambdaParam lambda, int k,
                                 long trials, std::uint64_t seed);

/// Maximizes Alice's single-register success probability
/// 1/2 sum_c 1/2 (1 + F^2(sigma, L_c)) over pure qubit commitments by a
/// two-parameter sphere search; returns the maximizer and its value.
std::pair<qmath::PureState, double> alice_optimal_commit(
    states::LambdaParam lambda);

struct OracleResult {
  double max_found = 0.0;
  double bound = 0.0;
};

/// Samples random purifications of sigma (random isometry freedom on the
/// reveal register, ancilla dimension = generator count), refines each by
/// up to 200 monotone ascent steps, and compares the best projection
/// probability found against the fidelity bound F^2(sigma, L).
OracleResult master_theorem_oracle(const qmath::DensityOperator& sigma,
                                   const states::CheckSet& set, int samples,
                                   std::uint64_t seed);

}  // namespace coinflip::engine
