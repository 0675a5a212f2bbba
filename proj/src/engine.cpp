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

#include "coinflip/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "coinflip/optim.hpp"

namespace coinflip::engine {

using qmath::Complex;
using qmath::DensityOperator;
using qmath::Matrix;
using qmath::PureState;
using qmath::Vector;
using states::CheckSet;
using states::LambdaParam;

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

int registers_of(Protocol p) { return p == Protocol::ours ? 2 : 1; }

int coin(std::mt19937_64& rng) { return static_cast<int>(rng() & 1ULL); }

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string bit_string(const std::vector<int>& bits) {
  std::string s;
  for (int b : bits) s.push_back(static_cast<char>('0' + b));
  return s;
}

std::vector<PureState> measurement_basis(int b_prime, LambdaParam lambda) {
  return {states::phi(b_prime, 0, lambda), states::phi(b_prime, 1, lambda)};
}

/// Honest Alice: fresh randomness every round, honest reveals.
class HonestAlice : public AliceStrategy {
 public:
  HonestAlice(Protocol protocol, LambdaParam lambda)
      : k_(registers_of(protocol)),
        encrypts_(protocol == Protocol::ours),
        lambda_(lambda) {}

  std::vector<PureState> commit(std::mt19937_64& rng) override {
    bit_ = coin(rng);
    bases_.resize(static_cast<size_t>(k_));
    pad_.assign(static_cast<size_t>(k_), 0);
    std::vector<PureState> regs;
    regs.reserve(static_cast<size_t>(k_));
    for (int i = 0; i < k_; ++i) {
      bases_[static_cast<size_t>(i)] = coin(rng);
      if (encrypts_) pad_[static_cast<size_t>(i)] = coin(rng);
      const states::EncodedQubit reg{bases_[static_cast<size_t>(i)],
                                     bit_ ^ pad_[static_cast<size_t>(i)],
                                     lambda_};
      regs.push_back(reg.state());
    }
    return regs;
  }

  std::vector<int> reveal_r(std::mt19937_64&) override { return pad_; }

  RevealMsg reveal(int, std::mt19937_64&) override { return {bases_, bit_}; }

 private:
  int k_;
  bool encrypts_;
  LambdaParam lambda_;
  int bit_ = 0;
  std::vector<int> bases_;
  std::vector<int> pad_;
};

/// Honest Bob: random measurement bases, aborts on any checked mismatch.
class HonestBob : public BobStrategy {
 public:
  explicit HonestBob(LambdaParam lambda) : lambda_(lambda) {}

  bool measure(const std::vector<std::optional<PureState>>& received,
               std::mt19937_64& rng) override {
    bases_.clear();
    outcomes_.clear();
    bool all_present = true;
    for (const auto& reg : received) {
      const int b_prime = coin(rng);
      bases_.push_back(b_prime);
      if (reg.has_value()) {
        const auto basis = measurement_basis(b_prime, lambda_);
        outcomes_.push_back(qmath::measure_projective(*reg, basis, rng));
      } else {
        outcomes_.push_back(-1);
        all_present = false;
      }
    }
    return all_present;
  }

  void receive_r(const std::vector<int>&) override {}

  int choose_c_prime(std::mt19937_64& rng) override { return coin(rng); }

  int check(const RevealMsg& reveal, const std::vector<int>& r, int c_prime,
            std::mt19937_64&) override {
    for (size_t i = 0; i < reveal.bases.size(); ++i) {
      if (reveal.bases[i] != bases_[i]) continue;  // wrong basis, no check
      if (outcomes_[i] != (reveal.bit ^ r[i])) return kOutcomeAbort;
    }
    return reveal.bit ^ c_prime;
  }

 private:
  LambdaParam lambda_;
  std::vector<int> bases_;
  std::vector<int> outcomes_;
};

/// Cheating Bob: computational-basis measurement of every register, always
/// reports success, answers with the maximum-likelihood guess of c.
class DiscriminateBob : public BobStrategy {
 public:
  DiscriminateBob(LambdaParam lambda, int target_x)
      : lambda_(lambda), target_(target_x) {}

  bool measure(const std::vector<std::optional<PureState>>& received,
               std::mt19937_64& rng) override {
    const std::vector<PureState> computational{PureState::basis_state(2, 0),
                                               PureState::basis_state(2, 1)};
    outcomes_.clear();
    for (const auto& reg : received) {
      if (!reg.has_value()) {
        throw std::logic_error("cheating Bob runs use a lossless channel");
      }
      outcomes_.push_back(qmath::measure_projective(*reg, computational, rng));
    }
    pad_.assign(outcomes_.size(), 0);  // baseline protocol never reveals a pad
    return true;
  }

  void receive_r(const std::vector<int>& r) override { pad_ = r; }

  int choose_c_prime(std::mt19937_64&) override {
    int votes_zero = 0;
    for (size_t i = 0; i < outcomes_.size(); ++i) {
      if ((outcomes_[i] ^ pad_[i]) == 0) ++votes_zero;
    }
    const int votes_one = static_cast<int>(outcomes_.size()) - votes_zero;
    // Likelihood ties (balanced votes, or lambda exactly 1/2) resolve to 0.
    int guess = 0;
    if (lambda_.value() > 0.5 && votes_one > votes_zero) guess = 1;
    return guess ^ target_;
  }

  int check(const RevealMsg& reveal, const std::vector<int>&, int c_prime,
            std::mt19937_64&) override {
    return reveal.bit ^ c_prime;  // cheating Bob never aborts
  }

 private:
  LambdaParam lambda_;
  int target_;
  std::vector<int> outcomes_;
  std::vector<int> pad_;
};

/// Cheating Alice: commits the optimal product state, reveals c = c' with
/// the best-scoring basis claim per register.
class ProductAlice : public AliceStrategy {
 public:
  ProductAlice(int k, LambdaParam lambda, PureState commit_state)
      : k_(k), lambda_(lambda), sigma_(std::move(commit_state)) {}

  std::vector<PureState> commit(std::mt19937_64&) override {
    return std::vector<PureState>(static_cast<size_t>(k_), sigma_);
  }

  std::vector<int> reveal_r(std::mt19937_64&) override {
    return std::vector<int>(static_cast<size_t>(k_), 0);
  }

  RevealMsg reveal(int c_prime, std::mt19937_64&) override {
    std::vector<int> bases;
    for (int i = 0; i < k_; ++i) {
      double best = -1.0;
      int best_basis = 0;
      for (int b = 0; b < 2; ++b) {
        const double overlap = std::norm(states::phi(b, c_prime, lambda_)
                                             .amplitudes()
                                             .dot(sigma_.amplitudes()));
        if (overlap > best) {
          best = overlap;
          best_basis = b;
        }
      }
      bases.push_back(best_basis);
    }
    return {bases, c_prime};
  }

 private:
  int k_;
  LambdaParam lambda_;
  PureState sigma_;
};

struct Tally {
  long counted = 0;
  long x0 = 0;
  long x1 = 0;
  long aborts = 0;
  long wins = 0;
  long discarded = 0;
  long restarts = 0;
};

RunStats stats_from(const Tally& tally, std::optional<double> win_rate) {
  RunStats stats;
  stats.trials = tally.counted;
  if (tally.counted > 0) {
    const double n = static_cast<double>(tally.counted);
    stats.freq_x0 = static_cast<double>(tally.x0) / n;
    stats.freq_x1 = static_cast<double>(tally.x1) / n;
    stats.freq_abort = static_cast<double>(tally.aborts) / n;
    stats.mean_restarts = static_cast<double>(tally.restarts) / n;
  }
  stats.adversary_win_rate = win_rate;
  stats.discarded_trials = tally.discarded;
  return stats;
}

}  // namespace

std::string to_string(Protocol p) {
  return p == Protocol::berlin ? "berlin" : "ours";
}

Protocol protocol_from_string(const std::string& name) {
  if (name == "berlin") return Protocol::berlin;
  if (name == "ours") return Protocol::ours;
  throw std::invalid_argument("protocol must be 'berlin' or 'ours'");
}

std::string to_string(MessageTag tag) {
  switch (tag) {
    case MessageTag::commit_states: return "commit-states";
    case MessageTag::failure_report: return "failure-report";
    case MessageTag::success_report: return "success-report";
    case MessageTag::r_reveal: return "r-reveal";
    case MessageTag::c_prime: return "c-prime";
    case MessageTag::bc_reveal: return "bc-reveal";
    case MessageTag::verdict: return "verdict";
  }
  return "?";
}

std::string Transcript::to_lines() const {
  std::string out;
  for (const auto& m : messages) {
    out += to_string(m.tag);
    out += ' ';
    out += m.sender;
    out += ' ';
    out += m.payload;
    out += '\n';
  }
  return out;
}

Transcript run_protocol(Protocol protocol, const ChannelModel& channel,
                        AliceStrategy& alice, BobStrategy& bob,
                        std::mt19937_64& rng, long restart_cap) {
  require(channel.loss_probability >= 0.0 && channel.loss_probability < 1.0,
          "loss probability must lie in [0, 1)");
  const int k = registers_of(protocol);
  Transcript t;
  t.protocol = protocol;

  while (true) {
    auto regs = alice.commit(rng);
    if (static_cast<int>(regs.size()) != k) {
      throw std::logic_error("strategy committed the wrong register count");
    }
    t.messages.push_back(
        {MessageTag::commit_states, 'A', std::to_string(k)});

    std::vector<std::optional<PureState>> received;
    received.reserve(regs.size());
    for (auto& reg : regs) {
      if (unit_draw(rng) < channel.loss_probability) {
        received.emplace_back(std::nullopt);
      } else {
        received.emplace_back(std::move(reg));
      }
    }

    if (bob.measure(received, rng)) {
      t.messages.push_back({MessageTag::success_report, 'B', "-"});
      break;
    }
    t.messages.push_back({MessageTag::failure_report, 'B', "-"});
    ++t.round_restarts;
    if (t.round_restarts >= restart_cap) {
      t.discarded = true;
      return t;
    }
  }

  std::vector<int> pad(static_cast<size_t>(k), 0);
  if (protocol == Protocol::ours) {
    pad = alice.reveal_r(rng);
    t.messages.push_back({MessageTag::r_reveal, 'A', bit_string(pad)});
    bob.receive_r(pad);
  }

  const int c_prime = bob.choose_c_prime(rng);
  t.messages.push_back({MessageTag::c_prime, 'B', std::to_string(c_prime)});

  const RevealMsg reveal = alice.reveal(c_prime, rng);
  t.messages.push_back({MessageTag::bc_reveal, 'A',
                        bit_string(reveal.bases) + " " +
                            std::to_string(reveal.bit)});

  const int x = bob.check(reveal, pad, c_prime, rng);
  t.messages.push_back(
      {MessageTag::verdict, 'B', x == kOutcomeAbort ? "abort" : std::to_string(x)});
  t.outcome = x;
  return t;
}

Transcript run_single(Protocol protocol, LambdaParam lambda,
                      const ChannelModel& channel, std::uint64_t seed,
                      long trial_index) {
  auto rng = qmath::make_rng(
      qmath::derive_seed(seed, static_cast<std::uint64_t>(trial_index)));
  HonestAlice alice(protocol, lambda);
  HonestBob bob(lambda);
  return run_protocol(protocol, channel, alice, bob, rng);
}

RunStats run_honest(Protocol protocol, LambdaParam lambda,
                    const ChannelModel& channel, long trials,
                    std::uint64_t seed, const TranscriptSink& sink) {
  require(trials >= 1, "trials must be at least 1");
  Tally tally;
  for (long trial = 0; trial < trials; ++trial) {
    auto rng = qmath::make_rng(
        qmath::derive_seed(seed, static_cast<std::uint64_t>(trial)));
    HonestAlice alice(protocol, lambda);
    HonestBob bob(lambda);
    const Transcript t = run_protocol(protocol, channel, alice, bob, rng);
    if (t.discarded) {
      ++tally.discarded;
      continue;
    }
    ++tally.counted;
    tally.restarts += t.round_restarts;
    if (t.outcome == 0) ++tally.x0;
    else if (t.outcome == 1) ++tally.x1;
    else ++tally.aborts;
    if (sink) sink(t);
  }
  return stats_from(tally, std::nullopt);
}

RunStats adversary_bob_discriminate(Protocol protocol, LambdaParam lambda,
                                    int target_x, long trials,
                                    std::uint64_t seed) {
  require(target_x == 0 || target_x == 1, "target outcome must be 0 or 1");
  require(trials >= 1, "trials must be at least 1");
  const ChannelModel lossless{0.0};
  Tally tally;
  for (long trial = 0; trial < trials; ++trial) {
    auto rng = qmath::make_rng(
        qmath::derive_seed(seed, static_cast<std::uint64_t>(trial)));
    HonestAlice alice(protocol, lambda);
    DiscriminateBob bob(lambda, target_x);
    const Transcript t = run_protocol(protocol, lossless, alice, bob, rng);
    ++tally.counted;
    tally.restarts += t.round_restarts;
    if (t.outcome == 0) ++tally.x0;
    else if (t.outcome == 1) ++tally.x1;
    else ++tally.aborts;
    if (t.outcome == target_x) ++tally.wins;
  }
  return stats_from(tally, static_cast<double>(tally.wins) /
                               static_cast<double>(tally.counted));
}

double adversary_bob_postselect(const PostselectionAttack& attack,
                                LambdaParam lambda) {
  double gamma_sum = 0.0;
  for (double g : attack.gamma) {
    require(g >= 0.0, "attack weights Gamma must be nonnegative");
    gamma_sum += g;
  }
  require(gamma_sum > 0.0, "at least one attack weight Gamma must be positive");
  require(attack.residual_states.size() == 4,
          "attack needs one residual state per outcome pair (u, v)");
  const int d = attack.residual_states.front().dim();
  require(d >= 1 && d <= 8, "residual state dimension must lie in [1, 8]");
  for (const auto& psi : attack.residual_states) {
    require(psi.dim() == d, "residual states must share one dimension");
  }

  const double l = lambda.value();
  auto p_of = [l](int x, int u) { return x == u ? l : 1.0 - l; };

  std::array<Matrix, 2> xi;
  for (int c = 0; c < 2; ++c) {
    Matrix full = Matrix::Zero(4 * d, 4 * d);
    for (int r1 = 0; r1 < 2; ++r1) {
      for (int r2 = 0; r2 < 2; ++r2) {
        const int block = r1 * 2 + r2;
        for (int u = 0; u < 2; ++u) {
          for (int v = 0; v < 2; ++v) {
            const double weight = p_of(c ^ r1, u) * p_of(c ^ r2, v) *
                                  attack.gamma[static_cast<size_t>(u * 2 + v)];
            if (weight == 0.0) continue;
            const auto& psi =
                attack.residual_states[static_cast<size_t>(u * 2 + v)];
            full.block(block * d, block * d, d, d) +=
                weight * psi.projector();
          }
        }
      }
    }
    full /= full.trace().real();
    xi[static_cast<size_t>(c)] = std::move(full);
  }
  return qmath::trace_distance_raw(xi[0], xi[1]);
}

RunStats adversary_alice_product(LambdaParam lambda, int k, long trials,
                                 std::uint64_t seed) {
  require(k == 1 || k == 2, "product strategy supports k = 1 or 2 registers");
  require(trials >= 1, "trials must be at least 1");
  const Protocol protocol = (k == 1) ? Protocol::berlin : Protocol::ours;
  const PureState sigma_star = alice_optimal_commit(lambda).first;
  const ChannelModel lossless{0.0};
  Tally tally;
  for (long trial = 0; trial < trials; ++trial) {
    auto rng = qmath::make_rng(
        qmath::derive_seed(seed, static_cast<std::uint64_t>(trial)));
    ProductAlice alice(k, lambda, sigma_star);
    HonestBob bob(lambda);
    const Transcript t = run_protocol(protocol, lossless, alice, bob, rng);
    ++tally.counted;
    tally.restarts += t.round_restarts;
    if (t.outcome == 0) ++tally.x0;
    else if (t.outcome == 1) ++tally.x1;
    else ++tally.aborts;
    if (t.outcome == 0) ++tally.wins;  // Alice reveals c = c', targeting x = 0
  }
  return stats_from(tally, static_cast<double>(tally.wins) /
                               static_cast<double>(tally.counted));
}

std::pair<PureState, double> alice_optimal_commit(LambdaParam lambda) {
  const CheckSet l0 = CheckSet::single_register(0, lambda);
  const CheckSet l1 = CheckSet::single_register(1, lambda);

  auto state_of = [](double theta, double phase) {
    Vector amps(2);
    amps << std::cos(theta / 2.0),
        std::exp(Complex(0.0, phase)) * std::sin(theta / 2.0);
    amps.normalize();
    return PureState(std::move(amps));
  };
  auto objective = [&](std::span<const double> x) {
    const auto rho = DensityOperator::pure(state_of(x[0], x[1]));
    double value = 0.0;
    for (const CheckSet* set : {&l0, &l1}) {
      const double f = states::fidelity_to_check_set(rho, *set);
      value += 0.25 * (1.0 + f * f);
    }
    return value;
  };

  optim::NelderMeadOptions options;
  options.max_evals = 400;
  options.ftol = 1e-12;
  options.initial_step = 0.3;

  optim::NelderMeadResult best{};
  best.value = -1.0;
  const double pi = std::acos(-1.0);
  for (double theta : {0.25 * pi, 0.5 * pi, 0.75 * pi}) {
    for (double phase : {0.0, 0.5 * pi, pi}) {
      const double start[2] = {theta, phase};
      const auto result = optim::nelder_mead_maximize(objective, start, options);
      if (result.value > best.value) best = result;
    }
  }
  return {state_of(best.x[0], best.x[1]), best.value};
}

OracleResult master_theorem_oracle(const DensityOperator& sigma,
                                   const CheckSet& set, int samples,
                                   std::uint64_t seed) {
  require(sigma.dim() == set.dim(), "oracle dimension mismatch");
  require(samples >= 1, "oracle needs at least one sample");

  const double f = states::fidelity_to_check_set(sigma, set);
  OracleResult result;
  result.bound = f * f;

  // Spectral data of sigma; rank determines the purification shape.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sigma.matrix());
  const int d = sigma.dim();
  const int m = static_cast<int>(set.generators().size());
  std::vector<int> kept;
  for (int j = 0; j < d; ++j) {
    if (solver.eigenvalues()(j) > 1e-14) kept.push_back(j);
  }
  const int rank = static_cast<int>(kept.size());
  require(rank <= m,
          "reveal register is too small to purify sigma (rank exceeds "
          "generator count)");

  Matrix vecs(d, rank);
  Eigen::VectorXd roots(rank);
  for (int j = 0; j < rank; ++j) {
    vecs.col(j) = solver.eigenvectors().col(kept[static_cast<size_t>(j)]);
    roots(j) = std::sqrt(solver.eigenvalues()(kept[static_cast<size_t>(j)]));
  }

  Matrix gens(d, m);
  for (int i = 0; i < m; ++i)
    gens.col(i) = set.generators()[static_cast<size_t>(i)].amplitudes();

  auto rng = qmath::make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Purification as a d x m matrix A with A A^dag = sigma; the projection
  // probability is sum_i |<phi_i|A e_i>|^2. Each ascent step alternates the
  // best subspace vector with the best purification toward it, which is
  // monotone in the projection probability.
  auto project = [&](const Matrix& a) {
    double t = 0.0;
    for (int i = 0; i < m; ++i) t += std::norm(gens.col(i).dot(a.col(i)));
    return t;
  };

  double max_found = 0.0;
  for (int sample = 0; sample < samples; ++sample) {
    Matrix g(m, rank);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < rank; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix iso =
        qr.householderQ() * Matrix::Identity(m, rank);  // m x rank

    Matrix a = vecs * roots.asDiagonal() * iso.adjoint();
    double t = project(a);
    for (int step = 0; step < 200; ++step) {
      Matrix b(d, m);
      for (int i = 0; i < m; ++i)
        b.col(i) = gens.col(i) * gens.col(i).dot(a.col(i));
      const Matrix target = b.adjoint() * vecs * roots.asDiagonal();  // m x rank
      Eigen::JacobiSVD<Matrix> svd(target,
                                   Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Matrix best_iso = svd.matrixU() * svd.matrixV().adjoint();
      a = vecs * roots.asDiagonal() * best_iso.adjoint();
      const double t_new = project(a);
      if (t_new - t < 1e-15) {
        t = std::max(t, t_new);
        break;
      }
      t = t_new;
    }
    max_found = std::max(max_found, t);
  }
  result.max_found = max_found;
  return result;
}

}  // namespace coinflip::engine
