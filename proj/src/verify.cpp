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

#include "coinflip/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coinflip/analysis.hpp"
#include "coinflip/engine.hpp"
#include "coinflip/qmath.hpp"
#include "coinflip/states.hpp"

namespace coinflip::verify {

using qmath::DensityOperator;
using qmath::Matrix;
using qmath::ProbDist;
using qmath::PureState;
using states::LambdaParam;

namespace {

constexpr double kIneqTol = 1e-9;

/// Tracks the smallest slack over a suite; a check passes when the worst
/// slack stays nonnegative.
struct SlackTracker {
  double worst = std::numeric_limits<double>::infinity();
  long count = 0;

  void note(double slack) {
    worst = std::min(worst, slack);
    ++count;
  }
  CheckResult result(std::string name) const {
    return {std::move(name), worst >= 0.0, count, worst};
  }
};

double binomial_sigma(double p, long n) {
  return std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(n));
}

int dim_of(int index) { return index % 2 == 0 ? 2 : 4; }

}  // namespace

CheckResult fidelity_inequality_1(std::uint64_t seed, int instances) {
  auto rng = qmath::make_rng(seed);
  SlackTracker tracker;
  for (int i = 0; i < instances; ++i) {
    const int dim = dim_of(i);
    const auto rho = qmath::random_density(dim, rng);
    const auto sigma = qmath::random_density(dim, rng);
    const double f = qmath::fidelity(rho, sigma);
    const double d = qmath::trace_distance(rho, sigma);
    tracker.note(d - (1.0 - f) + kIneqTol);
    tracker.note(std::sqrt(std::max(1.0 - f * f, 0.0)) - d + kIneqTol);
    --tracker.count;  // two inequalities, one instance
  }
  return tracker.result("FidelityInequality1");
}

CheckResult fidelity_inequality_2(std::uint64_t seed, int instances) {
  auto rng = qmath::make_rng(seed);
  SlackTracker tracker;
  for (int i = 0; i < instances; ++i) {
    const int dim = dim_of(i);
    const auto rho = qmath::random_density(dim, rng);
    const auto sigma0 = qmath::random_density(dim, rng);
    const auto sigma1 = qmath::random_density(dim, rng);
    const double f0 = qmath::fidelity(rho, sigma0);
    const double f1 = qmath::fidelity(rho, sigma1);
    const double cross = qmath::fidelity(sigma0, sigma1);
    tracker.note(1.0 + cross - (f0 * f0 + f1 * f1) + kIneqTol);
  }
  return tracker.result("FidelityInequality2");
}

CheckResult additive_fidelity(std::uint64_t seed, int instances) {
  auto rng = qmath::make_rng(seed);
  SlackTracker tracker;
  for (int i = 0; i < instances; ++i) {
    const int dim = dim_of(i);
    const int components = 2 + static_cast<int>(rng() % 3ULL);  // up to 4
    const auto rho = qmath::random_density(dim, rng);
    const auto weights = qmath::random_dist(components, rng);
    Matrix mix = Matrix::Zero(dim, dim);
    double sum_f2 = 0.0;
    for (int c = 0; c < components; ++c) {
      const auto sigma = qmath::random_density(dim, rng);
      mix += weights[c] * sigma.matrix();
      const double f = qmath::fidelity(rho, sigma);
      sum_f2 += weights[c] * f * f;
    }
    const double f_mix = qmath::fidelity(rho, DensityOperator(mix));
    tracker.note(f_mix * f_mix - sum_f2 + kIneqTol);
  }
  return tracker.result("AdditiveFidelity");
}

CheckResult convexity_of_trace_distance(std::uint64_t seed, int instances) {
  auto rng = qmath::make_rng(seed);
  SlackTracker tracker;
  for (int i = 0; i < instances; ++i) {
    const int dim = dim_of(i);
    const int family = 2 + static_cast<int>(rng() % 3ULL);
    // Shared pure-state family, not necessarily orthogonal.
    std::vector<Matrix> projectors;
    for (int j = 0; j < family; ++j)
      projectors.push_back(qmath::random_pure(dim, rng).projector());
    const auto p = qmath::random_dist(family, rng);
    const auto q = qmath::random_dist(family, rng);
    Matrix rho = Matrix::Zero(dim, dim), sigma = Matrix::Zero(dim, dim);
    for (int j = 0; j < family; ++j) {
      rho += p[j] * projectors[static_cast<size_t>(j)];
      sigma += q[j] * projectors[static_cast<size_t>(j)];
    }
    const double d =
        qmath::trace_distance(DensityOperator(rho), DensityOperator(sigma));
    tracker.note(qmath::statistical_distance(p, q) - d + kIneqTol);
  }
  return tracker.result("ConvOfTraceDistance");
}

CheckResult distance_bound(std::uint64_t seed, int instances) {
  auto rng = qmath::make_rng(seed);
  SlackTracker tracker;
  for (int i = 0; i < instances; ++i) {
    const int dim = dim_of(i);
    const auto rho0 = qmath::random_density(dim, rng);
    const auto rho1 = qmath::random_density(dim, rng);
    const auto witness = qmath::random_pure(dim, rng);
    const double d = qmath::trace_distance(rho0, rho1);
    const double w0 =
        (witness.amplitudes().adjoint() * rho0.matrix() * witness.amplitudes())(0)
            .real();
    const double w1 =
        (witness.amplitudes().adjoint() * rho1.matrix() * witness.amplitudes())(0)
            .real();
    tracker.note(d - std::abs(w0 - w1) + kIneqTol);
  }
  return tracker.result("DistanceBound");
}

CheckResult metric_symmetry(std::uint64_t seed, int instances) {
  auto rng = qmath::make_rng(seed);
  SlackTracker tracker;
  for (int i = 0; i < instances; ++i) {
    const int dim = dim_of(i);
    const auto a = qmath::random_density(dim, rng);
    const auto b = qmath::random_density(dim, rng);
    tracker.note(1e-12 -
                 std::abs(qmath::fidelity(a, b) - qmath::fidelity(b, a)));
    tracker.note(1e-12 - std::abs(qmath::trace_distance(a, b) -
                                  qmath::trace_distance(b, a)));
    --tracker.count;
  }
  return tracker.result("fidelity and trace distance symmetry");
}

CheckResult co_diagonal_distance(std::uint64_t seed, int instances) {
  auto rng = qmath::make_rng(seed);
  SlackTracker tracker;
  for (int i = 0; i < instances; ++i) {
    const int dim = dim_of(i);
    Eigen::SelfAdjointEigenSolver<Matrix> basis(
        qmath::random_density(dim, rng).matrix());
    const Matrix u = basis.eigenvectors();
    const auto p = qmath::random_dist(dim, rng);
    const auto q = qmath::random_dist(dim, rng);
    Matrix rho = Matrix::Zero(dim, dim), sigma = Matrix::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
      rho += p[j] * u.col(j) * u.col(j).adjoint();
      sigma += q[j] * u.col(j) * u.col(j).adjoint();
    }
    const double d =
        qmath::trace_distance(DensityOperator(rho), DensityOperator(sigma));
    tracker.note(1e-12 - std::abs(d - qmath::statistical_distance(p, q)));
  }
  return tracker.result("co-diagonal trace distance equals statistical distance");
}

CheckResult basis_orthonormality() {
  SlackTracker tracker;
  for (int i = 0; i <= 100; ++i) {
    const LambdaParam l(0.5 + 0.5 * i / 100.0);
    for (int b = 0; b < 2; ++b) {
      const auto u = states::phi(b, 0, l);
      const auto v = states::phi(b, 1, l);
      tracker.note(1e-12 - std::abs(u.amplitudes().dot(v.amplitudes())));
      tracker.note(1e-12 - std::abs(u.amplitudes().norm() - 1.0));
      tracker.note(1e-12 - std::abs(v.amplitudes().norm() - 1.0));
      tracker.count -= 2;
    }
  }
  return tracker.result("basis orthonormality");
}

CheckResult mixture_identity() {
  SlackTracker tracker;
  for (int i = 0; i <= 100; ++i) {
    const LambdaParam l(0.5 + 0.5 * i / 100.0);
    for (int c = 0; c < 2; ++c) {
      const Matrix mixture = 0.5 * (states::phi(0, c, l).projector() +
                                    states::phi(1, c, l).projector());
      const double diff =
          (states::rho_mixed(c, l).matrix() - mixture).cwiseAbs().maxCoeff();
      tracker.note(1e-12 - diff);
    }
  }
  return tracker.result("mixture identity");
}

CheckResult two_register_distance_identity(int grid_points) {
  SlackTracker tracker;
  for (int i = 0; i <= grid_points; ++i) {
    const double l = 0.5 + 0.5 * i / grid_points;
    const LambdaParam lp(l);
    const double d =
        qmath::trace_distance(states::xi_k(0, lp, 2), states::xi_k(1, lp, 2));
    tracker.note(1e-10 - std::abs(d - (2.0 * l - 1.0)));
  }
  return tracker.result("two-register distance equals 2 lambda - 1");
}

CheckResult lemma_pair_fidelity_bound(int grid_points) {
  SlackTracker tracker;
  for (int i = 0; i <= grid_points; ++i) {
    const double l = 0.5 + 0.5 * i / grid_points;
    const double f = states::check_set_pair_fidelity(LambdaParam(l), 1);
    tracker.note(2.0 * std::sqrt(l * (1.0 - l)) + 1e-8 - f);
  }
  return tracker.result("lemma F(L0,L1) <= 2 sqrt(lambda(1-lambda))");
}

CheckResult check_set_maximizer_dominates(std::uint64_t seed, int samples) {
  auto rng = qmath::make_rng(seed);
  SlackTracker tracker;
  const LambdaParam l(0.9);
  const auto l0 = states::CheckSet::single_register(0, l);
  const auto ll0 = states::CheckSet::two_register(0, l);
  for (const auto* set : {&l0, &ll0}) {
    const auto rho = qmath::random_density(set->dim(), rng);
    const double star = states::fidelity_to_check_set(rho, *set);
    for (int i = 0; i < samples; ++i) {
      const auto w =
          qmath::random_dist(static_cast<int>(set->generators().size()), rng);
      Matrix sigma = Matrix::Zero(set->dim(), set->dim());
      for (size_t g = 0; g < set->generators().size(); ++g)
        sigma += w[static_cast<int>(g)] * set->generators()[g].projector();
      tracker.note(star - qmath::fidelity(rho, DensityOperator(sigma)) +
                   kIneqTol);
    }
  }
  return tracker.result("check-set maximizer dominates sampled members");
}

CheckResult encryption_marginal_independence() {
  SlackTracker tracker;
  for (int i = 0; i <= 50; ++i) {
    const LambdaParam l(0.5 + 0.5 * i / 50.0);
    Matrix avg0 = Matrix::Zero(4, 4), avg1 = Matrix::Zero(4, 4);
    for (int r1 = 0; r1 < 2; ++r1) {
      for (int r2 = 0; r2 < 2; ++r2) {
        avg0 += 0.25 * states::encrypted_pair_state(0, r1, r2, l).matrix();
        avg1 += 0.25 * states::encrypted_pair_state(1, r1, r2, l).matrix();
      }
    }
    tracker.note(1e-12 - qmath::trace_distance_raw(avg0, avg1));
  }
  return tracker.result("encryption marginal hides the bit");
}

CheckResult postselection_bound(std::uint64_t seed, int attacks,
                                int lambda_points) {
  auto rng = qmath::make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SlackTracker tracker;
  for (int g = 0; g < lambda_points; ++g) {
    const double l = 0.5 + 0.5 * g / (lambda_points - 1);
    const LambdaParam lp(l);
    for (int a = 0; a < attacks; ++a) {
      engine::PostselectionAttack attack;
      double sum = 0.0;
      for (double& w : attack.gamma) {
        w = unif(rng);
        sum += w;
      }
      if (sum == 0.0) attack.gamma[0] = 1.0;
      for (int i = 0; i < 4; ++i)
        attack.residual_states.push_back(qmath::random_pure(4, rng));
      const double d = engine::adversary_bob_postselect(attack, lp);
      tracker.note(2.0 * l - 1.0 + kIneqTol - d);
    }
  }
  return tracker.result("postselection D ≤ 2λ−1");
}

CheckResult honest_runs_fair_and_loss_free(std::uint64_t seed, long trials) {
  SlackTracker tracker;
  const LambdaParam l(0.859);
  std::vector<double> freqs;
  for (double eta : {0.0, 0.5, 0.9}) {
    const auto stats = engine::run_honest(engine::Protocol::ours, l,
                                          engine::ChannelModel{eta}, trials,
                                          seed);
    // Honest parties never abort, regardless of losses.
    tracker.note(stats.freq_abort == 0.0 ? 0.0 : -1.0);
    tracker.note(4.0 * binomial_sigma(0.5, trials) -
                 std::abs(stats.freq_x0 - 0.5));
    freqs.push_back(stats.freq_x0);
    tracker.count -= 1;
  }
  // Outcome distribution is loss independent: pairwise within 4 sigma.
  for (size_t i = 0; i < freqs.size(); ++i) {
    for (size_t j = i + 1; j < freqs.size(); ++j) {
      const double gap = std::abs(freqs[i] - freqs[j]);
      tracker.note(4.0 * std::sqrt(2.0) * binomial_sigma(0.5, trials) - gap);
    }
  }
  return tracker.result("honest runs: fair, never abort, loss independent");
}

CheckResult discriminate_below_helstrom(std::uint64_t seed, long trials) {
  SlackTracker tracker;
  for (double l : {0.7, 0.859, 0.9}) {
    const LambdaParam lp(l);
    for (auto protocol : {engine::Protocol::berlin, engine::Protocol::ours}) {
      const auto stats =
          engine::adversary_bob_discriminate(protocol, lp, 0, trials, seed);
      const int k = protocol == engine::Protocol::berlin ? 1 : 2;
      const double bound = qmath::helstrom_bound(states::xi_k(0, lp, k),
                                                 states::xi_k(1, lp, k));
      tracker.note(bound + 4.0 * binomial_sigma(bound, trials) -
                   *stats.adversary_win_rate);
    }
  }
  return tracker.result("discriminating Bob stays below the Helstrom bound");
}

CheckResult transcript_determinism(std::uint64_t seed) {
  SlackTracker tracker;
  for (auto protocol : {engine::Protocol::berlin, engine::Protocol::ours}) {
    for (double eta : {0.0, 0.5}) {
      for (long trial = 0; trial < 25; ++trial) {
        const auto a = engine::run_single(protocol, LambdaParam(0.859),
                                          engine::ChannelModel{eta}, seed, trial);
        const auto b = engine::run_single(protocol, LambdaParam(0.859),
                                          engine::ChannelModel{eta}, seed, trial);
        tracker.note(a.to_lines() == b.to_lines() && a.outcome == b.outcome
                         ? 0.0
                         : -1.0);
      }
    }
  }
  return tracker.result("transcripts replay deterministically");
}

CheckResult kfold_curve_identities() {
  SlackTracker tracker;
  for (int i = 0; i <= 1000; ++i) {
    const LambdaParam l(0.5 + 0.5 * i / 1000.0);
    tracker.note(1e-12 - std::abs(analysis::kfold_alice_upper(1, l) -
                                  analysis::berlin_alice_bound(l)));
    tracker.note(1e-12 - std::abs(analysis::kfold_alice_upper(2, l) -
                                  analysis::ours_alice_bound(l)));
    tracker.note(1e-12 - std::abs(analysis::kfold_bob_exact(1, l) - l.value()));
    tracker.note(1e-12 - std::abs(analysis::kfold_bob_exact(2, l) - l.value()));
    tracker.note(analysis::kfold_alice_upper(3, l) + 1e-12 -
                 analysis::kfold_alice_lower(3, l));
    tracker.count -= 4;
  }
  return tracker.result("k-fold curve identities");
}

CheckResult kfold_bob_tensor_route() {
  SlackTracker tracker;
  for (double l : {0.5, 0.75, 0.9, 1.0}) {
    const LambdaParam lp(l);
    for (int k = 1; k <= 8; ++k) {
      const double direct =
          0.5 + 0.5 * qmath::trace_distance(states::xi_k(0, lp, k),
                                            states::xi_k(1, lp, k));
      tracker.note(1e-10 - std::abs(analysis::kfold_bob_exact(k, lp) - direct));
    }
  }
  return tracker.result("k-fold Bob closed form matches the tensor route");
}

CheckResult curve_monotonicity() {
  SlackTracker tracker;
  for (int k : {1, 2, 3, 5, 10, 20}) {
    double prev_a = 1.0 + 1e-12, prev_g = 1.0 + 1e-12, prev_b = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const LambdaParam l(0.5 + 0.5 * i / 1000.0);
      const double a = analysis::kfold_alice_upper(k, l);
      const double g = analysis::kfold_alice_lower(k, l);
      const double b = analysis::kfold_bob_exact(k, l);
      tracker.note(prev_a - a + 1e-12);
      tracker.note(prev_g - g + 1e-12);
      tracker.note(b - prev_b + 1e-12);
      tracker.count -= 2;
      prev_a = a;
      prev_g = g;
      prev_b = b;
    }
  }
  return tracker.result("bound curves are monotone on [1/2, 1]");
}

CheckResult crossing_residuals() {
  SlackTracker tracker;
  const struct {
    analysis::AliceCurve curve;
    int k;
  } cases[] = {{analysis::AliceCurve::berlin, 1},
               {analysis::AliceCurve::ours, 2},
               {analysis::AliceCurve::kfold_upper, 3},
               {analysis::AliceCurve::kfold_lower, 3},
               {analysis::AliceCurve::kfold_upper, 10}};
  for (const auto& c : cases) {
    const auto r = analysis::optimize_lambda(c.curve, c.k);
    const LambdaParam l(r.lambda_star);
    double a = 0.0;
    switch (c.curve) {
      case analysis::AliceCurve::berlin: a = analysis::berlin_alice_bound(l); break;
      case analysis::AliceCurve::ours: a = analysis::ours_alice_bound(l); break;
      case analysis::AliceCurve::kfold_upper:
        a = analysis::kfold_alice_upper(c.k, l);
        break;
      case analysis::AliceCurve::kfold_lower:
        a = analysis::kfold_alice_lower(c.k, l);
        break;
    }
    const int bob_k = c.curve == analysis::AliceCurve::berlin
                          ? 1
                          : (c.curve == analysis::AliceCurve::ours ? 2 : c.k);
    tracker.note(1e-9 - std::abs(a - analysis::kfold_bob_exact(bob_k, l)));
  }
  return tracker.result("minimax crossing residuals");
}

CheckResult simulation_consistency(std::uint64_t seed, long trials) {
  SlackTracker tracker;
  const LambdaParam l(0.9);
  // Cheating Bob never beats P*_B = lambda.
  const auto bob = engine::adversary_bob_discriminate(engine::Protocol::berlin,
                                                      l, 0, trials, seed);
  tracker.note(0.9 + 4.0 * binomial_sigma(0.9, trials) -
               *bob.adversary_win_rate);
  // Product Alice never beats the closed-form Alice bounds.
  for (int k = 1; k <= 2; ++k) {
    const auto alice = engine::adversary_alice_product(l, k, trials, seed);
    tracker.note(analysis::kfold_alice_upper(k, l) +
                 4.0 * binomial_sigma(analysis::kfold_alice_lower(k, l), trials) -
                 *alice.adversary_win_rate);
  }
  return tracker.result("simulated win rates stay below the analysis bounds");
}

std::vector<CheckResult> run_all(std::uint64_t seed) {
  std::vector<CheckResult> results;
  results.push_back(fidelity_inequality_1(qmath::derive_seed(seed, 1), 10000));
  results.push_back(fidelity_inequality_2(qmath::derive_seed(seed, 2), 10000));
  results.push_back(additive_fidelity(qmath::derive_seed(seed, 3), 10000));
  results.push_back(
      convexity_of_trace_distance(qmath::derive_seed(seed, 4), 10000));
  results.push_back(distance_bound(qmath::derive_seed(seed, 5), 10000));
  results.push_back(metric_symmetry(qmath::derive_seed(seed, 6), 10000));
  results.push_back(co_diagonal_distance(qmath::derive_seed(seed, 7), 10000));

  results.push_back(basis_orthonormality());
  results.push_back(mixture_identity());
  results.push_back(two_register_distance_identity(1000));
  results.push_back(lemma_pair_fidelity_bound(1000));
  results.push_back(
      check_set_maximizer_dominates(qmath::derive_seed(seed, 8), 1000));
  results.push_back(encryption_marginal_independence());

  results.push_back(postselection_bound(qmath::derive_seed(seed, 9), 1000, 10));
  results.push_back(
      honest_runs_fair_and_loss_free(qmath::derive_seed(seed, 10), 100000));
  results.push_back(
      discriminate_below_helstrom(qmath::derive_seed(seed, 11), 100000));
  results.push_back(transcript_determinism(qmath::derive_seed(seed, 12)));

  results.push_back(kfold_curve_identities());
  results.push_back(kfold_bob_tensor_route());
  results.push_back(curve_monotonicity());
  results.push_back(crossing_residuals());
  results.push_back(
      simulation_consistency(qmath::derive_seed(seed, 13), 100000));
  return results;
}

}  // namespace coinflip::verify
