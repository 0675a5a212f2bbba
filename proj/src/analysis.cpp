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

#include "coinflip/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "coinflip/engine.hpp"
#include "coinflip/optim.hpp"

namespace coinflip::analysis {

using qmath::Complex;
using qmath::Matrix;
using states::CheckSet;
using states::LambdaParam;

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double mean_root(double lambda) { return std::sqrt(lambda * (1.0 - lambda)); }

double alice_curve_value(AliceCurve curve, int k, double lambda) {
  const LambdaParam l(lambda);
  switch (curve) {
    case AliceCurve::berlin: return berlin_alice_bound(l);
    case AliceCurve::ours: return ours_alice_bound(l);
    case AliceCurve::kfold_upper: return kfold_alice_upper(k, l);
    case AliceCurve::kfold_lower: return kfold_alice_lower(k, l);
  }
  throw std::logic_error("unknown Alice curve");
}

int bob_k_of(AliceCurve curve, int k) {
  switch (curve) {
    case AliceCurve::berlin: return 1;
    case AliceCurve::ours: return 2;
    default: return k;
  }
}

}  // namespace

double berlin_alice_bound(LambdaParam lambda) {
  return 0.75 + 0.5 * mean_root(lambda.value());
}

BoundsReport berlin_bounds(LambdaParam lambda) {
  BoundsReport report;
  report.protocol = "berlin";
  report.lambda = lambda.value();
  report.k = 1;
  report.p_alice_upper = berlin_alice_bound(lambda);
  report.p_alice_lower = report.p_alice_upper;
  report.p_bob = lambda.value();
  report.which_exact = {true, true};
  return report;
}

double ours_alice_bound(LambdaParam lambda) {
  const double f = 2.0 * mean_root(lambda.value());
  const double half_sum = 0.5 * (1.0 + f);
  return 0.5 + 0.5 * half_sum * half_sum;
}

BoundsReport ours_bounds(LambdaParam lambda) {
  BoundsReport report;
  report.protocol = "ours";
  report.lambda = lambda.value();
  report.k = 2;
  report.p_alice_upper = ours_alice_bound(lambda);
  report.p_alice_lower = kfold_alice_lower(2, lambda);
  report.p_bob = lambda.value();
  report.which_exact = {false, true};
  return report;
}

double kfold_alice_upper(int k, LambdaParam lambda) {
  require(k >= 1, "repetition count k must be at least 1");
  return 0.5 + 0.5 * std::pow(0.5 + mean_root(lambda.value()), k);
}

double kfold_alice_lower(int k, LambdaParam lambda) {
  require(k >= 1, "repetition count k must be at least 1");
  return std::pow(0.75 + 0.5 * mean_root(lambda.value()), k);
}

double kfold_bob_exact(int k, LambdaParam lambda) {
  require(k >= 1 && k <= 64, "repetition count k must lie in [1, 64]");
  const double l = lambda.value();
  const double m = 1.0 - l;
  // D(rho_0^k, rho_1^k) splits over Hamming weight classes of the diagonal.
  double distance = 0.0;
  double binom = 1.0;
  for (int w = 0; w <= k; ++w) {
    const double p0 = std::pow(l, k - w) * std::pow(m, w);
    const double p1 = std::pow(l, w) * std::pow(m, k - w);
    distance += binom * std::abs(p0 - p1);
    binom *= static_cast<double>(k - w) / static_cast<double>(w + 1);
  }
  distance *= 0.5;
  return 0.5 + 0.5 * std::min(distance, 1.0);
}

BoundsReport kfold_bounds(int k, LambdaParam lambda) {
  BoundsReport report;
  report.protocol = "kfold";
  report.lambda = lambda.value();
  report.k = k;
  report.p_alice_upper = kfold_alice_upper(k, lambda);
  report.p_alice_lower = kfold_alice_lower(k, lambda);
  report.p_bob = kfold_bob_exact(k, lambda);
  report.which_exact = {false, true};
  return report;
}

AliceCurve alice_curve_from_string(const std::string& name) {
  if (name == "berlin") return AliceCurve::berlin;
  if (name == "ours") return AliceCurve::ours;
  if (name == "kfold-upper") return AliceCurve::kfold_upper;
  if (name == "kfold-lower") return AliceCurve::kfold_lower;
  throw std::invalid_argument(
      "curve must be one of berlin, ours, kfold-upper, kfold-lower");
}

OptimizationResult optimize_lambda(AliceCurve curve, int k) {
  const int bob_k = bob_k_of(curve, k);
  auto alice = [&](double l) { return alice_curve_value(curve, k, l); };
  auto bob = [&](double l) { return kfold_bob_exact(bob_k, LambdaParam(l)); };

  // Monotonicity tripwire on a 1000-point grid; both curves are smooth
  // closed forms, so the grid guards the bisection precondition.
  constexpr int kGrid = 1000;
  double prev_a = alice(0.5);
  double prev_b = bob(0.5);
  for (int i = 1; i <= kGrid; ++i) {
    const double l = 0.5 + 0.5 * static_cast<double>(i) / kGrid;
    const double a = alice(l);
    const double b = bob(l);
    if (a > prev_a + 1e-12 || b < prev_b - 1e-12) {
      throw std::logic_error(
          "bound curves lost monotonicity; bisection precondition failed");
    }
    prev_a = a;
    prev_b = b;
  }

  OptimizationResult result;
  result.tolerance = 1e-10;

  auto gap = [&](double l) { return alice(l) - bob(l); };
  if (gap(0.5) <= 0.0 || gap(1.0) >= 0.0) {
    // No crossing: the minimax sits on the boundary of the lambda range.
    const double at_half = std::max(alice(0.5), bob(0.5));
    const double at_one = std::max(alice(1.0), bob(1.0));
    result.boundary = true;
    result.lambda_star = at_half <= at_one ? 0.5 : 1.0;
    result.p_star = std::min(at_half, at_one);
    result.bias = result.p_star - 0.5;
    return result;
  }

  int iterations = 0;
  const auto crossing =
      optim::bisect_sign_change(gap, 0.5, 1.0, result.tolerance, &iterations);
  result.lambda_star = crossing.x;
  result.p_star = std::max(alice(crossing.x), bob(crossing.x));
  result.bias = result.p_star - 0.5;
  result.iterations = iterations;
  return result;
}

std::vector<SweepRow> sweep_k(int k_max) {
  require(k_max >= 3 && k_max <= 20, "sweep k-max must lie in [3, 20]");
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    const auto upper = optimize_lambda(AliceCurve::kfold_upper, k);
    const auto lower = optimize_lambda(AliceCurve::kfold_lower, k);
    rows.push_back(
        {k, upper.lambda_star, upper.p_star, lower.lambda_star, lower.p_star});
  }
  return rows;
}

double refined_alice_bound(LambdaParam lambda, int restarts,
                           std::uint64_t seed) {
  require(restarts >= 1, "refined bound needs at least one start");

  const CheckSet l0 = CheckSet::single_register(0, lambda);
  const CheckSet l1 = CheckSet::single_register(1, lambda);
  const CheckSet ll0 = CheckSet::two_register(0, lambda);
  const CheckSet ll1 = CheckSet::two_register(1, lambda);
  const CheckSet* singles[2] = {&l0, &l1};
  const CheckSet* pairs[2] = {&ll0, &ll1};

  // Warm starts for the two-register hull weights, carried across
  // evaluations; the inner problem is concave, so this only saves sweeps.
  std::vector<double> warm[2] = {std::vector<double>(4, 0.25),
                                 std::vector<double>(4, 0.25)};

  auto build_state = [](std::span<const double> x) {
    Matrix t = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) t(i, i) = x[static_cast<size_t>(i)];
    int pos = 4;
    for (int i = 1; i < 4; ++i) {
      for (int j = 0; j < i; ++j) {
        t(i, j) = Complex(x[static_cast<size_t>(pos)],
                          x[static_cast<size_t>(pos + 1)]);
        pos += 2;
      }
    }
    Matrix xi = t * t.adjoint();
    const double trace = xi.trace().real();
    if (trace < 1e-12) return Matrix(Matrix::Zero(4, 4));
    xi /= trace;
    return xi;
  };

  auto marginal = [](const Matrix& xi, bool keep_first) {
    Matrix out = Matrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int s = 0; s < 2; ++s)
          out(i, j) += keep_first ? xi(i * 2 + s, j * 2 + s)
                                  : xi(s * 2 + i, s * 2 + j);
    return out;
  };

  std::uint64_t eval_count = 0;
  auto objective = [&](std::span<const double> x) {
    const Matrix xi = build_state(x);
    if (xi.trace().real() < 0.5) return 0.0;  // degenerate factor
    const Matrix xi_x = marginal(xi, true);
    const Matrix xi_y = marginal(xi, false);
    double value = 0.0;
    for (int c = 0; c < 2; ++c) {
      const double f_x = states::detail::hull_fidelity(
          xi_x, singles[c]->generators(), 1, 1e-9,
          qmath::derive_seed(seed, 2 * eval_count));
      const double f_y = states::detail::hull_fidelity(
          xi_y, singles[c]->generators(), 1, 1e-9,
          qmath::derive_seed(seed, 2 * eval_count + 1));
      const double f_p = states::detail::hull_fidelity(
          xi, pairs[c]->generators(), 1, 1e-9,
          qmath::derive_seed(seed, 4 * eval_count + static_cast<unsigned>(c)),
          &warm[c]);
      value += 0.125 * (1.0 + f_x * f_x + f_y * f_y + f_p * f_p);
    }
    ++eval_count;
    return value;
  };

  // First start: the optimal product commitment, lightly regularized so the
  // triangular factor exists.
  const auto sigma_star = engine::alice_optimal_commit(lambda).first;
  qmath::Vector prod(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      prod(i * 2 + j) =
          sigma_star.amplitudes()(i) * sigma_star.amplitudes()(j);
  Matrix xi_seed = prod * prod.adjoint();
  xi_seed = (xi_seed + 1e-6 * Matrix::Identity(4, 4)) / (1.0 + 4e-6);
  const Matrix t_seed = Eigen::LLT<Matrix>(xi_seed).matrixL();

  auto pack = [](const Matrix& t) {
    std::vector<double> x(16, 0.0);
    for (int i = 0; i < 4; ++i) x[static_cast<size_t>(i)] = t(i, i).real();
    int pos = 4;
    for (int i = 1; i < 4; ++i) {
      for (int j = 0; j < i; ++j) {
        x[static_cast<size_t>(pos)] = t(i, j).real();
        x[static_cast<size_t>(pos + 1)] = t(i, j).imag();
        pos += 2;
      }
    }
    return x;
  };

  auto rng = qmath::make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.5);

  double best_value = -1.0;
  std::vector<double> best_x;
  for (int start = 0; start < restarts; ++start) {
    std::vector<double> x0;
    optim::NelderMeadOptions options;
    options.ftol = 1e-9;
    options.initial_step = 0.2;
    if (start == 0) {
      x0 = pack(t_seed);
      options.max_evals = 1500;
    } else {
      x0.resize(16);
      for (double& v : x0) v = gauss(rng);
      options.max_evals = 350;
    }
    const auto result = optim::nelder_mead_maximize(objective, x0, options);
    if (result.value > best_value) {
      best_value = result.value;
      best_x = result.x;
    }
  }

  // Polish the winner, then rescore it without warm-start memory.
  optim::NelderMeadOptions polish;
  polish.max_evals = 1000;
  polish.ftol = 1e-10;
  polish.initial_step = 0.05;
  const auto polished = optim::nelder_mead_maximize(objective, best_x, polish);
  if (polished.value > best_value) {
    best_value = polished.value;
    best_x = polished.x;
  }

  const Matrix xi = build_state(best_x);
  double final_value = 0.0;
  for (int c = 0; c < 2; ++c) {
    const double f_x = states::detail::hull_fidelity(
        marginal(xi, true), singles[c]->generators(), 2, 1e-10,
        qmath::derive_seed(seed, 1'000'000 + static_cast<unsigned>(c)));
    const double f_y = states::detail::hull_fidelity(
        marginal(xi, false), singles[c]->generators(), 2, 1e-10,
        qmath::derive_seed(seed, 1'000'002 + static_cast<unsigned>(c)));
    const double f_p = states::detail::hull_fidelity(
        xi, pairs[c]->generators(), 3, 1e-10,
        qmath::derive_seed(seed, 1'000'004 + static_cast<unsigned>(c)));
    final_value += 0.125 * (1.0 + f_x * f_x + f_y * f_y + f_p * f_p);
  }
  return std::max(best_value, final_value);
}

}  // namespace coinflip::analysis
