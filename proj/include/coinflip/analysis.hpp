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

/// \file analysis.hpp
/// Closed-form security bounds for both protocols, the exact k-fold Bob
/// cheating probability, minimax lambda optimization, the repetition sweep
/// and the refined numeric Alice bound.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coinflip/states.hpp"

namespace coinflip::analysis {

struct WhichExact {
  bool alice = false;
  bool bob = false;
};

/// Cheating probabilities for one protocol family at fixed lambda and k.
struct BoundsReport {
  std::string protocol;
  double lambda = 0.0;
  int k = 1;
  double p_alice_upper = 0.0;
  std::optional<double> p_alice_lower;
  double p_bob = 0.0;
  WhichExact which_exact;
};

/// Result of the minimax search over lambda.
struct OptimizationResult {
  double lambda_star = 0.0;
  double p_star = 0.0;
  double bias = 0.0;
  std::string solver = "bisection";
  int iterations = 0;
  double tolerance = 0.0;
  /// Set when the two curves do not cross on [1/2, 1] and the reported
  /// minimax comes from the interval boundary instead.
  bool boundary = false;
};

/// One row of the repetition sweep: minimax values using the upper and the
/// lower Alice curve against the exact Bob curve.
struct SweepRow {
  int k = 1;
  double lambda_star_upper = 0.0;
  double p_upper = 0.0;
  double lambda_star_lower = 0.0;
  double p_lower = 0.0;
};

/// Baseline protocol: P*_A = 3/4 + sqrt(lambda(1-lambda))/2 and P*_B =
/// lambda, both exact.
double berlin_alice_bound(states::LambdaParam lambda);
BoundsReport berlin_bounds(states::LambdaParam lambda);

/// Encrypted two-register protocol: Alice bound
/// 1/2 + 1/2 ((1 + 2 sqrt(lambda(1-lambda))) / 2)^2.
double ours_alice_bound(states::LambdaParam lambda);
BoundsReport ours_bounds(states::LambdaParam lambda);

/// k-fold bare repetition: Alice's upper bound
/// f(k, lambda) = 1/2 + 1/2 (1/2 + sqrt(lambda(1-lambda)))^k.
double kfold_alice_upper(int k, states::LambdaParam lambda);

/// Product-strategy lower bound g(k, lambda) = (3/4 + sqrt(..)/2)^k.
double kfold_alice_lower(int k, states::LambdaParam lambda);

/// Bob's exact k-fold value 1/2 + D(rho_0^k, rho_1^k)/2, computed by the
/// closed-form weight-class sum; supports k up to 64.
double kfold_bob_exact(int k, states::LambdaParam lambda);

BoundsReport kfold_bounds(int k, states::LambdaParam lambda);

enum class AliceCurve { berlin, ours, kfold_upper, kfold_lower };

AliceCurve alice_curve_from_string(const std::string& name);

/// Minimax over lambda solved as a curve crossing: the Alice curve is
/// decreasing and Bob's is increasing on [1/2, 1] (grid-checked before the
/// bisection), so the minimax sits where they meet. Bisection tolerance is
/// 1e-10 in lambda.
OptimizationResult optimize_lambda(AliceCurve curve, int k);

/// Rows k = 1..k_max of the repetition comparison (k_max in [3, 20]).
std::vector<SweepRow> sweep_k(int k_max);

/// Best-effort numeric maximization of Alice's exact two-register success
/// probability over committed states, using a 16-parameter triangular
/// factorization and Nelder-Mead with `restarts` starts (the first start is
/// seeded from the optimal product commitment, the rest are random). The
/// result is a true lower bound on the refined value and lies between
/// g(2, lambda) and the closed-form upper bound.
double refined_alice_bound(states::LambdaParam lambda, int restarts,
                           std::uint64_t seed);

}  // namespace coinflip::analysis
