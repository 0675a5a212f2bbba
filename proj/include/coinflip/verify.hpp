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

/// \file verify.hpp
/// Randomized invariant suites over all modules: every named inequality and
/// identity the library promises, runnable as one deterministic batch.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coinflip::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  long instances = 0;
  /// Smallest slack observed before the check's tolerance would be
  /// violated; negative means a violation.
  double worst_slack = 0.0;
};

/// Runs every suite; deterministic given the seed.
std::vector<CheckResult> run_all(std::uint64_t seed);

// Individual suites (used by the acceptance harness with criterion-specific
// instance counts).

CheckResult fidelity_inequality_1(std::uint64_t seed, int instances);
CheckResult fidelity_inequality_2(std::uint64_t seed, int instances);
CheckResult additive_fidelity(std::uint64_t seed, int instances);
CheckResult convexity_of_trace_distance(std::uint64_t seed, int instances);
CheckResult distance_bound(std::uint64_t seed, int instances);
CheckResult metric_symmetry(std::uint64_t seed, int instances);
CheckResult co_diagonal_distance(std::uint64_t seed, int instances);

CheckResult basis_orthonormality();
CheckResult mixture_identity();
CheckResult two_register_distance_identity(int grid_points);
CheckResult lemma_pair_fidelity_bound(int grid_points);
CheckResult check_set_maximizer_dominates(std::uint64_t seed, int samples);
CheckResult encryption_marginal_independence();

CheckResult postselection_bound(std::uint64_t seed, int attacks,
                                int lambda_points);
CheckResult honest_runs_fair_and_loss_free(std::uint64_t seed, long trials);
CheckResult discriminate_below_helstrom(std::uint64_t seed, long trials);
CheckResult transcript_determinism(std::uint64_t seed);

CheckResult kfold_curve_identities();
CheckResult kfold_bob_tensor_route();
CheckResult curve_monotonicity();
CheckResult crossing_residuals();
CheckResult simulation_consistency(std::uint64_t seed, long trials);

}  // namespace coinflip::verify
