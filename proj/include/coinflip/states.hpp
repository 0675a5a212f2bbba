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

/// \file states.hpp
/// Protocol-specific state constructions: the lambda-parameterized encoding
/// bases, the committed mixed states and their tensor powers, the encrypted
/// two-register states, and the convex check sets Bob verifies against.

#pragma once

#include <vector>

#include "coinflip/qmath.hpp"

namespace coinflip::states {

/// Encoding parameter lambda, restricted to [1/2, 1]. Values below 1/2 only
/// relabel the committed bit, and the security bounds need 2*lambda - 1 >= 0.
class LambdaParam {
 public:
  explicit LambdaParam(double value);
  double value() const { return value_; }

 private:
  double value_;
};

/// The encoding of bit `c` in basis `b`: one of the four lambda-dependent
/// qubit states. Basis 0 is {(sqrt(l), sqrt(1-l)), (sqrt(1-l), -sqrt(l))};
/// basis 1 flips the sign pattern.
qmath::PureState phi(int basis, int bit, LambdaParam lambda);

/// Classical description of one committed register.
struct EncodedQubit {
  int basis = 0;
  int bit = 0;
  LambdaParam lambda;

  qmath::PureState state() const { return phi(basis, bit, lambda); }
};

/// The basis-averaged committed state: lambda |c><c| + (1-lambda) |1-c><1-c|.
/// Constructed twice (closed form and uniform mixture over both bases) and
/// cross-checked to 1e-12.
qmath::DensityOperator rho_mixed(int bit, LambdaParam lambda);

/// k-fold tensor power of rho_mixed; k is capped at 8 (dimension 2^8).
qmath::DensityOperator xi_k(int bit, LambdaParam lambda, int k);

/// The two-register state Alice sends with one-time-pad bits (r1, r2):
/// rho_{c xor r1} tensor rho_{c xor r2}.
qmath::DensityOperator encrypted_pair_state(int bit, int r1, int r2,
                                            LambdaParam lambda);

/// Convex family of mixtures of pure-state projectors that Bob may verify
/// against: the extreme points are the encodings of one bit in each basis
/// (arity 1), or the four products of such encodings (arity 2).
class CheckSet {
 public:
  static CheckSet single_register(int bit, LambdaParam lambda);
  static CheckSet two_register(int bit, LambdaParam lambda);
  /// Arbitrary generator list (used by the purification oracle tests).
  static CheckSet from_generators(std::vector<qmath::PureState> generators,
                                  int arity);

  const std::vector<qmath::PureState>& generators() const { return gens_; }
  int arity() const { return arity_; }
  int dim() const { return gens_.front().dim(); }

  /// Membership test: rho belongs to the set iff some convex mixture of
  /// generator projectors reproduces it with Frobenius residual <= tol.
  bool contains(const qmath::DensityOperator& rho, double tol = 1e-9) const;

 private:
  CheckSet(std::vector<qmath::PureState> gens, int arity);

  std::vector<qmath::PureState> gens_;
  int arity_;
};

/// Maximal fidelity max_{sigma in set} F(rho, sigma). Two generators are
/// solved by golden section over the mixture weight (tolerance 1e-10); more
/// generators by projected coordinate ascent over the simplex with 50
/// restarts (tolerance 1e-8). F is concave in sigma, so ascent is reliable.
double fidelity_to_check_set(const qmath::DensityOperator& rho,
                             const CheckSet& set);

/// max_{sigma in L_0, sigma' in L_1} F(sigma, sigma') at the given arity:
/// nested golden section over the two mixture weights for arity 1 (outer
/// tolerance 1e-8), alternating simplex ascent over both hulls for arity 2.
double check_set_pair_fidelity(LambdaParam lambda, int arity);

namespace detail {

/// Fast path used by the engine/analysis inner loops: maximize
/// F(rho, sum_i w_i |g_i><g_i|) over the simplex, with a configurable
/// restart budget and an optional warm start (updated in place).
double hull_fidelity(const qmath::Matrix& rho,
                     std::span<const qmath::PureState> generators,
                     int restarts, double tol, std::uint64_t seed,
                     std::vector<double>* warm_weights = nullptr);

}  // namespace detail

}  // namespace coinflip::states
