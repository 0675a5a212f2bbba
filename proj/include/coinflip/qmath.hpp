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

/// \file qmath.hpp
/// Exact small-dimension complex linear algebra plus the quantum
/// distance/fidelity toolbox: density operators, trace distance, fidelity,
/// statistical distance, the Helstrom guessing bound and projective
/// measurement sampling.

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace coinflip::qmath {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Unit-norm state vector on a small Hilbert space.
class PureState {
 public:
  /// Validates that `amplitudes` has norm 1 within 1e-12.
  explicit PureState(Vector amplitudes);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }

  /// Rank-one projector |psi><psi|.
  Matrix projector() const { return amps_ * amps_.adjoint(); }

  /// Computational basis state |index> of dimension `dim`.
  static PureState basis_state(int dim, int index);

 private:
  Vector amps_;
};

/// Hermitian, positive semidefinite, unit-trace operator.
///
/// Construction validates Hermiticity (1e-12 entrywise) and unit trace
/// (1e-10), clamps eigenvalues in [-1e-10, 0) to zero and renormalizes the
/// spectrum. Eigenvalues below -1e-10 are construction errors.
class DensityOperator {
 public:
  explicit DensityOperator(const Matrix& matrix);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }

  static DensityOperator pure(const PureState& psi);
  static DensityOperator diagonal(const Eigen::VectorXd& populations);
  static DensityOperator maximally_mixed(int dim);

 private:
  struct Trusted {};
  DensityOperator(Matrix m, Trusted) : mat_(std::move(m)) {}

  Matrix mat_;
};

/// Normalized classical probability distribution.
class ProbDist {
 public:
  /// Validates nonnegative entries summing to 1 within 1e-10.
  explicit ProbDist(std::vector<double> weights);

  int size() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  double operator[](int i) const { return weights_[static_cast<size_t>(i)]; }

 private:
  std::vector<double> weights_;
};

/// Kronecker product of two density operators.
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

/// Which factor of a bipartite space survives a partial trace.
enum class Subsystem { x, y };

/// Reduced state on the kept subsystem of an operator on X (dim_x) tensor
/// Y (dim_y). Rejects operators whose dimension is not dim_x * dim_y.
DensityOperator partial_trace(const DensityOperator& rho, Subsystem keep,
                              int dim_x, int dim_y);

/// Trace distance D(rho, sigma) = 1/2 sum |eig(sigma - rho)|, in [0, 1].
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Square-root fidelity F(rho, sigma) = tr sqrt(sqrt(rho) sigma sqrt(rho)),
/// in [0, 1]. Note: this is the non-squared convention; squared uses are
/// written out as F^2 at call sites.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

/// Half L1 distance between two distributions of equal length.
double statistical_distance(const ProbDist& p, const ProbDist& q);

/// Optimal probability 1/2 + D(rho0, rho1)/2 of guessing which of two known
/// states was sent.
double helstrom_bound(const DensityOperator& rho0, const DensityOperator& rho1);

/// Samples a projective measurement of `state` in `basis`, returning the
/// outcome index with Born-rule probability |<basis_i|state>|^2. The basis
/// must be orthonormal within 1e-10 and span the space; outcomes are
/// deterministic given the generator state.
int measure_projective(const PureState& state, std::span<const PureState> basis,
                       std::mt19937_64& rng);

// --- Hermitian helpers (shared by states/engine/analysis hot paths) ---

/// Principal square root of a Hermitian PSD matrix; tiny negative
/// eigenvalues are clamped to zero.
Matrix hermitian_sqrt(const Matrix& a);

/// Fidelity F(rho, sigma) evaluated from a precomputed sqrt(rho).
double fidelity_from_sqrt(const Matrix& sqrt_rho, const Matrix& sigma);

/// Trace distance between raw Hermitian unit-trace matrices.
double trace_distance_raw(const Matrix& a, const Matrix& b);

// --- Seeded sampling ---
// All randomness flows from explicit 64-bit seeds; no ambient entropy.

std::mt19937_64 make_rng(std::uint64_t seed);

/// Stateless per-index derivation (splitmix64 mixing), used to give
/// independent streams to Monte-Carlo trials.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Haar-like random unit vector (normalized complex Gaussian entries).
PureState random_pure(int dim, std::mt19937_64& rng);

/// Full-support random density operator: G G^dag normalized, with G a
/// matrix of independent standard complex Gaussian entries.
DensityOperator random_density(int dim, std::mt19937_64& rng);

/// Random distribution (normalized exponentials).
ProbDist random_dist(int n, std::mt19937_64& rng);

}  // namespace coinflip::qmath
