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

#include "coinflip/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coinflip::qmath {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kEigenFloor = -1e-10;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigendecomposition failed");
  }
  return solver;
}

}  // namespace

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
  require(amps_.size() > 0, "pure state must have positive dimension");
  require(std::abs(amps_.norm() - 1.0) <= kNormTol,
          "pure state amplitudes must have unit norm (within 1e-12)");
}

PureState PureState::basis_state(int dim, int index) {
  require(dim > 0 && index >= 0 && index < dim,
          "basis state index must lie in [0, dim)");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

DensityOperator::DensityOperator(const Matrix& matrix) {
  require(matrix.rows() > 0 && matrix.rows() == matrix.cols(),
          "density operator must be a square matrix of positive dimension");
  require((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= kHermitianTol,
          "density operator must be Hermitian (within 1e-12 entrywise)");
  Matrix sym = 0.5 * (matrix + matrix.adjoint());
  const double trace = sym.trace().real();
  require(std::abs(trace - 1.0) <= kTraceTol,
          "density operator must have unit trace (within 1e-10)");
  sym /= trace;

  auto solver = eigensolve(sym);
  const Eigen::VectorXd evals = solver.eigenvalues();
  require(evals.minCoeff() >= kEigenFloor,
          "density operator must be positive semidefinite "
          "(eigenvalues >= -1e-10)");
  if (evals.minCoeff() < 0.0) {
    // Clamp drift in [-1e-10, 0) to zero and renormalize the spectrum.
    Eigen::VectorXd clamped = evals.cwiseMax(0.0);
    clamped /= clamped.sum();
    const Matrix v = solver.eigenvectors();
    sym = v * clamped.asDiagonal() * v.adjoint();
    sym = 0.5 * (sym + sym.adjoint());
  }
  mat_ = std::move(sym);
}

DensityOperator DensityOperator::pure(const PureState& psi) {
  return DensityOperator(psi.projector());
}

DensityOperator DensityOperator::diagonal(const Eigen::VectorXd& populations) {
  Matrix m = Matrix::Zero(populations.size(), populations.size());
  for (Eigen::Index i = 0; i < populations.size(); ++i) m(i, i) = populations(i);
  return DensityOperator(m);
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  require(dim > 0, "dimension must be positive");
  return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

ProbDist::ProbDist(std::vector<double> weights) : weights_(std::move(weights)) {
  require(!weights_.empty(), "distribution must be nonempty");
  double sum = 0.0;
  for (double w : weights_) {
    require(w >= 0.0, "distribution weights must be nonnegative");
    sum += w;
  }
  require(std::abs(sum - 1.0) <= kTraceTol,
          "distribution weights must sum to 1 (within 1e-10)");
  for (double& w : weights_) w /= sum;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  const int da = a.dim();
  const int db = b.dim();
  Matrix out(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return DensityOperator(out);
}

DensityOperator partial_trace(const DensityOperator& rho, Subsystem keep,
                              int dim_x, int dim_y) {
  require(dim_x > 0 && dim_y > 0, "subsystem dimensions must be positive");
  require(rho.dim() == dim_x * dim_y,
          "partial trace dimension mismatch: operator dim must equal "
          "dim_x * dim_y");
  const Matrix& m = rho.matrix();
  if (keep == Subsystem::x) {
    Matrix out = Matrix::Zero(dim_x, dim_x);
    for (int i = 0; i < dim_x; ++i)
      for (int j = 0; j < dim_x; ++j)
        for (int y = 0; y < dim_y; ++y)
          out(i, j) += m(i * dim_y + y, j * dim_y + y);
    return DensityOperator(out);
  }
  Matrix out = Matrix::Zero(dim_y, dim_y);
  for (int i = 0; i < dim_y; ++i)
    for (int j = 0; j < dim_y; ++j)
      for (int x = 0; x < dim_x; ++x)
        out(i, j) += m(x * dim_y + i, x * dim_y + j);
  return DensityOperator(out);
}

double trace_distance_raw(const Matrix& a, const Matrix& b) {
  Matrix diff = b - a;
  diff = 0.5 * (diff + diff.adjoint());
  const Eigen::VectorXd evals = eigensolve(diff).eigenvalues();
  const double d = 0.5 * evals.cwiseAbs().sum();
  return std::clamp(d, 0.0, 1.0);
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  require(rho.dim() == sigma.dim(), "trace distance dimension mismatch");
  return trace_distance_raw(rho.matrix(), sigma.matrix());
}

Matrix hermitian_sqrt(const Matrix& a) {
  auto solver = eigensolve(a);
  const Eigen::VectorXd roots =
      solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() *
         solver.eigenvectors().adjoint();
}

double fidelity_from_sqrt(const Matrix& sqrt_rho, const Matrix& sigma) {
  Matrix m = sqrt_rho * sigma * sqrt_rho;
  m = 0.5 * (m + m.adjoint());
  const Eigen::VectorXd evals = eigensolve(m).eigenvalues();
  const double f = evals.cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(f, 0.0, 1.0);
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  require(rho.dim() == sigma.dim(), "fidelity dimension mismatch");
  return fidelity_from_sqrt(hermitian_sqrt(rho.matrix()), sigma.matrix());
}

double statistical_distance(const ProbDist& p, const ProbDist& q) {
  require(p.size() == q.size(), "statistical distance length mismatch");
  double sum = 0.0;
  for (int i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double helstrom_bound(const DensityOperator& rho0, const DensityOperator& rho1) {
  require(rho0.dim() == rho1.dim(), "Helstrom bound dimension mismatch");
  return 0.5 + 0.5 * trace_distance(rho0, rho1);
}

int measure_projective(const PureState& state, std::span<const PureState> basis,
                       std::mt19937_64& rng) {
  const int dim = state.dim();
  require(static_cast<int>(basis.size()) == dim,
          "measurement basis must span the space (one vector per dimension)");
  constexpr double kOrthoTol = 1e-10;
  for (size_t i = 0; i < basis.size(); ++i) {
    require(basis[i].dim() == dim, "measurement basis dimension mismatch");
    for (size_t j = i + 1; j < basis.size(); ++j) {
      const Complex overlap = basis[i].amplitudes().dot(basis[j].amplitudes());
      require(std::abs(overlap) <= kOrthoTol,
              "measurement basis must be orthonormal (within 1e-10)");
    }
  }

  std::vector<double> probs(basis.size());
  double total = 0.0;
  for (size_t i = 0; i < basis.size(); ++i) {
    const Complex amp = basis[i].amplitudes().dot(state.amplitudes());
    probs[i] = std::norm(amp);
    total += probs[i];
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double draw = unif(rng) * total;
  double cumulative = 0.0;
  for (size_t i = 0; i + 1 < probs.size(); ++i) {
    cumulative += probs[i];
    if (draw < cumulative) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over (seed, index); cheap, stateless, collision-resistant
  // enough for independent trial streams.
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PureState random_pure(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  v.normalize();
  return PureState(std::move(v));
}

DensityOperator random_density(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = Complex(re, im);
    }
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(rho);
}

ProbDist random_dist(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<size_t>(n));
  double sum = 0.0;
  for (double& x : w) {
    x = expo(rng);
    sum += x;
  }
  for (double& x : w) x /= sum;
  return ProbDist(std::move(w));
}

}  // namespace coinflip::qmath
