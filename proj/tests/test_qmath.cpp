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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "coinflip/qmath.hpp"

using namespace coinflip;
using qmath::Complex;
using qmath::DensityOperator;
using qmath::Matrix;
using qmath::ProbDist;
using qmath::PureState;
using qmath::Vector;

namespace {

DensityOperator diag2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return DensityOperator::diagonal(v);
}

}  // namespace

TEST_CASE("pure state validates unit norm") {
  Vector ok(2);
  ok << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK_NOTHROW((PureState(ok)));

  Vector bad(2);
  bad << 1.0, 0.5;
  CHECK_THROWS_AS((PureState(bad)), std::invalid_argument);
}

TEST_CASE("density operator invariants") {
  SUBCASE("rejects non-Hermitian input") {
    Matrix m(2, 2);
    m << 0.5, Complex(0.2, 0.1), Complex(0.2, 0.2), 0.5;
    CHECK_THROWS_AS((DensityOperator(m)), std::invalid_argument);
  }
  SUBCASE("rejects wrong trace") {
    Matrix m = Matrix::Identity(2, 2);
    CHECK_THROWS_AS((DensityOperator(m)), std::invalid_argument);
  }
  SUBCASE("rejects genuinely negative eigenvalues") {
    Matrix m(2, 2);
    m << 1.1, 0.0, 0.0, -0.1;
    CHECK_THROWS_AS((DensityOperator(m)), std::invalid_argument);
  }
  SUBCASE("clamps eigenvalue drift and renormalizes") {
    Matrix m(2, 2);
    m << 1.0 + 5e-11, 0.0, 0.0, -5e-11;
    const DensityOperator rho(m);
    CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("tensor products") {
  SUBCASE("maximally mixed factors") {
    const auto out =
        tensor(DensityOperator::maximally_mixed(2), DensityOperator::maximally_mixed(2));
    CHECK(out.dim() == 4);
    CHECK((out.matrix() - Matrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() <=
          1e-14);
  }
  SUBCASE("diagonal entries multiply") {
    const auto out = tensor(diag2(0.9, 0.1), diag2(0.9, 0.1));
    Eigen::Vector4d expected(0.81, 0.09, 0.09, 0.01);
    for (int i = 0; i < 4; ++i)
      CHECK(out.matrix()(i, i).real() ==
            doctest::Approx(expected(i)).epsilon(1e-12));
  }
  SUBCASE("basis state product") {
    const auto out = tensor(DensityOperator::pure(PureState::basis_state(2, 0)),
                            DensityOperator::pure(PureState::basis_state(2, 1)));
    CHECK(out.matrix()(1, 1).real() == doctest::Approx(1.0));
    CHECK(out.matrix().cwiseAbs().sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("partial trace") {
  using qmath::Subsystem;
  SUBCASE("product state reduction") {
    const auto prod = tensor(DensityOperator::pure(PureState::basis_state(2, 0)),
                             DensityOperator::pure(PureState::basis_state(2, 1)));
    const auto left = partial_trace(prod, Subsystem::x, 2, 2);
    CHECK(left.matrix()(0, 0).real() == doctest::Approx(1.0));
  }
  SUBCASE("product factorization") {
    auto rng = qmath::make_rng(7);
    const auto rho = qmath::random_density(2, rng);
    const auto sigma = qmath::random_density(3, rng);
    const auto right = partial_trace(tensor(rho, sigma), Subsystem::y, 2, 3);
    CHECK((right.matrix() - sigma.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("Bell state reduces to maximally mixed, against an explicit sum") {
    Vector bell(4);
    bell << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    const auto rho = DensityOperator::pure(PureState(bell));
    const auto reduced = partial_trace(rho, Subsystem::x, 2, 2);

    // Independent oracle: sum the 4x4 entries by hand.
    Matrix by_hand = Matrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int y = 0; y < 2; ++y)
          by_hand(i, j) += rho.matrix()(i * 2 + y, j * 2 + y);
    CHECK((reduced.matrix() - by_hand).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((reduced.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() <=
          1e-12);
  }
  SUBCASE("dimension mismatch rejected") {
    CHECK_THROWS_AS(
        partial_trace(DensityOperator::maximally_mixed(4), Subsystem::x, 2, 3),
        std::invalid_argument);
  }
}

TEST_CASE("trace distance") {
  SUBCASE("identical states") {
    auto rng = qmath::make_rng(11);
    const auto rho = qmath::random_density(4, rng);
    CHECK(trace_distance(rho, rho) <= 1e-12);
  }
  SUBCASE("diagonal case reduces to statistical distance") {
    const double lambda = 0.9;
    const auto a = diag2(lambda, 1.0 - lambda);
    const auto b = diag2(1.0 - lambda, lambda);
    CHECK(trace_distance(a, b) == doctest::Approx(0.8).epsilon(1e-12));
    const double delta = statistical_distance(ProbDist({lambda, 1.0 - lambda}),
                                              ProbDist({1.0 - lambda, lambda}));
    CHECK(trace_distance(a, b) == doctest::Approx(delta).epsilon(1e-12));
  }
  SUBCASE("two-register committed states at lambda 0.9") {
    const auto xi0 = tensor(diag2(0.9, 0.1), diag2(0.9, 0.1));
    const auto xi1 = tensor(diag2(0.1, 0.9), diag2(0.1, 0.9));
    CHECK(trace_distance(xi0, xi1) == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch rejected") {
    CHECK_THROWS_AS(trace_distance(DensityOperator::maximally_mixed(2),
                                   DensityOperator::maximally_mixed(4)),
                    std::invalid_argument);
  }
}

TEST_CASE("fidelity") {
  SUBCASE("self fidelity is one") {
    auto rng = qmath::make_rng(13);
    const auto rho = qmath::random_density(4, rng);
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("co-diagonal closed form") {
    const double lambda = 0.9;
    const auto a = diag2(lambda, 1.0 - lambda);
    const auto b = diag2(1.0 - lambda, lambda);
    CHECK(fidelity(a, b) ==
          doctest::Approx(2.0 * std::sqrt(lambda * (1.0 - lambda))).epsilon(1e-12));
    CHECK(fidelity(a, b) == doctest::Approx(0.6).epsilon(1e-12));
  }
  SUBCASE("orthogonal pure states") {
    const auto zero = DensityOperator::pure(PureState::basis_state(2, 0));
    const auto one = DensityOperator::pure(PureState::basis_state(2, 1));
    CHECK(fidelity(zero, one) <= 1e-12);
  }
}

TEST_CASE("statistical distance basics") {
  CHECK(statistical_distance(ProbDist({0.3, 0.7}), ProbDist({0.3, 0.7})) == 0.0);
  CHECK(statistical_distance(ProbDist({1.0, 0.0}), ProbDist({0.0, 1.0})) == 1.0);
  CHECK(statistical_distance(ProbDist({0.9, 0.1}), ProbDist({0.1, 0.9})) ==
        doctest::Approx(0.8).epsilon(1e-14));
  CHECK_THROWS_AS(
      statistical_distance(ProbDist({1.0}), ProbDist({0.5, 0.5})),
      std::invalid_argument);
}

TEST_CASE("Helstrom bound") {
  auto rng = qmath::make_rng(17);
  const auto rho = qmath::random_density(2, rng);
  CHECK(helstrom_bound(rho, rho) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(helstrom_bound(diag2(0.9, 0.1), diag2(0.1, 0.9)) ==
        doctest::Approx(0.9).epsilon(1e-12));
  CHECK(helstrom_bound(DensityOperator::pure(PureState::basis_state(2, 0)),
                       DensityOperator::pure(PureState::basis_state(2, 1))) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projective measurement") {
  const std::vector<PureState> computational{PureState::basis_state(2, 0),
                                             PureState::basis_state(2, 1)};
  SUBCASE("eigenstate is deterministic") {
    auto rng = qmath::make_rng(19);
    for (int i = 0; i < 100; ++i) {
      CHECK(measure_projective(PureState::basis_state(2, 0), computational,
                               rng) == 0);
    }
  }
  SUBCASE("deterministic given the seed") {
    Vector amps(2);
    amps << std::sqrt(0.3), std::sqrt(0.7);
    const PureState psi(std::move(amps));
    auto rng_a = qmath::make_rng(23);
    auto rng_b = qmath::make_rng(23);
    for (int i = 0; i < 200; ++i) {
      CHECK(measure_projective(psi, computational, rng_a) ==
            measure_projective(psi, computational, rng_b));
    }
  }
  SUBCASE("rejects a non-orthonormal basis") {
    Vector skew(2);
    skew << std::sqrt(0.5), std::sqrt(0.5);
    const std::vector<PureState> bad{PureState::basis_state(2, 0), PureState(skew)};
    auto rng = qmath::make_rng(29);
    CHECK_THROWS_AS(
        measure_projective(PureState::basis_state(2, 0), bad, rng),
        std::invalid_argument);
  }
  SUBCASE("empirical frequency matches the Born rule") {
    // Overlap computed explicitly from the amplitudes.
    const double lambda = 0.9;
    Vector a(2), b0(2), b1(2);
    a << std::sqrt(lambda), std::sqrt(1.0 - lambda);
    b0 << std::sqrt(lambda), -std::sqrt(1.0 - lambda);
    b1 << std::sqrt(1.0 - lambda), std::sqrt(lambda);
    const PureState psi(a);
    const std::vector<PureState> basis{PureState(b0), PureState(b1)};
    const double expect = std::norm(basis[0].amplitudes().dot(psi.amplitudes()));
    CHECK(expect == doctest::Approx((2.0 * lambda - 1.0) * (2.0 * lambda - 1.0))
                        .epsilon(1e-12));

    const int trials = 1'000'000;
    auto rng = qmath::make_rng(31);
    int zeros = 0;
    for (int i = 0; i < trials; ++i) {
      zeros += (measure_projective(psi, basis, rng) == 0) ? 1 : 0;
    }
    const double freq = static_cast<double>(zeros) / trials;
    const double sigma = std::sqrt(expect * (1.0 - expect) / trials);
    CHECK(std::abs(freq - expect) <= 4.0 * sigma);
  }
}

TEST_CASE("fidelity and trace distance are symmetric") {
  auto rng = qmath::make_rng(37);
  for (int i = 0; i < 50; ++i) {
    const int dim = (i % 2 == 0) ? 2 : 4;
    const auto a = qmath::random_density(dim, rng);
    const auto b = qmath::random_density(dim, rng);
    CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) <= 1e-12);
    CHECK(std::abs(trace_distance(a, b) - trace_distance(b, a)) <= 1e-12);
  }
}

TEST_CASE("co-diagonal operators: trace distance equals statistical distance") {
  auto rng = qmath::make_rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    const int dim = (rep % 2 == 0) ? 2 : 4;
    // Shared random eigenbasis, random spectra.
    const auto basis_source = qmath::random_density(dim, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(basis_source.matrix());
    const Matrix u = solver.eigenvectors();
    const auto p = qmath::random_dist(dim, rng);
    const auto q = qmath::random_dist(dim, rng);
    Matrix pm = Matrix::Zero(dim, dim), qm = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      pm += p[i] * u.col(i) * u.col(i).adjoint();
      qm += q[i] * u.col(i) * u.col(i).adjoint();
    }
    const double d = trace_distance(DensityOperator(pm), DensityOperator(qm));
    CHECK(std::abs(d - statistical_distance(p, q)) <= 1e-12);
  }
}

TEST_CASE("derived seeds decorrelate trials") {
  CHECK(qmath::derive_seed(42, 0) != qmath::derive_seed(42, 1));
  CHECK(qmath::derive_seed(42, 0) != qmath::derive_seed(43, 0));
  CHECK(qmath::derive_seed(42, 7) == qmath::derive_seed(42, 7));
}
