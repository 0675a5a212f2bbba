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

#include "coinflip/states.hpp"

using namespace coinflip;
using qmath::DensityOperator;
using qmath::Matrix;
using qmath::PureState;
using states::CheckSet;
using states::LambdaParam;

namespace {

// Independent 2x2 oracle: for qubits, F(rho, sigma)^2 = tr(rho sigma)
// + 2 sqrt(det rho det sigma). Real symmetric matrices as (a, b, d).
struct Sym2 {
  double a, b, d;
  double det() const { return a * d - b * b; }
};

double qubit_fidelity(const Sym2& r, const Sym2& s) {
  const double cross = r.a * s.a + 2.0 * r.b * s.b + r.d * s.d;
  const double f2 = cross + 2.0 * std::sqrt(std::max(r.det() * s.det(), 0.0));
  return std::sqrt(std::clamp(f2, 0.0, 1.0));
}

Sym2 projector_of(double x, double y) { return {x * x, x * y, y * y}; }

Sym2 mix(const Sym2& p, const Sym2& q, double w) {
  return {w * p.a + (1.0 - w) * q.a, w * p.b + (1.0 - w) * q.b,
          w * p.d + (1.0 - w) * q.d};
}

}  // namespace

TEST_CASE("lambda domain") {
  CHECK_NOTHROW((LambdaParam(0.5)));
  CHECK_NOTHROW((LambdaParam(1.0)));
  CHECK_THROWS_AS((LambdaParam(0.49)), std::invalid_argument);
  CHECK_THROWS_AS((LambdaParam(1.01)), std::invalid_argument);
}

TEST_CASE("encoding states") {
  SUBCASE("degenerate lambda = 1") {
    const auto psi = states::phi(0, 0, LambdaParam(1.0));
    CHECK(psi.amplitudes()(0).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(psi.amplitudes()(1)) <= 1e-15);
  }
  SUBCASE("amplitudes at lambda = 0.9") {
    const auto psi = states::phi(0, 0, LambdaParam(0.9));
    CHECK(psi.amplitudes()(0).real() ==
          doctest::Approx(0.9486832980505138).epsilon(1e-14));
    CHECK(psi.amplitudes()(1).real() ==
          doctest::Approx(0.31622776601683794).epsilon(1e-14));
  }
  SUBCASE("each basis is orthonormal across the lambda grid") {
    for (int i = 0; i <= 100; ++i) {
      const LambdaParam l(0.5 + 0.5 * i / 100.0);
      for (int b = 0; b < 2; ++b) {
        const auto u = states::phi(b, 0, l);
        const auto v = states::phi(b, 1, l);
        CHECK(std::abs(u.amplitudes().dot(v.amplitudes())) <= 1e-12);
        CHECK(std::abs(u.amplitudes().norm() - 1.0) <= 1e-12);
        CHECK(std::abs(v.amplitudes().norm() - 1.0) <= 1e-12);
      }
    }
  }
  SUBCASE("bad bits rejected") {
    CHECK_THROWS_AS(states::phi(2, 0, LambdaParam(0.9)), std::invalid_argument);
    CHECK_THROWS_AS(states::phi(0, -1, LambdaParam(0.9)), std::invalid_argument);
  }
  SUBCASE("measuring an encoding in its own basis is deterministic") {
    const LambdaParam l(0.9);
    const std::vector<PureState> basis{states::phi(0, 0, l), states::phi(0, 1, l)};
    auto rng = qmath::make_rng(3);
    for (int i = 0; i < 200; ++i) {
      CHECK(qmath::measure_projective(states::phi(0, 0, l), basis, rng) == 0);
    }
  }
}

TEST_CASE("committed mixed state") {
  SUBCASE("closed form at lambda 0.9") {
    const auto rho = states::rho_mixed(0, LambdaParam(0.9));
    CHECK(rho.matrix()(0, 0).real() == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(std::abs(rho.matrix()(0, 1)) <= 1e-14);
  }
  SUBCASE("lambda one half erases the bit") {
    const auto rho = states::rho_mixed(0, LambdaParam(0.5));
    CHECK((rho.matrix() - Matrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() <=
          1e-14);
  }
  SUBCASE("bit flip conjugation symmetry") {
    const LambdaParam l(0.77);
    const auto r0 = states::rho_mixed(0, l);
    const auto r1 = states::rho_mixed(1, l);
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    CHECK((r1.matrix() - x * r0.matrix() * x).cwiseAbs().maxCoeff() <= 1e-14);
  }
  SUBCASE("equals the uniform mixture over both bases on a lambda grid") {
    for (int i = 0; i <= 100; ++i) {
      const LambdaParam l(0.5 + 0.5 * i / 100.0);
      for (int c = 0; c < 2; ++c) {
        const Matrix mixture = 0.5 * (states::phi(0, c, l).projector() +
                                      states::phi(1, c, l).projector());
        CHECK((states::rho_mixed(c, l).matrix() - mixture).cwiseAbs().maxCoeff() <=
              1e-12);
      }
    }
  }
}

TEST_CASE("tensor powers of the committed state") {
  const LambdaParam l(0.9);
  SUBCASE("k = 1 reduces to rho_mixed") {
    CHECK((states::xi_k(0, l, 1).matrix() - states::rho_mixed(0, l).matrix())
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
  }
  SUBCASE("k = 2 diagonal") {
    const auto xi = states::xi_k(0, l, 2);
    Eigen::Vector4d expected(0.81, 0.09, 0.09, 0.01);
    for (int i = 0; i < 4; ++i)
      CHECK(xi.matrix()(i, i).real() ==
            doctest::Approx(expected(i)).epsilon(1e-12));
  }
  SUBCASE("two-register distinguishability is 2 lambda - 1") {
    for (int i = 0; i <= 50; ++i) {
      const double lv = 0.5 + 0.5 * i / 50.0;
      const LambdaParam lp(lv);
      const double d =
          qmath::trace_distance(states::xi_k(0, lp, 2), states::xi_k(1, lp, 2));
      CHECK(std::abs(d - (2.0 * lv - 1.0)) <= 1e-10);
    }
  }
  SUBCASE("k out of range rejected") {
    CHECK_THROWS_AS(states::xi_k(0, l, 0), std::invalid_argument);
    CHECK_THROWS_AS(states::xi_k(0, l, 9), std::invalid_argument);
  }
}

TEST_CASE("encrypted pair states") {
  const LambdaParam l(0.9);
  SUBCASE("zero pad is no encryption") {
    CHECK((states::encrypted_pair_state(0, 0, 0, l).matrix() -
           states::xi_k(0, l, 2).matrix())
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
  }
  SUBCASE("all-ones pad flips the committed bit") {
    CHECK((states::encrypted_pair_state(0, 1, 1, l).matrix() -
           states::xi_k(1, l, 2).matrix())
              .cwiseAbs()
              .maxCoeff() <= 1e-14);
  }
  SUBCASE("mixed pad diagonal") {
    const auto xi = states::encrypted_pair_state(0, 1, 0, l);
    Eigen::Vector4d expected(0.09, 0.01, 0.81, 0.09);
    for (int i = 0; i < 4; ++i)
      CHECK(xi.matrix()(i, i).real() ==
            doctest::Approx(expected(i)).epsilon(1e-12));
  }
  SUBCASE("averaging over the pad hides the bit") {
    for (double lv : {0.5, 0.7, 0.859, 1.0}) {
      const LambdaParam lp(lv);
      Matrix avg0 = Matrix::Zero(4, 4), avg1 = Matrix::Zero(4, 4);
      for (int r1 = 0; r1 < 2; ++r1) {
        for (int r2 = 0; r2 < 2; ++r2) {
          avg0 += 0.25 * states::encrypted_pair_state(0, r1, r2, lp).matrix();
          avg1 += 0.25 * states::encrypted_pair_state(1, r1, r2, lp).matrix();
        }
      }
      CHECK(qmath::trace_distance_raw(avg0, avg1) <= 1e-12);
    }
  }
}

TEST_CASE("check set membership") {
  const LambdaParam l(0.9);
  const auto l0 = CheckSet::single_register(0, l);
  CHECK(l0.contains(DensityOperator::pure(states::phi(0, 0, l))));
  CHECK(l0.contains(DensityOperator::pure(states::phi(1, 0, l))));
  CHECK(l0.contains(states::rho_mixed(0, l)));
  CHECK_FALSE(l0.contains(DensityOperator::pure(states::phi(0, 1, l))));
  CHECK_FALSE(l0.contains(DensityOperator::maximally_mixed(2)));

  const auto ll0 = CheckSet::two_register(0, l);
  CHECK(ll0.contains(states::xi_k(0, l, 2)));
  CHECK_FALSE(ll0.contains(states::xi_k(1, l, 2)));
}

TEST_CASE("fidelity to a check set") {
  const LambdaParam l(0.9);
  const auto l0 = CheckSet::single_register(0, l);

  SUBCASE("generators and members score one") {
    CHECK(states::fidelity_to_check_set(
              DensityOperator::pure(states::phi(0, 0, l)), l0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(states::fidelity_to_check_set(states::rho_mixed(0, l), l0) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("cross state against a 1e-6-step grid oracle") {
    const auto rho = DensityOperator::pure(states::phi(0, 1, l));
    const double impl = states::fidelity_to_check_set(rho, l0);

    const double rl = std::sqrt(0.9), rm = std::sqrt(0.1);
    const Sym2 target = projector_of(rm, -rl);
    const Sym2 g0 = projector_of(rl, rm);
    const Sym2 g1 = projector_of(rl, -rm);
    double grid_max = 0.0;
    const int steps = 1'000'000;
    for (int i = 0; i <= steps; ++i) {
      const double p = static_cast<double>(i) / steps;
      grid_max = std::max(grid_max, qubit_fidelity(target, mix(g0, g1, p)));
    }
    CHECK(std::abs(impl - grid_max) <= 1e-7);
    // Analytic value: the best mixture is the pure opposite-basis generator.
    CHECK(impl == doctest::Approx(0.6).epsilon(1e-9));
  }

  SUBCASE("maximizer dominates random members") {
    auto rng = qmath::make_rng(97);
    const auto ll0 = CheckSet::two_register(0, l);
    for (int rep = 0; rep < 5; ++rep) {
      for (const CheckSet* set : {&l0, &ll0}) {
        const auto rho = qmath::random_density(set->dim(), rng);
        const double star = states::fidelity_to_check_set(rho, *set);
        for (int draw = 0; draw < 200; ++draw) {
          const auto w = qmath::random_dist(
              static_cast<int>(set->generators().size()), rng);
          Matrix sigma = Matrix::Zero(set->dim(), set->dim());
          for (size_t g = 0; g < set->generators().size(); ++g)
            sigma += w[static_cast<int>(g)] * set->generators()[g].projector();
          CHECK(star >= qmath::fidelity(rho, DensityOperator(sigma)) - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("pairwise check-set fidelity") {
  SUBCASE("orthogonal collapse at lambda = 1") {
    CHECK(states::check_set_pair_fidelity(LambdaParam(1.0), 1) <= 1e-8);
  }
  SUBCASE("lemma bound at lambda = 0.9") {
    const double f = states::check_set_pair_fidelity(LambdaParam(0.9), 1);
    CHECK(f <= 0.6 + 1e-8);
    CHECK(f == doctest::Approx(0.6).epsilon(1e-7));
  }
  SUBCASE("value at lambda = 0.75 against a 1e-4-step 2-D grid oracle") {
    const double impl = states::check_set_pair_fidelity(LambdaParam(0.75), 1);

    const double rl = std::sqrt(0.75), rm = std::sqrt(0.25);
    const Sym2 a0 = projector_of(rl, rm), a1 = projector_of(rl, -rm);
    const Sym2 b0 = projector_of(rm, -rl), b1 = projector_of(rm, rl);
    double grid_max = 0.0;
    const int steps = 10'000;
    for (int i = 0; i <= steps; ++i) {
      const Sym2 sp = mix(a0, a1, static_cast<double>(i) / steps);
      for (int j = 0; j <= steps; ++j) {
        const Sym2 tq = mix(b0, b1, static_cast<double>(j) / steps);
        const double f = qubit_fidelity(sp, tq);
        if (f > grid_max) grid_max = f;
      }
    }
    CHECK(std::abs(impl - grid_max) <= 1e-6);
    CHECK(impl == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-7));
  }
  SUBCASE("lemma bound holds across a lambda grid") {
    for (int i = 0; i <= 40; ++i) {
      const double lv = 0.5 + 0.5 * i / 40.0;
      const double f = states::check_set_pair_fidelity(LambdaParam(lv), 1);
      CHECK(f <= 2.0 * std::sqrt(lv * (1.0 - lv)) + 1e-8);
    }
  }
}
