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

#include "coinflip/states.hpp"

#include <cmath>
#include <stdexcept>

#include "coinflip/optim.hpp"

namespace coinflip::states {

using qmath::DensityOperator;
using qmath::Matrix;
using qmath::PureState;
using qmath::Vector;

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_bit(int b, const char* msg) { require(b == 0 || b == 1, msg); }

/// Evaluates F(rho, sum_i w_i |g_i><g_i|) through the Gram matrix of the
/// vectors sqrt(rho)|g_i>: the nonzero spectrum of sqrt(rho) sigma sqrt(rho)
/// equals that of sqrt(W) G sqrt(W), so only an m x m problem remains.
class HullFidelity {
 public:
  HullFidelity(const Matrix& rho, std::span<const PureState> generators) {
    const Matrix sqrt_rho = qmath::hermitian_sqrt(rho);
    const int m = static_cast<int>(generators.size());
    std::vector<Vector> ys;
    ys.reserve(generators.size());
    for (const auto& g : generators) ys.push_back(sqrt_rho * g.amplitudes());
    gram_.resize(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        gram_(i, j) = ys[static_cast<size_t>(i)].dot(ys[static_cast<size_t>(j)]);
    gram_ = 0.5 * (gram_ + Matrix(gram_.adjoint()));
  }

  double operator()(std::span<const double> w) const {
    const int m = static_cast<int>(gram_.rows());
    Eigen::VectorXd roots(m);
    for (int i = 0; i < m; ++i) roots(i) = std::sqrt(std::max(w[static_cast<size_t>(i)], 0.0));
    Matrix n = roots.asDiagonal() * gram_ * roots.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(n);
    const double f = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(f, 0.0, 1.0);
  }

 private:
  Matrix gram_;
};

Matrix hull_point(std::span<const PureState> gens, std::span<const double> w) {
  Matrix sigma = Matrix::Zero(gens.front().dim(), gens.front().dim());
  for (size_t i = 0; i < gens.size(); ++i) sigma += w[i] * gens[i].projector();
  return sigma;
}

}  // namespace

LambdaParam::LambdaParam(double value) : value_(value) {
  require(value >= 0.5 && value <= 1.0, "lambda must lie in [0.5, 1]");
}

PureState phi(int basis, int bit, LambdaParam lambda) {
  require_bit(basis, "encoding basis must be 0 or 1");
  require_bit(bit, "encoded bit must be 0 or 1");
  const double root_l = std::sqrt(lambda.value());
  const double root_m = std::sqrt(1.0 - lambda.value());
  Vector amps(2);
  if (basis == 0) {
    if (bit == 0) {
      amps << root_l, root_m;
    } else {
      amps << root_m, -root_l;
    }
  } else {
    if (bit == 0) {
      amps << root_l, -root_m;
    } else {
      amps << root_m, root_l;
    }
  }
  return PureState(std::move(amps));
}

DensityOperator rho_mixed(int bit, LambdaParam lambda) {
  require_bit(bit, "committed bit must be 0 or 1");
  const double l = lambda.value();
  Eigen::VectorXd populations(2);
  populations(bit) = l;
  populations(1 - bit) = 1.0 - l;

  Matrix mixture = 0.5 * (phi(0, bit, lambda).projector() +
                          phi(1, bit, lambda).projector());
  Matrix closed = Matrix::Zero(2, 2);
  closed(bit, bit) = l;
  closed(1 - bit, 1 - bit) = 1.0 - l;
  if ((mixture - closed).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::logic_error(
        "basis-averaged mixture diverged from its closed form");
  }
  return DensityOperator::diagonal(populations);
}

DensityOperator xi_k(int bit, LambdaParam lambda, int k) {
  require(k >= 1 && k <= 8, "tensor power k must lie in [1, 8]");
  DensityOperator out = rho_mixed(bit, lambda);
  for (int i = 1; i < k; ++i) out = qmath::tensor(out, rho_mixed(bit, lambda));
  return out;
}

DensityOperator encrypted_pair_state(int bit, int r1, int r2,
                                     LambdaParam lambda) {
  require_bit(bit, "committed bit must be 0 or 1");
  require_bit(r1, "encryption bit r1 must be 0 or 1");
  require_bit(r2, "encryption bit r2 must be 0 or 1");
  return qmath::tensor(rho_mixed(bit ^ r1, lambda), rho_mixed(bit ^ r2, lambda));
}

CheckSet::CheckSet(std::vector<PureState> gens, int arity)
    : gens_(std::move(gens)), arity_(arity) {
  require(!gens_.empty(), "check set needs at least one generator");
  for (const auto& g : gens_) {
    require(g.dim() == gens_.front().dim(),
            "check set generators must share one dimension");
  }
}

CheckSet CheckSet::single_register(int bit, LambdaParam lambda) {
  return CheckSet({phi(0, bit, lambda), phi(1, bit, lambda)}, 1);
}

CheckSet CheckSet::two_register(int bit, LambdaParam lambda) {
  std::vector<PureState> gens;
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) {
      const Vector left = phi(b1, bit, lambda).amplitudes();
      const Vector right = phi(b2, bit, lambda).amplitudes();
      Vector prod(4);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) prod(i * 2 + j) = left(i) * right(j);
      gens.emplace_back(std::move(prod));
    }
  }
  return CheckSet(std::move(gens), 2);
}

CheckSet CheckSet::from_generators(std::vector<PureState> generators,
                                   int arity) {
  return CheckSet(std::move(generators), arity);
}

bool CheckSet::contains(const DensityOperator& rho, double tol) const {
  require(rho.dim() == dim(), "membership test dimension mismatch");
  const int m = static_cast<int>(gens_.size());
  std::vector<Matrix> projs;
  projs.reserve(gens_.size());
  for (const auto& g : gens_) projs.push_back(g.projector());

  Eigen::MatrixXd full_gram(m, m);
  Eigen::VectorXd overlaps(m);
  for (int i = 0; i < m; ++i) {
    overlaps(i) = (projs[static_cast<size_t>(i)] * rho.matrix()).trace().real();
    for (int j = 0; j < m; ++j) {
      full_gram(i, j) =
          (projs[static_cast<size_t>(i)] * projs[static_cast<size_t>(j)])
              .trace()
              .real();
    }
  }
  const double rho_norm2 = (rho.matrix() * rho.matrix()).trace().real();

  // The constrained least-squares problem is a convex QP over the simplex;
  // with at most four generators, exact active-set enumeration is cheapest.
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < (1 << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if ((mask >> i) & 1) idx.push_back(i);
    const int k = static_cast<int>(idx.size());

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd rhs(k + 1);
    for (int a = 0; a < k; ++a) {
      rhs(a) = overlaps(idx[static_cast<size_t>(a)]);
      for (int b = 0; b < k; ++b)
        kkt(a, b) = full_gram(idx[static_cast<size_t>(a)],
                              idx[static_cast<size_t>(b)]);
      kkt(a, k) = 1.0;
      kkt(k, a) = 1.0;
    }
    rhs(k) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);

    bool feasible = true;
    for (int a = 0; a < k; ++a)
      if (sol(a) < -1e-12) feasible = false;
    if (!feasible) continue;

    double quad = 0.0, lin = 0.0;
    for (int a = 0; a < k; ++a) {
      lin += sol(a) * rhs(a);
      for (int b = 0; b < k; ++b)
        quad += sol(a) * sol(b) *
                full_gram(idx[static_cast<size_t>(a)], idx[static_cast<size_t>(b)]);
    }
    const double res2 = std::max(rho_norm2 - 2.0 * lin + quad, 0.0);
    best = std::min(best, std::sqrt(res2));
  }
  return best <= tol;
}

double fidelity_to_check_set(const DensityOperator& rho, const CheckSet& set) {
  require(rho.dim() == set.dim(), "fidelity-to-set dimension mismatch");
  const HullFidelity eval(rho.matrix(), set.generators());
  const int m = static_cast<int>(set.generators().size());
  if (m == 1) {
    const double w = 1.0;
    return eval(std::span<const double>(&w, 1));
  }
  if (m == 2) {
    auto f = [&](double p) {
      const double w[2] = {p, 1.0 - p};
      return eval(w);
    };
    return optim::golden_section_maximize(f, 0.0, 1.0, 1e-10).value;
  }
  optim::SimplexAscentOptions options;
  options.restarts = 50;
  options.tol = 1e-8;
  auto rng = qmath::make_rng(0x5EEDULL);
  return optim::maximize_over_simplex(
             [&](std::span<const double> w) { return eval(w); }, m, options,
             rng)
      .value;
}

double check_set_pair_fidelity(LambdaParam lambda, int arity) {
  require(arity == 1 || arity == 2, "check-set arity must be 1 or 2");
  if (arity == 1) {
    const CheckSet l0 = CheckSet::single_register(0, lambda);
    const CheckSet l1 = CheckSet::single_register(1, lambda);
    auto outer = [&](double p) {
      const double w[2] = {p, 1.0 - p};
      const Matrix sigma = hull_point(l0.generators(), w);
      const HullFidelity inner(sigma, l1.generators());
      auto f = [&](double q) {
        const double v[2] = {q, 1.0 - q};
        return inner(v);
      };
      return optim::golden_section_maximize(f, 0.0, 1.0, 1e-9).value;
    };
    return optim::golden_section_maximize(outer, 0.0, 1.0, 1e-8).value;
  }

  const CheckSet l0 = CheckSet::two_register(0, lambda);
  const CheckSet l1 = CheckSet::two_register(1, lambda);
  auto rng = qmath::make_rng(0x5EEDULL);

  double best = 0.0;
  for (int restart = 0; restart < 3; ++restart) {
    std::vector<double> w(4, 0.25), v(4, 0.25);
    if (restart > 0) {
      auto sample = [&rng] {
        std::exponential_distribution<double> expo(1.0);
        std::vector<double> x(4);
        double sum = 0.0;
        for (double& e : x) {
          e = expo(rng);
          sum += e;
        }
        for (double& e : x) e /= sum;
        return x;
      };
      w = sample();
      v = sample();
    }
    double value = 0.0;
    for (int round = 0; round < 50; ++round) {
      const double before = value;
      value = detail::hull_fidelity(hull_point(l1.generators(), v),
                                    l0.generators(), 2, 1e-9,
                                    qmath::derive_seed(0x5EEDULL, 2 * round),
                                    &w);
      value = detail::hull_fidelity(hull_point(l0.generators(), w),
                                    l1.generators(), 2, 1e-9,
                                    qmath::derive_seed(0x5EEDULL, 2 * round + 1),
                                    &v);
      if (std::abs(value - before) < 1e-8) break;
    }
    best = std::max(best, value);
  }
  return best;
}

namespace detail {

double hull_fidelity(const Matrix& rho, std::span<const PureState> generators,
                     int restarts, double tol, std::uint64_t seed,
                     std::vector<double>* warm_weights) {
  const HullFidelity eval(rho, generators);
  optim::SimplexAscentOptions options;
  options.restarts = restarts;
  options.tol = tol;
  if (warm_weights != nullptr && !warm_weights->empty()) {
    options.warm_start = *warm_weights;
  }
  auto rng = qmath::make_rng(seed);
  std::vector<double> arg;
  const double value =
      optim::maximize_over_simplex(
          [&](std::span<const double> w) { return eval(w); },
          static_cast<int>(generators.size()), options, rng, &arg)
          .value;
  if (warm_weights != nullptr) *warm_weights = std::move(arg);
  return value;
}

}  // namespace detail

}  // namespace coinflip::states
