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

/// \file optim.hpp
/// Small derivative-free solvers: golden-section line search, bisection
/// root finding, coordinate ascent over the probability simplex and a
/// Nelder-Mead simplex search.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace coinflip::optim {

struct ScalarResult {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximization of a unimodal f on [a, b] to x-tolerance
/// `tol`. Endpoints are compared against the interior optimum, so boundary
/// maxima are returned exactly.
template <typename F>
ScalarResult golden_section_maximize(F&& f, double a, double b, double tol,
                                     int max_iter = 400) {
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = a, hi = b;
  double c = hi - (hi - lo) * kInvPhi;
  double d = lo + (hi - lo) * kInvPhi;
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - (hi - lo) * kInvPhi;
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + (hi - lo) * kInvPhi;
      fd = f(d);
    }
  }
  ScalarResult best{0.5 * (lo + hi), f(0.5 * (lo + hi))};
  for (double x : {a, b}) {
    const double fx = f(x);
    if (fx > best.value) best = {x, fx};
  }
  return best;
}

/// Bisection for a sign change of f on [a, b] to x-tolerance `tol`.
/// Requires f(a) and f(b) of opposite sign. Returns the midpoint of the
/// final bracket and the number of iterations used.
template <typename F>
ScalarResult bisect_sign_change(F&& f, double a, double b, double tol,
                                int* iterations = nullptr) {
  double fa = f(a);
  double lo = a, hi = b;
  int iters = 0;
  while ((hi - lo) > tol && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fa > 0.0) == (fm > 0.0)) {
      lo = mid;
      fa = fm;
    } else {
      hi = mid;
    }
    ++iters;
  }
  if (iterations != nullptr) *iterations = iters;
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

struct SimplexAscentOptions {
  int restarts = 50;
  double tol = 1e-8;
  int max_sweeps = 200;
  /// Optional warm start appended to the restart list.
  std::vector<double> warm_start;
};

/// Maximizes f over the probability simplex of dimension m by cyclic
/// pairwise weight transfers, each solved by golden section. Reliable for
/// concave f; random restarts guard against boundary stalls.
ScalarResult maximize_over_simplex(
    const std::function<double(std::span<const double>)>& f, int m,
    const SimplexAscentOptions& options, std::mt19937_64& rng,
    std::vector<double>* arg_out = nullptr);

struct NelderMeadOptions {
  int max_evals = 2000;
  double ftol = 1e-10;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evals = 0;
};

/// Standard Nelder-Mead simplex MAXIMIZATION from a given start point.
NelderMeadResult nelder_mead_maximize(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> start, const NelderMeadOptions& options);

}  // namespace coinflip::optim
