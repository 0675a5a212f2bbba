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

#include "coinflip/optim.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace coinflip::optim {

namespace {

std::vector<double> random_simplex_point(int m, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<size_t>(m));
  double sum = 0.0;
  for (double& x : w) {
    x = expo(rng);
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

double ascend_from(const std::function<double(std::span<const double>)>& f,
                   std::vector<double> w, const SimplexAscentOptions& options,
                   std::vector<double>* arg_out) {
  const int m = static_cast<int>(w.size());
  double value = f(w);
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const double before = value;
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        const double budget = w[static_cast<size_t>(i)] + w[static_cast<size_t>(j)];
        if (budget <= 0.0) continue;
        auto slice = [&](double alpha) {
          std::vector<double> trial = w;
          trial[static_cast<size_t>(i)] = alpha * budget;
          trial[static_cast<size_t>(j)] = (1.0 - alpha) * budget;
          return f(trial);
        };
        const ScalarResult r =
            golden_section_maximize(slice, 0.0, 1.0, options.tol);
        if (r.value > value) {
          w[static_cast<size_t>(i)] = r.x * budget;
          w[static_cast<size_t>(j)] = (1.0 - r.x) * budget;
          value = r.value;
        }
      }
    }
    if (value - before < options.tol) break;
  }
  if (arg_out != nullptr) *arg_out = std::move(w);
  return value;
}

}  // namespace

ScalarResult maximize_over_simplex(
    const std::function<double(std::span<const double>)>& f, int m,
    const SimplexAscentOptions& options, std::mt19937_64& rng,
    std::vector<double>* arg_out) {
  if (m <= 0) throw std::invalid_argument("simplex dimension must be positive");
  if (m == 1) {
    std::vector<double> w{1.0};
    const double v = f(w);
    if (arg_out != nullptr) *arg_out = std::move(w);
    return {1.0, v};
  }

  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> best_arg;

  // `restarts` counts total starts; a warm start takes the first slot,
  // then the uniform point, then random draws.
  std::vector<std::vector<double>> starts;
  if (!options.warm_start.empty()) starts.push_back(options.warm_start);
  if (static_cast<int>(starts.size()) < options.restarts) {
    starts.push_back(std::vector<double>(static_cast<size_t>(m),
                                         1.0 / static_cast<double>(m)));
  }
  while (static_cast<int>(starts.size()) < options.restarts) {
    starts.push_back(random_simplex_point(m, rng));
  }

  for (auto& start : starts) {
    std::vector<double> arg;
    const double v = ascend_from(f, std::move(start), options, &arg);
    if (v > best) {
      best = v;
      best_arg = std::move(arg);
    }
  }
  if (arg_out != nullptr) *arg_out = std::move(best_arg);
  return {0.0, best};
}

NelderMeadResult nelder_mead_maximize(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> start, const NelderMeadOptions& options) {
  const int n = static_cast<int>(start.size());
  if (n == 0) throw std::invalid_argument("Nelder-Mead needs a nonempty start");

  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };

  // Simplex of n+1 vertices; maximize by tracking the largest value.
  std::vector<std::vector<double>> verts(static_cast<size_t>(n) + 1,
                                         std::vector<double>(start.begin(), start.end()));
  for (int i = 0; i < n; ++i) {
    verts[static_cast<size_t>(i) + 1][static_cast<size_t>(i)] +=
        options.initial_step;
  }
  std::vector<double> vals;
  vals.reserve(verts.size());
  for (const auto& v : verts) vals.push_back(eval(v));

  auto order = [&] {
    std::vector<size_t> idx(verts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](size_t a, size_t b) { return vals[a] > vals[b]; });
    std::vector<std::vector<double>> nv;
    std::vector<double> nf;
    for (size_t k : idx) {
      nv.push_back(std::move(verts[k]));
      nf.push_back(vals[k]);
    }
    verts = std::move(nv);
    vals = std::move(nf);
  };
  order();

  constexpr double kAlpha = 1.0;   // reflection
  constexpr double kGamma = 2.0;   // expansion
  constexpr double kRho = 0.5;     // contraction
  constexpr double kSigma = 0.5;   // shrink

  while (evals < options.max_evals) {
    if (vals.front() - vals.back() < options.ftol) break;

    std::vector<double> centroid(static_cast<size_t>(n), 0.0);
    for (size_t v = 0; v + 1 < verts.size(); ++v)
      for (int i = 0; i < n; ++i)
        centroid[static_cast<size_t>(i)] +=
            verts[v][static_cast<size_t>(i)] / static_cast<double>(n);

    auto blend = [&](double coef) {
      std::vector<double> x(static_cast<size_t>(n));
      const auto& worst = verts.back();
      for (int i = 0; i < n; ++i) {
        const size_t s = static_cast<size_t>(i);
        x[s] = centroid[s] + coef * (centroid[s] - worst[s]);
      }
      return x;
    };

    std::vector<double> refl = blend(kAlpha);
    const double f_refl = eval(refl);
    if (f_refl > vals.front()) {
      std::vector<double> expd = blend(kGamma);
      const double f_expd = eval(expd);
      if (f_expd > f_refl) {
        verts.back() = std::move(expd);
        vals.back() = f_expd;
      } else {
        verts.back() = std::move(refl);
        vals.back() = f_refl;
      }
    } else if (f_refl > vals[vals.size() - 2]) {
      verts.back() = std::move(refl);
      vals.back() = f_refl;
    } else {
      std::vector<double> contr = blend(-kRho);
      const double f_contr = eval(contr);
      if (f_contr > vals.back()) {
        verts.back() = std::move(contr);
        vals.back() = f_contr;
      } else {
        for (size_t v = 1; v < verts.size(); ++v) {
          for (int i = 0; i < n; ++i) {
            const size_t s = static_cast<size_t>(i);
            verts[v][s] = verts[0][s] + kSigma * (verts[v][s] - verts[0][s]);
          }
          vals[v] = eval(verts[v]);
        }
      }
    }
    order();
  }

  return {verts.front(), vals.front(), evals};
}

}  // namespace coinflip::optim
