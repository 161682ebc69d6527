// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scalar model on the saturated manifold. With x_l = (s_l - D_l) / s_l^2 in
// [0, 1/s_l] the distortion constraint reads sum_l x_l = 1/D - 1/s_X, every
// log+ argument is >= 1, and the objective is smooth and convex in x. We
// minimize by pairwise exchanges along the constraint, each a 1-D Brent
// search.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/tools/minima.hpp>

#include "ceo/optimize.h"

namespace ceo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxSweeps = 500;

struct SaturatedScalar {
  const ScalarCeoInstance& inst;
  double d;
  std::vector<double> mu;
  std::vector<int> order;

  double Value(const std::vector<double>& x) const {
    const int n = inst.num_sensors();
    double value = 0.0;
    for (int l = 0; l < n; ++l) {
      if (mu[l] <= 0.0) continue;
      const double s = inst.noise_vars[l];
      const double dl = s - s * s * x[l];
      if (!(dl > 0.0)) return kInf;
      value += 0.5 * mu[l] * std::log(s / dl);
    }
    for (int k = 0; k + 1 < n; ++k) {
      const double w = mu[order[k]] - mu[order[k + 1]];
      if (w <= 0.0) continue;
      double p = 1.0 / inst.var_x;
      for (int j = k + 1; j < n; ++j) p += x[order[j]];
      value += 0.5 * w * std::max(0.0, -std::log(p * d));
    }
    value += 0.5 * mu[order[n - 1]] * std::log(inst.var_x / d);
    return value;
  }
};

}  // namespace

BoundReport scalar_solve(const ScalarCeoInstance& inst, double d, const WeightVector& mu) {
  inst.Validate();
  const int n = inst.num_sensors();
  if (mu.size() != n) {
    throw CeoError(ErrorCode::kWrongSensorCount, "weights do not match sensor count");
  }
  const double lower = inst.MinDistortion();
  const double tol = kValidationTol * std::max(1.0, inst.var_x);
  if (!(d > 0.0) || d < lower - tol) {
    throw CeoError(ErrorCode::kInfeasible, "distortion below the collective MMSE");
  }
  std::vector<double> cap(n);
  for (int l = 0; l < n; ++l) cap[l] = 1.0 / inst.noise_vars[l];
  const double total_cap = std::accumulate(cap.begin(), cap.end(), 0.0);
  const double c = std::clamp(1.0 / d - 1.0 / inst.var_x, 0.0, total_cap);

  SaturatedScalar obj{inst, d, mu.values(), mu.DescendingOrder()};
  std::vector<double> x(n);
  for (int l = 0; l < n; ++l) x[l] = c * cap[l] / total_cap;
  double value = obj.Value(x);

  for (int sweep = 0; sweep < kMaxSweeps && n > 1; ++sweep) {
    const double before = value;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        // Move t from x_j to x_i.
        const double t_lo = std::max(-x[i], x[j] - cap[j]);
        const double t_hi = std::min(cap[i] - x[i], x[j]);
        if (!(t_hi > t_lo)) continue;
        const double xi = x[i], xj = x[j];
        auto line = [&](double t) {
          x[i] = xi + t;
          x[j] = xj - t;
          return obj.Value(x);
        };
        const auto best = boost::math::tools::brent_find_minima(
            line, t_lo, t_hi, std::numeric_limits<double>::digits);
        if (best.second < value) {
          x[i] = xi + best.first;
          x[j] = xj - best.first;
          value = best.second;
        } else {
          x[i] = xi;
          x[j] = xj;
        }
      }
    }
    if (before - value <= 1e-15 * (1.0 + std::abs(value))) break;
  }

  Allocation alloc;
  for (int l = 0; l < n; ++l) {
    const double s = inst.noise_vars[l];
    alloc.mats.push_back(SymMatrix::Scalar(std::clamp(s - s * s * x[l], 0.0, s)));
  }
  return make_report(TangentKind::kOuter, inst.ToMatrix(),
                     DistortionTarget(SymMatrix::Scalar(d)), mu, std::move(alloc));
}

}  // namespace ceo
