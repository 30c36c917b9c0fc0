// Copyright 2026 The qpt Authors
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

#include "qpt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "qpt/errors.hpp"

namespace qpt {

double fidelity(const CMatrix& x_hat, const CMatrix& x) {
  if (x_hat.rows() != x.rows() || x_hat.cols() != x.cols()) throw DimensionError("fidelity: shape mismatch");
  const double tr_hat = x_hat.trace().real();
  const double tr = x.trace().real();
  if (!(tr_hat > 0.0) || !(tr > 0.0)) throw InvalidInputError("fidelity: argument has zero trace");
  // Eigenvalues at roundoff level are zeroed so rank-deficient inputs keep full accuracy.
  HermitianEig hat = hermitian_part_eig(x_hat);
  const double floor = 1e-13 * std::max(hat.values.cwiseAbs().maxCoeff(), 1e-300);
  const CMatrix s = spectral_apply(hat, [floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
  HermitianEig eig = hermitian_part_eig(s * x * s);
  double root_trace = 0.0;
  const double eig_floor = 1e-13 * std::max(eig.values.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > eig_floor) root_trace += std::sqrt(eig.values(i));
  }
  return std::clamp(root_trace * root_trace / (tr * tr_hat), 0.0, 1.0);
}

double error_bound_functional(int d, double trace_f, int J, double cost_c, int M, double cost_v, double N) {
  if (d <= 0 || J <= 0 || M <= 0 || !(N > 0.0) || !(cost_c > 0.0) || !(cost_v > 0.0) || !(trace_f >= 0.0)) {
    throw InvalidInputError("error_bound_functional: arguments must be positive");
  }
  return std::sqrt(static_cast<double>(d)) * trace_f * std::sqrt(J * cost_c) * std::sqrt(M * cost_v) /
         std::sqrt(N);
}

ErrorReport error_report(const CMatrix& x_hat, const CMatrix& x, double bound_functional) {
  ErrorReport r;
  r.frob_error = (x_hat - x).norm();
  r.mse = r.frob_error * r.frob_error;
  r.fidelity = x_hat.trace().real() > 0.0 ? fidelity(x_hat, x) : 0.0;
  r.infidelity = 1.0 - r.fidelity;
  r.bound_functional = bound_functional;
  return r;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInputError("fit_line: need at least two paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidInputError("fit_line: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

LineFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  lx.reserve(x.size());
  ly.reserve(y.size());
  for (double v : x) {
    if (!(v > 0.0)) throw InvalidInputError("loglog_slope: values must be positive");
    lx.push_back(std::log10(v));
  }
  for (double v : y) {
    if (!(v > 0.0)) throw InvalidInputError("loglog_slope: values must be positive");
    ly.push_back(std::log10(v));
  }
  return fit_line(lx, ly);
}

}  // namespace qpt
