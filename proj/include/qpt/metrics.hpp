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

#pragma once

// Error metrics for process estimates.

#include <cstdint>
#include <vector>

#include "qpt/tensorkit.hpp"

namespace qpt {

/// [Tr sqrt(sqrt(Xh) X sqrt(Xh))]^2 / (Tr X Tr Xh). Both arguments PSD with
/// nonzero trace. Clamped to [0, 1].
double fidelity(const CMatrix& x_hat, const CMatrix& x);

/// sqrt(d) Tr(F) sqrt(J cost_C) sqrt(M cost_V) / sqrt(N), where cost_C =
/// Tr((C^dagger C)^-1) and cost_V = Tr((V^* V^T)^-1). A scaling functional,
/// not an absolute bound.
double error_bound_functional(int d, double trace_f, int J, double cost_c, int M, double cost_v, double N);

struct ErrorReport {
  double frob_error = 0.0;
  double mse = 0.0;
  double fidelity = 0.0;
  double infidelity = 0.0;
  double bound_functional = 0.0;
};

ErrorReport error_report(const CMatrix& x_hat, const CMatrix& x, double bound_functional = 0.0);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least-squares fit of y on x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log10(y) on log10(x).
LineFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qpt
