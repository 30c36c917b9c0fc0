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

// POVM collections and their design metrics. Rows of the parameterization C
// are vec(P_l)^dagger, so that p_l = Tr(rho P_l) = C.row(l) * vec(rho).

#include <string>
#include <vector>

#include "qpt/tensorkit.hpp"

namespace qpt {

class PovmCollection {
 public:
  /// Validates each element (Hermitian PSD), per-set completeness and rank(C) = d^2.
  PovmCollection(int d, std::vector<std::vector<CMatrix>> sets, std::string label = {});

  int d() const { return d_; }
  int num_sets() const { return static_cast<int>(sets_.size()); }
  int num_elements() const { return static_cast<int>(C_.rows()); }
  const std::vector<std::vector<CMatrix>>& sets() const { return sets_; }
  std::vector<int> set_sizes() const;
  /// Offset of the first element of each set in the flattened ordering.
  std::vector<int> set_offsets() const;
  const std::string& label() const { return label_; }

  /// L x d^2 stacked parameterization.
  const CMatrix& C() const { return C_; }

 private:
  int d_;
  std::vector<std::vector<CMatrix>> sets_;
  std::string label_;
  CMatrix C_;
};

struct DesignReportC {
  double cost = 0.0;        // J Tr((C^dagger C)^-1)
  double cond = 0.0;        // cond(C)
  RVector eigs;             // eigenvalues of C^dagger C, descending
  double s = 0.0;           // sum_j d / n_j
  double lower_cost = 0.0;  // J (1/s + (d^2-1)^2 / (J d - s))
  double lower_cond = 0.0;  // sqrt((d^2-1) s / (J d - s))
  bool achieves = false;
};

/// Tensor products of the single-qubit Pauli eigenbases, sets ordered Z, X, Y
/// per qubit with the first qubit varying slowest. J = 3^m, L = 6^m.
PovmCollection cube_povm(int m);

/// d + 1 mutually unbiased projective measurements for d in {2, 4}.
PovmCollection mub_povm(int d);

/// Single-set SIC-POVM {|psi_i><psi_i| / d} built from the d = 4 fiducial table.
PovmCollection sic_povm(int d);

DesignReportC design_metrics_C(const PovmCollection& povm);

}  // namespace qpt
