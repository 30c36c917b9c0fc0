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

// Input-state families and their design metrics. V = [vec(rho_1), ..., vec(rho_M)]
// is the d^2 x M parameterization of an ensemble.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qpt/tensorkit.hpp"

namespace qpt {

// M density matrices whose vectorizations span the d^2-dimensional operator
// space. Construction fails when rank(V) < d^2.
class InputEnsemble {
 public:
  InputEnsemble(int d, std::vector<CMatrix> states, std::string label = {});

  int d() const { return d_; }
  int size() const { return static_cast<int>(states_.size()); }
  const std::vector<CMatrix>& states() const { return states_; }
  const std::string& label() const { return label_; }

  /// d^2 x M stacked parameterization.
  const CMatrix& V() const { return v_; }

 private:
  int d_;
  std::vector<CMatrix> states_;
  std::string label_;
  CMatrix v_;
};

struct DesignReportV {
  double cost = 0.0;        // M Tr((V^* V^T)^-1)
  double cond = 0.0;        // cond(V)
  RVector eigs;             // eigenvalues of V^* V^T, descending
  double lower_cost = 0.0;  // d^4 + d^3 - d^2
  double lower_cond = 0.0;  // sqrt(d + 1)
  bool achieves = false;
};

/// |psi><psi| for a (not necessarily normalized) vector.
CMatrix projector(const CVector& psi);

/// Bloch-vector qubit state (I + r.sigma) / 2.
CMatrix qubit_state(double rx, double ry, double rz);

/// SIC states for d in {2, 4}: the regular tetrahedron for d = 2 and the
/// normalized fiducial table for d = 4.
InputEnsemble sic_states(int d);

/// Complete sets of mutually unbiased basis states for d in {2, 4}, set by set.
InputEnsemble mub_states(int d);

/// Pure MUB basis vectors for d in {2, 4}, grouped by basis.
std::vector<std::vector<CVector>> mub_bases(int d);

/// The d computational projectors followed by |+><+|, |-><-| for each pair
/// j < k, with |+> = (|j> + |k>)/sqrt2 and |-> = (|j> + i|k>)/sqrt2.
InputEnsemble natural_basis_states(int d);

/// Index/coefficient pairs expressing |j><k| as a combination of
/// natural_basis_states(d) members.
std::vector<std::pair<int, Complex>> natural_basis_combination(int d, int j, int k);

/// Hilbert-Schmidt random density matrices (normalized G G^dagger with G
/// complex Ginibre). Redraws up to 10 times if rank(V) < d^2.
InputEnsemble random_states(int d, int m, std::uint64_t seed);

/// Tensor products rho_{j1} (x) ... (x) rho_{jm} of qubit ensembles, first
/// factor varying slowest.
InputEnsemble product_ensemble(const std::vector<InputEnsemble>& parts);

/// Row permutation Pi with vec(A (x) B) = Pi (vec(A) (x) vec(B)) for
/// A in C^{da x da}, B in C^{db x db}.
PermutationMap vec_kron_map(std::size_t da, std::size_t db);

DesignReportV design_metrics_V(const InputEnsemble& ensemble);

}  // namespace qpt
