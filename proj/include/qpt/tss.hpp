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

// Two-stage process reconstruction.
//
//   Step 1  A_hat = per-state linear inversion of the frequencies through C.
//   Step 2  D_hat = structured least squares through V and the index map R.
//   Step 3  G_hat = Frobenius-nearest PSD matrix to D_hat.
//   Step 4  X_hat = (I (x) T) G_hat (I (x) T)^dagger with T chosen so that
//           Tr_1(X_hat) <= I_d.

#include <cstdint>

#include "qpt/detectors.hpp"
#include "qpt/ensembles.hpp"
#include "qpt/simulator.hpp"
#include "qpt/tensorkit.hpp"

namespace qpt {

struct PsdProjection {
  CMatrix G;
  int clipped = 0;  // number of negative eigenvalues set to zero
};

struct TraceCorrection {
  CMatrix X;
  CMatrix F_hat;    // Tr_1(G_hat)
  CMatrix U_F;      // eigenvectors of F_hat
  RVector f_hat;    // eigenvalues of F_hat, descending
  RVector f_bar;    // rank-completed spectrum
  RVector f_tilde;  // min(f_bar, 1)
  int rank_c = 0;
  bool tp_prior = false;
  bool tp_fallback = false;  // tp_prior requested but F_hat was near-singular
};

struct TssEstimate {
  int d = 0;
  CMatrix X_hat;  // d^2 x d^2
  CMatrix A_hat;  // M x d^2
  CMatrix D_hat;  // d^2 x d^2
  CMatrix G_hat;  // d^2 x d^2
  int clipped = 0;
  TraceCorrection correction;
};

/// Nearest PSD matrix to D in Frobenius norm: clip the spectrum of (D + D^dagger)/2.
PsdProjection step3_psd_project(const CMatrix& d_hat);

/// Partial-trace correction. `copies_per_state` fills the null space of F_hat
/// with f_c / N. With tp_prior, T = F_hat^{-1/2} unless F_hat has an
/// eigenvalue below 1e-8, in which case the non-TP path is used and flagged.
TraceCorrection step4_trace_correct(const CMatrix& g_hat, std::int64_t copies_per_state, bool tp_prior);

// Caches (C^dagger C)^-1 C^dagger and (V^* V^T)^-1 V^* for one
// (ensemble, POVM) pair; reconstructs any number of records against it.
class TssReconstructor {
 public:
  TssReconstructor(const InputEnsemble& ensemble, const PovmCollection& povm);

  int d() const { return d_; }
  int num_states() const { return M_; }
  int num_elements() const { return L_; }

  /// d^2 x L.
  const CMatrix& povm_pinv() const { return povm_pinv_; }
  /// d^2 x M.
  const CMatrix& ensemble_pinv() const { return ensemble_pinv_; }

  /// M x d^2 output coefficients in the natural basis.
  CMatrix step1(const RMatrix& freq) const;
  /// d^2 x d^2 unconstrained least-squares process matrix.
  CMatrix step2(const CMatrix& a_hat) const;

  TssEstimate estimate(const MeasurementRecord& record, bool tp_prior = false) const;

 private:
  int d_;
  int M_;
  int L_;
  CMatrix povm_pinv_;
  CMatrix ensemble_pinv_;
  PermutationMap k_map_;
  PermutationMap r_map_;
};

CMatrix step1_reconstruct_A(const MeasurementRecord& record, const PovmCollection& povm);
CMatrix step2_least_squares(const CMatrix& a_hat, const InputEnsemble& ensemble);
TssEstimate tss_estimate(const MeasurementRecord& record, const InputEnsemble& ensemble,
                         const PovmCollection& povm, bool tp_prior = false);

// Brute-force reference built from the defining sums, for d <= 3.

/// Md^2 x d^4 coefficient matrix with B(m + n M, j + k d^2) = [vec(E_j rho_m E_k^dagger)]_n.
CMatrix dense_B(const InputEnsemble& ensemble);

/// (I_M (x) C) K B, the full ML x d^4 linear model.
CMatrix dense_Y(const InputEnsemble& ensemble, const PovmCollection& povm);

struct DenseOracleResult {
  CMatrix two_step;  // (B^dagger B)^-1 B^dagger vec(A_hat) with dense B and dense step-1 operator
  CMatrix factored;      // R^T (I (x) W) K^T (I (x) C^+) vec(P^T) with every factor materialized
  CMatrix one_shot;  // (Y^dagger Y)^-1 Y^dagger vec(P^T)
};

DenseOracleResult dense_oracle_estimate(const MeasurementRecord& record, const InputEnsemble& ensemble,
                                        const PovmCollection& povm);

}  // namespace qpt
