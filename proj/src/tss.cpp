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

#include "qpt/tss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpt/errors.hpp"

namespace qpt {
namespace {

constexpr double kRankTol = 1e-12;
constexpr double kTpFloor = 1e-8;
constexpr Eigen::Index kDenseMaxDim = 3;

// Least-squares left inverse (A^dagger A)^-1 A^dagger of a full-column-rank A,
// obtained from a pivoted QR solve against the identity.
CMatrix left_inverse(const CMatrix& a, const char* what) {
  Eigen::ColPivHouseholderQR<CMatrix> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < a.cols()) {
    throw SingularDesignError(std::string(what) + " is not informationally complete (rank " +
                              std::to_string(qr.rank()) + " < " + std::to_string(a.cols()) + ")");
  }
  return qr.solve(CMatrix::Identity(a.rows(), a.rows()));
}

CMatrix as_complex(const RMatrix& m) { return m.cast<Complex>(); }

CVector vec_transpose_freq(const RMatrix& freq) {
  // vec(P^T) of the M x L frequency matrix.
  RMatrix t = freq.transpose();
  return as_complex(Eigen::Map<const RVector>(t.data(), t.size()));
}

void check_record_shape(const MeasurementRecord& record, int M, int L) {
  if (record.freq.rows() != M || record.freq.cols() != L) {
    throw DimensionError("record has shape " + std::to_string(record.freq.rows()) + "x" +
                         std::to_string(record.freq.cols()) + ", expected " + std::to_string(M) + "x" +
                         std::to_string(L));
  }
}

}  // namespace

PsdProjection step3_psd_project(const CMatrix& d_hat) {
  if (d_hat.rows() != d_hat.cols()) throw DimensionError("step3: input is not square");
  HermitianEig eig = hermitian_part_eig(d_hat);
  PsdProjection out;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) < 0.0) {
      eig.values(i) = 0.0;
      ++out.clipped;
    }
  }
  out.G = eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
  return out;
}

TraceCorrection step4_trace_correct(const CMatrix& g_hat, std::int64_t copies_per_state, bool tp_prior) {
  const Eigen::Index n = g_hat.rows();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (g_hat.cols() != n || d * d != n) throw DimensionError("step4: input must be d^2 x d^2");
  if (copies_per_state <= 0) throw InvalidInputError("step4: copies per state must be positive");

  TraceCorrection out;
  out.tp_prior = tp_prior;
  out.F_hat = partial_trace_first(g_hat, d);
  HermitianEig eig = hermitian_part_eig(out.F_hat);
  out.U_F = eig.vectors;
  out.f_hat = eig.values.cwiseMax(0.0);

  const double threshold = kRankTol * std::max(out.f_hat(0), 1.0);
  out.rank_c = static_cast<int>((out.f_hat.array() > threshold).count());

  if (tp_prior) {
    if (out.f_hat(d - 1) >= kTpFloor) {
      out.f_bar = out.f_hat;
      out.f_tilde = RVector::Ones(d);
      RVector scale = out.f_hat.cwiseSqrt().cwiseInverse();
      CMatrix t = out.U_F * scale.asDiagonal() * out.U_F.adjoint();
      CMatrix big_t = kron(CMatrix::Identity(d, d), t);
      out.X = big_t * g_hat * big_t.adjoint();
      return out;
    }
    out.tp_fallback = true;
  }

  out.f_bar = out.f_hat;
  if (out.rank_c == 0) {
    out.f_tilde = RVector::Zero(d);
    out.X = CMatrix::Zero(n, n);
    return out;
  }
  const double filler = out.f_hat(out.rank_c - 1) / static_cast<double>(copies_per_state);
  for (Eigen::Index i = out.rank_c; i < d; ++i) out.f_bar(i) = filler;
  out.f_tilde = out.f_bar.cwiseMin(1.0);

  if ((out.f_tilde.array() == out.f_bar.array()).all()) {
    out.X = g_hat;
    return out;
  }
  RVector scale = (out.f_tilde.array() / out.f_bar.array()).sqrt().matrix();
  CMatrix t = out.U_F * scale.asDiagonal() * out.U_F.adjoint();
  CMatrix big_t = kron(CMatrix::Identity(d, d), t);
  out.X = big_t * g_hat * big_t.adjoint();
  return out;
}

TssReconstructor::TssReconstructor(const InputEnsemble& ensemble, const PovmCollection& povm)
    : d_(ensemble.d()), M_(ensemble.size()), L_(povm.num_elements()) {
  if (povm.d() != d_) throw DimensionError("ensemble and POVM dimensions differ");
  povm_pinv_ = left_inverse(povm.C(), "POVM collection");
  ensemble_pinv_ = left_inverse(ensemble.V().transpose(), "input ensemble");
  k_map_ = commutation_map(static_cast<std::size_t>(M_), static_cast<std::size_t>(d_) * d_);
  r_map_ = r_map(static_cast<std::size_t>(d_));
}

CMatrix TssReconstructor::step1(const RMatrix& freq) const {
  if (freq.rows() != M_ || freq.cols() != L_) throw DimensionError("step1: frequency matrix has wrong shape");
  const int n = d_ * d_;
  // Blockwise (I_M (x) C^+) vec(P^T): column m is C^+ applied to row m of P.
  CMatrix a_t = povm_pinv_ * as_complex(freq.transpose());
  CVector v = k_map_.apply_inverse(Eigen::Map<const CVector>(a_t.data(), a_t.size()));
  return unvec(v, M_, n);
}

CMatrix TssReconstructor::step2(const CMatrix& a_hat) const {
  const int n = d_ * d_;
  if (a_hat.rows() != M_ || a_hat.cols() != n) throw DimensionError("step2: A_hat has wrong shape");
  CMatrix z = ensemble_pinv_ * a_hat;
  return unvec_square(r_map_.apply_inverse(Eigen::Map<const CVector>(z.data(), z.size())));
}

TssEstimate TssReconstructor::estimate(const MeasurementRecord& record, bool tp_prior) const {
  check_record_shape(record, M_, L_);
  TssEstimate est;
  est.d = d_;
  est.A_hat = step1(record.freq);
  est.D_hat = step2(est.A_hat);
  PsdProjection proj = step3_psd_project(est.D_hat);
  est.G_hat = std::move(proj.G);
  est.clipped = proj.clipped;
  est.correction = step4_trace_correct(est.G_hat, record.copies_per_state, tp_prior);
  est.X_hat = est.correction.X;
  return est;
}

CMatrix step1_reconstruct_A(const MeasurementRecord& record, const PovmCollection& povm) {
  check_record_shape(record, record.M, povm.num_elements());
  const int n = povm.d() * povm.d();
  CMatrix pinv = left_inverse(povm.C(), "POVM collection");
  CMatrix a_t = pinv * as_complex(record.freq.transpose());
  PermutationMap k = commutation_map(static_cast<std::size_t>(record.M), static_cast<std::size_t>(n));
  return unvec(k.apply_inverse(Eigen::Map<const CVector>(a_t.data(), a_t.size())), record.M, n);
}

CMatrix step2_least_squares(const CMatrix& a_hat, const InputEnsemble& ensemble) {
  const int d = ensemble.d();
  if (a_hat.rows() != ensemble.size() || a_hat.cols() != d * d) {
    throw DimensionError("step2: A_hat has wrong shape");
  }
  CMatrix z = left_inverse(ensemble.V().transpose(), "input ensemble") * a_hat;
  PermutationMap r = r_map(static_cast<std::size_t>(d));
  return unvec_square(r.apply_inverse(Eigen::Map<const CVector>(z.data(), z.size())));
}

TssEstimate tss_estimate(const MeasurementRecord& record, const InputEnsemble& ensemble,
                         const PovmCollection& povm, bool tp_prior) {
  return TssReconstructor(ensemble, povm).estimate(record, tp_prior);
}

CMatrix dense_B(const InputEnsemble& ensemble) {
  const Eigen::Index d = ensemble.d();
  if (d > kDenseMaxDim) throw DimensionError("dense oracle is limited to d <= 3");
  const Eigen::Index n = d * d;
  const Eigen::Index M = ensemble.size();
  CMatrix b = CMatrix::Zero(M * n, n * n);
  for (Eigen::Index m = 0; m < M; ++m) {
    const CMatrix& rho = ensemble.states()[static_cast<std::size_t>(m)];
    for (Eigen::Index j = 0; j < n; ++j) {
      CMatrix ej = CMatrix::Zero(d, d);
      ej(j / d, j % d) = 1.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        CMatrix ek = CMatrix::Zero(d, d);
        ek(k / d, k % d) = 1.0;
        CVector out = vec(ej * rho * ek.adjoint());
        for (Eigen::Index r = 0; r < n; ++r) b(m + r * M, j + k * n) = out(r);
      }
    }
  }
  return b;
}

CMatrix dense_Y(const InputEnsemble& ensemble, const PovmCollection& povm) {
  const Eigen::Index d = ensemble.d();
  const Eigen::Index M = ensemble.size();
  CMatrix k = as_complex(commutation_map(static_cast<std::size_t>(M), static_cast<std::size_t>(d * d)).dense());
  CMatrix ic = kron(CMatrix::Identity(M, M), povm.C());
  return ic * k * dense_B(ensemble);
}

DenseOracleResult dense_oracle_estimate(const MeasurementRecord& record, const InputEnsemble& ensemble,
                                        const PovmCollection& povm) {
  const Eigen::Index d = ensemble.d();
  if (d > kDenseMaxDim) throw DimensionError("dense oracle is limited to d <= 3");
  const Eigen::Index n = d * d;
  const Eigen::Index M = ensemble.size();
  check_record_shape(record, static_cast<int>(M), povm.num_elements());

  const CMatrix& c = povm.C();
  CMatrix c_pinv = (c.adjoint() * c).inverse() * c.adjoint();
  CMatrix vs = ensemble.V().conjugate();
  CMatrix w = (vs * ensemble.V().transpose()).inverse() * vs;
  CMatrix k = as_complex(commutation_map(static_cast<std::size_t>(M), static_cast<std::size_t>(n)).dense());
  CMatrix r = as_complex(r_map(static_cast<std::size_t>(d)).dense());
  CVector p = vec_transpose_freq(record.freq);

  CVector a = k.transpose() * (kron(CMatrix::Identity(M, M), c_pinv) * p);
  CMatrix b = dense_B(ensemble);

  DenseOracleResult out;
  out.two_step = unvec_square((b.adjoint() * b).inverse() * (b.adjoint() * a));
  out.factored = unvec_square(r.transpose() * (kron(CMatrix::Identity(n, n), w) * a));
  CMatrix y = kron(CMatrix::Identity(M, M), c) * k * b;
  out.one_shot = unvec_square((y.adjoint() * y).inverse() * (y.adjoint() * p));
  return out;
}

}  // namespace qpt
