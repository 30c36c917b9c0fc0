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

#include "qpt/channels.hpp"

#include <cmath>
#include <string>

#include "qpt/errors.hpp"

namespace qpt {

KrausChannel::KrausChannel(int d, std::vector<CMatrix> kraus, std::string label)
    : d_(d), kraus_(std::move(kraus)), label_(std::move(label)) {
  if (d_ < 1) throw DimensionError("KrausChannel: dimension must be positive");
  if (kraus_.empty()) throw InvalidInputError("KrausChannel: no Kraus operators");
  for (const auto& a : kraus_) {
    if (a.rows() != d_ || a.cols() != d_) {
      throw DimensionError("KrausChannel: Kraus operator is not " + std::to_string(d_) + "x" +
                           std::to_string(d_));
    }
    if (!all_finite(a)) throw InvalidInputError("KrausChannel: non-finite entry");
  }
  const CMatrix slack = CMatrix::Identity(d_, d_) - completeness();
  if (min_eigenvalue(slack) < -kChannelTol) {
    throw InvalidInputError("KrausChannel: sum of A^dagger A exceeds the identity");
  }
}

CMatrix KrausChannel::completeness() const {
  CMatrix sum = CMatrix::Zero(d_, d_);
  for (const auto& a : kraus_) sum += a.adjoint() * a;
  return sum;
}

bool KrausChannel::is_trace_preserving(double tol) const {
  return (completeness() - CMatrix::Identity(d_, d_)).norm() <= tol;
}

ProcessMatrix::ProcessMatrix(int d, CMatrix x) : d_(d), x_(std::move(x)) {
  if (d_ < 1 || x_.rows() != d_ * d_ || x_.cols() != d_ * d_) {
    throw DimensionError("ProcessMatrix: expected a d^2 x d^2 matrix");
  }
  if (!all_finite(x_)) throw InvalidInputError("ProcessMatrix: non-finite entry");
  if ((x_ - x_.adjoint()).norm() > kChannelTol) {
    throw InvalidInputError("ProcessMatrix: matrix is not Hermitian");
  }
  if (min_eigenvalue(x_) < -kChannelTol) {
    throw InvalidInputError("ProcessMatrix: matrix is not positive semidefinite");
  }
  const CMatrix slack = CMatrix::Identity(d_, d_) - partial_trace_first(x_, d_);
  if (min_eigenvalue(slack) < -kChannelTol) {
    throw InvalidInputError("ProcessMatrix: Tr_1(X) exceeds the identity");
  }
}

ProcessMatrix process_from_kraus(const KrausChannel& channel) {
  const int d = channel.d();
  CMatrix x = CMatrix::Zero(d * d, d * d);
  for (const auto& a : channel.kraus()) {
    // Coordinates of A in {|j><k|}, i = j d + k, are the row-stacked entries: vec(A^T).
    const CVector c = vec(a.transpose());
    x.noalias() += c * c.adjoint();
  }
  return ProcessMatrix(d, std::move(x));
}

void validate_density_matrix(const CMatrix& rho, int d, double tol) {
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError("state is not " + std::to_string(d) + "x" + std::to_string(d));
  }
  if (!all_finite(rho)) throw InvalidInputError("state has a non-finite entry");
  if ((rho - rho.adjoint()).norm() > tol) throw InvalidInputError("state is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > tol) {
    throw InvalidInputError("state does not have unit trace");
  }
  if (min_eigenvalue(rho) < -tol) throw InvalidInputError("state is not positive semidefinite");
}

CMatrix apply_channel(const KrausChannel& channel, const CMatrix& rho) {
  validate_density_matrix(rho, channel.d());
  CMatrix out = CMatrix::Zero(channel.d(), channel.d());
  for (const auto& a : channel.kraus()) out.noalias() += a * rho * a.adjoint();
  return out;
}

CMatrix apply_process_linear(const CMatrix& x, int d, const CMatrix& op) {
  if (x.rows() != d * d || op.rows() != d || op.cols() != d) {
    throw DimensionError("apply_process_linear: dimension mismatch");
  }
  // E_j rho E_k^dagger = rho(y, v) |x><u| for E_j = |x><y|, E_k = |u><v|.
  CMatrix out = CMatrix::Zero(d, d);
  for (int xr = 0; xr < d; ++xr) {
    for (int u = 0; u < d; ++u) {
      Complex acc{0.0, 0.0};
      for (int y = 0; y < d; ++y) {
        for (int v = 0; v < d; ++v) acc += x(xr * d + y, u * d + v) * op(y, v);
      }
      out(xr, u) = acc;
    }
  }
  return out;
}

CMatrix apply_channel(const ProcessMatrix& process, const CMatrix& rho) {
  validate_density_matrix(rho, process.d());
  return apply_process_linear(process.matrix(), process.d(), rho);
}

CMatrix success_operator(const ProcessMatrix& process) {
  return partial_trace_first(process.matrix(), process.d());
}

CMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix z(d, d);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) z(r, c) = Complex(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

CMatrix cnot_matrix() {
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = 1.0;
  u(1, 3) = 1.0;
  u(2, 2) = 1.0;
  u(3, 1) = 1.0;
  return u;
}

KrausChannel identity_channel(int d) {
  return KrausChannel(d, {CMatrix::Identity(d, d)}, "identity");
}

KrausChannel unitary_channel(const CMatrix& u, std::string label) {
  if (u.rows() != u.cols()) throw DimensionError("unitary_channel: matrix is not square");
  const auto d = static_cast<int>(u.rows());
  if ((u.adjoint() * u - CMatrix::Identity(d, d)).norm() > kChannelTol) {
    throw InvalidInputError("unitary_channel: matrix is not unitary");
  }
  return KrausChannel(d, {u}, std::move(label));
}

KrausChannel cnot_channel() { return unitary_channel(cnot_matrix(), "cnot"); }

std::vector<double> default_success_spectrum(int d) {
  if (d == 4) return {1.0, 0.8, 0.7, 0.5};
  std::vector<double> spectrum(d);
  for (int i = 0; i < d; ++i) spectrum[i] = 1.0 - 0.5 * i / (d - 1);
  return spectrum;
}

KrausChannel random_channel(int d, bool trace_preserving, std::uint64_t seed,
                            std::optional<std::vector<double>> success_spectrum) {
  if (d < 2) throw DimensionError("random_channel: dimension must be at least 2");
  std::mt19937_64 rng(seed);
  const CMatrix u1 = random_unitary(d, rng);
  const CMatrix u2 = random_unitary(d, rng);
  const CMatrix u3 = random_unitary(d, rng);

  RVector diag1 = RVector::Zero(d);
  RVector diag2 = RVector::Zero(d);
  diag1(0) = 0.5;
  diag1(1) = 0.4;
  diag2(0) = 0.1;
  diag2(1) = 0.2;
  const CMatrix a1 = u1 * diag1.cast<Complex>().asDiagonal();
  const CMatrix a2 = u2 * diag2.cast<Complex>().asDiagonal();

  CMatrix target = CMatrix::Identity(d, d);
  if (!trace_preserving) {
    const std::vector<double> spectrum = success_spectrum.value_or(default_success_spectrum(d));
    if (static_cast<int>(spectrum.size()) != d) {
      throw DimensionError("random_channel: success spectrum must have d entries");
    }
    const CMatrix u4 = random_unitary(d, rng);
    RVector s(d);
    for (int i = 0; i < d; ++i) {
      if (spectrum[i] < 0.0 || spectrum[i] > 1.0) {
        throw InvalidInputError("random_channel: success spectrum must lie in [0, 1]");
      }
      s(i) = spectrum[i];
    }
    target = u4 * s.cast<Complex>().asDiagonal() * u4.adjoint();
  }
  const CMatrix remainder = target - a1.adjoint() * a1 - a2.adjoint() * a2;
  const HermitianEig eig = hermitian_part_eig(remainder);
  if (eig.values.minCoeff() < -kChannelTol) {
    throw InvalidInputError("random_channel: success spectrum too small for the fixed Kraus pair");
  }
  const CMatrix root = spectral_apply(eig, [](double lambda) { return std::sqrt(std::max(lambda, 0.0)); });
  const CMatrix a3 = u3 * root;
  return KrausChannel(d, {a1, a2, a3}, trace_preserving ? "random-tp" : "random-nontp");
}

}  // namespace qpt
