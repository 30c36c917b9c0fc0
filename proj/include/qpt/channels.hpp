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

// Ground-truth quantum channels and their process matrices in the natural
// basis E_i = |j><k| with i = j d + k (row-major, zero-based).

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qpt/tensorkit.hpp"

namespace qpt {

inline constexpr double kChannelTol = 1e-9;

// Kraus operator-sum representation. Invariant: sum_i A_i^dagger A_i <= I_d.
class KrausChannel {
 public:
  /// Validates shapes and the sub-unital completeness constraint.
  KrausChannel(int d, std::vector<CMatrix> kraus, std::string label = {});

  int d() const { return d_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  const std::string& label() const { return label_; }

  /// sum_i A_i^dagger A_i.
  CMatrix completeness() const;
  bool is_trace_preserving(double tol = kChannelTol) const;

 private:
  int d_;
  std::vector<CMatrix> kraus_;
  std::string label_;
};

// d^2 x d^2 Hermitian PSD process matrix with Tr_1(X) <= I_d.
class ProcessMatrix {
 public:
  ProcessMatrix(int d, CMatrix x);

  int d() const { return d_; }
  const CMatrix& matrix() const { return x_; }

 private:
  int d_;
  CMatrix x_;
};

ProcessMatrix process_from_kraus(const KrausChannel& channel);

/// Sum_i A_i rho A_i^dagger. Validates rho as a density matrix.
CMatrix apply_channel(const KrausChannel& channel, const CMatrix& rho);
/// Sum_jk X_jk E_j rho E_k^dagger. Validates rho as a density matrix.
CMatrix apply_channel(const ProcessMatrix& process, const CMatrix& rho);

/// Same as apply_channel(process, rho) without state validation; accepts any
/// operator (used for linear extensions and hot loops).
CMatrix apply_process_linear(const CMatrix& x, int d, const CMatrix& op);

/// F = Tr_1(X).
CMatrix success_operator(const ProcessMatrix& process);

/// Throws InvalidInputError unless rho is a d x d density matrix within tol.
void validate_density_matrix(const CMatrix& rho, int d, double tol = 1e-9);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fixing).
CMatrix random_unitary(int d, std::mt19937_64& rng);

CMatrix cnot_matrix();
KrausChannel identity_channel(int d);
KrausChannel unitary_channel(const CMatrix& u, std::string label = "unitary");
KrausChannel cnot_channel();

// Three-Kraus family
//   A1 = U1 diag(0.5, 0.4, 0, ...), A2 = U2 diag(0.1, 0.2, 0, ...),
//   A3 = U3 sqrt(T - A1^dagger A1 - A2^dagger A2)
// with T = I (trace preserving) or T = U4 diag(spectrum) U4^dagger.
// The default non-TP spectrum is (1, 0.8, 0.7, 0.5) at d = 4 and evenly spaced
// in [0.5, 1] otherwise.
KrausChannel random_channel(int d, bool trace_preserving, std::uint64_t seed,
                            std::optional<std::vector<double>> success_spectrum = std::nullopt);

std::vector<double> default_success_spectrum(int d);

}  // namespace qpt
