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

// Dense complex linear-algebra kernel shared by every other module.
//
// Conventions:
//   * vec() stacks columns, so vec(X)[r + c * rows] = X(r, c).
//   * Tr_1 traces out the slow (outer) index of a d^2-dimensional space, so that
//     Tr_1(vec(S) vec(T)^dagger) = S T^dagger.
//   * Permutations are index maps, never dense matrices.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qpt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Column-stacking vectorization.
CVector vec(const CMatrix& x);

/// Inverse of vec() for an explicit shape.
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

/// Inverse of vec() for a square matrix; v.size() must be a perfect square.
CMatrix unvec_square(const CVector& v);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// A bijection on 0..size-1 acting on vectors as the permutation matrix P with
// P(forward[i], i) = 1, i.e. apply(v)[forward[i]] = v[i].
class PermutationMap {
 public:
  PermutationMap() = default;
  explicit PermutationMap(std::vector<std::size_t> forward);

  static PermutationMap identity(std::size_t size);

  std::size_t size() const { return forward_.size(); }
  std::span<const std::size_t> forward() const { return forward_; }
  std::span<const std::size_t> inverse() const { return inverse_; }

  /// P v.
  CVector apply(const CVector& v) const;
  /// P^T v.
  CVector apply_inverse(const CVector& v) const;

  /// The map (this o other): first other, then this.
  PermutationMap compose(const PermutationMap& other) const;
  PermutationMap inverted() const;

  /// Materializes P. Test and oracle code only.
  RMatrix dense() const;

  bool operator==(const PermutationMap& other) const = default;

 private:
  std::vector<std::size_t> forward_;
  std::vector<std::size_t> inverse_;
};

/// K with K vec(A) = vec(A^T) for A with `rows` rows and `cols` columns.
PermutationMap commutation_map(std::size_t rows, std::size_t cols);

/// R with (I_{d^2} (x) V^T) R = B for the natural-basis coefficient matrix B.
PermutationMap r_map(std::size_t d);

/// Partial trace over the first factor of a d^2 x d^2 matrix.
CMatrix partial_trace_first(const CMatrix& x, Eigen::Index d);

/// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.
struct HermitianEig {
  CMatrix vectors;
  RVector values;
};

/// Input is symmetrized as (X + X^dagger) / 2 after the Hermiticity check
/// (tolerance 1e-10 relative to ||X||).
HermitianEig hermitian_eig(const CMatrix& x);

/// Same as hermitian_eig but skips the Hermiticity check: callers that
/// explicitly want the spectrum of the Hermitian part (X + X^dagger) / 2.
HermitianEig hermitian_part_eig(const CMatrix& x);

/// PSD square root U diag(sqrt(lambda)) U^dagger.
CMatrix psd_sqrt(const CMatrix& x);

/// U diag(f(lambda)) U^dagger for an eigendecomposition.
template <typename F>
CMatrix spectral_apply(const HermitianEig& eig, F&& f) {
  RVector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) mapped(i) = f(eig.values(i));
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

bool is_hermitian(const CMatrix& x, double tol);
bool all_finite(const CMatrix& x);

/// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const CMatrix& x);

/// Singular values in descending order.
RVector singular_values(const CMatrix& x);

/// sigma_max / sigma_min (infinite when sigma_min is zero).
double condition_number(const CMatrix& x);

}  // namespace qpt
