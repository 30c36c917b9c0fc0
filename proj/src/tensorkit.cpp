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

#include "qpt/tensorkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qpt/errors.hpp"

namespace qpt {

CVector vec(const CMatrix& x) {
  if (x.size() == 0) throw DimensionError("vec: empty matrix");
  return Eigen::Map<const CVector>(x.data(), x.size());
}

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != v.size()) {
    throw DimensionError("unvec: vector of length " + std::to_string(v.size()) +
                         " cannot be reshaped to " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

CMatrix unvec_square(const CVector& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  return unvec(v, n, n);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

PermutationMap::PermutationMap(std::vector<std::size_t> forward) : forward_(std::move(forward)) {
  inverse_.assign(forward_.size(), forward_.size());
  for (std::size_t i = 0; i < forward_.size(); ++i) {
    const std::size_t target = forward_[i];
    if (target >= forward_.size() || inverse_[target] != forward_.size()) {
      throw InvalidInputError("PermutationMap: index array is not a bijection");
    }
    inverse_[target] = i;
  }
}

PermutationMap PermutationMap::identity(std::size_t size) {
  std::vector<std::size_t> forward(size);
  std::iota(forward.begin(), forward.end(), std::size_t{0});
  return PermutationMap(std::move(forward));
}

CVector PermutationMap::apply(const CVector& v) const {
  if (static_cast<std::size_t>(v.size()) != size()) {
    throw DimensionError("PermutationMap::apply: size mismatch");
  }
  CVector out(v.size());
  for (std::size_t i = 0; i < forward_.size(); ++i) out(forward_[i]) = v(i);
  return out;
}

CVector PermutationMap::apply_inverse(const CVector& v) const {
  if (static_cast<std::size_t>(v.size()) != size()) {
    throw DimensionError("PermutationMap::apply_inverse: size mismatch");
  }
  CVector out(v.size());
  for (std::size_t i = 0; i < forward_.size(); ++i) out(i) = v(forward_[i]);
  return out;
}

PermutationMap PermutationMap::compose(const PermutationMap& other) const {
  if (other.size() != size()) throw DimensionError("PermutationMap::compose: size mismatch");
  std::vector<std::size_t> forward(size());
  for (std::size_t i = 0; i < size(); ++i) forward[i] = forward_[other.forward_[i]];
  return PermutationMap(std::move(forward));
}

PermutationMap PermutationMap::inverted() const { return PermutationMap(inverse_); }

RMatrix PermutationMap::dense() const {
  RMatrix p = RMatrix::Zero(size(), size());
  for (std::size_t i = 0; i < size(); ++i) p(forward_[i], i) = 1.0;
  return p;
}

PermutationMap commutation_map(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DimensionError("commutation_map: empty shape");
  std::vector<std::size_t> forward(rows * cols);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) forward[r + c * rows] = c + r * cols;
  }
  return PermutationMap(std::move(forward));
}

PermutationMap r_map(std::size_t d) {
  if (d < 2) throw DimensionError("r_map: dimension must be at least 2");
  const std::size_t d2 = d * d;
  std::vector<std::size_t> forward(d2 * d2);
  // Column j + k d^2 of B (E_j = |x><y|, E_k = |u><v|) is column
  // d^2 (u d + x) + v d + y of I (x) V^T.
  for (std::size_t k = 0; k < d2; ++k) {
    const std::size_t u = k / d;
    const std::size_t v = k % d;
    for (std::size_t j = 0; j < d2; ++j) {
      const std::size_t x = j / d;
      const std::size_t y = j % d;
      forward[j + k * d2] = d2 * (u * d + x) + v * d + y;
    }
  }
  return PermutationMap(std::move(forward));
}

CMatrix partial_trace_first(const CMatrix& x, Eigen::Index d) {
  if (d < 1 || x.rows() != d * d || x.cols() != d * d) {
    throw DimensionError("partial_trace_first: expected a " + std::to_string(d * d) + "x" +
                         std::to_string(d * d) + " matrix");
  }
  CMatrix out = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) out += x.block(k * d, k * d, d, d);
  return out;
}

namespace {

HermitianEig eig_of_hermitian_part(const CMatrix& x) {
  const CMatrix h = (x + x.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw QptError("hermitian_eig: eigensolver failed");
  const Eigen::Index n = h.rows();
  HermitianEig out{CMatrix(n, n), RVector(n)};
  // Eigen returns ascending order.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

}  // namespace

HermitianEig hermitian_eig(const CMatrix& x) {
  if (x.rows() != x.cols()) throw DimensionError("hermitian_eig: matrix is not square");
  if (!is_hermitian(x, 1e-10)) throw InvalidInputError("hermitian_eig: matrix is not Hermitian");
  return eig_of_hermitian_part(x);
}

HermitianEig hermitian_part_eig(const CMatrix& x) {
  if (x.rows() != x.cols()) throw DimensionError("hermitian_part_eig: matrix is not square");
  return eig_of_hermitian_part(x);
}

CMatrix psd_sqrt(const CMatrix& x) {
  const HermitianEig eig = hermitian_eig(x);
  if (eig.values.size() == 0) return x;
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values.minCoeff() < -1e-10 * scale) {
    throw InvalidInputError("psd_sqrt: matrix has a significantly negative eigenvalue");
  }
  const double floor = 1e-12 * std::max(eig.values(0), 0.0);
  return spectral_apply(eig, [floor](double lambda) { return lambda > floor ? std::sqrt(lambda) : 0.0; });
}

bool is_hermitian(const CMatrix& x, double tol) {
  if (x.rows() != x.cols()) return false;
  return (x - x.adjoint()).norm() <= tol * std::max(x.norm(), std::numeric_limits<double>::min());
}

bool all_finite(const CMatrix& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x.data()[i].real()) || !std::isfinite(x.data()[i].imag())) return false;
  }
  return true;
}

double min_eigenvalue(const CMatrix& x) {
  return hermitian_part_eig(x).values.minCoeff();
}

RVector singular_values(const CMatrix& x) {
  Eigen::JacobiSVD<CMatrix> svd(x);
  return svd.singularValues();
}

double condition_number(const CMatrix& x) {
  const RVector s = singular_values(x);
  if (s.size() == 0 || s(s.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(s.size() - 1);
}

}  // namespace qpt
