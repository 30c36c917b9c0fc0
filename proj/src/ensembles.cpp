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

#include "qpt/ensembles.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qpt/channels.hpp"
#include "qpt/errors.hpp"

namespace qpt {

namespace {

CMatrix stack_states(const std::vector<CMatrix>& states, int d) {
  CMatrix v(d * d, static_cast<Eigen::Index>(states.size()));
  for (std::size_t m = 0; m < states.size(); ++m) v.col(m) = vec(states[m]);
  return v;
}

CVector ket(std::initializer_list<Complex> amps) {
  CVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const auto& a : amps) v(i++) = a;
  return v;
}

CVector kron_ket(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::vector<CMatrix> projectors_of(const std::vector<std::vector<CVector>>& bases) {
  std::vector<CMatrix> states;
  for (const auto& basis : bases) {
    for (const auto& psi : basis) states.push_back(projector(psi));
  }
  return states;
}

}  // namespace

InputEnsemble::InputEnsemble(int d, std::vector<CMatrix> states, std::string label)
    : d_(d), states_(std::move(states)), label_(std::move(label)) {
  if (d_ < 2) throw DimensionError("InputEnsemble: dimension must be at least 2");
  for (std::size_t m = 0; m < states_.size(); ++m) {
    try {
      validate_density_matrix(states_[m], d_);
    } catch (const QptError& e) {
      throw InvalidInputError("InputEnsemble: state " + std::to_string(m) + ": " + e.what());
    }
  }
  if (size() < d_ * d_) {
    throw SingularDesignError("InputEnsemble: " + std::to_string(size()) +
                              " states cannot span the " + std::to_string(d_ * d_) +
                              "-dimensional operator space");
  }
  v_ = stack_states(states_, d_);
  const RVector s = singular_values(v_);
  if (s(s.size() - 1) < 1e-10 * s(0)) {
    throw SingularDesignError("InputEnsemble: states are not informationally complete (rank(V) < d^2)");
  }
}

CMatrix projector(const CVector& psi) {
  const CVector n = psi / psi.norm();
  return n * n.adjoint();
}

CMatrix qubit_state(double rx, double ry, double rz) {
  CMatrix rho(2, 2);
  rho(0, 0) = 0.5 * (1.0 + rz);
  rho(1, 1) = 0.5 * (1.0 - rz);
  rho(0, 1) = 0.5 * Complex(rx, -ry);
  rho(1, 0) = 0.5 * Complex(rx, ry);
  return rho;
}

InputEnsemble sic_states(int d) {
  if (d == 2) {
    const double a = 2.0 * std::sqrt(2.0) / 3.0;
    const double b = std::sqrt(2.0) / 3.0;
    const double c = std::sqrt(2.0 / 3.0);
    return InputEnsemble(2,
                         {qubit_state(0, 0, 1), qubit_state(a, 0, -1.0 / 3.0),
                          qubit_state(-b, c, -1.0 / 3.0), qubit_state(-b, -c, -1.0 / 3.0)},
                         "sic-2");
  }
  if (d == 4) {
    const Complex x{std::sqrt(2.0 + std::sqrt(5.0)), 0.0};
    const Complex i = kI;
    // One fiducial vector per column, up to normalization.
    const Complex table[4][16] = {
        {x, x, x, x, i, i, -i, -i, i, i, -i, -i, i, i, -i, -i},
        {1., 1., -1., -1., x, x, x, x, i, -i, i, -i, 1., -1., 1., -1.},
        {1., -1., 1., -1., 1., -1., 1., -1., x, x, x, x, -i, i, i, -i},
        {1., -1., -1., 1., -i, i, i, -i, -1., 1., 1., -1., x, x, x, x},
    };
    std::vector<CMatrix> states;
    for (int col = 0; col < 16; ++col) {
      CVector psi(4);
      for (int row = 0; row < 4; ++row) psi(row) = table[row][col];
      states.push_back(projector(psi));
    }
    return InputEnsemble(4, std::move(states), "sic-4");
  }
  throw DimensionError("sic_states: supported dimensions are 2 and 4");
}

std::vector<std::vector<CVector>> mub_bases(int d) {
  const double s = 1.0 / std::sqrt(2.0);
  const CVector k0 = ket({1.0, 0.0});
  const CVector k1 = ket({0.0, 1.0});
  const CVector plus = ket({s, s});
  const CVector minus = ket({s, -s});
  const CVector right = ket({s, -s * kI});  // (|0> - i|1>)/sqrt2
  const CVector left = ket({s, s * kI});    // (|0> + i|1>)/sqrt2
  if (d == 2) {
    return {{k0, k1}, {plus, minus}, {left, right}};
  }
  if (d == 4) {
    auto k = kron_ket;
    return {
        {k(k0, k0), k(k0, k1), k(k1, k0), k(k1, k1)},
        {k(right, plus), k(right, minus), k(left, plus), k(left, minus)},
        {k(plus, right), k(minus, right), k(plus, left), k(minus, left)},
        {s * (k(right, k0) + kI * k(left, k1)), s * (k(right, k0) - kI * k(left, k1)),
         s * (k(right, k1) + kI * k(left, k0)), s * (k(right, k1) - kI * k(left, k0))},
        {s * (k(right, right) + kI * k(left, left)), s * (k(right, right) - kI * k(left, left)),
         s * (k(right, left) + kI * k(left, right)), s * (k(right, left) - kI * k(left, right))},
    };
  }
  throw DimensionError("mub_bases: supported dimensions are 2 and 4");
}

InputEnsemble mub_states(int d) {
  return InputEnsemble(d, projectors_of(mub_bases(d)), "mub-" + std::to_string(d));
}

InputEnsemble natural_basis_states(int d) {
  if (d < 2) throw DimensionError("natural_basis_states: dimension must be at least 2");
  std::vector<CMatrix> states;
  for (int j = 0; j < d; ++j) {
    CVector e = CVector::Zero(d);
    e(j) = 1.0;
    states.push_back(projector(e));
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CVector plus = CVector::Zero(d);
      CVector minus = CVector::Zero(d);
      plus(j) = 1.0;
      plus(k) = 1.0;
      minus(j) = 1.0;
      minus(k) = kI;
      states.push_back(projector(plus));
      states.push_back(projector(minus));
    }
  }
  return InputEnsemble(d, std::move(states), "natural-" + std::to_string(d));
}

std::vector<std::pair<int, Complex>> natural_basis_combination(int d, int j, int k) {
  if (j < 0 || k < 0 || j >= d || k >= d) throw DimensionError("natural_basis_combination: index out of range");
  if (j == k) return {{j, 1.0}};
  // |a><b| for a < b: |+><+| + i|-><-| - (1+i)/2 (|a><a| + |b><b|).
  const int a = std::min(j, k);
  const int b = std::max(j, k);
  int pair_index = 0;
  for (int p = 0; p < a; ++p) pair_index += d - 1 - p;
  pair_index += b - a - 1;
  const int plus = d + 2 * pair_index;
  const int minus = plus + 1;
  const Complex half_one_plus_i{0.5, 0.5};
  if (j < k) {
    return {{plus, 1.0}, {minus, kI}, {a, -half_one_plus_i}, {b, -half_one_plus_i}};
  }
  // |b><a| is the adjoint: |+><+| - i|-><-| - (1-i)/2 (|a><a| + |b><b|).
  const Complex half_one_minus_i{0.5, -0.5};
  return {{plus, 1.0}, {minus, -kI}, {a, -half_one_minus_i}, {b, -half_one_minus_i}};
}

InputEnsemble random_states(int d, int m, std::uint64_t seed) {
  if (d < 2) throw DimensionError("random_states: dimension must be at least 2");
  if (m < d * d) {
    throw SingularDesignError("random_states: need at least d^2 = " + std::to_string(d * d) + " states");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt <= 10; ++attempt) {
    std::vector<CMatrix> states;
    states.reserve(m);
    for (int s = 0; s < m; ++s) {
      CMatrix g(d, d);
      for (int c = 0; c < d; ++c) {
        for (int r = 0; r < d; ++r) g(r, c) = Complex(gauss(rng), gauss(rng));
      }
      CMatrix rho = g * g.adjoint();
      rho /= rho.trace().real();
      rho = (rho + rho.adjoint()) / 2.0;
      states.push_back(std::move(rho));
    }
    try {
      return InputEnsemble(d, std::move(states), "random-" + std::to_string(d) + "-" + std::to_string(m));
    } catch (const SingularDesignError&) {
      continue;
    }
  }
  throw SingularDesignError("random_states: rank deficiency persisted after 10 retries");
}

PermutationMap vec_kron_map(std::size_t da, std::size_t db) {
  const std::size_t n = da * db;
  std::vector<std::size_t> forward(n * n);
  for (std::size_t j1 = 0; j1 < da; ++j1) {
    for (std::size_t i1 = 0; i1 < da; ++i1) {
      for (std::size_t j2 = 0; j2 < db; ++j2) {
        for (std::size_t i2 = 0; i2 < db; ++i2) {
          const std::size_t kron_index = (i1 + j1 * da) * db * db + (i2 + j2 * db);
          const std::size_t vec_index = (i1 * db + i2) + (j1 * db + j2) * n;
          forward[kron_index] = vec_index;
        }
      }
    }
  }
  return PermutationMap(std::move(forward));
}

InputEnsemble product_ensemble(const std::vector<InputEnsemble>& parts) {
  if (parts.empty()) throw InvalidInputError("product_ensemble: no parts");
  std::vector<CMatrix> states = {CMatrix::Identity(1, 1)};
  std::string label = "product";
  int d = 1;
  for (const auto& part : parts) {
    if (part.d() != 2) throw DimensionError("product_ensemble: every part must be a qubit ensemble");
    std::vector<CMatrix> next;
    next.reserve(states.size() * part.states().size());
    for (const auto& a : states) {
      for (const auto& b : part.states()) next.push_back(kron(a, b));
    }
    states = std::move(next);
    d *= 2;
    label += "-" + part.label();
  }
  return InputEnsemble(d, std::move(states), label);
}

DesignReportV design_metrics_V(const InputEnsemble& ensemble) {
  const int d = ensemble.d();
  const double m = ensemble.size();
  const CMatrix& v = ensemble.V();
  const CMatrix gram = v.conjugate() * v.transpose();
  DesignReportV report;
  report.eigs = hermitian_part_eig(gram).values;
  const double smallest = report.eigs(report.eigs.size() - 1);
  if (smallest <= 1e-20 * report.eigs(0)) {
    throw SingularDesignError("design_metrics_V: V^* V^T is singular");
  }
  report.cost = m * report.eigs.cwiseInverse().sum();
  report.cond = std::sqrt(report.eigs(0) / smallest);
  const double dd = d;
  report.lower_cost = dd * dd * dd * dd + dd * dd * dd - dd * dd;
  report.lower_cond = std::sqrt(dd + 1.0);

  const double first = m / dd;
  const double rest = m / (dd * (dd + 1.0));
  bool achieves = std::abs(report.eigs(0) - first) <= 1e-6 * first;
  for (Eigen::Index i = 1; i < report.eigs.size(); ++i) {
    achieves = achieves && std::abs(report.eigs(i) - rest) <= 1e-6 * rest;
  }
  report.achieves = achieves;
  return report;
}

}  // namespace qpt
