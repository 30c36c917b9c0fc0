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

#include "qpt/detectors.hpp"

#include <cmath>
#include <string>

#include "qpt/ensembles.hpp"
#include "qpt/errors.hpp"

namespace qpt {

PovmCollection::PovmCollection(int d, std::vector<std::vector<CMatrix>> sets, std::string label)
    : d_(d), sets_(std::move(sets)), label_(std::move(label)) {
  if (d_ < 2) throw DimensionError("PovmCollection: dimension must be at least 2");
  if (sets_.empty()) throw InvalidInputError("PovmCollection: no POVM sets");
  const CMatrix identity = CMatrix::Identity(d_, d_);
  int total = 0;
  for (std::size_t j = 0; j < sets_.size(); ++j) {
    if (sets_[j].empty()) throw InvalidInputError("PovmCollection: empty POVM set");
    CMatrix sum = CMatrix::Zero(d_, d_);
    for (const auto& p : sets_[j]) {
      if (p.rows() != d_ || p.cols() != d_) throw DimensionError("PovmCollection: element has wrong shape");
      if (!all_finite(p)) throw InvalidInputError("PovmCollection: non-finite entry");
      if ((p - p.adjoint()).norm() > 1e-9) throw InvalidInputError("PovmCollection: element is not Hermitian");
      if (min_eigenvalue(p) < -1e-9) throw InvalidInputError("PovmCollection: element is not PSD");
      sum += p;
    }
    if ((sum - identity).norm() > 1e-9) {
      throw InvalidInputError("PovmCollection: set " + std::to_string(j) + " does not sum to the identity");
    }
    total += static_cast<int>(sets_[j].size());
  }
  C_.resize(total, d_ * d_);
  int row = 0;
  for (const auto& set : sets_) {
    for (const auto& p : set) C_.row(row++) = vec(p).adjoint();
  }
  const RVector s = singular_values(C_);
  if (s.size() < d_ * d_ || s(s.size() - 1) < 1e-10 * s(0)) {
    throw SingularDesignError("PovmCollection: measurement is not informationally complete (rank(C) < d^2)");
  }
}

std::vector<int> PovmCollection::set_sizes() const {
  std::vector<int> sizes;
  for (const auto& set : sets_) sizes.push_back(static_cast<int>(set.size()));
  return sizes;
}

std::vector<int> PovmCollection::set_offsets() const {
  std::vector<int> offsets;
  int offset = 0;
  for (const auto& set : sets_) {
    offsets.push_back(offset);
    offset += static_cast<int>(set.size());
  }
  return offsets;
}

PovmCollection cube_povm(int m) {
  if (m < 1) throw DimensionError("cube_povm: need at least one qubit");
  std::vector<std::vector<CMatrix>> single;
  for (const auto& basis : mub_bases(2)) {
    std::vector<CMatrix> set;
    for (const auto& psi : basis) set.push_back(projector(psi));
    single.push_back(std::move(set));
  }
  std::vector<std::vector<CMatrix>> sets = {{CMatrix::Identity(1, 1)}};
  for (int q = 0; q < m; ++q) {
    std::vector<std::vector<CMatrix>> next;
    for (const auto& outer : sets) {
      for (const auto& inner : single) {
        std::vector<CMatrix> set;
        for (const auto& a : outer) {
          for (const auto& b : inner) set.push_back(kron(a, b));
        }
        next.push_back(std::move(set));
      }
    }
    sets = std::move(next);
  }
  return PovmCollection(1 << m, std::move(sets), "cube-" + std::to_string(m));
}

PovmCollection mub_povm(int d) {
  std::vector<std::vector<CMatrix>> sets;
  for (const auto& basis : mub_bases(d)) {
    std::vector<CMatrix> set;
    for (const auto& psi : basis) set.push_back(projector(psi));
    sets.push_back(std::move(set));
  }
  return PovmCollection(d, std::move(sets), "mub-povm-" + std::to_string(d));
}

PovmCollection sic_povm(int d) {
  if (d != 4) throw DimensionError("sic_povm: only d = 4 is supported");
  std::vector<CMatrix> set;
  const InputEnsemble sic = sic_states(4);
  for (const auto& rho : sic.states()) set.push_back(rho / 4.0);
  std::vector<std::vector<CMatrix>> sets;
  sets.push_back(std::move(set));
  return PovmCollection(4, std::move(sets), "sic-povm-4");
}

DesignReportC design_metrics_C(const PovmCollection& povm) {
  const double d = povm.d();
  const double J = povm.num_sets();
  const CMatrix& c = povm.C();
  DesignReportC report;
  report.eigs = hermitian_part_eig(c.adjoint() * c).values;
  const double smallest = report.eigs(report.eigs.size() - 1);
  if (smallest <= 1e-20 * report.eigs(0)) {
    throw SingularDesignError("design_metrics_C: C^dagger C is singular");
  }
  report.cost = J * report.eigs.cwiseInverse().sum();
  report.cond = std::sqrt(report.eigs(0) / smallest);
  for (int n : povm.set_sizes()) report.s += d / n;
  const double slack = J * d - report.s;
  const double d2m1 = d * d - 1.0;
  report.lower_cost = J * (1.0 / report.s + d2m1 * d2m1 / slack);
  report.lower_cond = std::sqrt(d2m1 * report.s / slack);

  const double rest = slack / d2m1;
  bool achieves = std::abs(report.eigs(0) - report.s) <= 1e-6 * report.s;
  for (Eigen::Index i = 1; i < report.eigs.size(); ++i) {
    achieves = achieves && std::abs(report.eigs(i) - rest) <= 1e-6 * rest;
  }
  report.achieves = achieves;
  return report;
}

}  // namespace qpt
