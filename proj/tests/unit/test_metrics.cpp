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

#include <gtest/gtest.h>

#include <cmath>

#include "qpt/channels.hpp"
#include "qpt/errors.hpp"
#include "qpt/metrics.hpp"
#include "test_util.hpp"

namespace qpt {
namespace {

TEST(Fidelity, IdentityAndScaleInvariance) {
  std::mt19937_64 rng(1);
  const CMatrix x = testing::random_psd(4, rng);
  EXPECT_NEAR(fidelity(x, x), 1.0, 1e-10);
  EXPECT_NEAR(fidelity(2.0 * x, x), 1.0, 1e-10);
  EXPECT_NEAR(fidelity(x, 0.3 * x), 1.0, 1e-10);
}

TEST(Fidelity, OrthogonalSupportsGiveZero) {
  CMatrix a = CMatrix::Zero(4, 4), b = CMatrix::Zero(4, 4);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  b(2, 2) = 1.0;
  b(3, 3) = 0.5;
  EXPECT_NEAR(fidelity(a, b), 0.0, 1e-12);
}

TEST(Fidelity, PureStateOverlap) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const CVector u = testing::random_matrix(5, 1, rng).col(0);
    const CVector v = testing::random_matrix(5, 1, rng).col(0);
    const double want = std::norm(u.dot(v)) / (u.squaredNorm() * v.squaredNorm());
    EXPECT_NEAR(fidelity(u * u.adjoint(), v * v.adjoint()), want, 1e-8);
  }
}

TEST(Fidelity, CommutingMatricesReduceToClassical) {
  RVector p(4), q(4);
  p << 0.1, 0.2, 0.3, 0.4;
  q << 0.25, 0.25, 0.4, 0.1;
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += std::sqrt(p(i) * q(i));
  EXPECT_NEAR(fidelity(p.cast<Complex>().asDiagonal(), q.cast<Complex>().asDiagonal()), s * s, 1e-12);
}

TEST(Fidelity, SymmetricAndUnitarilyInvariant) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const CMatrix a = testing::random_psd(4, rng), b = testing::random_psd(4, rng, 2);
    const CMatrix u = random_unitary(4, rng);
    const double f = fidelity(a, b);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    EXPECT_NEAR(f, fidelity(b, a), 1e-8);
    EXPECT_NEAR(f, fidelity(u * a * u.adjoint(), u * b * u.adjoint()), 1e-8);
  }
}

TEST(Fidelity, Errors) {
  EXPECT_THROW(fidelity(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2)), InvalidInputError);
  EXPECT_THROW(fidelity(CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)), DimensionError);
}

TEST(ErrorReport, Fields) {
  CMatrix x = CMatrix::Identity(4, 4) / 2.0;
  CMatrix y = x;
  y(0, 1) = 0.1;
  y(1, 0) = 0.1;
  const ErrorReport r = error_report(y, x, 0.5);
  EXPECT_NEAR(r.frob_error, std::sqrt(0.02), 1e-14);
  EXPECT_NEAR(r.mse, 0.02, 1e-14);
  EXPECT_NEAR(r.fidelity + r.infidelity, 1.0, 1e-15);
  EXPECT_EQ(r.bound_functional, 0.5);
  const ErrorReport z = error_report(CMatrix::Zero(4, 4), x);
  EXPECT_EQ(z.fidelity, 0.0);
  EXPECT_EQ(z.infidelity, 1.0);
}

TEST(ErrorBoundFunctional, Scaling) {
  const double b1 = error_bound_functional(4, 4.0, 5, 76.0 / 5.0, 16, 19.0, 1000.0);
  const double b2 = error_bound_functional(4, 4.0, 5, 76.0 / 5.0, 16, 19.0, 2000.0);
  EXPECT_NEAR(b1 / b2, std::sqrt(2.0), 1e-12);
  // SIC states with the MUB measurement: sqrt(d) Tr F = 8, J cost_C = 76, M cost_V = 304.
  EXPECT_NEAR(b1, 8.0 * std::sqrt(76.0 * 304.0) / std::sqrt(1000.0), 1e-10);
  // Trace-preserving form with Tr F = d.
  EXPECT_NEAR(error_bound_functional(2, 2.0, 3, 1.0, 4, 1.0, 100.0), std::pow(2.0, 1.5) * std::sqrt(12.0) / 10.0, 1e-12);
  EXPECT_EQ(error_bound_functional(2, 0.0, 3, 1.0, 4, 1.0, 100.0), 0.0);
  EXPECT_THROW(error_bound_functional(2, 2.0, 3, 1.0, 4, 1.0, 0.0), InvalidInputError);
  EXPECT_THROW(error_bound_functional(0, 2.0, 3, 1.0, 4, 1.0, 1.0), InvalidInputError);
}

TEST(LineFits, ExactLines) {
  const LineFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  std::vector<double> n = {1e3, 1e4, 1e5}, y;
  for (double v : n) y.push_back(3.0 / v);
  const LineFit g = loglog_slope(n, y);
  EXPECT_NEAR(g.slope, -1.0, 1e-12);
  EXPECT_NEAR(g.intercept, std::log10(3.0), 1e-12);
  y.clear();
  for (double v : n) y.push_back(std::pow(v, -0.5));
  EXPECT_NEAR(loglog_slope(n, y).slope, -0.5, 1e-12);
}

TEST(LineFits, Errors) {
  EXPECT_THROW(fit_line({1}, {1}), InvalidInputError);
  EXPECT_THROW(fit_line({1, 1}, {1, 2}), InvalidInputError);
  EXPECT_THROW(fit_line({1, 2}, {1}), InvalidInputError);
  EXPECT_THROW(loglog_slope({1, 2}, {1, 0}), InvalidInputError);
  EXPECT_THROW(loglog_slope({-1, 2}, {1, 1}), InvalidInputError);
}

}  // namespace
}  // namespace qpt
