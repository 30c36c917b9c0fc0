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

// Ideal Born-rule probabilities and finite-shot sampling.

#include <cstdint>
#include <optional>
#include <vector>

#include "qpt/channels.hpp"
#include "qpt/detectors.hpp"
#include "qpt/ensembles.hpp"
#include "qpt/tensorkit.hpp"

namespace qpt {

// Empirical frequencies for M input states and L measurement operators.
// For each (state, POVM set) cell, shots_per_set copies are measured; copies
// lost by a trace-decreasing channel land in a per-cell "no-click" count that
// is kept here but excluded from freq.
struct MeasurementRecord {
  int M = 0;
  int L = 0;
  int J = 0;
  std::int64_t copies_per_state = 0;  // N
  std::int64_t shots_per_set = 0;     // floor(N / J)
  std::uint64_t seed = 0;
  std::vector<int> set_sizes;
  RMatrix freq;                                  // M x L
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;  // M x L
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> lost;    // M x J
  std::optional<RMatrix> ideal;                  // M x L

  /// Throws InvalidInputError if shapes or frequency invariants are violated.
  void validate() const;
};

/// P(m, l) = Tr(E(rho_m) P_l).
RMatrix ideal_probabilities(const ProcessMatrix& process, const InputEnsemble& ensemble,
                            const PovmCollection& povm);

/// Output states E(rho_m), one per input.
std::vector<CMatrix> output_states(const ProcessMatrix& process, const InputEnsemble& ensemble);

/// One multinomial draw of floor(N / J) shots per (state, set) cell. Each cell
/// has its own generator keyed by (seed, state, set), so the record does not
/// depend on traversal order.
MeasurementRecord sample_record(const RMatrix& ideal, const std::vector<int>& set_sizes,
                                std::int64_t copies_per_state, std::uint64_t seed);

/// Exact-probability record (freq = ideal), for noiseless reconstruction.
MeasurementRecord exact_record(const RMatrix& ideal, const std::vector<int>& set_sizes,
                               std::int64_t copies_per_state);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic seed for a stream identified by (seed, a, b).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace qpt
