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

#include "qpt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "qpt/errors.hpp"

namespace qpt {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

std::vector<CMatrix> output_states(const ProcessMatrix& process, const InputEnsemble& ensemble) {
  if (process.d() != ensemble.d()) throw DimensionError("output_states: dimension mismatch");
  std::vector<CMatrix> out;
  out.reserve(ensemble.states().size());
  for (const auto& rho : ensemble.states()) {
    out.push_back(apply_process_linear(process.matrix(), process.d(), rho));
  }
  return out;
}

RMatrix ideal_probabilities(const ProcessMatrix& process, const InputEnsemble& ensemble,
                            const PovmCollection& povm) {
  if (process.d() != ensemble.d() || process.d() != povm.d()) {
    throw DimensionError("ideal_probabilities: dimension mismatch");
  }
  const auto outputs = output_states(process, ensemble);
  const int d = process.d();
  CMatrix a(ensemble.size(), d * d);
  for (int m = 0; m < ensemble.size(); ++m) a.row(m) = vec(outputs[m]).transpose();
  return (a * povm.C().transpose()).real();
}

void MeasurementRecord::validate() const {
  if (M < 1 || L < 1 || J < 1) throw InvalidInputError("MeasurementRecord: empty record");
  if (freq.rows() != M || freq.cols() != L) throw DimensionError("MeasurementRecord: freq shape mismatch");
  if (static_cast<int>(set_sizes.size()) != J) throw DimensionError("MeasurementRecord: set size count mismatch");
  int total = 0;
  for (int n : set_sizes) total += n;
  if (total != L) throw DimensionError("MeasurementRecord: set sizes do not sum to L");
  for (Eigen::Index i = 0; i < freq.size(); ++i) {
    if (!std::isfinite(freq.data()[i])) throw InvalidInputError("MeasurementRecord: non-finite frequency");
  }
}

MeasurementRecord sample_record(const RMatrix& ideal, const std::vector<int>& set_sizes,
                                std::int64_t copies_per_state, std::uint64_t seed) {
  const int num_sets = static_cast<int>(set_sizes.size());
  if (num_sets == 0) throw InvalidInputError("sample_record: no POVM sets");
  int total = 0;
  for (int n : set_sizes) total += n;
  if (total != ideal.cols()) throw DimensionError("sample_record: set sizes do not match the columns");
  if (copies_per_state < num_sets) {
    throw InvalidInputError("sample_record: fewer copies per state than POVM sets");
  }

  MeasurementRecord rec;
  rec.M = static_cast<int>(ideal.rows());
  rec.L = total;
  rec.J = num_sets;
  rec.copies_per_state = copies_per_state;
  rec.shots_per_set = copies_per_state / num_sets;
  rec.seed = seed;
  rec.set_sizes = set_sizes;
  rec.freq = RMatrix::Zero(rec.M, rec.L);
  rec.counts.setZero(rec.M, rec.L);
  rec.lost.setZero(rec.M, rec.J);
  rec.ideal = ideal;

  std::vector<double> probs;
  for (int m = 0; m < rec.M; ++m) {
    int offset = 0;
    for (int j = 0; j < num_sets; ++j) {
      const int n = set_sizes[j];
      probs.assign(n, 0.0);
      double mass = 0.0;
      for (int i = 0; i < n; ++i) {
        double p = ideal(m, offset + i);
        if (p < -1e-12) {
          throw InvalidInputError("sample_record: negative probability at (" + std::to_string(m) + ", " +
                                  std::to_string(offset + i) + ")");
        }
        p = std::max(p, 0.0);
        probs[i] = p;
        mass += p;
      }
      if (mass > 1.0 + 1e-9) throw InvalidInputError("sample_record: probabilities in a set exceed one");
      // Trace deficit of a non-TP channel: the unmeasured "no-click" outcome.
      const double lost_mass = mass < 1.0 - 1e-12 ? 1.0 - mass : 0.0;
      const double norm = mass + lost_mass;

      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(j)));
      std::int64_t remaining = rec.shots_per_set;
      double remaining_mass = norm;
      for (int i = 0; i < n && remaining > 0; ++i) {
        const double q = remaining_mass > 0.0 ? std::clamp(probs[i] / remaining_mass, 0.0, 1.0) : 0.0;
        std::int64_t k = 0;
        if (q >= 1.0 || (i == n - 1 && lost_mass == 0.0)) {
          k = remaining;
        } else if (q > 0.0) {
          std::binomial_distribution<std::int64_t> draw(remaining, q);
          k = draw(rng);
        }
        rec.counts(m, offset + i) = k;
        remaining -= k;
        remaining_mass -= probs[i];
      }
      rec.lost(m, j) = remaining;
      for (int i = 0; i < n; ++i) {
        rec.freq(m, offset + i) = static_cast<double>(rec.counts(m, offset + i)) /
                                  static_cast<double>(rec.shots_per_set);
      }
      offset += n;
    }
  }
  return rec;
}

MeasurementRecord exact_record(const RMatrix& ideal, const std::vector<int>& set_sizes,
                               std::int64_t copies_per_state) {
  MeasurementRecord rec;
  rec.M = static_cast<int>(ideal.rows());
  rec.L = static_cast<int>(ideal.cols());
  rec.J = static_cast<int>(set_sizes.size());
  rec.copies_per_state = copies_per_state;
  rec.shots_per_set = rec.J > 0 ? copies_per_state / rec.J : 0;
  rec.set_sizes = set_sizes;
  rec.freq = ideal;
  rec.counts.setZero(rec.M, rec.L);
  rec.lost.setZero(rec.M, rec.J);
  rec.ideal = ideal;
  rec.validate();
  return rec;
}

}  // namespace qpt
