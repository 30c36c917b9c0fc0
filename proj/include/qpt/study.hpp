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

// Configuration-driven experiments: spec strings for channels, ensembles and
// POVMs, Monte-Carlo scaling studies and design audits.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpt/channels.hpp"
#include "qpt/detectors.hpp"
#include "qpt/ensembles.hpp"
#include "qpt/metrics.hpp"
#include "qpt/serialization.hpp"

namespace qpt {

// Spec strings:
//   channel:  "cnot" | "identity d" | "random d seed tp|nontp" | "file path"
//   ensemble: "sic d" | "mub d" | "natural d" | "random d M seed" | "cube-states m" | "file path"
//   povm:     "cube m" | "mub-povm d" | "sic-povm d" | "file path"
KrausChannel make_channel(const std::string& spec);
InputEnsemble make_ensemble(const std::string& spec);
PovmCollection make_povm(const std::string& spec);

struct ExperimentConfig {
  std::string channel = "cnot";
  std::string ensemble = "cube-states 2";
  std::string povm = "cube 2";
  std::vector<std::int64_t> total_copies;   // N_t schedule (scaling study, comparison)
  std::vector<int> m_values;                // M schedule (M-scaling study)
  std::int64_t copies_per_state = 0;        // fixed N (M-scaling study)
  std::vector<std::string> compare;         // ensemble specs (comparison mode)
  int trials = 10;
  bool tp_prior = false;
  std::string output;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency

  /// Throws InvalidInputError with a message naming the offending field.
  void validate() const;
};

ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& cfg);

/// FNV-1a of the canonical JSON dump.
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct StudyRow {
  std::string label;
  std::int64_t total_copies = 0;  // N_t
  int M = 0;
  std::int64_t copies_per_state = 0;  // N
  int trials = 0;
  double mean_mse = 0.0;
  double std_mse = 0.0;
  double mean_infidelity = 0.0;
  double std_infidelity = 0.0;
  double mean_frob = 0.0;
  double bound_functional = 0.0;
  double runtime_s = 0.0;
};

struct StudyResult {
  std::string kind;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::vector<StudyRow> rows;
  std::optional<LineFit> mse_fit;         // log10 MSE vs log10 N_t (or M)
  std::optional<LineFit> infidelity_fit;  // log10 infidelity vs log10 N_t (or M)
};

/// MSE and infidelity versus N_t for a fixed design; N = N_t / M per state.
StudyResult run_scaling_study(const ExperimentConfig& cfg);

/// MSE versus M at fixed N per state. cfg.ensemble is "random d": every trial
/// draws its own Hilbert-Schmidt random ensemble of each size.
StudyResult run_m_scaling_study(const ExperimentConfig& cfg);

/// One row per ensemble spec in cfg.compare at N_t = cfg.total_copies[0].
StudyResult run_ensemble_comparison(const ExperimentConfig& cfg);

struct AuditReport {
  std::string kind;  // "ensemble" or "povm"
  std::string label;
  int d = 0;
  int size = 0;  // M or J
  double cost = 0.0;
  double cond = 0.0;
  std::vector<double> eigenvalues;
  double lower_cost = 0.0;
  double lower_cond = 0.0;
  bool achieves = false;
};

/// Design metrics for an ensemble or POVM spec. Throws SingularDesignError
/// for non-identifiable designs.
AuditReport design_audit(const std::string& spec);

std::string format_audit(const AuditReport& report);

/// Delimited text with '#' provenance lines; appended to `path` when given.
std::string study_to_csv(const StudyResult& result, const ExperimentConfig& cfg);
Json study_to_json(const StudyResult& result, const ExperimentConfig& cfg);

/// Appends the result: one JSON line for *.json / *.jsonl paths, a CSV block otherwise.
void append_study_output(const std::string& path, const StudyResult& result, const ExperimentConfig& cfg);

}  // namespace qpt
