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

// JSON import/export of channels, ensembles, POVMs, records and estimates,
// plus the delimited-text record format.
//
// Matrices are stored as {"rows", "cols", "re", "im"} with row-major nested
// arrays. Doubles are written in shortest round-trip form, so a
// write/read cycle is bit-exact.

#include <string>

#include <nlohmann/json.hpp>

#include "qpt/channels.hpp"
#include "qpt/detectors.hpp"
#include "qpt/ensembles.hpp"
#include "qpt/simulator.hpp"
#include "qpt/tss.hpp"

namespace qpt {

using Json = nlohmann::json;

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);
Json real_matrix_to_json(const RMatrix& m);
RMatrix real_matrix_from_json(const Json& j);

Json channel_to_json(const KrausChannel& channel);
KrausChannel channel_from_json(const Json& j);

Json ensemble_to_json(const InputEnsemble& ensemble);
InputEnsemble ensemble_from_json(const Json& j);

Json povm_to_json(const PovmCollection& povm);
PovmCollection povm_from_json(const Json& j);

Json record_to_json(const MeasurementRecord& record);
MeasurementRecord record_from_json(const Json& j);

/// X_hat and diagnostics; intermediates (A_hat, D_hat, G_hat) when requested.
Json estimate_to_json(const TssEstimate& estimate, bool with_intermediates = false);

/// Header line "M,L,J,N,seed", one line with those values, then the M x L
/// frequency rows. Set sizes go in a second header pair ("set_sizes", values).
std::string record_to_csv(const MeasurementRecord& record);
MeasurementRecord record_from_csv(const std::string& text);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qpt
