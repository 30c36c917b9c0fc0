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

#include <filesystem>

#include "qpt/channels.hpp"
#include "qpt/errors.hpp"
#include "qpt/serialization.hpp"
#include "qpt/simulator.hpp"
#include "qpt/tss.hpp"
#include "test_util.hpp"

namespace qpt {
namespace {

// Serialize to text and back so that number formatting is exercised.
Json through_text(const Json& j) { return Json::parse(j.dump()); }

void expect_same(const CMatrix& a, const CMatrix& b) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  for (Eigen::Index i = 0; i < a.size(); ++i) EXPECT_EQ(a.data()[i], b.data()[i]);
}

TEST(Serialization, MatrixRoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  const CMatrix m = testing::random_matrix(3, 5, rng) * 1e-7;
  expect_same(matrix_from_json(through_text(matrix_to_json(m))), m);
  const RMatrix r = m.real();
  const RMatrix back = real_matrix_from_json(through_text(real_matrix_to_json(r)));
  EXPECT_EQ((back - r).cwiseAbs().maxCoeff(), 0.0);
  expect_same(matrix_from_json(matrix_to_json(CMatrix(0, 0))), CMatrix(0, 0));
}

TEST(Serialization, ChannelEnsemblePovmRoundTrip) {
  const KrausChannel ch = random_channel(3, false, 5);
  const KrausChannel ch2 = channel_from_json(through_text(channel_to_json(ch)));
  EXPECT_EQ(ch2.d(), 3);
  EXPECT_EQ(ch2.label(), ch.label());
  ASSERT_EQ(ch2.kraus().size(), ch.kraus().size());
  for (std::size_t i = 0; i < ch.kraus().size(); ++i) expect_same(ch2.kraus()[i], ch.kraus()[i]);

  const InputEnsemble e = random_states(3, 11, 2);
  const InputEnsemble e2 = ensemble_from_json(through_text(ensemble_to_json(e)));
  ASSERT_EQ(e2.size(), 11);
  for (int m = 0; m < 11; ++m) expect_same(e2.states()[m], e.states()[m]);
  expect_same(e2.V(), e.V());

  const PovmCollection p = cube_povm(2);
  const PovmCollection p2 = povm_from_json(through_text(povm_to_json(p)));
  EXPECT_EQ(p2.set_sizes(), p.set_sizes());
  expect_same(p2.C(), p.C());
}

MeasurementRecord sample() {
  const InputEnsemble e = mub_states(2);
  const PovmCollection p = cube_povm(1);
  const ProcessMatrix x = process_from_kraus(random_channel(2, false, 1));
  return sample_record(ideal_probabilities(x, e, p), p.set_sizes(), 301, 99);
}

TEST(Serialization, RecordJsonRoundTrip) {
  const MeasurementRecord r = sample();
  const MeasurementRecord r2 = record_from_json(through_text(record_to_json(r)));
  EXPECT_EQ(r2.M, r.M);
  EXPECT_EQ(r2.L, r.L);
  EXPECT_EQ(r2.J, r.J);
  EXPECT_EQ(r2.copies_per_state, r.copies_per_state);
  EXPECT_EQ(r2.shots_per_set, r.shots_per_set);
  EXPECT_EQ(r2.seed, r.seed);
  EXPECT_EQ(r2.set_sizes, r.set_sizes);
  EXPECT_EQ(r2.freq, r.freq);
  EXPECT_EQ(r2.counts, r.counts);
  EXPECT_EQ(r2.lost, r.lost);
  ASSERT_TRUE(r2.ideal.has_value());
  EXPECT_EQ(*r2.ideal, *r.ideal);
}

TEST(Serialization, RecordCsvRoundTrip) {
  const MeasurementRecord r = sample();
  const std::string text = record_to_csv(r);
  const MeasurementRecord r2 = record_from_csv(text);
  EXPECT_EQ(r2.freq, r.freq);
  EXPECT_EQ(r2.set_sizes, r.set_sizes);
  EXPECT_EQ(r2.seed, r.seed);
  EXPECT_EQ(r2.copies_per_state, r.copies_per_state);
  EXPECT_EQ(record_to_csv(r2), text);
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  EXPECT_EQ(record_from_csv(crlf).freq, r.freq);
}

TEST(Serialization, ReconstructionFromReloadedRecordIsIdentical) {
  const MeasurementRecord r = sample();
  const InputEnsemble e = mub_states(2);
  const PovmCollection p = cube_povm(1);
  const CMatrix x1 = tss_estimate(r, e, p).X_hat;
  expect_same(tss_estimate(record_from_csv(record_to_csv(r)), e, p).X_hat, x1);
  expect_same(tss_estimate(record_from_json(through_text(record_to_json(r))), e, p).X_hat, x1);
}

TEST(Serialization, EstimateJson) {
  const MeasurementRecord r = sample();
  const TssEstimate est = tss_estimate(r, mub_states(2), cube_povm(1));
  const Json small = estimate_to_json(est);
  EXPECT_EQ(small.at("type"), "estimate");
  EXPECT_FALSE(small.contains("A_hat"));
  expect_same(matrix_from_json(small.at("X_hat")), est.X_hat);
  const Json full = estimate_to_json(est, true);
  for (const char* key : {"A_hat", "D_hat", "G_hat", "F_hat", "U_F"}) EXPECT_TRUE(full.contains(key)) << key;
  EXPECT_EQ(full.at("diagnostics").at("rank_c"), est.correction.rank_c);
}

TEST(Serialization, MalformedInputsRaiseFormatError) {
  EXPECT_THROW(record_from_csv(""), FormatError);
  EXPECT_THROW(record_from_csv("bad header\n"), FormatError);
  std::string text = record_to_csv(sample());
  EXPECT_THROW(record_from_csv(text.substr(0, text.size() / 2)), FormatError);
  std::string corrupt = text;
  corrupt.replace(corrupt.rfind('\n', corrupt.size() - 2) + 1, 1, "x");
  EXPECT_THROW(record_from_csv(corrupt), FormatError);
  Json m = matrix_to_json(CMatrix::Identity(2, 2));
  m["rows"] = 3;
  EXPECT_THROW(matrix_from_json(m), FormatError);
  Json ch = channel_to_json(identity_channel(2));
  ch.erase("kraus");
  EXPECT_THROW(channel_from_json(ch), FormatError);
  Json en = ensemble_to_json(mub_states(2));
  en.erase("d");
  EXPECT_THROW(ensemble_from_json(en), FormatError);
  EXPECT_THROW(load_json_file("/nonexistent/qpt.json"), FormatError);
}

TEST(Serialization, InvalidRecordContentsAreRejected) {
  Json j = record_to_json(sample());
  j["set_sizes"] = std::vector<int>{2, 2};
  EXPECT_THROW(record_from_json(j), QptError);
}

TEST(Serialization, Files) {
  const auto dir = std::filesystem::temp_directory_path() / "qpt_serialization_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "povm.json").string();
  const PovmCollection p = mub_povm(4);
  save_json_file(path, povm_to_json(p));
  expect_same(povm_from_json(load_json_file(path)).C(), p.C());
  write_text_file((dir / "bad.json").string(), "{not json");
  EXPECT_THROW(load_json_file((dir / "bad.json").string()), FormatError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace qpt
