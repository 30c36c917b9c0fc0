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

#include "qpt/serialization.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include "qpt/errors.hpp"

namespace qpt {
namespace {

template <typename T>
T get_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

std::vector<CMatrix> matrix_list_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array of matrices");
  std::vector<CMatrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

Json matrix_list_to_json(const std::vector<CMatrix>& ms) {
  Json arr = Json::array();
  for (const auto& m : ms) arr.push_back(matrix_to_json(m));
  return arr;
}

template <typename Int>
Json int_matrix_to_json(const Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Int>
Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> int_matrix_from_json(const Json& j, Eigen::Index rows,
                                                                        Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) throw FormatError("integer matrix shape");
  Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw FormatError("integer matrix shape");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<Int>();
  }
  return m;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw FormatError("bad number '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw FormatError("bad integer '" + s + "'");
  return v;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ir = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix matrix_from_json(const Json& j) {
  const auto rows = get_field<Eigen::Index>(j, "rows");
  const auto cols = get_field<Eigen::Index>(j, "cols");
  if (rows < 0 || cols < 0) throw FormatError("negative matrix shape");
  const Json& re = j.at("re");
  const bool has_im = j.contains("im");
  CMatrix m(rows, cols);
  if (!re.is_array() || static_cast<Eigen::Index>(re.size()) != rows) throw FormatError("matrix 're' shape");
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& rr = re[static_cast<std::size_t>(r)];
    if (!rr.is_array() || static_cast<Eigen::Index>(rr.size()) != cols) throw FormatError("matrix 're' shape");
    for (Eigen::Index c = 0; c < cols; ++c) {
      double imag = 0.0;
      if (has_im) {
        const auto& ir = j.at("im").at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(ir.size()) != cols) throw FormatError("matrix 'im' shape");
        imag = ir.at(static_cast<std::size_t>(c)).get<double>();
      }
      m(r, c) = Complex(rr[static_cast<std::size_t>(c)].get<double>(), imag);
    }
  }
  return m;
}

Json real_matrix_to_json(const RMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(rows)}};
}

RMatrix real_matrix_from_json(const Json& j) { return matrix_from_json(j).real(); }

Json channel_to_json(const KrausChannel& channel) {
  return Json{{"type", "channel"}, {"d", channel.d()}, {"label", channel.label()},
              {"kraus", matrix_list_to_json(channel.kraus())}};
}

KrausChannel channel_from_json(const Json& j) {
  const int d = get_field<int>(j, "d");
  std::string label = j.contains("label") ? get_field<std::string>(j, "label") : std::string();
  if (!j.contains("kraus")) throw FormatError("missing field 'kraus'");
  return KrausChannel(d, matrix_list_from_json(j.at("kraus")), std::move(label));
}

Json ensemble_to_json(const InputEnsemble& ensemble) {
  return Json{{"type", "ensemble"}, {"d", ensemble.d()}, {"label", ensemble.label()},
              {"states", matrix_list_to_json(ensemble.states())}};
}

InputEnsemble ensemble_from_json(const Json& j) {
  const int d = get_field<int>(j, "d");
  std::string label = j.contains("label") ? get_field<std::string>(j, "label") : std::string();
  if (!j.contains("states")) throw FormatError("missing field 'states'");
  return InputEnsemble(d, matrix_list_from_json(j.at("states")), std::move(label));
}

Json povm_to_json(const PovmCollection& povm) {
  Json sets = Json::array();
  for (const auto& s : povm.sets()) sets.push_back(matrix_list_to_json(s));
  return Json{{"type", "povm"}, {"d", povm.d()}, {"label", povm.label()}, {"sets", std::move(sets)}};
}

PovmCollection povm_from_json(const Json& j) {
  const int d = get_field<int>(j, "d");
  std::string label = j.contains("label") ? get_field<std::string>(j, "label") : std::string();
  if (!j.contains("sets") || !j.at("sets").is_array()) throw FormatError("missing field 'sets'");
  std::vector<std::vector<CMatrix>> sets;
  for (const auto& s : j.at("sets")) sets.push_back(matrix_list_from_json(s));
  return PovmCollection(d, std::move(sets), std::move(label));
}

Json record_to_json(const MeasurementRecord& record) {
  Json j{{"type", "record"},
         {"M", record.M},
         {"L", record.L},
         {"J", record.J},
         {"N", record.copies_per_state},
         {"shots_per_set", record.shots_per_set},
         {"seed", record.seed},
         {"set_sizes", record.set_sizes},
         {"freq", real_matrix_to_json(record.freq)},
         {"counts", int_matrix_to_json(record.counts)},
         {"lost", int_matrix_to_json(record.lost)}};
  if (record.ideal) j["ideal"] = real_matrix_to_json(*record.ideal);
  return j;
}

MeasurementRecord record_from_json(const Json& j) {
  MeasurementRecord r;
  r.M = get_field<int>(j, "M");
  r.L = get_field<int>(j, "L");
  r.J = get_field<int>(j, "J");
  r.copies_per_state = get_field<std::int64_t>(j, "N");
  r.shots_per_set = j.contains("shots_per_set") ? get_field<std::int64_t>(j, "shots_per_set")
                                                : (r.J > 0 ? r.copies_per_state / r.J : 0);
  r.seed = j.contains("seed") ? get_field<std::uint64_t>(j, "seed") : 0;
  r.set_sizes = get_field<std::vector<int>>(j, "set_sizes");
  if (!j.contains("freq")) throw FormatError("missing field 'freq'");
  r.freq = real_matrix_from_json(j.at("freq"));
  if (j.contains("counts")) {
    r.counts = int_matrix_from_json<std::int64_t>(j.at("counts"), r.M, r.L);
  } else {
    r.counts.setZero(r.M, r.L);
  }
  if (j.contains("lost")) {
    r.lost = int_matrix_from_json<std::int64_t>(j.at("lost"), r.M, r.J);
  } else {
    r.lost.setZero(r.M, r.J);
  }
  if (j.contains("ideal")) r.ideal = real_matrix_from_json(j.at("ideal"));
  r.validate();
  return r;
}

Json estimate_to_json(const TssEstimate& estimate, bool with_intermediates) {
  const auto& c = estimate.correction;
  auto rvec = [](const RVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  Json j{{"type", "estimate"},
         {"d", estimate.d},
         {"X_hat", matrix_to_json(estimate.X_hat)},
         {"diagnostics",
          {{"rank_c", c.rank_c},
           {"clipped", estimate.clipped},
           {"tp_prior", c.tp_prior},
           {"tp_fallback", c.tp_fallback},
           {"f_hat", rvec(c.f_hat)},
           {"f_bar", rvec(c.f_bar)},
           {"f_tilde", rvec(c.f_tilde)}}}};
  if (with_intermediates) {
    j["A_hat"] = matrix_to_json(estimate.A_hat);
    j["D_hat"] = matrix_to_json(estimate.D_hat);
    j["G_hat"] = matrix_to_json(estimate.G_hat);
    j["F_hat"] = matrix_to_json(c.F_hat);
    j["U_F"] = matrix_to_json(c.U_F);
  }
  return j;
}

std::string record_to_csv(const MeasurementRecord& record) {
  std::ostringstream os;
  os << "M,L,J,N,seed\n";
  os << record.M << ',' << record.L << ',' << record.J << ',' << record.copies_per_state << ',' << record.seed
     << '\n';
  os << "set_sizes\n";
  for (std::size_t i = 0; i < record.set_sizes.size(); ++i) os << (i ? "," : "") << record.set_sizes[i];
  os << '\n';
  for (Eigen::Index m = 0; m < record.freq.rows(); ++m) {
    for (Eigen::Index l = 0; l < record.freq.cols(); ++l) os << (l ? "," : "") << format_double(record.freq(m, l));
    os << '\n';
  }
  return os.str();
}

MeasurementRecord record_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  auto next = [&]() {
    if (!std::getline(is, line)) throw FormatError("record CSV truncated");
    line = strip_cr(line);
    return line;
  };
  if (next() != "M,L,J,N,seed") throw FormatError("record CSV: bad header '" + line + "'");
  auto head = split(next(), ',');
  if (head.size() != 5) throw FormatError("record CSV: header values");
  MeasurementRecord r;
  r.M = static_cast<int>(parse_int(head[0]));
  r.L = static_cast<int>(parse_int(head[1]));
  r.J = static_cast<int>(parse_int(head[2]));
  r.copies_per_state = parse_int(head[3]);
  r.seed = std::stoull(head[4]);
  r.shots_per_set = r.J > 0 ? r.copies_per_state / r.J : 0;
  if (r.M < 1 || r.L < 1 || r.J < 1) throw FormatError("record CSV: empty shape");
  if (next() != "set_sizes") throw FormatError("record CSV: expected set_sizes");
  for (const auto& s : split(next(), ',')) r.set_sizes.push_back(static_cast<int>(parse_int(s)));
  r.freq.resize(r.M, r.L);
  for (int m = 0; m < r.M; ++m) {
    auto cells = split(next(), ',');
    if (static_cast<int>(cells.size()) != r.L) throw FormatError("record CSV: row " + std::to_string(m) + " width");
    for (int l = 0; l < r.L; ++l) r.freq(m, l) = parse_double(cells[l]);
  }
  r.counts.setZero(r.M, r.L);
  r.lost.setZero(r.M, r.J);
  r.validate();
  return r;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
}

Json load_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

void save_json_file(const std::string& path, const Json& j) { write_text_file(path, j.dump(1) + "\n"); }

}  // namespace qpt
