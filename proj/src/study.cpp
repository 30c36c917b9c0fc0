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

#include "qpt/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "qpt/errors.hpp"
#include "qpt/simulator.hpp"
#include "qpt/tss.hpp"

namespace qpt {
namespace {

std::vector<std::string> tokens(const std::string& spec) {
  std::istringstream is(spec);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

int to_int(const std::string& s, const std::string& spec) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidInputError("spec '" + spec + "': '" + s + "' is not an integer");
}

std::uint64_t to_u64(const std::string& s, const std::string& spec) {
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidInputError("spec '" + spec + "': '" + s + "' is not an unsigned integer");
}

void expect_args(const std::vector<std::string>& t, std::size_t n, const std::string& spec, const char* usage) {
  if (t.size() != n) throw InvalidInputError("spec '" + spec + "': expected '" + usage + "'");
}

// Path may contain spaces: everything after the keyword.
std::string file_arg(const std::string& spec) {
  auto pos = spec.find("file");
  std::string rest = spec.substr(pos + 4);
  rest.erase(0, rest.find_first_not_of(" \t"));
  if (rest.empty()) throw InvalidInputError("spec '" + spec + "': missing path");
  return rest;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

int thread_count(const ExperimentConfig& cfg, int jobs) {
  int n = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, std::max(jobs, 1));
}

// Runs fn(i) for i in [0, jobs) across threads. Each index writes only its own slot.
template <typename Fn>
void parallel_for(int jobs, int threads, Fn&& fn) {
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (int i = next++; i < jobs && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

struct TrialOutcome {
  double mse = 0.0;
  double frob = 0.0;
  double infidelity = 0.0;
};

TrialOutcome run_trial(const ProcessMatrix& truth, const TssReconstructor& rec, const RMatrix& ideal,
                       const std::vector<int>& set_sizes, std::int64_t n, std::uint64_t seed, bool tp_prior) {
  MeasurementRecord record = sample_record(ideal, set_sizes, n, seed);
  TssEstimate est = rec.estimate(record, tp_prior);
  ErrorReport e = error_report(est.X_hat, truth.matrix());
  return {e.mse, e.frob_error, e.infidelity};
}

StudyRow summarize(std::string label, std::int64_t nt, int M, std::int64_t n, const std::vector<TrialOutcome>& out,
                   double bound, double seconds) {
  std::vector<double> mse, inf, frob;
  for (const auto& o : out) {
    mse.push_back(o.mse);
    inf.push_back(o.infidelity);
    frob.push_back(o.frob);
  }
  StudyRow r;
  r.label = std::move(label);
  r.total_copies = nt;
  r.M = M;
  r.copies_per_state = n;
  r.trials = static_cast<int>(out.size());
  r.mean_mse = mean_of(mse);
  r.std_mse = std_of(mse);
  r.mean_infidelity = mean_of(inf);
  r.std_infidelity = std_of(inf);
  r.mean_frob = mean_of(frob);
  r.bound_functional = bound;
  r.runtime_s = seconds;
  return r;
}

double bound_for(const ProcessMatrix& truth, const InputEnsemble& e, const PovmCollection& p, std::int64_t n) {
  const DesignReportV v = design_metrics_V(e);
  const DesignReportC c = design_metrics_C(p);
  const double trace_f = success_operator(truth).trace().real();
  return error_bound_functional(e.d(), trace_f, p.num_sets(), c.cost / p.num_sets(), e.size(), v.cost / e.size(),
                        static_cast<double>(n));
}

// Runs `trials` trials of a fixed design at N copies per state.
StudyRow run_point(const ExperimentConfig& cfg, const ProcessMatrix& truth, const InputEnsemble& e,
                   const PovmCollection& p, std::int64_t n, std::int64_t nt, std::uint64_t point, std::string label) {
  const auto t0 = std::chrono::steady_clock::now();
  TssReconstructor rec(e, p);
  const RMatrix ideal = ideal_probabilities(truth, e, p);
  const std::vector<int> sizes = p.set_sizes();
  std::vector<TrialOutcome> out(static_cast<std::size_t>(cfg.trials));
  parallel_for(cfg.trials, thread_count(cfg, cfg.trials), [&](int t) {
    out[static_cast<std::size_t>(t)] =
        run_trial(truth, rec, ideal, sizes, n, derive_seed(cfg.seed, point, static_cast<std::uint64_t>(t)),
                  cfg.tp_prior);
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return summarize(std::move(label), nt, e.size(), n, out, bound_for(truth, e, p, n), secs);
}

void fit_rows(StudyResult& r, bool by_m) {
  if (r.rows.size() < 2) return;
  std::vector<double> x, mse, inf;
  for (const auto& row : r.rows) {
    x.push_back(by_m ? row.M : static_cast<double>(row.total_copies));
    mse.push_back(row.mean_mse);
    inf.push_back(row.mean_infidelity);
  }
  r.mse_fit = loglog_slope(x, mse);
  if (std::all_of(inf.begin(), inf.end(), [](double v) { return v > 0.0; })) r.infidelity_fit = loglog_slope(x, inf);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

KrausChannel make_channel(const std::string& spec) {
  const auto t = tokens(spec);
  if (t.empty()) throw InvalidInputError("empty channel spec");
  if (t[0] == "cnot") {
    expect_args(t, 1, spec, "cnot");
    return cnot_channel();
  }
  if (t[0] == "identity") {
    expect_args(t, 2, spec, "identity d");
    return identity_channel(to_int(t[1], spec));
  }
  if (t[0] == "random") {
    expect_args(t, 4, spec, "random d seed tp|nontp");
    if (t[3] != "tp" && t[3] != "nontp") throw InvalidInputError("spec '" + spec + "': last field must be tp or nontp");
    return random_channel(to_int(t[1], spec), t[3] == "tp", to_u64(t[2], spec));
  }
  if (t[0] == "file") return channel_from_json(load_json_file(file_arg(spec)));
  throw InvalidInputError("unknown channel spec '" + spec + "'");
}

InputEnsemble make_ensemble(const std::string& spec) {
  const auto t = tokens(spec);
  if (t.empty()) throw InvalidInputError("empty ensemble spec");
  if (t[0] == "sic") {
    expect_args(t, 2, spec, "sic d");
    return sic_states(to_int(t[1], spec));
  }
  if (t[0] == "mub") {
    expect_args(t, 2, spec, "mub d");
    return mub_states(to_int(t[1], spec));
  }
  if (t[0] == "natural") {
    expect_args(t, 2, spec, "natural d");
    return natural_basis_states(to_int(t[1], spec));
  }
  if (t[0] == "random") {
    expect_args(t, 4, spec, "random d M seed");
    return random_states(to_int(t[1], spec), to_int(t[2], spec), to_u64(t[3], spec));
  }
  if (t[0] == "cube-states") {
    expect_args(t, 2, spec, "cube-states m");
    const int m = to_int(t[1], spec);
    if (m < 1) throw InvalidInputError("spec '" + spec + "': m must be at least 1");
    if (m == 1) return mub_states(2);
    return product_ensemble(std::vector<InputEnsemble>(static_cast<std::size_t>(m), mub_states(2)));
  }
  if (t[0] == "file") return ensemble_from_json(load_json_file(file_arg(spec)));
  throw InvalidInputError("unknown ensemble spec '" + spec + "'");
}

PovmCollection make_povm(const std::string& spec) {
  const auto t = tokens(spec);
  if (t.empty()) throw InvalidInputError("empty POVM spec");
  if (t[0] == "cube") {
    expect_args(t, 2, spec, "cube m");
    return cube_povm(to_int(t[1], spec));
  }
  if (t[0] == "mub-povm") {
    expect_args(t, 2, spec, "mub-povm d");
    return mub_povm(to_int(t[1], spec));
  }
  if (t[0] == "sic-povm") {
    expect_args(t, 2, spec, "sic-povm d");
    return sic_povm(to_int(t[1], spec));
  }
  if (t[0] == "file") return povm_from_json(load_json_file(file_arg(spec)));
  throw InvalidInputError("unknown POVM spec '" + spec + "'");
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidInputError("config: trials must be at least 1");
  if (threads < 0) throw InvalidInputError("config: threads must be non-negative");
  for (auto nt : total_copies) {
    if (nt <= 0) throw InvalidInputError("config: total_copies entries must be positive");
  }
  for (int m : m_values) {
    if (m <= 0) throw InvalidInputError("config: m_values entries must be positive");
  }
  if (copies_per_state < 0) throw InvalidInputError("config: copies_per_state must be non-negative");
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("config: expected a JSON object");
  static const std::vector<std::string> known = {"channel", "ensemble", "povm",    "total_copies", "m_values",
                                                 "copies_per_state", "compare", "trials", "tp_prior",
                                                 "output", "seed", "threads"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw FormatError("config: unknown field '" + key + "'");
    }
  }
  ExperimentConfig c;
  try {
    c.channel = j.value("channel", c.channel);
    c.ensemble = j.value("ensemble", c.ensemble);
    c.povm = j.value("povm", c.povm);
    if (j.contains("total_copies")) {
      for (const auto& v : j.at("total_copies")) c.total_copies.push_back(std::llround(v.get<double>()));
    }
    c.m_values = j.value("m_values", c.m_values);
    if (j.contains("copies_per_state")) c.copies_per_state = std::llround(j.at("copies_per_state").get<double>());
    c.compare = j.value("compare", c.compare);
    c.trials = j.value("trials", c.trials);
    c.tp_prior = j.value("tp_prior", c.tp_prior);
    c.output = j.value("output", c.output);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

Json config_to_json(const ExperimentConfig& cfg) {
  return Json{{"channel", cfg.channel},   {"ensemble", cfg.ensemble},
              {"povm", cfg.povm},         {"total_copies", cfg.total_copies},
              {"m_values", cfg.m_values}, {"copies_per_state", cfg.copies_per_state},
              {"compare", cfg.compare},   {"trials", cfg.trials},
              {"tp_prior", cfg.tp_prior}, {"output", cfg.output},
              {"seed", cfg.seed},         {"threads", cfg.threads}};
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  Json j = config_to_json(cfg);
  // Output location and thread count do not affect results.
  j.erase("output");
  j.erase("threads");
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

StudyResult run_scaling_study(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.total_copies.empty()) throw InvalidInputError("scaling study: total_copies is empty");
  const KrausChannel channel = make_channel(cfg.channel);
  const ProcessMatrix truth = process_from_kraus(channel);
  const InputEnsemble e = make_ensemble(cfg.ensemble);
  const PovmCollection p = make_povm(cfg.povm);
  if (e.d() != truth.d() || p.d() != truth.d()) throw DimensionError("scaling study: dimension mismatch");

  StudyResult r;
  r.kind = "scaling";
  r.config_hash = config_hash(cfg);
  r.seed = cfg.seed;
  for (std::size_t i = 0; i < cfg.total_copies.size(); ++i) {
    const std::int64_t nt = cfg.total_copies[i];
    if (nt % e.size() != 0) {
      throw InvalidInputError("scaling study: N_t = " + std::to_string(nt) + " is not divisible by M = " +
                              std::to_string(e.size()));
    }
    const std::int64_t n = nt / e.size();
    if (n < p.num_sets()) throw InvalidInputError("scaling study: N_t / M is smaller than the number of POVM sets");
    r.rows.push_back(run_point(cfg, truth, e, p, n, nt, i, e.label()));
  }
  fit_rows(r, false);
  return r;
}

StudyResult run_m_scaling_study(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.m_values.empty()) throw InvalidInputError("M-scaling study: m_values is empty");
  if (cfg.copies_per_state <= 0) throw InvalidInputError("M-scaling study: copies_per_state must be set");
  const auto t = tokens(cfg.ensemble);
  if (t.size() < 2 || t[0] != "random") throw InvalidInputError("M-scaling study: ensemble must be 'random d'");
  const int d = to_int(t[1], cfg.ensemble);
  const KrausChannel channel = make_channel(cfg.channel);
  const ProcessMatrix truth = process_from_kraus(channel);
  const PovmCollection p = make_povm(cfg.povm);
  if (truth.d() != d || p.d() != d) throw DimensionError("M-scaling study: dimension mismatch");
  if (cfg.copies_per_state < p.num_sets()) throw InvalidInputError("M-scaling study: N is smaller than J");
  const std::vector<int> sizes = p.set_sizes();

  StudyResult r;
  r.kind = "m-scaling";
  r.config_hash = config_hash(cfg);
  r.seed = cfg.seed;
  for (std::size_t i = 0; i < cfg.m_values.size(); ++i) {
    const int M = cfg.m_values[i];
    if (M < d * d) throw InvalidInputError("M-scaling study: M must be at least d^2");
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<TrialOutcome> out(static_cast<std::size_t>(cfg.trials));
    std::vector<double> bounds(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, thread_count(cfg, cfg.trials), [&](int k) {
      const std::uint64_t s = derive_seed(cfg.seed, i, static_cast<std::uint64_t>(k));
      const InputEnsemble e = random_states(d, M, derive_seed(s, 0x5eed));
      TssReconstructor rec(e, p);
      out[static_cast<std::size_t>(k)] =
          run_trial(truth, rec, ideal_probabilities(truth, e, p), sizes, cfg.copies_per_state, s, cfg.tp_prior);
      bounds[static_cast<std::size_t>(k)] = bound_for(truth, e, p, cfg.copies_per_state);
    });
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.rows.push_back(summarize("random", cfg.copies_per_state * M, M, cfg.copies_per_state, out, mean_of(bounds),
                               secs));
  }
  fit_rows(r, true);
  return r;
}

StudyResult run_ensemble_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.compare.empty()) throw InvalidInputError("comparison: compare list is empty");
  if (cfg.total_copies.empty()) throw InvalidInputError("comparison: total_copies is empty");
  const std::int64_t nt = cfg.total_copies.front();
  const KrausChannel channel = make_channel(cfg.channel);
  const ProcessMatrix truth = process_from_kraus(channel);
  const PovmCollection p = make_povm(cfg.povm);

  StudyResult r;
  r.kind = "comparison";
  r.config_hash = config_hash(cfg);
  r.seed = cfg.seed;
  for (std::size_t i = 0; i < cfg.compare.size(); ++i) {
    const InputEnsemble e = make_ensemble(cfg.compare[i]);
    if (e.d() != truth.d() || p.d() != truth.d()) throw DimensionError("comparison: dimension mismatch");
    if (nt % e.size() != 0) {
      throw InvalidInputError("comparison: N_t = " + std::to_string(nt) + " is not divisible by M = " +
                              std::to_string(e.size()) + " for '" + cfg.compare[i] + "'");
    }
    r.rows.push_back(run_point(cfg, truth, e, p, nt / e.size(), nt, i, cfg.compare[i]));
  }
  return r;
}

AuditReport design_audit(const std::string& spec) {
  const auto t = tokens(spec);
  if (t.empty()) throw InvalidInputError("empty design spec");
  static const std::vector<std::string> povm_kinds = {"cube", "mub-povm", "sic-povm"};
  AuditReport a;
  const bool is_povm = std::find(povm_kinds.begin(), povm_kinds.end(), t[0]) != povm_kinds.end() ||
                       (t[0] == "file" && load_json_file(file_arg(spec)).value("type", "") == "povm");
  if (is_povm) {
    const PovmCollection p = make_povm(spec);
    const DesignReportC c = design_metrics_C(p);
    a.kind = "povm";
    a.label = p.label();
    a.d = p.d();
    a.size = p.num_sets();
    a.cost = c.cost;
    a.cond = c.cond;
    a.eigenvalues.assign(c.eigs.data(), c.eigs.data() + c.eigs.size());
    a.lower_cost = c.lower_cost;
    a.lower_cond = c.lower_cond;
    a.achieves = c.achieves;
  } else {
    const InputEnsemble e = make_ensemble(spec);
    const DesignReportV v = design_metrics_V(e);
    a.kind = "ensemble";
    a.label = e.label();
    a.d = e.d();
    a.size = e.size();
    a.cost = v.cost;
    a.cond = v.cond;
    a.eigenvalues.assign(v.eigs.data(), v.eigs.data() + v.eigs.size());
    a.lower_cost = v.lower_cost;
    a.lower_cond = v.lower_cond;
    a.achieves = v.achieves;
  }
  return a;
}

std::string format_audit(const AuditReport& a) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "kind: " << a.kind << "\nlabel: " << a.label << "\nd: " << a.d << '\n'
     << (a.kind == "povm" ? "J: " : "M: ") << a.size << '\n'
     << "cost: " << a.cost << "\ncond: " << a.cond << "\nlower_cost: " << a.lower_cost
     << "\nlower_cond: " << a.lower_cond << "\nachieves: " << (a.achieves ? "yes" : "no") << "\neigenvalues:";
  for (double v : a.eigenvalues) os << ' ' << v;
  os << '\n';
  return os.str();
}

std::string study_to_csv(const StudyResult& r, const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "# kind=" << r.kind << " config_hash=" << std::hex << std::setw(16) << std::setfill('0') << r.config_hash
     << std::dec << std::setfill(' ') << " seed=" << r.seed << '\n';
  os << "# config=" << config_to_json(cfg).dump() << '\n';
  if (r.mse_fit) os << "# mse_slope=" << fmt(r.mse_fit->slope) << '\n';
  if (r.infidelity_fit) os << "# infidelity_slope=" << fmt(r.infidelity_fit->slope) << '\n';
  os << "label,N_t,M,N,trials,mean_mse,std_mse,mean_infidelity,std_infidelity,mean_frob,bound_functional,"
        "runtime_s\n";
  for (const auto& row : r.rows) {
    os << row.label << ',' << row.total_copies << ',' << row.M << ',' << row.copies_per_state << ',' << row.trials
       << ',' << fmt(row.mean_mse) << ',' << fmt(row.std_mse) << ',' << fmt(row.mean_infidelity) << ','
       << fmt(row.std_infidelity) << ',' << fmt(row.mean_frob) << ',' << fmt(row.bound_functional) << ','
       << fmt(row.runtime_s) << '\n';
  }
  return os.str();
}

Json study_to_json(const StudyResult& r, const ExperimentConfig& cfg) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"label", row.label},
                    {"N_t", row.total_copies},
                    {"M", row.M},
                    {"N", row.copies_per_state},
                    {"trials", row.trials},
                    {"mean_mse", row.mean_mse},
                    {"std_mse", row.std_mse},
                    {"mean_infidelity", row.mean_infidelity},
                    {"std_infidelity", row.std_infidelity},
                    {"mean_frob", row.mean_frob},
                    {"bound_functional", row.bound_functional},
                    {"runtime_s", row.runtime_s}});
  }
  Json j{{"kind", r.kind}, {"config_hash", r.config_hash}, {"seed", r.seed},
         {"config", config_to_json(cfg)}, {"rows", std::move(rows)}};
  if (r.mse_fit) j["mse_slope"] = r.mse_fit->slope;
  if (r.infidelity_fit) j["infidelity_slope"] = r.infidelity_fit->slope;
  return j;
}

void append_study_output(const std::string& path, const StudyResult& r, const ExperimentConfig& cfg) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for appending");
  const bool json = path.size() >= 5 && (path.ends_with(".json") || path.ends_with(".jsonl"));
  if (json) {
    out << study_to_json(r, cfg).dump() << '\n';
  } else {
    out << study_to_csv(r, cfg);
  }
}

}  // namespace qpt
