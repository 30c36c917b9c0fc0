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

// qpt: simulate tomography experiments and reconstruct process matrices.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qpt/errors.hpp"
#include "qpt/metrics.hpp"
#include "qpt/serialization.hpp"
#include "qpt/simulator.hpp"
#include "qpt/study.hpp"
#include "qpt/tss.hpp"

namespace {

constexpr double kOracleTol = 1e-10;

bool ends_with_csv(const std::string& path) { return path.size() >= 4 && path.ends_with(".csv"); }

qpt::MeasurementRecord load_record(const std::string& path) {
  if (ends_with_csv(path)) return qpt::record_from_csv(qpt::read_text_file(path));
  return qpt::record_from_json(qpt::load_json_file(path));
}

void print_study(const qpt::StudyResult& r, const qpt::ExperimentConfig& cfg) {
  std::cout << qpt::study_to_csv(r, cfg);
}

qpt::ExperimentConfig load_config(const std::string& path, std::int64_t seed, int trials, const std::string& output,
                                  int threads) {
  qpt::ExperimentConfig cfg = qpt::config_from_json(qpt::load_json_file(path));
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (trials > 0) cfg.trials = trials;
  if (!output.empty()) cfg.output = output;
  if (threads > 0) cfg.threads = threads;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum process tomography: simulation, two-stage reconstruction and design audits"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Sample a measurement record");
  std::string sim_channel = "cnot", sim_ensemble = "cube-states 2", sim_povm = "cube 2", sim_out;
  std::int64_t sim_copies = 0, sim_total = 0;
  std::uint64_t sim_seed = 1;
  bool sim_exact = false;
  sim->add_option("--channel", sim_channel, "Channel spec")->capture_default_str();
  sim->add_option("--ensemble", sim_ensemble, "Input ensemble spec")->capture_default_str();
  sim->add_option("--povm", sim_povm, "POVM spec")->capture_default_str();
  auto* copies_opt = sim->add_option("--copies", sim_copies, "Copies per input state (N)");
  auto* total_opt = sim->add_option("--total-copies", sim_total, "Total copies (N_t), split evenly over states");
  copies_opt->excludes(total_opt);
  sim->add_option("--seed", sim_seed, "Sampling seed")->capture_default_str();
  sim->add_flag("--exact", sim_exact, "Write exact probabilities instead of sampling");
  sim->add_option("-o,--output", sim_out, "Record file (.json or .csv); stdout when omitted");

  // reconstruct
  auto* recon = app.add_subcommand("reconstruct", "Two-stage reconstruction of a record");
  std::string rec_path, rec_ensemble = "cube-states 2", rec_povm = "cube 2", rec_truth, rec_out;
  bool rec_tp = false, rec_inter = false;
  recon->add_option("record", rec_path, "Record file (.json or .csv)")->required();
  recon->add_option("--ensemble", rec_ensemble, "Input ensemble spec")->capture_default_str();
  recon->add_option("--povm", rec_povm, "POVM spec")->capture_default_str();
  recon->add_flag("--tp-prior", rec_tp, "Enforce Tr_1(X) = I");
  recon->add_option("--truth", rec_truth, "Channel spec to compare against");
  recon->add_flag("--intermediates", rec_inter, "Include A_hat, D_hat, G_hat in the output");
  recon->add_option("-o,--output", rec_out, "Estimate JSON file; stdout when omitted");

  // studies
  std::string cfg_path, study_out;
  std::int64_t study_seed = -1;
  int study_trials = 0, study_threads = 0;
  auto add_study_flags = [&](CLI::App* sub) {
    sub->add_option("config", cfg_path, "Experiment config (JSON)")->required();
    sub->add_option("--seed", study_seed, "Override the global seed");
    sub->add_option("--trials", study_trials, "Override trials per point");
    sub->add_option("--threads", study_threads, "Worker threads");
    sub->add_option("-o,--output", study_out, "Append results here (.csv or .json/.jsonl)");
  };
  auto* scaling = app.add_subcommand("scaling-study", "MSE and infidelity versus N_t (or ensemble comparison)");
  add_study_flags(scaling);
  auto* mscaling = app.add_subcommand("m-scaling-study", "MSE versus number of input states at fixed N");
  add_study_flags(mscaling);

  // design audit
  auto* audit = app.add_subcommand("design-audit", "Design cost, condition number and lower bounds");
  std::string audit_spec;
  audit->add_option("spec", audit_spec, "Ensemble or POVM spec, e.g. 'sic 4' or 'mub-povm 4'")->required();

  // oracle check
  auto* oracle = app.add_subcommand("oracle-check", "Compare structured and dense reconstructions (d <= 3)");
  std::string or_channel = "random 2 1 tp", or_ensemble = "mub 2", or_povm = "cube 1";
  std::int64_t or_copies = 3000;
  std::uint64_t or_seed = 1;
  oracle->add_option("--channel", or_channel, "Channel spec")->capture_default_str();
  oracle->add_option("--ensemble", or_ensemble, "Input ensemble spec")->capture_default_str();
  oracle->add_option("--povm", or_povm, "POVM spec")->capture_default_str();
  oracle->add_option("--copies", or_copies, "Copies per input state")->capture_default_str();
  oracle->add_option("--seed", or_seed, "Sampling seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const qpt::ProcessMatrix truth = qpt::process_from_kraus(qpt::make_channel(sim_channel));
      const qpt::InputEnsemble e = qpt::make_ensemble(sim_ensemble);
      const qpt::PovmCollection p = qpt::make_povm(sim_povm);
      std::int64_t n = sim_copies;
      if (*total_opt) {
        if (sim_total % e.size() != 0) {
          throw qpt::InvalidInputError("--total-copies must be divisible by M = " + std::to_string(e.size()));
        }
        n = sim_total / e.size();
      }
      if (n <= 0) throw qpt::InvalidInputError("set --copies or --total-copies");
      const qpt::RMatrix ideal = qpt::ideal_probabilities(truth, e, p);
      qpt::MeasurementRecord rec = sim_exact ? qpt::exact_record(ideal, p.set_sizes(), n)
                                             : qpt::sample_record(ideal, p.set_sizes(), n, sim_seed);
      if (sim_out.empty()) {
        std::cout << qpt::record_to_json(rec).dump(1) << '\n';
      } else if (ends_with_csv(sim_out)) {
        qpt::write_text_file(sim_out, qpt::record_to_csv(rec));
      } else {
        qpt::save_json_file(sim_out, qpt::record_to_json(rec));
      }
      return 0;
    }

    if (*recon) {
      const qpt::MeasurementRecord rec = load_record(rec_path);
      const qpt::InputEnsemble e = qpt::make_ensemble(rec_ensemble);
      const qpt::PovmCollection p = qpt::make_povm(rec_povm);
      const qpt::TssEstimate est = qpt::tss_estimate(rec, e, p, rec_tp);
      qpt::Json j = qpt::estimate_to_json(est, rec_inter);
      if (!rec_truth.empty()) {
        const qpt::ProcessMatrix truth = qpt::process_from_kraus(qpt::make_channel(rec_truth));
        const qpt::ErrorReport r = qpt::error_report(est.X_hat, truth.matrix());
        j["error"] = {{"frob_error", r.frob_error}, {"mse", r.mse}, {"fidelity", r.fidelity},
                      {"infidelity", r.infidelity}};
        std::cerr << "frob_error=" << r.frob_error << " fidelity=" << r.fidelity << '\n';
      }
      if (est.correction.tp_fallback) std::cerr << "warning: F_hat near-singular, TP prior not applied\n";
      if (rec_out.empty()) {
        std::cout << j.dump(1) << '\n';
      } else {
        qpt::save_json_file(rec_out, j);
      }
      return 0;
    }

    if (*scaling || *mscaling) {
      const qpt::ExperimentConfig cfg = load_config(cfg_path, study_seed, study_trials, study_out, study_threads);
      qpt::StudyResult r;
      if (*mscaling) {
        r = qpt::run_m_scaling_study(cfg);
      } else if (!cfg.compare.empty()) {
        r = qpt::run_ensemble_comparison(cfg);
      } else {
        r = qpt::run_scaling_study(cfg);
      }
      print_study(r, cfg);
      if (!cfg.output.empty()) qpt::append_study_output(cfg.output, r, cfg);
      return 0;
    }

    if (*audit) {
      std::cout << qpt::format_audit(qpt::design_audit(audit_spec));
      return 0;
    }

    if (*oracle) {
      const qpt::ProcessMatrix truth = qpt::process_from_kraus(qpt::make_channel(or_channel));
      const qpt::InputEnsemble e = qpt::make_ensemble(or_ensemble);
      const qpt::PovmCollection p = qpt::make_povm(or_povm);
      const qpt::MeasurementRecord rec =
          qpt::sample_record(qpt::ideal_probabilities(truth, e, p), p.set_sizes(), or_copies, or_seed);
      const qpt::TssReconstructor tss(e, p);
      const qpt::CMatrix d_hat = tss.step2(tss.step1(rec.freq));
      const qpt::DenseOracleResult dense = qpt::dense_oracle_estimate(rec, e, p);
      qpt::CMatrix factored_b = qpt::kron(qpt::CMatrix::Identity(e.d() * e.d(), e.d() * e.d()), e.V().transpose()) *
                           qpt::r_map(static_cast<std::size_t>(e.d())).dense().cast<qpt::Complex>();
      const double b_err = (qpt::dense_B(e) - factored_b).cwiseAbs().maxCoeff();
      const double two_step_err = (d_hat - dense.two_step).cwiseAbs().maxCoeff();
      const double factored_err = (d_hat - dense.factored).cwiseAbs().maxCoeff();
      const double ls1_gap = (d_hat - dense.one_shot).norm();
      std::cout << "dense_B_vs_structured " << b_err << "\nstep2_vs_dense_two_step " << two_step_err
                << "\nstep2_vs_dense_factored " << factored_err << "\none_shot_gap_frobenius " << ls1_gap << '\n';
      const bool ok = b_err <= 1e-12 && two_step_err <= kOracleTol && factored_err <= kOracleTol;
      std::cout << (ok ? "oracle-check: OK" : "oracle-check: MISMATCH") << '\n';
      return ok ? 0 : 1;
    }
  } catch (const qpt::SingularDesignError& e) {
    std::cerr << "non-identifiable design: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
