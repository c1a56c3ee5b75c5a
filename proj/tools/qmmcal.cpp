// Copyright 2026 the qmmcal authors
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

// qmmcal command line front end.
//
//   qmmcal models
//   qmmcal calibrate --model lee-alt --method qmm --data route.csv --scenario sc.toml
//   qmmcal compare   --model lee-alt --data route.csv --scenario sc.toml
//   qmmcal decompose --model ecc33 --method svd --data route.csv --scenario sc.toml
//   qmmcal synth     --model ecc33 --coeffs 1,1,1,1,1,1,1,1,1,1 --noise 0 --seed 7
//                    --scenario sc.toml --distances 100:4000:40 --out route.csv
//   qmmcal predict   --report report.json --distances 150,250,350

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qmmcal/calibration.hpp"
#include "qmmcal/dataio.hpp"
#include "qmmcal/metrics.hpp"
#include "qmmcal/model_io.hpp"
#include "qmmcal/registry.hpp"

namespace {

using namespace qmmcal;

ModelSpec resolve_model(const std::string& arg) {
  const auto models = builtin_models();
  for (const auto& m : models)
    if (m.name == arg) return m;
  if (std::filesystem::exists(arg)) return load_model(arg);
  std::vector<std::string> candidates;
  for (const auto& m : models)
    if (m.name.rfind(arg, 0) == 0) candidates.push_back(m.name);
  if (candidates.size() == 1) return find_builtin(candidates.front());
  if (candidates.size() > 1) {
    std::string list;
    for (const auto& c : candidates) list += (list.empty() ? "" : ", ") + c;
    throw Error("ambiguous model '" + arg + "': candidates " + list);
  }
  std::string known;
  for (const auto& m : models) known += (known.empty() ? "" : ", ") + m.name;
  throw Error("unknown model '" + arg + "' (not a builtin, not a config file); builtin models: " +
              known);
}

std::vector<double> parse_distances(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    // start:stop:count linspace
    double start = 0, stop = 0;
    long count = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld", &start, &stop, &count) != 3 || count < 1)
      throw Error("bad --distances '" + spec + "': expected start:stop:count");
    if (count == 1) {
      out.push_back(start);
    } else {
      for (long i = 0; i < count; ++i)
        out.push_back(start + (stop - start) * static_cast<double>(i) /
                                  static_cast<double>(count - 1));
    }
    return out;
  }
  std::stringstream ss(spec);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double v = 0;
    if (!detail::parse_double(cell, v)) throw Error("bad --distances cell '" + cell + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error("--distances is empty");
  return out;
}

Eigen::VectorXd parse_coeffs(const std::string& spec) {
  std::vector<double> vals;
  std::stringstream ss(spec);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double v = 0;
    if (!detail::parse_double(cell, v)) throw Error("bad --coeffs cell '" + cell + "'");
    vals.push_back(v);
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(vals.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = vals[static_cast<std::size_t>(i)];
  return out;
}

std::filesystem::path with_method_suffix(const std::filesystem::path& p, Method method) {
  std::filesystem::path out = p;
  out.replace_extension("");
  out += std::string(".") + method_name(method);
  out += p.extension();
  return out;
}

void print_result(const CalibrationReport& rep) {
  std::printf("model %s (%s, N=%zu)  method %s\n", rep.model.name.c_str(),
              variant_name(rep.model.variant), rep.model.size(),
              method_name(rep.result.method));
  for (Eigen::Index j = 0; j < rep.result.coefficients.size(); ++j)
    std::printf("  alpha[%ld] %-18s % .10g\n", static_cast<long>(j + 1),
                rep.model.basis[static_cast<std::size_t>(j)].label.c_str(),
                rep.result.coefficients(j));
  std::printf("  residual_seminorm_db %.10g\n", rep.result.residual_seminorm);
  std::printf("  condition_estimate   %.10g\n", rep.result.condition_estimate);
  std::printf("  rank                 %ld\n", static_cast<long>(rep.result.rank));
  std::printf("  mpe_db               % .10g\n", rep.metrics.mpe_db);
  std::printf("  rmse_db              %.10g\n", rep.metrics.rmse_db);
  std::printf("  grg_mape             %.10g\n", rep.metrics.grg.rho_grg_mape);
  for (const auto& w : rep.warnings) std::printf("  warning: %s\n", w.c_str());
}

struct CommonOpts {
  std::string model;
  std::string data;
  std::string scenario;
  GrgConfig grg;
};

CalibrationResult run_method(Method method, const DesignMatrix& design,
                             const MeasurementSet& data) {
  if (method == Method::Qmm) return solve_qmm(gram_system(design, data));
  return solve_svd(design, data);
}

int cmd_models() {
  std::printf("%-14s %-12s %-3s %-28s basis\n", "name", "variant", "N", "units (d, f, hte, hre)");
  for (const auto& m : builtin_models()) {
    std::string units = m.units.distance + ", " + m.units.frequency + ", " + m.units.tx_height +
                        ", " + m.units.rx_height;
    std::string labels;
    for (const auto& b : m.basis) labels += (labels.empty() ? "" : " | ") + b.label;
    std::printf("%-14s %-12s %-3zu %-28s %s\n", m.name.c_str(), variant_name(m.variant), m.size(),
                units.c_str(), labels.c_str());
  }
  return 0;
}

int cmd_calibrate(const CommonOpts& opt, const std::string& method_arg, const std::string& out,
                  const std::string& profile_out) {
  const ModelSpec model = resolve_model(opt.model);
  const MeasurementSet data = load_measurements(opt.data, opt.scenario);
  const DesignMatrix design = design_matrix(model, data);

  std::vector<Method> methods;
  if (method_arg == "both") {
    methods = {Method::Qmm, Method::Svd};
  } else if (method_arg == "qmm") {
    methods = {Method::Qmm};
  } else if (method_arg == "svd") {
    methods = {Method::Svd};
  } else {
    throw Error("bad --method '" + method_arg + "': expected qmm, svd or both");
  }

  std::vector<std::pair<std::string, Eigen::VectorXd>> profile_cols;
  for (Method method : methods) {
    const CalibrationResult result = run_method(method, design, data);
    const CalibrationReport rep = make_report(model, data, result, opt.grg);
    print_result(rep);
    if (!out.empty()) {
      const auto path = methods.size() > 1 ? with_method_suffix(out, method)
                                           : std::filesystem::path(out);
      save_report(rep, path);
      std::printf("  report -> %s\n", path.string().c_str());
    }
    profile_cols.emplace_back(model.name + ":" + method_name(method), rep.predicted);
  }
  if (!profile_out.empty()) {
    emit_profile(data, profile_cols, profile_out);
    std::printf("  profile -> %s\n", profile_out.c_str());
  }
  return 0;
}

int cmd_compare(const CommonOpts& opt, const std::string& out, const std::string& profile_out) {
  const ModelSpec model = resolve_model(opt.model);
  const MeasurementSet data = load_measurements(opt.data, opt.scenario);
  const DesignMatrix design = design_matrix(model, data);

  const CalibrationResult q = solve_qmm(gram_system(design, data));
  const CalibrationResult s = solve_svd(design, data);
  const CalibrationReport repq = make_report(model, data, q, opt.grg);
  const CalibrationReport reps = make_report(model, data, s, opt.grg);

  std::printf("model %s (N=%zu), M=%zu samples\n", model.name.c_str(), model.size(), data.size());
  std::printf("%-22s %-18s %-18s\n", "coefficient", "qmm", "svd");
  for (Eigen::Index j = 0; j < q.coefficients.size(); ++j)
    std::printf("%-22s % -18.10g % -18.10g\n",
                model.basis[static_cast<std::size_t>(j)].label.c_str(), q.coefficients(j),
                s.coefficients(j));
  const double denom = std::max(q.coefficients.cwiseAbs().maxCoeff(),
                                s.coefficients.cwiseAbs().maxCoeff());
  const double dcoef =
      denom == 0.0 ? 0.0 : (q.coefficients - s.coefficients).cwiseAbs().maxCoeff() / denom;
  std::printf("max coefficient delta (relative): %.3e\n", dcoef);
  std::printf("%-12s %-16s %-16s %s\n", "metric", "qmm", "svd", "|delta|");
  std::printf("%-12s %-16.10g %-16.10g %.3e\n", "rmse_db", repq.metrics.rmse_db,
              reps.metrics.rmse_db, std::abs(repq.metrics.rmse_db - reps.metrics.rmse_db));
  std::printf("%-12s % -16.10g % -16.10g %.3e\n", "mpe_db", repq.metrics.mpe_db,
              reps.metrics.mpe_db, std::abs(repq.metrics.mpe_db - reps.metrics.mpe_db));
  std::printf("%-12s %-16.10g %-16.10g %.3e\n", "grg_mape", repq.metrics.grg.rho_grg_mape,
              reps.metrics.grg.rho_grg_mape,
              std::abs(repq.metrics.grg.rho_grg_mape - reps.metrics.grg.rho_grg_mape));
  for (const auto& w : repq.warnings) std::printf("warning (qmm): %s\n", w.c_str());
  for (const auto& w : reps.warnings) std::printf("warning (svd): %s\n", w.c_str());

  if (!out.empty()) {
    save_report(repq, with_method_suffix(out, Method::Qmm));
    save_report(reps, with_method_suffix(out, Method::Svd));
    std::printf("reports -> %s, %s\n", with_method_suffix(out, Method::Qmm).string().c_str(),
                with_method_suffix(out, Method::Svd).string().c_str());
  }
  if (!profile_out.empty()) {
    emit_profile(data,
                 {{model.name + ":qmm", repq.predicted}, {model.name + ":svd", reps.predicted}},
                 profile_out);
    std::printf("profile -> %s\n", profile_out.c_str());
  }
  return 0;
}

int cmd_decompose(const CommonOpts& opt, const std::string& method_arg, const std::string& out) {
  const ModelSpec model = resolve_model(opt.model);
  const MeasurementSet data = load_measurements(opt.data, opt.scenario);
  const DesignMatrix design = design_matrix(model, data);
  Method method;
  if (method_arg == "qmm") {
    method = Method::Qmm;
  } else if (method_arg == "svd") {
    method = Method::Svd;
  } else {
    throw Error("bad --method '" + method_arg + "': expected qmm or svd");
  }
  const CalibrationResult result = run_method(method, design, data);
  const Decomposition dec = decompose(model, result, data);

  std::printf("model %s, method %s: per-component contributions (dB / %% of net)\n",
              model.name.c_str(), method_name(method));
  std::printf("%-4s %-12s %-12s", "k", "distance_m", "net_db");
  for (const auto& b : model.basis) std::printf(" %-22s", b.label.c_str());
  std::printf("\n");
  for (Eigen::Index k = 0; k < dec.net.size(); ++k) {
    std::printf("%-4ld %-12.6g %-12.6g", static_cast<long>(k + 1), dec.distances(k), dec.net(k));
    for (Eigen::Index j = 0; j < dec.contributions_db.cols(); ++j)
      std::printf(" %9.4g (%7.3f%%)", dec.contributions_db(k, j), dec.percent(k, j));
    std::printf("\n");
  }
  for (const auto& w : dec.warnings) std::printf("warning: %s\n", w.c_str());

  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw IoError("cannot open '" + out + "' for writing");
    f << "distance_m,net_db";
    for (const auto& b : model.basis) f << ',' << b.label << "_db";
    for (const auto& b : model.basis) f << ',' << b.label << "_pct";
    f << '\n';
    for (Eigen::Index k = 0; k < dec.net.size(); ++k) {
      f << detail::fmt_double(dec.distances(k)) << ',' << detail::fmt_double(dec.net(k));
      for (Eigen::Index j = 0; j < dec.contributions_db.cols(); ++j)
        f << ',' << detail::fmt_double(dec.contributions_db(k, j));
      for (Eigen::Index j = 0; j < dec.percent.cols(); ++j)
        f << ',' << detail::fmt_double(dec.percent(k, j));
      f << '\n';
    }
    std::printf("table -> %s\n", out.c_str());
  }
  return 0;
}

int cmd_synth(const std::string& model_arg, const std::string& coeffs_arg,
              const std::string& scenario_path, const std::string& distances_arg, double noise,
              std::uint64_t seed, const std::string& out) {
  const ModelSpec model = resolve_model(model_arg);
  const Scenario scenario = load_scenario(scenario_path);
  const Eigen::VectorXd coeffs = parse_coeffs(coeffs_arg);
  const std::vector<double> distances = parse_distances(distances_arg);
  const MeasurementSet data = synth_generate(model, coeffs, scenario, distances, noise, seed);
  save_measurements(data, out);
  std::printf("wrote %s (M=%zu samples, model %s, noise %g dB, seed %llu)\n", out.c_str(),
              data.size(), model.name.c_str(), noise,
              static_cast<unsigned long long>(seed));
  return 0;
}

int cmd_predict(const std::string& report_path, const std::string& distances_arg) {
  const CalibrationReport rep = load_report(report_path);
  const std::vector<double> distances = parse_distances(distances_arg);
  bool any_ramp_dropped = false;
  std::printf("distance_m,predicted_db\n");
  for (double d : distances) {
    bool dropped = false;
    const double p = predict(rep.model, rep.result, d, rep.scenario, std::nullopt, &dropped);
    any_ramp_dropped = any_ramp_dropped || dropped;
    std::printf("%s,%s\n", detail::fmt_double(d).c_str(), detail::fmt_double(p).c_str());
  }
  if (any_ramp_dropped)
    std::fprintf(stderr,
                 "warning: model '%s' carries index-ramp terms; off-grid predictions set them "
                 "to zero\n",
                 rep.model.name.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pathloss model calibration toolkit (Galerkin/QMM and SVD solvers)"};
  app.require_subcommand(1);

  auto* models = app.add_subcommand("models", "List the builtin model registry");

  CommonOpts opt;
  std::string method = "qmm";
  std::string out, profile_out;

  auto add_common = [&](CLI::App* sub, bool with_grg = true) {
    sub->add_option("--model", opt.model, "Builtin model name or model config file")->required();
    sub->add_option("--data", opt.data, "Measurement CSV (distance_m,pathloss_db)")->required();
    sub->add_option("--scenario", opt.scenario, "Scenario config (key = value)")->required();
    if (with_grg) {
      sub->add_option("--xi", opt.grg.xi, "GRG distinguishing coefficient")->capture_default_str();
      sub->add_option("--sigma", opt.grg.sigma, "GRG weight")->capture_default_str();
      sub->add_option("--beta", opt.grg.beta, "MAPE weight")->capture_default_str();
    }
  };

  auto* calibrate = app.add_subcommand("calibrate", "Fit model coefficients to measurements");
  add_common(calibrate);
  calibrate->add_option("--method", method, "qmm, svd or both")->capture_default_str();
  calibrate->add_option("--out", out, "Report JSON path");
  calibrate->add_option("--profile-out", profile_out, "Profile CSV path");

  auto* compare = app.add_subcommand("compare", "Calibrate with both solvers and diff them");
  add_common(compare);
  compare->add_option("--out", out, "Report JSON path (method suffix added)");
  compare->add_option("--profile-out", profile_out, "Profile CSV path");

  auto* decompose_cmd = app.add_subcommand("decompose", "Per-component contribution table");
  add_common(decompose_cmd, false);
  decompose_cmd->add_option("--method", method, "qmm or svd")->capture_default_str();
  decompose_cmd->add_option("--out", out, "Table CSV path");

  std::string coeffs_arg, distances_arg;
  double noise = 0.0;
  std::uint64_t seed = 0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic measurement fixture");
  synth->add_option("--model", opt.model, "Builtin model name or model config file")->required();
  synth->add_option("--coeffs", coeffs_arg, "Comma-separated true coefficients")->required();
  synth->add_option("--scenario", opt.scenario, "Scenario config")->required();
  synth->add_option("--distances", distances_arg, "Comma list or start:stop:count")->required();
  synth->add_option("--noise", noise, "Gaussian noise sigma (dB)")->capture_default_str();
  synth->add_option("--seed", seed, "RNG seed")->capture_default_str();
  synth->add_option("--out", out, "Output measurement CSV")->required();

  std::string report_path;
  auto* predict_cmd = app.add_subcommand("predict", "Predict from a saved report");
  predict_cmd->add_option("--report", report_path, "Report JSON from calibrate")->required();
  predict_cmd->add_option("--distances", distances_arg, "Comma list or start:stop:count")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (models->parsed()) return cmd_models();
    if (calibrate->parsed()) return cmd_calibrate(opt, method, out, profile_out);
    if (compare->parsed()) return cmd_compare(opt, out, profile_out);
    if (decompose_cmd->parsed()) return cmd_decompose(opt, method, out);
    if (synth->parsed()) return cmd_synth(opt.model, coeffs_arg, opt.scenario, distances_arg,
                                          noise, seed, out);
    if (predict_cmd->parsed()) return cmd_predict(report_path, distances_arg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qmmcal: %s\n", e.what());
    return 1;
  }
  return 0;
}
