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

#ifndef QMMCAL_DATAIO_HPP
#define QMMCAL_DATAIO_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qmmcal/calibration.hpp"
#include "qmmcal/measurement.hpp"
#include "qmmcal/metrics.hpp"
#include "qmmcal/model_io.hpp"

// File surfaces of the toolkit:
//   measurements  CSV, header "distance_m,pathloss_db", UTF-8, decimal
//                 point, no thousands separators; row order defines the
//                 sample index.
//   scenario      key = value text with frequency_mhz, tx_height_m,
//                 rx_height_m (all required, positive).
//   model config  JSON (see model_io.hpp).
//   report        nested JSON; numeric fields round-trip bit-exactly.
//   profile       CSV, one prediction column per calibrated model/method,
//                 directly plottable.

namespace qmmcal {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Gaussian deviates by the Box-Muller transform over std::mt19937_64;
/// fixtures generated from a seed are byte-identical across toolchains.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open(gen_);
    const double u2 = uniform_open(gen_);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  // 53-bit mantissa draw mapped to (0, 1], so log() stays finite.
  static double uniform_open(std::mt19937_64& g) {
    return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;
  }

  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario config '" + path.string() + "'");
  bool have_f = false, have_hte = false, have_hre = false;
  Scenario s;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = detail::trim(line);
    if (sv.empty() || sv.front() == '#') continue;
    const auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("'" + path.string() + "' line " + std::to_string(line_no) +
                       ": expected 'key = value'");
    const std::string_view key = detail::trim(sv.substr(0, eq));
    double* target = nullptr;
    bool* flag = nullptr;
    if (key == "frequency_mhz") {
      target = &s.frequency_mhz;
      flag = &have_f;
    } else if (key == "tx_height_m") {
      target = &s.tx_height_m;
      flag = &have_hte;
    } else if (key == "rx_height_m") {
      target = &s.rx_height_m;
      flag = &have_hre;
    } else {
      continue;  // unknown keys are ignored
    }
    if (!detail::parse_double(sv.substr(eq + 1), *target))
      throw ParseError("'" + path.string() + "' line " + std::to_string(line_no) +
                       ": non-numeric value for '" + std::string(key) + "'");
    *flag = true;
  }
  if (!have_f) throw ParseError("'" + path.string() + "': missing key frequency_mhz");
  if (!have_hte) throw ParseError("'" + path.string() + "': missing key tx_height_m");
  if (!have_hre) throw ParseError("'" + path.string() + "': missing key rx_height_m");
  s.validate();
  return s;
}

inline void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  s.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "frequency_mhz = " << detail::fmt_double(s.frequency_mhz) << '\n'
      << "tx_height_m = " << detail::fmt_double(s.tx_height_m) << '\n'
      << "rx_height_m = " << detail::fmt_double(s.rx_height_m) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline constexpr const char* kMeasurementHeader = "distance_m,pathloss_db";

inline MeasurementSet load_measurements(const std::filesystem::path& csv_path,
                                        const std::filesystem::path& scenario_path) {
  MeasurementSet set;
  set.scenario = load_scenario(scenario_path);

  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open measurement file '" + csv_path.string() + "'");
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("'" + csv_path.string() + "': empty file, expected header '" +
                     std::string(kMeasurementHeader) + "'");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
  if (detail::trim(line) != kMeasurementHeader)
    throw ParseError("'" + csv_path.string() + "': missing column header, expected '" +
                     std::string(kMeasurementHeader) + "'");

  int row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    ++row;
    const std::string_view sv = detail::trim(line);
    const auto comma = sv.find(',');
    if (comma == std::string_view::npos || sv.find(',', comma + 1) != std::string_view::npos)
      throw ParseError("'" + csv_path.string() + "' row " + std::to_string(row) +
                       ": expected exactly two columns");
    Sample sample;
    if (!detail::parse_double(sv.substr(0, comma), sample.distance_m))
      throw ParseError("'" + csv_path.string() + "' row " + std::to_string(row) +
                       ": non-numeric distance_m cell");
    if (!detail::parse_double(sv.substr(comma + 1), sample.pathloss_db))
      throw ParseError("'" + csv_path.string() + "' row " + std::to_string(row) +
                       ": non-numeric pathloss_db cell");
    if (!(sample.distance_m > 0.0))
      throw ParseError("'" + csv_path.string() + "' row " + std::to_string(row) +
                       ": non-positive distance " + detail::fmt_double(sample.distance_m));
    set.samples.push_back(sample);
  }
  set.validate();
  return set;
}

inline void save_measurements(const MeasurementSet& set, const std::filesystem::path& path) {
  set.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << kMeasurementHeader << '\n';
  for (const auto& s : set.samples)
    out << detail::fmt_double(s.distance_m) << ',' << detail::fmt_double(s.pathloss_db) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

/// Synthetic route: P(d_k) = sum_j coeffs_j * phi_j(d_k, k) plus seeded
/// Gaussian noise. Pure function of its arguments.
inline MeasurementSet synth_generate(const ModelSpec& m, const Eigen::VectorXd& true_coeffs,
                                     const Scenario& scenario,
                                     const std::vector<double>& distances_m, double noise_sd,
                                     std::uint64_t seed) {
  m.validate();
  scenario.validate();
  if (distances_m.empty()) throw DomainError("synth_generate: empty distance grid");
  if (true_coeffs.size() != static_cast<Eigen::Index>(m.size()))
    throw DomainError("synth_generate: coefficient count does not match basis count");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd))
    throw DomainError("synth_generate: noise_sd must be non-negative");

  detail::GaussianSampler gauss(seed);
  MeasurementSet set;
  set.scenario = scenario;
  set.samples.reserve(distances_m.size());
  for (std::size_t k = 0; k < distances_m.size(); ++k) {
    double p = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j)
      p += true_coeffs(static_cast<Eigen::Index>(j)) *
           eval_basis(m.basis[j], distances_m[k], scenario, static_cast<int>(k) + 1);
    if (noise_sd > 0.0) p += noise_sd * gauss();
    set.samples.push_back(Sample{distances_m[k], p});
  }
  set.validate();
  return set;
}

// ---------------------------------------------------------------------------
// Calibration report
// ---------------------------------------------------------------------------

struct MetricsBlock {
  double mpe_db = 0.0;
  double rmse_db = 0.0;
  GrgConfig grg_config;
  GrgReport grg;
};

/// Everything one calibration run produced, in a form that survives a
/// save/load round trip bit-exactly.
struct CalibrationReport {
  ModelSpec model;
  Scenario scenario;
  CalibrationResult result;
  MetricsBlock metrics;
  Eigen::VectorXd distances;        // M
  Eigen::VectorXd measured;         // M
  Eigen::VectorXd predicted;        // M
  Eigen::MatrixXd components_db;    // M x N
  Eigen::MatrixXd components_pct;   // M x N, NaN on degenerate-net rows
  std::vector<std::string> warnings;  // solver + decomposition warnings
};

inline CalibrationReport make_report(const ModelSpec& m, const MeasurementSet& data,
                                     const CalibrationResult& result,
                                     const GrgConfig& grg_cfg = {}) {
  CalibrationReport rep;
  rep.model = m;
  rep.scenario = data.scenario;
  rep.result = result;
  rep.distances = data.distances();
  rep.measured = data.pathloss();
  rep.predicted = predict_grid(m, result, data);

  rep.metrics.mpe_db = mpe(rep.measured, rep.predicted);
  rep.metrics.rmse_db = rmse(rep.measured, rep.predicted);
  rep.metrics.grg_config = grg_cfg;
  rep.metrics.grg = grg_mape(rep.measured, rep.predicted, grg_cfg);

  const Decomposition dec = decompose(m, result, data);
  rep.components_db = dec.contributions_db;
  rep.components_pct = dec.percent;
  rep.warnings = result.warnings;
  rep.warnings.insert(rep.warnings.end(), dec.warnings.begin(), dec.warnings.end());
  return rep;
}

namespace detail {

inline nlohmann::json num_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double num_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  throw ParseError("report: unrecognized numeric value '" + s + "'");
}

inline nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num_to_json(v(i)));
  return a;
}

inline Eigen::VectorXd vec_from_json(const nlohmann::json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  Eigen::Index i = 0;
  for (const auto& e : a) v(i++) = num_from_json(e);
  return v;
}

}  // namespace detail

inline nlohmann::json report_to_json(const CalibrationReport& rep) {
  using detail::num_to_json;
  using detail::vec_to_json;
  nlohmann::json j;
  j["model"] = model_to_json(rep.model);
  j["scenario"] = {{"frequency_mhz", rep.scenario.frequency_mhz},
                   {"tx_height_m", rep.scenario.tx_height_m},
                   {"rx_height_m", rep.scenario.rx_height_m}};
  j["method"] = method_name(rep.result.method);
  j["coefficients"] = vec_to_json(rep.result.coefficients);
  j["residual_seminorm"] = num_to_json(rep.result.residual_seminorm);
  j["condition_estimate"] = num_to_json(rep.result.condition_estimate);
  j["rank"] = rep.result.rank;
  j["warnings"] = rep.warnings;
  j["metrics"] = {{"mpe_db", num_to_json(rep.metrics.mpe_db)},
                  {"rmse_db", num_to_json(rep.metrics.rmse_db)},
                  {"grg",
                   {{"xi", rep.metrics.grg_config.xi},
                    {"sigma", rep.metrics.grg_config.sigma},
                    {"beta", rep.metrics.grg_config.beta},
                    {"normalized_mea", vec_to_json(rep.metrics.grg.normalized_mea)},
                    {"normalized_pre", vec_to_json(rep.metrics.grg.normalized_pre)},
                    {"deviation", vec_to_json(rep.metrics.grg.deviation)},
                    {"zeta", vec_to_json(rep.metrics.grg.zeta)},
                    {"rho_grg", num_to_json(rep.metrics.grg.rho_grg)},
                    {"mean_abs_pct_err", num_to_json(rep.metrics.grg.mean_abs_pct_err)},
                    {"rho_mape", num_to_json(rep.metrics.grg.rho_mape)},
                    {"rho_grg_mape", num_to_json(rep.metrics.grg.rho_grg_mape)}}}};
  j["samples"] = nlohmann::json::array();
  for (Eigen::Index k = 0; k < rep.distances.size(); ++k) {
    nlohmann::json row;
    row["distance_m"] = num_to_json(rep.distances(k));
    row["measured_db"] = num_to_json(rep.measured(k));
    row["predicted_db"] = num_to_json(rep.predicted(k));
    row["components_db"] = vec_to_json(rep.components_db.row(k));
    row["components_pct"] = vec_to_json(rep.components_pct.row(k));
    j["samples"].push_back(std::move(row));
  }
  return j;
}

inline CalibrationReport report_from_json(const nlohmann::json& j) {
  using detail::num_from_json;
  using detail::vec_from_json;
  CalibrationReport rep;
  try {
    rep.model = model_from_json(j.at("model"));
    rep.scenario.frequency_mhz = j.at("scenario").at("frequency_mhz").get<double>();
    rep.scenario.tx_height_m = j.at("scenario").at("tx_height_m").get<double>();
    rep.scenario.rx_height_m = j.at("scenario").at("rx_height_m").get<double>();
    const auto method = j.at("method").get<std::string>();
    if (method == "qmm") {
      rep.result.method = Method::Qmm;
    } else if (method == "svd") {
      rep.result.method = Method::Svd;
    } else {
      throw ParseError("report: unknown method '" + method + "'");
    }
    rep.result.coefficients = vec_from_json(j.at("coefficients"));
    rep.result.residual_seminorm = num_from_json(j.at("residual_seminorm"));
    rep.result.condition_estimate = num_from_json(j.at("condition_estimate"));
    rep.result.rank = j.at("rank").get<Eigen::Index>();
    rep.warnings = j.at("warnings").get<std::vector<std::string>>();
    rep.result.warnings = rep.warnings;
    const auto& jm = j.at("metrics");
    rep.metrics.mpe_db = num_from_json(jm.at("mpe_db"));
    rep.metrics.rmse_db = num_from_json(jm.at("rmse_db"));
    const auto& jg = jm.at("grg");
    rep.metrics.grg_config.xi = jg.at("xi").get<double>();
    rep.metrics.grg_config.sigma = jg.at("sigma").get<double>();
    rep.metrics.grg_config.beta = jg.at("beta").get<double>();
    rep.metrics.grg.normalized_mea = vec_from_json(jg.at("normalized_mea"));
    rep.metrics.grg.normalized_pre = vec_from_json(jg.at("normalized_pre"));
    rep.metrics.grg.deviation = vec_from_json(jg.at("deviation"));
    rep.metrics.grg.zeta = vec_from_json(jg.at("zeta"));
    rep.metrics.grg.rho_grg = num_from_json(jg.at("rho_grg"));
    rep.metrics.grg.mean_abs_pct_err = num_from_json(jg.at("mean_abs_pct_err"));
    rep.metrics.grg.rho_mape = num_from_json(jg.at("rho_mape"));
    rep.metrics.grg.rho_grg_mape = num_from_json(jg.at("rho_grg_mape"));

    const auto& rows = j.at("samples");
    const auto m = static_cast<Eigen::Index>(rows.size());
    const auto n = static_cast<Eigen::Index>(rep.model.size());
    rep.distances.resize(m);
    rep.measured.resize(m);
    rep.predicted.resize(m);
    rep.components_db.resize(m, n);
    rep.components_pct.resize(m, n);
    Eigen::Index k = 0;
    for (const auto& row : rows) {
      rep.distances(k) = num_from_json(row.at("distance_m"));
      rep.measured(k) = num_from_json(row.at("measured_db"));
      rep.predicted(k) = num_from_json(row.at("predicted_db"));
      rep.components_db.row(k) = vec_from_json(row.at("components_db"));
      rep.components_pct.row(k) = vec_from_json(row.at("components_pct"));
      ++k;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return rep;
}

inline void save_report(const CalibrationReport& rep, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << report_to_json(rep).dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline CalibrationReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
  return report_from_json(j);
}

// ---------------------------------------------------------------------------
// Profile (plottable side-by-side predictions)
// ---------------------------------------------------------------------------

/// Writes distance, measured and one column per calibrated model/method.
inline void emit_profile(const MeasurementSet& data,
                         const std::vector<std::pair<std::string, Eigen::VectorXd>>& predictions,
                         const std::filesystem::path& path) {
  data.validate();
  const auto rows = static_cast<Eigen::Index>(data.size());
  for (const auto& [label, values] : predictions)
    if (values.size() != rows)
      throw std::invalid_argument("emit_profile: column '" + label +
                                  "' length does not match sample count");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "distance_m,measured_db";
  for (const auto& [label, values] : predictions) {
    std::string clean = label;
    for (auto& c : clean)
      if (c == ',') c = ';';
    out << ',' << clean;
  }
  out << '\n';
  for (Eigen::Index k = 0; k < rows; ++k) {
    out << detail::fmt_double(data.samples[static_cast<std::size_t>(k)].distance_m) << ','
        << detail::fmt_double(data.samples[static_cast<std::size_t>(k)].pathloss_db);
    for (const auto& [label, values] : predictions) out << ',' << detail::fmt_double(values(k));
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace qmmcal

#endif  // QMMCAL_DATAIO_HPP
