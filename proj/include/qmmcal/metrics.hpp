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

#ifndef QMMCAL_METRICS_HPP
#define QMMCAL_METRICS_HPP

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "qmmcal/errors.hpp"

// Prediction-quality metrics over measured/predicted pathloss pairs.
// Error sign convention throughout: error = measured - predicted.

namespace qmmcal {

/// Weights of the grey-relational score. xi is the distinguishing
/// coefficient of the relational coefficient; sigma and beta blend the
/// grade with the MAPE complement.
struct GrgConfig {
  double xi = 0.5;
  double sigma = 0.1;
  double beta = 0.9;

  void validate() const {
    if (!(xi >= 0.0 && xi <= 1.0))
      throw DomainError("grg config: xi must lie in [0, 1], got " + std::to_string(xi));
    if (!(sigma >= 0.0) || !(beta >= 0.0))
      throw DomainError("grg config: sigma and beta must be non-negative");
  }
};

struct GrgReport {
  Eigen::VectorXd normalized_mea;  // max-referenced unit-interval sequence
  Eigen::VectorXd normalized_pre;
  Eigen::VectorXd deviation;  // |normalized_mea - normalized_pre|
  Eigen::VectorXd zeta;       // grey relational coefficients
  double rho_grg = 0.0;       // mean of zeta
  double mean_abs_pct_err = 0.0;
  double rho_mape = 0.0;      // 1 - mean_abs_pct_err, unclamped
  double rho_grg_mape = 0.0;  // |sigma*rho_grg + beta*rho_mape|
};

namespace detail {

inline void check_pair(const Eigen::VectorXd& mea, const Eigen::VectorXd& pre,
                       const char* who) {
  if (mea.size() != pre.size())
    throw std::invalid_argument(std::string(who) + ": vector lengths differ");
  if (mea.size() == 0) throw std::invalid_argument(std::string(who) + ": empty input");
}

}  // namespace detail

/// Mean prediction error (dB), mean of (measured - predicted).
inline double mpe(const Eigen::VectorXd& mea, const Eigen::VectorXd& pre) {
  detail::check_pair(mea, pre, "mpe");
  return (mea - pre).mean();
}

/// Root mean square prediction error (dB). Equals the residual seminorm
/// divided by sqrt(M).
inline double rmse(const Eigen::VectorXd& mea, const Eigen::VectorXd& pre) {
  detail::check_pair(mea, pre, "rmse");
  return std::sqrt((mea - pre).squaredNorm() / static_cast<double>(mea.size()));
}

/// Grey Relational Grade blended with MAPE.
///
/// Pipeline: max-referenced normalization of both sequences, deviation
/// sequence, relational coefficients zeta(k) damped by xi, grade rho_GRG
/// as their mean, then rho_MAPE = 1 - mean(|mea - pre| / mea) and the
/// blend |sigma * rho_GRG + beta * rho_MAPE|.
///
/// A sequence whose max equals its min cannot be normalized; that raises
/// DegenerateRangeError unless both sequences are identical, which is
/// scored as a perfect match (zeta identically 1).
inline GrgReport grg_mape(const Eigen::VectorXd& mea, const Eigen::VectorXd& pre,
                          const GrgConfig& cfg = {}) {
  cfg.validate();
  detail::check_pair(mea, pre, "grg_mape");
  const Eigen::Index m = mea.size();
  if (m < 2) throw std::invalid_argument("grg_mape: needs at least two samples");
  for (Eigen::Index k = 0; k < m; ++k)
    if (mea(k) == 0.0)
      throw ZeroMeasurementError("grg_mape: measured pathloss is zero at sample " +
                                 std::to_string(k + 1));

  GrgReport rep;
  const bool mea_flat = mea.maxCoeff() == mea.minCoeff();
  const bool pre_flat = pre.maxCoeff() == pre.minCoeff();
  if (mea_flat || pre_flat) {
    if (mea_flat && pre_flat && mea == pre) {
      rep.normalized_mea = Eigen::VectorXd::Zero(m);
      rep.normalized_pre = Eigen::VectorXd::Zero(m);
      rep.deviation = Eigen::VectorXd::Zero(m);
      rep.zeta = Eigen::VectorXd::Ones(m);
      rep.rho_grg = 1.0;
      rep.mean_abs_pct_err = 0.0;
      rep.rho_mape = 1.0;
      rep.rho_grg_mape = std::abs(cfg.sigma + cfg.beta);
      return rep;
    }
    throw DegenerateRangeError(
        "grg_mape: max equals min in the " +
        std::string(mea_flat ? "measured" : "predicted") +
        " sequence; normalization is undefined");
  }

  const double mea_max = mea.maxCoeff(), mea_min = mea.minCoeff();
  const double pre_max = pre.maxCoeff(), pre_min = pre.minCoeff();
  rep.normalized_mea = (mea_max - mea.array()) / (mea_max - mea_min);
  rep.normalized_pre = (pre_max - pre.array()) / (pre_max - pre_min);
  rep.deviation = (rep.normalized_mea - rep.normalized_pre).cwiseAbs();

  const double dev_min = rep.deviation.minCoeff();
  const double dev_max = rep.deviation.maxCoeff();
  rep.zeta.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double denom = rep.deviation(k) + cfg.xi * dev_max;
    rep.zeta(k) = denom == 0.0 ? 1.0 : (dev_min + cfg.xi * dev_max) / denom;
  }
  rep.rho_grg = rep.zeta.mean();

  rep.mean_abs_pct_err = ((mea - pre).cwiseAbs().array() / mea.array()).mean();
  rep.rho_mape = 1.0 - rep.mean_abs_pct_err;
  rep.rho_grg_mape = std::abs(cfg.sigma * rep.rho_grg + cfg.beta * rep.rho_mape);
  return rep;
}

}  // namespace qmmcal

#endif  // QMMCAL_METRICS_HPP
