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

#ifndef QMMCAL_CALIBRATION_HPP
#define QMMCAL_CALIBRATION_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qmmcal/errors.hpp"
#include "qmmcal/measurement.hpp"
#include "qmmcal/model.hpp"

// Calibration of a decomposed pathloss model against route measurements.
// Two solution paths are provided for the same least-squares problem:
//
//   solve_qmm  tests the prediction equation against the basis functions
//              themselves (Galerkin), assembles the Gram system
//              [Phi](A) = (P) with <f, g> = sum_k f(d_k) g(d_k), and
//              solves it by Cholesky factorization. Refuses numerically
//              singular systems.
//
//   solve_svd  computes the pseudoinverse solution from a singular value
//              decomposition of the design matrix, truncating singular
//              values below max(M, N) * eps * sigma_max. Rank deficiency
//              degrades to the minimum-norm solution with a warning.
//
// On a full-rank system both paths produce the same coefficients up to
// round-off; on a deficient one, both produce the same *predictions*
// (the projection of the measurements onto the basis span).

namespace qmmcal {

/// Condition estimates above 1/eps are reported as infinity and refused
/// by the QMM path.
inline constexpr double kSingularConditionLimit =
    1.0 / std::numeric_limits<double>::epsilon();

/// M x N matrix of basis functions evaluated along the measurement grid,
/// ramp terms included (entry(k, j) = phi_j at distance d_k, index k).
struct DesignMatrix {
  Eigen::MatrixXd entries;
  ModelSpec model;
  Scenario scenario;
};

inline DesignMatrix design_matrix(const ModelSpec& m, const MeasurementSet& data) {
  m.validate();
  data.validate();
  const auto rows = static_cast<Eigen::Index>(data.size());
  const auto cols = static_cast<Eigen::Index>(m.size());
  DesignMatrix d{Eigen::MatrixXd(rows, cols), m, data.scenario};
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double dist = data.samples[static_cast<std::size_t>(k)].distance_m;
    for (Eigen::Index j = 0; j < cols; ++j) {
      double v;
      try {
        v = eval_basis(m.basis[static_cast<std::size_t>(j)], dist, data.scenario,
                       static_cast<int>(k) + 1);
      } catch (const DomainError& e) {
        throw DomainError("design matrix entry (" + std::to_string(k + 1) + ", " +
                          std::to_string(j + 1) + "): " + e.what());
      }
      if (!std::isfinite(v))
        throw DomainError("design matrix entry (" + std::to_string(k + 1) + ", " +
                          std::to_string(j + 1) + ") is not finite");
      d.entries(k, j) = v;
    }
  }
  return d;
}

/// The Galerkin normal-equation system. `design` and `measured` are kept
/// alongside the Gram matrix so solvers can evaluate the true residual
/// and refine; a hand-built GramSystem may leave them empty.
struct GramSystem {
  Eigen::MatrixXd gram;        // N x N, symmetric PSD
  Eigen::VectorXd projection;  // N
  Eigen::MatrixXd design;      // M x N (optional context)
  Eigen::VectorXd measured;    // M     (optional context)
};

inline GramSystem gram_system(const DesignMatrix& d, const MeasurementSet& data) {
  const auto rows = static_cast<Eigen::Index>(data.size());
  if (d.entries.rows() != rows)
    throw std::invalid_argument("gram_system: design matrix rows do not match sample count");
  const Eigen::VectorXd p = data.pathloss();
  Eigen::MatrixXd gram = d.entries.transpose() * d.entries;
  gram = ((gram + gram.transpose()) / 2.0).eval();  // exact symmetry
  return GramSystem{std::move(gram), d.entries.transpose() * p, d.entries, p};
}

enum class Method { Qmm, Svd };

inline const char* method_name(Method m) { return m == Method::Qmm ? "qmm" : "svd"; }

struct CalibrationResult {
  Eigen::VectorXd coefficients;
  Method method = Method::Qmm;
  double residual_seminorm = 0.0;
  double condition_estimate = 0.0;
  Eigen::Index rank = 0;
  std::vector<std::string> warnings;
};

/// Ratio of the largest to the smallest singular value of the Gram
/// matrix; infinity when the system is numerically singular.
inline double condition_estimate(const GramSystem& g) {
  if (g.gram.rows() != g.gram.cols() || g.gram.rows() == 0)
    throw std::invalid_argument("condition_estimate: gram matrix must be square and non-empty");
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g.gram);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smax == 0.0) return inf;
  if (!(smin > 0.0)) return inf;
  const double cond = smax / smin;
  return cond > kSingularConditionLimit ? inf : cond;
}

namespace detail {

/// Lower Cholesky factor of a symmetric positive-definite matrix.
inline Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double diag = a(j, j) - lower.row(j).head(j).squaredNorm();
    if (!(diag > 0.0) || !std::isfinite(diag))
      throw SingularGramError(
          "gram matrix is not positive definite (pivot " + std::to_string(j + 1) +
          "); basis functions are linearly dependent over this grid");
    lower(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double s = lower.row(i).head(j).dot(lower.row(j).head(j));
      lower(i, j) = (a(i, j) - s) / lower(j, j);
    }
  }
  return lower;
}

inline Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& lower, const Eigen::VectorXd& b) {
  const Eigen::Index n = lower.rows();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i)
    y(i) = (b(i) - lower.row(i).head(i).dot(y.head(i))) / lower(i, i);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const Eigen::Index tail = n - i - 1;
    x(i) = (y(i) - lower.col(i).tail(tail).dot(x.tail(tail))) / lower(i, i);
  }
  return x;
}

}  // namespace detail

/// Galerkin-path calibration. Factorizes the Gram matrix and, when the
/// design matrix is available, applies two passes of design-side residual
/// refinement (corrected semi-normal equations), which recovers most of
/// the accuracy the normal equations lose on ill-conditioned systems.
/// Throws SingularGramError when the Gram condition exceeds 1/eps.
inline CalibrationResult solve_qmm(const GramSystem& g) {
  const Eigen::Index n = g.gram.rows();
  if (g.gram.cols() != n || g.projection.size() != n)
    throw std::invalid_argument("solve_qmm: inconsistent gram system shapes");
  if (g.design.rows() > 0 && (g.design.cols() != n || g.measured.size() != g.design.rows()))
    throw std::invalid_argument("solve_qmm: design context does not match the gram system");
  if (!g.gram.isApprox(g.gram.transpose()))
    throw std::invalid_argument("solve_qmm: gram matrix must be symmetric");

  const double cond = condition_estimate(g);
  if (!std::isfinite(cond))
    throw SingularGramError(
        "gram matrix is numerically singular (condition above 1/eps): "
        "basis functions are linearly dependent over this grid");

  const Eigen::MatrixXd lower = detail::cholesky_lower(g.gram);
  Eigen::VectorXd alpha = detail::cholesky_solve(lower, g.projection);

  CalibrationResult r;
  r.method = Method::Qmm;
  r.condition_estimate = cond;
  r.rank = n;
  if (g.design.rows() > 0) {
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd residual = g.measured - g.design * alpha;
      alpha += detail::cholesky_solve(lower, g.design.transpose() * residual);
    }
    r.residual_seminorm = (g.measured - g.design * alpha).norm();
  } else {
    r.residual_seminorm = std::numeric_limits<double>::quiet_NaN();
  }
  r.coefficients = std::move(alpha);
  return r;
}

/// Pseudoinverse-path calibration from a singular value decomposition of
/// the design matrix. Rank-deficient systems yield the minimum-norm
/// solution and a RankDeficient warning instead of an error.
inline CalibrationResult solve_svd(const DesignMatrix& d, const MeasurementSet& data) {
  const auto rows = static_cast<Eigen::Index>(data.size());
  if (d.entries.rows() != rows)
    throw std::invalid_argument("solve_svd: design matrix rows do not match sample count");
  const Eigen::Index n = d.entries.cols();
  const Eigen::VectorXd p = data.pathloss();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff =
      static_cast<double>(std::max(rows, n)) * std::numeric_limits<double>::epsilon() * smax;

  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd utp = svd.matrixU().transpose() * p;
  for (Eigen::Index i = 0; i < rank; ++i) alpha += (utp(i) / sv(i)) * svd.matrixV().col(i);

  CalibrationResult r;
  r.method = Method::Svd;
  r.rank = rank;
  const double smin = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
  if (rank < n || !(smin > 0.0)) {
    r.condition_estimate = std::numeric_limits<double>::infinity();
  } else {
    const double cond = (smax / smin) * (smax / smin);  // gram-equivalent scale
    r.condition_estimate = cond > kSingularConditionLimit
                               ? std::numeric_limits<double>::infinity()
                               : cond;
  }
  if (rank < n)
    r.warnings.push_back("RankDeficient: design matrix rank " + std::to_string(rank) +
                         " < " + std::to_string(n) + "; minimum-norm solution returned");
  r.residual_seminorm = (p - d.entries * alpha).norm();
  r.coefficients = std::move(alpha);
  return r;
}

/// Calibrated prediction at one distance. Without a sample index the ramp
/// terms contribute zero; `ramp_dropped`, when supplied, is set when that
/// suppression actually discarded a nonzero ramp.
inline double predict(const ModelSpec& m, const CalibrationResult& a, double distance_m,
                      const Scenario& s, std::optional<int> sample_index = std::nullopt,
                      bool* ramp_dropped = nullptr) {
  if (a.coefficients.size() != static_cast<Eigen::Index>(m.size()))
    throw std::invalid_argument("predict: coefficient count does not match basis count");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < a.coefficients.size(); ++j)
    acc += a.coefficients(j) *
           eval_basis(m.basis[static_cast<std::size_t>(j)], distance_m, s, sample_index);
  if (ramp_dropped) *ramp_dropped = !sample_index && has_ramp(m);
  return acc;
}

/// Predictions along the calibration grid itself (the grid supplies the
/// sample indices, so ramp terms participate).
inline Eigen::VectorXd predict_grid(const ModelSpec& m, const CalibrationResult& a,
                                    const MeasurementSet& data) {
  data.validate();
  Eigen::VectorXd out(static_cast<Eigen::Index>(data.size()));
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out(k) = predict(m, a, data.samples[static_cast<std::size_t>(k)].distance_m, data.scenario,
                     static_cast<int>(k) + 1);
  return out;
}

/// Euclidean norm of measured-minus-predicted over the route.
inline double residual_seminorm(const MeasurementSet& data, const Eigen::VectorXd& predictions) {
  if (predictions.size() != static_cast<Eigen::Index>(data.size()))
    throw std::invalid_argument("residual_seminorm: prediction count does not match sample count");
  return (data.pathloss() - predictions).norm();
}

/// Per-sample, per-component split of the calibrated prediction.
/// percent(k, j) = 100 * contribution(k, j) / net(k); rows whose net
/// prediction is within tolerance of zero keep their dB contributions but
/// get NaN percentages and a DegenerateNet warning.
struct Decomposition {
  Eigen::VectorXd distances;         // M
  Eigen::VectorXd net;               // M
  Eigen::MatrixXd contributions_db;  // M x N
  Eigen::MatrixXd percent;           // M x N, NaN on degenerate rows
  std::vector<int> degenerate_samples;  // 1-based indices
  std::vector<std::string> warnings;
};

inline Decomposition decompose(const ModelSpec& m, const CalibrationResult& a,
                               const MeasurementSet& data) {
  if (a.coefficients.size() != static_cast<Eigen::Index>(m.size()))
    throw std::invalid_argument("decompose: coefficient count does not match basis count");
  data.validate();
  const auto rows = static_cast<Eigen::Index>(data.size());
  const auto cols = static_cast<Eigen::Index>(m.size());

  Decomposition out;
  out.distances = data.distances();
  out.net = Eigen::VectorXd::Zero(rows);
  out.contributions_db.resize(rows, cols);
  out.percent.resize(rows, cols);

  for (Eigen::Index k = 0; k < rows; ++k) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      out.contributions_db(k, j) =
          a.coefficients(j) * eval_basis(m.basis[static_cast<std::size_t>(j)],
                                         data.samples[static_cast<std::size_t>(k)].distance_m,
                                         data.scenario, static_cast<int>(k) + 1);
      out.net(k) += out.contributions_db(k, j);
    }
    const double scale = std::max(1.0, out.contributions_db.row(k).cwiseAbs().maxCoeff());
    if (std::abs(out.net(k)) < 1e-9 * scale) {
      out.degenerate_samples.push_back(static_cast<int>(k) + 1);
      out.percent.row(k).setConstant(std::numeric_limits<double>::quiet_NaN());
    } else {
      out.percent.row(k) = 100.0 * out.contributions_db.row(k) / out.net(k);
    }
  }
  if (!out.degenerate_samples.empty()) {
    std::string w = "DegenerateNet: net prediction within tolerance of zero at sample(s)";
    for (int k : out.degenerate_samples) w += " " + std::to_string(k);
    w += "; percentages omitted there";
    out.warnings.push_back(std::move(w));
  }
  return out;
}

}  // namespace qmmcal

#endif  // QMMCAL_CALIBRATION_HPP
