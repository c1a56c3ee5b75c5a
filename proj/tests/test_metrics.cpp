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

#include <catch2/catch.hpp>

#include "qmmcal/calibration.hpp"
#include "qmmcal/dataio.hpp"
#include "qmmcal/metrics.hpp"
#include "qmmcal/registry.hpp"

#include "test_support.hpp"

using namespace qmmcal;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("mpe is the signed mean of measured minus predicted") {
  const auto m = vec({100.0, 110.0, 120.0});
  CHECK(mpe(m, m) == 0.0);
  CHECK(mpe(m, vec({102.0, 112.0, 122.0})) == Approx(-2.0).epsilon(1e-14));
  CHECK_THROWS_AS(mpe(m, vec({1.0, 2.0})), std::invalid_argument);
  CHECK_THROWS_AS(mpe(Eigen::VectorXd(), Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("mpe of a fit that includes a constant basis is zero") {
  std::mt19937_64 gen(606);
  const ModelSpec m = find_builtin("itur-alt");
  const auto route = test_support::random_route(gen, 30);
  const auto data = synth_generate(m, Eigen::VectorXd::Ones(3),
                                   Scenario{2600.0, 30.0, 1.5}, route, 4.0, gen());
  const auto d = design_matrix(m, data);
  for (const auto& r : {solve_qmm(gram_system(d, data)), solve_svd(d, data)})
    CHECK(std::abs(mpe(data.pathloss(), predict_grid(m, r, data))) <= 1e-9);
}

TEST_CASE("rmse is the root mean square error") {
  const auto m = vec({100.0, 110.0});
  CHECK(rmse(m, m) == 0.0);
  CHECK(rmse(vec({3.0, 0.0}), vec({0.0, 4.0})) == Approx(std::sqrt(12.5)).epsilon(1e-14));
}

TEST_CASE("rmse times sqrt(M) equals the residual seminorm") {
  std::mt19937_64 gen(321);
  MeasurementSet data;
  data.scenario = Scenario{1800.0, 25.0, 1.5};
  Eigen::VectorXd pred(17);
  for (int k = 0; k < 17; ++k) {
    data.samples.push_back(Sample{50.0 + k, test_support::uniform(gen, 80.0, 140.0)});
    pred(k) = test_support::uniform(gen, 80.0, 140.0);
  }
  const double lhs = rmse(data.pathloss(), pred) * std::sqrt(17.0);
  const double rhs = residual_seminorm(data, pred);
  CHECK(lhs == Approx(rhs).epsilon(1e-12));
}

TEST_CASE("grg_mape reproduces the worked fixture") {
  const auto mea = vec({100.0, 110.0, 120.0});
  const auto pre = vec({100.0, 112.0, 120.0});
  const auto rep = grg_mape(mea, pre);

  CHECK(rep.deviation(0) == Approx(0.0).margin(1e-15));
  CHECK(rep.deviation(1) == Approx(0.1).epsilon(1e-12));
  CHECK(rep.deviation(2) == Approx(0.0).margin(1e-15));
  CHECK(rep.zeta(0) == Approx(1.0).margin(1e-15));
  CHECK(rep.zeta(1) == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(rep.zeta(2) == Approx(1.0).margin(1e-15));
  CHECK(rep.rho_grg == Approx(7.0 / 9.0).epsilon(1e-12));
  CHECK(rep.mean_abs_pct_err == Approx((2.0 / 110.0) / 3.0).epsilon(1e-12));
  CHECK(rep.rho_mape == Approx(1.0 - (2.0 / 110.0) / 3.0).epsilon(1e-12));
  CHECK(rep.rho_grg_mape ==
        Approx(0.1 * (7.0 / 9.0) + 0.9 * (1.0 - (2.0 / 110.0) / 3.0)).margin(1e-9));
  // decimal expansion of the same value
  CHECK(rep.rho_mape == Approx(0.9939393939393939).epsilon(1e-12));
  CHECK(rep.rho_grg_mape == Approx(0.9723232323232323).margin(1e-9));
}

TEST_CASE("perfect prediction scores exactly sigma + beta") {
  const auto mea = vec({95.0, 104.0, 131.0, 118.0});
  const auto rep = grg_mape(mea, mea);
  CHECK(rep.rho_grg == 1.0);
  CHECK(rep.rho_mape == 1.0);
  CHECK(rep.rho_grg_mape == 1.0);  // 0.1 + 0.9 rounds to exactly one

  GrgConfig cfg;
  cfg.sigma = 0.25;
  cfg.beta = 0.5;
  CHECK(grg_mape(mea, mea, cfg).rho_grg_mape == 0.25 + 0.5);
}

TEST_CASE("zeta stays inside [xi/(1+xi), 1] when the deviation floor is zero") {
  const auto mea = vec({100.0, 110.0, 120.0, 130.0});
  const auto pre = vec({100.0, 113.0, 117.0, 130.0});
  const auto rep = grg_mape(mea, pre);
  REQUIRE(rep.deviation.minCoeff() == 0.0);
  const double lo = 0.5 / 1.5;
  for (Eigen::Index k = 0; k < rep.zeta.size(); ++k) {
    CHECK(rep.zeta(k) >= lo - 1e-12);
    CHECK(rep.zeta(k) <= 1.0 + 1e-12);
  }
  // the sample carrying the max deviation sits exactly on the floor
  Eigen::Index argmax = 0;
  rep.deviation.maxCoeff(&argmax);
  CHECK(rep.zeta(argmax) == Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("rho_grg is invariant under a common affine rescaling") {
  std::mt19937_64 gen(4242);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd mea(12), pre(12);
    for (int k = 0; k < 12; ++k) {
      mea(k) = test_support::uniform(gen, 90.0, 150.0);
      pre(k) = mea(k) + test_support::uniform(gen, -8.0, 8.0);
    }
    const double a = test_support::uniform(gen, 1.0, 40.0);
    const double b = test_support::uniform(gen, 0.1, 5.0);
    const auto base = grg_mape(mea, pre);
    const auto moved = grg_mape((a + b * mea.array()).matrix(), (a + b * pre.array()).matrix());
    CHECK(moved.rho_grg == Approx(base.rho_grg).epsilon(1e-10));
    // rho_mape is *not* scale invariant; the raw measured values divide it
    CHECK(moved.rho_mape != Approx(base.rho_mape).epsilon(1e-12));
  }
}

TEST_CASE("inflating deviations away from the extremes never raises the grade") {
  // mea fixed; pre moves its two middle samples further from the measured
  // shape while the min (exact) and max deviation samples stay put.
  const auto mea = vec({100.0, 110.0, 120.0, 130.0, 140.0});
  double prev = 2.0;
  for (double bump : {0.0, 0.4, 0.8, 1.2, 1.6}) {
    const auto pre = vec({100.0, 112.0 + bump, 122.0 + bump, 136.0, 140.0});
    const auto rep = grg_mape(mea, pre);
    CHECK(rep.rho_grg <= prev + 1e-12);
    prev = rep.rho_grg;
  }
}

TEST_CASE("grg-mape stays in (0, 1] whenever rho_mape is non-negative") {
  std::mt19937_64 gen(515);
  int checked = 0;
  while (checked < 30) {
    Eigen::VectorXd mea(10), pre(10);
    for (int k = 0; k < 10; ++k) {
      mea(k) = test_support::uniform(gen, 60.0, 160.0);
      pre(k) = test_support::uniform(gen, 60.0, 160.0);
    }
    const auto rep = grg_mape(mea, pre);
    if (rep.rho_mape < 0.0) continue;
    ++checked;
    CHECK(rep.rho_grg_mape > 0.0);
    CHECK(rep.rho_grg_mape <= 1.0 + 1e-12);
  }
}

TEST_CASE("rho_mape may go negative and is reported unclamped") {
  const auto mea = vec({1.0, 2.0, 3.0});
  const auto pre = vec({10.0, -10.0, 12.0});
  const auto rep = grg_mape(mea, pre);
  CHECK(rep.rho_mape < 0.0);
  CHECK(rep.rho_grg_mape == std::abs(0.1 * rep.rho_grg + 0.9 * rep.rho_mape));
}

TEST_CASE("grg_mape rejects degenerate and invalid inputs") {
  CHECK_THROWS_AS(grg_mape(vec({1.0, 2.0}), vec({1.0})), std::invalid_argument);
  CHECK_THROWS_AS(grg_mape(vec({1.0}), vec({1.0})), std::invalid_argument);
  CHECK_THROWS_AS(grg_mape(vec({0.0, 2.0, 3.0}), vec({1.0, 2.0, 3.0})), ZeroMeasurementError);
  // flat predicted sequence, non-flat measured: normalization undefined
  CHECK_THROWS_AS(grg_mape(vec({100.0, 110.0, 120.0}), vec({5.0, 5.0, 5.0})),
                  DegenerateRangeError);
  CHECK_THROWS_AS(grg_mape(vec({5.0, 5.0, 5.0}), vec({100.0, 110.0, 120.0})),
                  DegenerateRangeError);
  // both flat but unequal is still degenerate
  CHECK_THROWS_AS(grg_mape(vec({5.0, 5.0, 5.0}), vec({7.0, 7.0, 7.0})), DegenerateRangeError);
  // both flat and identical scores as a perfect match
  const auto rep = grg_mape(vec({5.0, 5.0, 5.0}), vec({5.0, 5.0, 5.0}));
  CHECK(rep.rho_grg == 1.0);
  CHECK(rep.rho_grg_mape == 1.0);

  GrgConfig bad;
  bad.xi = 1.5;
  CHECK_THROWS_AS(grg_mape(vec({1.0, 2.0}), vec({1.0, 2.0}), bad), DomainError);
}
