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

#ifndef QMMCAL_TEST_SUPPORT_HPP
#define QMMCAL_TEST_SUPPORT_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qmmcal/measurement.hpp"
#include "qmmcal/model.hpp"
#include "qmmcal/scenario.hpp"

namespace test_support {

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

/// Sorted log-uniform route distances in meters.
inline std::vector<double> random_route(std::mt19937_64& gen, int m, double lo_m = 50.0,
                                        double hi_m = 8000.0) {
  std::vector<double> d(static_cast<std::size_t>(m));
  for (auto& v : d) v = std::exp(uniform(gen, std::log(lo_m), std::log(hi_m)));
  std::sort(d.begin(), d.end());
  return d;
}

inline qmmcal::Scenario random_scenario(std::mt19937_64& gen) {
  return qmmcal::Scenario{uniform(gen, 700.0, 3500.0), uniform(gen, 15.0, 60.0),
                          uniform(gen, 1.0, 10.0)};
}

/// Random invertible recombination with a bounded condition number.
inline Eigen::MatrixXd random_invertible(std::mt19937_64& gen, int n, double max_cond = 100.0) {
  for (;;) {
    Eigen::MatrixXd r(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = uniform(gen, -1.0, 1.0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    const double smin = svd.singularValues()(n - 1);
    if (smin > 0.0 && svd.singularValues()(0) / smin <= max_cond) return r;
  }
}

inline std::filesystem::path unique_temp_dir(const std::string& tag) {
  static std::mt19937_64 gen(std::random_device{}());
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    auto p = base / ("qmmcal-" + tag + "-" + std::to_string(gen() & 0xffffff));
    if (std::filesystem::create_directories(p)) return p;
  }
}

}  // namespace test_support

#endif  // QMMCAL_TEST_SUPPORT_HPP
