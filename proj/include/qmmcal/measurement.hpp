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

#ifndef QMMCAL_MEASUREMENT_HPP
#define QMMCAL_MEASUREMENT_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qmmcal/errors.hpp"
#include "qmmcal/scenario.hpp"

namespace qmmcal {

struct Sample {
  double distance_m = 0.0;
  double pathloss_db = 0.0;
};

/// Ordered field measurements along one route. Row order defines the
/// 1-based sample index k that the ramp terms see.
struct MeasurementSet {
  std::vector<Sample> samples;
  Scenario scenario;

  std::size_t size() const { return samples.size(); }

  Eigen::VectorXd distances() const {
    Eigen::VectorXd d(static_cast<Eigen::Index>(samples.size()));
    for (Eigen::Index k = 0; k < d.size(); ++k)
      d(k) = samples[static_cast<std::size_t>(k)].distance_m;
    return d;
  }

  Eigen::VectorXd pathloss() const {
    Eigen::VectorXd p(static_cast<Eigen::Index>(samples.size()));
    for (Eigen::Index k = 0; k < p.size(); ++k)
      p(k) = samples[static_cast<std::size_t>(k)].pathloss_db;
    return p;
  }

  void validate() const {
    scenario.validate();
    if (samples.empty()) throw DomainError("measurement set: needs at least one sample");
    for (std::size_t k = 0; k < samples.size(); ++k) {
      if (!(samples[k].distance_m > 0.0) || !std::isfinite(samples[k].distance_m))
        throw DomainError("measurement set: non-positive distance at sample " +
                          std::to_string(k + 1));
      if (!std::isfinite(samples[k].pathloss_db))
        throw DomainError("measurement set: non-finite pathloss at sample " +
                          std::to_string(k + 1));
    }
  }
};

}  // namespace qmmcal

#endif  // QMMCAL_MEASUREMENT_HPP
