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

#ifndef QMMCAL_SCENARIO_HPP
#define QMMCAL_SCENARIO_HPP

#include <cmath>
#include <string>

#include "qmmcal/errors.hpp"

namespace qmmcal {

/// Physical context of a radio link. All values are SI-based (MHz and
/// meters); unit conversion into each model's native units happens inside
/// the basis-function factors.
struct Scenario {
  double frequency_mhz = 0.0;
  double tx_height_m = 0.0;
  double rx_height_m = 0.0;

  void validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(frequency_mhz))
      throw DomainError("scenario: frequency_mhz must be a positive real, got " +
                        std::to_string(frequency_mhz));
    if (!positive(tx_height_m))
      throw DomainError("scenario: tx_height_m must be a positive real, got " +
                        std::to_string(tx_height_m));
    if (!positive(rx_height_m))
      throw DomainError("scenario: rx_height_m must be a positive real, got " +
                        std::to_string(rx_height_m));
  }
};

}  // namespace qmmcal

#endif  // QMMCAL_SCENARIO_HPP
