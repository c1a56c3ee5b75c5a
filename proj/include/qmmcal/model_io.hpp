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

#ifndef QMMCAL_MODEL_IO_HPP
#define QMMCAL_MODEL_IO_HPP

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qmmcal/model.hpp"

// Model config format: JSON with one object per model,
//
//   {
//     "name": "lee", "variant": "nominal",
//     "units": {"distance": "km", "frequency": "MHz", ...},
//     "basis": [
//       {"label": "base-const", "ramp_slope": 0.0,
//        "monomials": [{"coefficient": 124.0, "factors": []}]},
//       {"label": "dist", "ramp_slope": 0.0,
//        "monomials": [{"coefficient": 30.5,
//                       "factors": [{"primitive": "log10_d", "power": 1,
//                                    "scale": 0.001, "reference": 1.6}]}]}, ...
//     ]
//   }
//
// Every builtin model round-trips through this format byte-stably.

namespace qmmcal {

inline nlohmann::json model_to_json(const ModelSpec& m) {
  nlohmann::json j;
  j["name"] = m.name;
  j["variant"] = variant_name(m.variant);
  j["units"] = {{"distance", m.units.distance},
                {"frequency", m.units.frequency},
                {"tx_height", m.units.tx_height},
                {"rx_height", m.units.rx_height}};
  j["basis"] = nlohmann::json::array();
  for (const auto& b : m.basis) {
    nlohmann::json jb;
    jb["label"] = b.label;
    jb["ramp_slope"] = b.ramp_slope;
    jb["monomials"] = nlohmann::json::array();
    for (const auto& mono : b.monomials) {
      nlohmann::json jm;
      jm["coefficient"] = mono.coefficient;
      jm["factors"] = nlohmann::json::array();
      for (const auto& f : mono.factors) {
        jm["factors"].push_back({{"primitive", primitive_name(f.primitive)},
                                 {"power", f.power},
                                 {"scale", f.scale},
                                 {"reference", f.reference}});
      }
      jb["monomials"].push_back(std::move(jm));
    }
    j["basis"].push_back(std::move(jb));
  }
  return j;
}

inline ModelSpec model_from_json(const nlohmann::json& j) {
  ModelSpec m;
  try {
    m.name = j.at("name").get<std::string>();
    const auto variant = j.at("variant").get<std::string>();
    if (variant == "nominal") {
      m.variant = Variant::Nominal;
    } else if (variant == "alternative") {
      m.variant = Variant::Alternative;
    } else {
      throw ParseError("model config: unknown variant '" + variant + "'");
    }
    if (j.contains("units")) {
      const auto& ju = j.at("units");
      m.units.distance = ju.value("distance", "m");
      m.units.frequency = ju.value("frequency", "MHz");
      m.units.tx_height = ju.value("tx_height", "m");
      m.units.rx_height = ju.value("rx_height", "m");
    }
    for (const auto& jb : j.at("basis")) {
      BasisFunction b;
      b.label = jb.at("label").get<std::string>();
      b.ramp_slope = jb.value("ramp_slope", 0.0);
      for (const auto& jm : jb.at("monomials")) {
        Monomial mono;
        mono.coefficient = jm.at("coefficient").get<double>();
        if (jm.contains("factors")) {
          for (const auto& jf : jm.at("factors")) {
            Factor f;
            f.primitive = primitive_from_name(jf.at("primitive").get<std::string>());
            f.power = jf.value("power", 1);
            f.scale = jf.value("scale", 1.0);
            f.reference = jf.value("reference", 1.0);
            mono.factors.push_back(f);
          }
        }
        b.monomials.push_back(std::move(mono));
      }
      m.basis.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model config: ") + e.what());
  }
  m.validate();
  return m;
}

inline void save_model(const ModelSpec& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << model_to_json(m).dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline ModelSpec load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
  return model_from_json(j);
}

}  // namespace qmmcal

#endif  // QMMCAL_MODEL_IO_HPP
