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

#ifndef QMMCAL_MODEL_HPP
#define QMMCAL_MODEL_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qmmcal/errors.hpp"
#include "qmmcal/scenario.hpp"

namespace qmmcal {

/// The eight primitives a pathloss monomial may be built from. Log
/// primitives evaluate to log10(x * scale / reference); linear primitives
/// to (x * scale / reference), where x is the SI input (meters or MHz).
enum class Primitive {
  LogDistance,
  LogFrequency,
  LogTxHeight,
  LogRxHeight,
  Distance,
  Frequency,
  TxHeight,
  RxHeight,
};

inline bool is_log(Primitive p) {
  switch (p) {
    case Primitive::LogDistance:
    case Primitive::LogFrequency:
    case Primitive::LogTxHeight:
    case Primitive::LogRxHeight:
      return true;
    default:
      return false;
  }
}

inline const char* primitive_name(Primitive p) {
  switch (p) {
    case Primitive::LogDistance: return "log10_d";
    case Primitive::LogFrequency: return "log10_f";
    case Primitive::LogTxHeight: return "log10_hte";
    case Primitive::LogRxHeight: return "log10_hre";
    case Primitive::Distance: return "d";
    case Primitive::Frequency: return "f";
    case Primitive::TxHeight: return "hte";
    case Primitive::RxHeight: return "hre";
  }
  return "?";
}

inline Primitive primitive_from_name(std::string_view name) {
  if (name == "log10_d") return Primitive::LogDistance;
  if (name == "log10_f") return Primitive::LogFrequency;
  if (name == "log10_hte") return Primitive::LogTxHeight;
  if (name == "log10_hre") return Primitive::LogRxHeight;
  if (name == "d") return Primitive::Distance;
  if (name == "f") return Primitive::Frequency;
  if (name == "hte") return Primitive::TxHeight;
  if (name == "hre") return Primitive::RxHeight;
  throw ParseError("unknown primitive '" + std::string(name) + "'");
}

/// One factor of a monomial: primitive^power, with `scale` converting the
/// SI input into the model's native units and `reference` holding the
/// published normalization constant (e.g. d/100, f/2000, hte/200).
struct Factor {
  Primitive primitive = Primitive::LogDistance;
  int power = 1;
  double scale = 1.0;
  double reference = 1.0;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// coefficient * product of factors.
struct Monomial {
  double coefficient = 0.0;
  std::vector<Factor> factors;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// One calibratable component of a model: a sum of monomials plus an
/// optional index ramp. The ramp contributes ramp_slope*(k-1) dB at the
/// 1-based sample index k and only participates when an index is supplied.
struct BasisFunction {
  std::string label;
  std::vector<Monomial> monomials;
  double ramp_slope = 0.0;

  friend bool operator==(const BasisFunction&, const BasisFunction&) = default;
};

enum class Variant { Nominal, Alternative };

inline const char* variant_name(Variant v) {
  return v == Variant::Nominal ? "nominal" : "alternative";
}

/// Display-only note of the units a model's published constants assume.
struct UnitsNote {
  std::string distance = "m";
  std::string frequency = "MHz";
  std::string tx_height = "m";
  std::string rx_height = "m";

  friend bool operator==(const UnitsNote&, const UnitsNote&) = default;
};

/// An ordered family of basis functions naming a pathloss model.
struct ModelSpec {
  std::string name;
  Variant variant = Variant::Nominal;
  std::vector<BasisFunction> basis;
  UnitsNote units;

  std::size_t size() const { return basis.size(); }

  bool is_unity(const BasisFunction& b) const {
    return b.ramp_slope == 0.0 && b.monomials.size() == 1 &&
           b.monomials[0].factors.empty() && b.monomials[0].coefficient == 1.0;
  }

  void validate() const {
    if (basis.empty()) throw DomainError("model '" + name + "': needs at least one basis function");
    std::set<std::string> labels;
    for (const auto& b : basis) {
      if (b.label.empty()) throw DomainError("model '" + name + "': empty basis label");
      if (!labels.insert(b.label).second)
        throw DomainError("model '" + name + "': duplicate basis label '" + b.label + "'");
      if (!std::isfinite(b.ramp_slope))
        throw DomainError("model '" + name + "': non-finite ramp slope in '" + b.label + "'");
      for (const auto& m : b.monomials) {
        if (!std::isfinite(m.coefficient))
          throw DomainError("model '" + name + "': non-finite coefficient in '" + b.label + "'");
        for (const auto& f : m.factors) {
          if (!(f.reference > 0.0) || !std::isfinite(f.reference))
            throw DomainError("model '" + name + "': reference must be strictly positive in '" +
                              b.label + "'");
          if (!(f.scale > 0.0) || !std::isfinite(f.scale))
            throw DomainError("model '" + name + "': scale must be strictly positive in '" +
                              b.label + "'");
        }
      }
    }
    if (variant == Variant::Alternative && !is_unity(basis.front()))
      throw DomainError("model '" + name + "': alternative variant must lead with the unity basis");
  }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

namespace detail {

inline double eval_factor(const Factor& f, double distance_m, const Scenario& s) {
  double raw = 0.0;
  switch (f.primitive) {
    case Primitive::LogDistance:
    case Primitive::Distance:
      raw = distance_m;
      break;
    case Primitive::LogFrequency:
    case Primitive::Frequency:
      raw = s.frequency_mhz;
      break;
    case Primitive::LogTxHeight:
    case Primitive::TxHeight:
      raw = s.tx_height_m;
      break;
    case Primitive::LogRxHeight:
    case Primitive::RxHeight:
      raw = s.rx_height_m;
      break;
  }
  const double arg = raw * f.scale / f.reference;
  double base = arg;
  if (is_log(f.primitive)) {
    if (!(arg > 0.0))
      throw DomainError(std::string("log primitive ") + primitive_name(f.primitive) +
                        " received non-positive argument " + std::to_string(arg));
    base = std::log10(arg);
  }
  return std::pow(base, f.power);
}

}  // namespace detail

/// Evaluates one basis function in dB at distance `distance_m` (meters).
/// When `sample_index` (1-based) is supplied the index ramp contributes
/// ramp_slope*(k-1); without an index the ramp term is zero.
inline double eval_basis(const BasisFunction& b, double distance_m, const Scenario& s,
                         std::optional<int> sample_index = std::nullopt) {
  s.validate();
  if (!(distance_m > 0.0) || !std::isfinite(distance_m))
    throw DomainError("eval_basis: distance must be a positive real, got " +
                      std::to_string(distance_m));
  if (sample_index && *sample_index < 1)
    throw DomainError("eval_basis: sample index is 1-based, got " +
                      std::to_string(*sample_index));

  double acc = 0.0;
  for (const auto& m : b.monomials) {
    double term = m.coefficient;
    for (const auto& f : m.factors) term *= detail::eval_factor(f, distance_m, s);
    acc += term;
  }
  if (sample_index) acc += b.ramp_slope * static_cast<double>(*sample_index - 1);
  return acc;
}

inline bool has_ramp(const ModelSpec& m) {
  for (const auto& b : m.basis)
    if (b.ramp_slope != 0.0) return true;
  return false;
}

/// Regroups a nominal model into the unity-led form SVD calibration
/// expects: basis 0 becomes the constant 1, and each group of nominal
/// basis indices (0-based) collapses into a single summed basis function
/// carrying the group's ramp slope. Exactly 1 dB is extracted from the
/// leading constant (e.g. 92.4 becomes 91.4) to fund the unit intercept.
/// A group that collapses to the zero function is dropped, so a model
/// already of the form {1, phi2, ...} passes through unchanged under the
/// identity grouping.
inline ModelSpec to_alternative(const ModelSpec& nominal,
                                const std::vector<std::vector<std::size_t>>& groups,
                                const std::vector<double>& ramp_slopes,
                                std::vector<std::string> labels = {},
                                std::string name = {}) {
  nominal.validate();
  if (nominal.variant != Variant::Nominal)
    throw DomainError("to_alternative: '" + nominal.name + "' is not a nominal model");
  const std::size_t n = nominal.size();
  if (ramp_slopes.size() != groups.size())
    throw DomainError("to_alternative: need one ramp slope per group");
  if (!labels.empty() && labels.size() != groups.size())
    throw DomainError("to_alternative: need one label per group when labels are given");

  std::vector<int> seen(n, 0);
  for (const auto& g : groups) {
    if (g.empty()) throw DomainError("to_alternative: empty group");
    for (std::size_t idx : g) {
      if (idx >= n) throw DomainError("to_alternative: basis index out of range");
      if (seen[idx]++) throw DomainError("to_alternative: basis index grouped twice");
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!seen[j]) throw DomainError("to_alternative: grouping is not a partition of the basis");

  const BasisFunction& lead = nominal.basis.front();
  for (const auto& m : lead.monomials)
    if (!m.factors.empty())
      throw DomainError("to_alternative: '" + nominal.name +
                        "' has no leading constant to extract the intercept from");
  if (lead.ramp_slope != 0.0)
    throw DomainError("to_alternative: leading constant of '" + nominal.name +
                      "' may not carry a ramp");
  double lead_const = 0.0;
  for (const auto& m : lead.monomials) lead_const += m.coefficient;

  ModelSpec out;
  out.name = name.empty() ? nominal.name + "-alt" : std::move(name);
  out.variant = Variant::Alternative;
  out.units = nominal.units;
  out.basis.push_back(BasisFunction{"unity", {Monomial{1.0, {}}}, 0.0});

  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    BasisFunction bf;
    bf.ramp_slope = ramp_slopes[gi];
    std::string joined;
    for (std::size_t idx : groups[gi]) {
      const BasisFunction& member = nominal.basis[idx];
      if (!joined.empty()) joined += " + ";
      joined += member.label;
      if (idx == 0) {
        const double c = lead_const - 1.0;
        if (c != 0.0) bf.monomials.push_back(Monomial{c, {}});
      } else {
        for (const auto& m : member.monomials)
          if (m.coefficient != 0.0) bf.monomials.push_back(m);
        bf.ramp_slope += member.ramp_slope;
      }
    }
    bf.label = labels.empty() ? joined : std::move(labels[gi]);
    if (bf.monomials.empty() && bf.ramp_slope == 0.0) continue;
    out.basis.push_back(std::move(bf));
  }

  out.validate();
  return out;
}

/// Replaces the basis with an invertible linear recombination of itself:
/// new basis i = sum_j R(i, j) * old basis j, ramps included. The span of
/// the basis (and hence any least-squares prediction) is unchanged.
inline ModelSpec recombine_basis(const ModelSpec& m, const Eigen::MatrixXd& recomb,
                                 std::string_view name_suffix = "-rc") {
  m.validate();
  const auto n = static_cast<Eigen::Index>(m.size());
  if (recomb.rows() != n || recomb.cols() != n)
    throw DomainError("recombine_basis: recombination matrix must be NxN");

  ModelSpec out;
  out.name = m.name + std::string(name_suffix);
  out.variant = Variant::Nominal;
  out.units = m.units;
  out.basis.resize(m.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    BasisFunction& bf = out.basis[static_cast<std::size_t>(i)];
    bf.label = "rc" + std::to_string(i + 1);
    double ramp = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = recomb(i, j);
      if (w == 0.0) continue;
      const BasisFunction& src = m.basis[static_cast<std::size_t>(j)];
      ramp += w * src.ramp_slope;
      for (const auto& mono : src.monomials)
        bf.monomials.push_back(Monomial{w * mono.coefficient, mono.factors});
    }
    bf.ramp_slope = ramp;
  }
  out.validate();
  return out;
}

}  // namespace qmmcal

#endif  // QMMCAL_MODEL_HPP
