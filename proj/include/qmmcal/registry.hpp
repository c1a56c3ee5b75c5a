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

#ifndef QMMCAL_REGISTRY_HPP
#define QMMCAL_REGISTRY_HPP

#include <string>
#include <string_view>
#include <vector>

#include "qmmcal/model.hpp"

// Builtin pathloss models, decomposed into calibratable basis functions.
// Constants are the published ones, kept verbatim; the per-factor `scale`
// converts the toolkit's SI inputs (meters, MHz) into each model's native
// units:
//   ECC-33    d km, f GHz, heights m
//   SUI       d m (100 m reference), f MHz, rx height mm (2000 mm reference)
//   UFPA      d m, f GHz and MHz as published (mixed within the model)
//   Ericsson  d km, f MHz, heights m
//   Lee       d km (1.6 km reference), f MHz (900 MHz reference)
//   WINNER-II d m, f GHz (5.0 GHz reference)
//   ITU-R     d m, f MHz

namespace qmmcal {

namespace detail {

inline constexpr double kMetersToKm = 1e-3;
inline constexpr double kMetersToMm = 1e3;
inline constexpr double kMHzToGHz = 1e-3;

inline Factor fac(Primitive p, int power = 1, double scale = 1.0, double reference = 1.0) {
  return Factor{p, power, scale, reference};
}

inline Monomial cnst(double c) { return Monomial{c, {}}; }

inline Monomial mono(double c, std::vector<Factor> fs) { return Monomial{c, std::move(fs)}; }

inline BasisFunction bf(std::string label, std::vector<Monomial> ms, double ramp = 0.0) {
  return BasisFunction{std::move(label), std::move(ms), ramp};
}

inline ModelSpec make_ecc33() {
  using P = Primitive;
  ModelSpec m;
  m.name = "ecc33";
  m.units = UnitsNote{"km", "GHz", "m", "m"};
  m.basis = {
      bf("free-space-const", {cnst(92.4)}),
      bf("free-space-dist", {mono(20.0, {fac(P::LogDistance, 1, kMetersToKm)})}),
      bf("free-space-freq", {mono(20.0, {fac(P::LogFrequency, 1, kMHzToGHz)})}),
      bf("median-const", {cnst(20.41)}),
      bf("median-dist", {mono(9.83, {fac(P::LogDistance, 1, kMetersToKm)})}),
      bf("median-freq", {mono(7.894, {fac(P::LogFrequency, 1, kMHzToGHz)}),
                         mono(9.56, {fac(P::LogFrequency, 2, kMHzToGHz)})}),
      bf("tx-gain-const", {mono(-13.98, {fac(P::LogTxHeight, 1, 1.0, 200.0)})}),
      bf("tx-gain-dist", {mono(-5.8, {fac(P::LogTxHeight, 1, 1.0, 200.0),
                                      fac(P::LogDistance, 2, kMetersToKm)})}),
      bf("rx-gain-const", {mono(-42.57, {fac(P::LogRxHeight)}),
                           cnst(-42.57 * -0.585)}),
      bf("rx-gain-freq", {mono(13.7, {fac(P::LogFrequency, 1, kMHzToGHz), fac(P::LogRxHeight)}),
                          mono(13.7 * -0.585, {fac(P::LogFrequency, 1, kMHzToGHz)})}),
  };
  return m;
}

inline ModelSpec make_sui(bool indoor) {
  using P = Primitive;
  ModelSpec m;
  m.name = indoor ? "sui-indoor" : "sui";
  m.units = UnitsNote{"m", "MHz", "m", "mm"};
  m.basis = {
      bf("base-const", {cnst(indoor ? 100.7412 : 20.7412)}),
      bf("dist", {mono(indoor ? 129.8875 : 52.15, {fac(P::LogDistance, 1, 1.0, 100.0)})}),
      bf("freq-corr", {mono(6.0, {fac(P::LogFrequency, 1, 1.0, 2000.0)})}),
      bf("rx-height-corr", {mono(-10.8, {fac(P::LogRxHeight, 1, kMetersToMm, 2000.0)})}),
      bf("shadow-const", {cnst(8.9)}),
  };
  return m;
}

inline ModelSpec make_ufpa() {
  using P = Primitive;
  ModelSpec m;
  m.name = "ufpa";
  m.units = UnitsNote{"m", "GHz and MHz", "m", "m"};
  m.basis = {
      bf("unit-const", {cnst(1.0)}),
      bf("veg-attn",
         {mono(-2.4 * 30.0, {fac(P::TxHeight, 1, 1.0, 6.2), fac(P::Frequency, -1, kMHzToGHz)}),
          mono(-2.4 * 30.0, {fac(P::RxHeight, 1, 1.0, 6.2), fac(P::Frequency, -1, kMHzToGHz)})}),
      bf("free-space-dist", {mono(20.0, {fac(P::LogDistance)})}),
      bf("free-space-freq", {mono(12.0, {fac(P::LogFrequency)})}),
  };
  return m;
}

inline ModelSpec make_ericsson() {
  using P = Primitive;
  ModelSpec m;
  m.name = "ericsson";
  m.units = UnitsNote{"km", "MHz", "m", "m"};
  m.basis = {
      bf("base-const", {cnst(36.2)}),
      bf("dist", {mono(30.2, {fac(P::LogDistance, 1, kMetersToKm)})}),
      bf("tx-height", {mono(-12.0, {fac(P::LogTxHeight)})}),
      bf("tx-dist-cross", {mono(0.1, {fac(P::LogTxHeight), fac(P::LogDistance, 1, kMetersToKm)})}),
      bf("rx-height", {mono(-3.2, {fac(P::LogRxHeight, 2, 11.75)})}),
      bf("freq-poly", {mono(44.49, {fac(P::LogFrequency)}),
                       mono(-4.78, {fac(P::LogFrequency, 2)})}),
  };
  return m;
}

inline ModelSpec make_lee() {
  using P = Primitive;
  ModelSpec m;
  m.name = "lee";
  m.units = UnitsNote{"km", "MHz", "m", "m"};
  m.basis = {
      bf("base-const", {cnst(124.0)}),
      bf("dist", {mono(30.5, {fac(P::LogDistance, 1, kMetersToKm, 1.6)})}),
      bf("freq", {mono(30.0, {fac(P::LogFrequency, 1, 1.0, 900.0)})}),
      bf("offset-const", {cnst(-3.001)}),
  };
  return m;
}

inline ModelSpec make_winner2() {
  using P = Primitive;
  ModelSpec m;
  m.name = "winner2";
  m.units = UnitsNote{"m", "GHz", "m", "m"};
  m.basis = {
      bf("base-const", {cnst(46.8)}),
      bf("dist", {mono(18.7, {fac(P::LogDistance)})}),
      bf("freq", {mono(20.0, {fac(P::LogFrequency, 1, kMHzToGHz, 5.0)})}),
  };
  return m;
}

inline ModelSpec make_itur() {
  using P = Primitive;
  ModelSpec m;
  m.name = "itur";
  m.units = UnitsNote{"m", "MHz", "m", "m"};
  m.basis = {
      bf("base-const", {cnst(6.0)}),
      bf("dist", {mono(25.0, {fac(P::LogDistance)})}),
      bf("freq", {mono(20.0, {fac(P::LogFrequency)})}),
      bf("offset-const", {cnst(-28.0)}),
  };
  return m;
}

}  // namespace detail

/// The full registry: eight nominal models plus the seven unity-led
/// alternatives with their published ramp slopes. The SUI and Ericsson
/// alternatives merge the ramped correction groups into a single basis
/// function (three coefficients each); keeping them separate leaves the
/// columns linearly dependent over a single-scenario route.
inline std::vector<ModelSpec> builtin_models() {
  std::vector<ModelSpec> out;
  out.reserve(15);

  const ModelSpec ecc33 = detail::make_ecc33();
  const ModelSpec sui = detail::make_sui(false);
  const ModelSpec sui_indoor = detail::make_sui(true);
  const ModelSpec ufpa = detail::make_ufpa();
  const ModelSpec ericsson = detail::make_ericsson();
  const ModelSpec lee = detail::make_lee();
  const ModelSpec winner2 = detail::make_winner2();
  const ModelSpec itur = detail::make_itur();

  out.push_back(ecc33);
  out.push_back(to_alternative(ecc33, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8, 9}},
                               {0.09, 0.012, 0.031},
                               {"free-space", "basic-median", "height-gain"}));
  out.push_back(sui);
  out.push_back(sui_indoor);
  out.push_back(to_alternative(sui, {{0, 1}, {2, 3, 4}}, {0.0, 5.22 + 0.95},
                               {"base-dist", "corrections"}));
  out.push_back(ufpa);
  out.push_back(to_alternative(ufpa, {{0, 1}, {2, 3}}, {0.58, 0.0},
                               {"veg-attn", "free-space"}));
  out.push_back(ericsson);
  out.push_back(to_alternative(ericsson, {{0, 1, 2}, {3, 4, 5}}, {0.0, 0.58},
                               {"base-dist", "corrections"}));
  out.push_back(lee);
  out.push_back(to_alternative(lee, {{0, 1}, {2, 3}}, {0.0, 2.85},
                               {"base-dist", "freq-offset"}));
  out.push_back(winner2);
  out.push_back(to_alternative(winner2, {{0, 1}, {2}}, {0.0, 0.065},
                               {"base-dist", "freq"}));
  out.push_back(itur);
  out.push_back(to_alternative(itur, {{0, 1}, {2, 3}}, {0.0, 0.095},
                               {"base-dist", "freq-offset"}));
  return out;
}

inline std::vector<std::string> builtin_model_names() {
  std::vector<std::string> names;
  for (const auto& m : builtin_models()) names.push_back(m.name);
  return names;
}

/// Exact-name lookup; throws with the list of known names on a miss.
inline ModelSpec find_builtin(std::string_view name) {
  for (auto& m : builtin_models())
    if (m.name == name) return m;
  std::string known;
  for (const auto& n : builtin_model_names()) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw DomainError("unknown model '" + std::string(name) + "'; builtin models: " + known);
}

}  // namespace qmmcal

#endif  // QMMCAL_REGISTRY_HPP
