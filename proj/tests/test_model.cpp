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

#include "qmmcal/model.hpp"
#include "qmmcal/registry.hpp"

#include "test_support.hpp"

using namespace qmmcal;

namespace {

const Scenario kScenario{2600.0, 30.0, 1.5};

BasisFunction constant_basis(double c) { return BasisFunction{"const", {Monomial{c, {}}}, 0.0}; }

BasisFunction log_d_basis(double coeff) {
  return BasisFunction{"logd", {Monomial{coeff, {Factor{Primitive::LogDistance, 1, 1.0, 1.0}}}},
                       0.0};
}

}  // namespace

TEST_CASE("constant basis evaluates to its constant anywhere") {
  const auto b = constant_basis(92.4);
  CHECK(eval_basis(b, 1.0, kScenario) == 92.4);
  CHECK(eval_basis(b, 123.456, kScenario) == 92.4);
  CHECK(eval_basis(b, 1e6, kScenario, 17) == 92.4);
}

TEST_CASE("log distance basis vanishes at the unit distance") {
  const auto b = log_d_basis(20.0);
  CHECK(eval_basis(b, 1.0, kScenario) == 0.0);
  CHECK(eval_basis(b, 10.0, kScenario) == Approx(20.0).margin(1e-12));
  CHECK(eval_basis(b, 100.0, kScenario) == Approx(40.0).margin(1e-12));
}

TEST_CASE("ramp term contributes slope*(k-1) only when an index is given") {
  const BasisFunction b{"ramp", {}, 0.09};
  CHECK(eval_basis(b, 500.0, kScenario, 3) == Approx(0.18).margin(1e-15));
  CHECK(eval_basis(b, 500.0, kScenario, 1) == 0.0);
  CHECK(eval_basis(b, 500.0, kScenario) == 0.0);
  // index omitted equals index 1 for every builtin basis function
  for (const auto& m : builtin_models())
    for (const auto& basis : m.basis)
      CHECK(eval_basis(basis, 777.0, kScenario) == eval_basis(basis, 777.0, kScenario, 1));
}

TEST_CASE("negative powers and scales evaluate as written") {
  // 30/f_GHz style factor: f = 2600 MHz -> 2.6 GHz
  const BasisFunction b{
      "invf", {Monomial{30.0, {Factor{Primitive::Frequency, -1, 1e-3, 1.0}}}}, 0.0};
  CHECK(eval_basis(b, 100.0, kScenario) == Approx(30.0 / 2.6).epsilon(1e-14));

  // -3.2 (log10(11.75 hre))^2 at hre = 1.5
  const BasisFunction g{
      "rxh", {Monomial{-3.2, {Factor{Primitive::LogRxHeight, 2, 11.75, 1.0}}}}, 0.0};
  const double expect = -3.2 * std::pow(std::log10(11.75 * 1.5), 2);
  CHECK(eval_basis(g, 100.0, kScenario) == Approx(expect).epsilon(1e-14));
}

TEST_CASE("eval_basis rejects bad domains") {
  const auto b = log_d_basis(20.0);
  CHECK_THROWS_AS(eval_basis(b, 0.0, kScenario), DomainError);
  CHECK_THROWS_AS(eval_basis(b, -5.0, kScenario), DomainError);
  CHECK_THROWS_AS(eval_basis(b, 10.0, kScenario, 0), DomainError);
  CHECK_THROWS_AS(eval_basis(b, 10.0, Scenario{-1.0, 30.0, 1.5}), DomainError);
}

TEST_CASE("model validation catches structural mistakes") {
  ModelSpec m;
  m.name = "bad";
  CHECK_THROWS_AS(m.validate(), DomainError);  // empty basis

  m.basis = {constant_basis(1.0), constant_basis(2.0)};
  m.basis[1].label = "const";  // duplicate
  CHECK_THROWS_AS(m.validate(), DomainError);

  m.basis[1].label = "other";
  CHECK_NOTHROW(m.validate());

  m.basis[1].monomials[0].factors.push_back(Factor{Primitive::LogDistance, 1, 1.0, -2.0});
  CHECK_THROWS_AS(m.validate(), DomainError);  // non-positive reference

  ModelSpec alt;
  alt.name = "alt";
  alt.variant = Variant::Alternative;
  alt.basis = {constant_basis(2.0)};
  CHECK_THROWS_AS(alt.validate(), DomainError);  // alternative must lead with unity
}

TEST_CASE("to_alternative reproduces the published SUI regrouping") {
  const ModelSpec sui = find_builtin("sui");
  const ModelSpec alt =
      to_alternative(sui, {{0, 1}, {2, 3, 4}}, {0.0, 5.22 + 0.95}, {"base-dist", "corrections"});

  REQUIRE(alt.size() == 3);
  CHECK(alt.variant == Variant::Alternative);
  CHECK(alt.basis[0].label == "unity");
  CHECK(eval_basis(alt.basis[0], 123.0, kScenario) == 1.0);

  // second basis is 19.7412 + 52.15 log10(d/100): the extracted intercept
  // is exactly 20.7412 - 1
  REQUIRE(alt.basis[1].monomials.size() == 2);
  CHECK(alt.basis[1].monomials[0].coefficient == 20.7412 - 1.0);
  CHECK(alt.basis[1].monomials[1].coefficient == 52.15);
  CHECK(alt.basis[1].ramp_slope == 0.0);
  CHECK(eval_basis(alt.basis[1], 100.0, kScenario) == Approx(19.7412).margin(1e-12));

  CHECK(alt.basis[2].ramp_slope == 5.22 + 0.95);
}

TEST_CASE("to_alternative passes a unity-led model through unchanged") {
  ModelSpec m;
  m.name = "toy";
  m.basis = {BasisFunction{"unity", {Monomial{1.0, {}}}, 0.0}, log_d_basis(20.0),
             constant_basis(3.0)};
  m.basis[2].label = "offset";
  const ModelSpec alt = to_alternative(m, {{0}, {1}, {2}}, {0.0, 0.0, 0.0});
  REQUIRE(alt.size() == 3);
  CHECK(alt.basis[0] == m.basis[0]);
  CHECK(alt.basis[1].monomials == m.basis[1].monomials);
  CHECK(alt.basis[2].monomials == m.basis[2].monomials);
}

TEST_CASE("to_alternative rejects malformed requests") {
  const ModelSpec sui = find_builtin("sui");
  // empty group
  CHECK_THROWS_AS(to_alternative(sui, {{0, 1}, {}, {2, 3, 4}}, {0, 0, 0}), DomainError);
  // not a partition (index 4 missing)
  CHECK_THROWS_AS(to_alternative(sui, {{0, 1}, {2, 3}}, {0, 0}), DomainError);
  // index grouped twice
  CHECK_THROWS_AS(to_alternative(sui, {{0, 1, 2}, {2, 3, 4}}, {0, 0}), DomainError);
  // already-alternative input
  CHECK_THROWS_AS(to_alternative(find_builtin("sui-alt"), {{0, 1, 2}}, {0}), DomainError);
  // no leading constant to fund the intercept
  ModelSpec noconst;
  noconst.name = "noconst";
  noconst.basis = {log_d_basis(20.0), constant_basis(3.0)};
  noconst.basis[1].label = "c";
  CHECK_THROWS_AS(to_alternative(noconst, {{0}, {1}}, {0, 0}), DomainError);
}

TEST_CASE("recombined basis evaluates to the matrix-weighted sum") {
  std::mt19937_64 gen(99);
  const ModelSpec lee = find_builtin("lee-alt");
  const int n = static_cast<int>(lee.size());
  const Eigen::MatrixXd r = test_support::random_invertible(gen, n);
  const ModelSpec rc = recombine_basis(lee, r);
  REQUIRE(rc.size() == lee.size());

  for (int k : {1, 2, 5}) {
    for (int i = 0; i < n; ++i) {
      double expect = 0.0;
      for (int j = 0; j < n; ++j)
        expect += r(i, j) * eval_basis(lee.basis[static_cast<std::size_t>(j)], 350.0, kScenario, k);
      CHECK(eval_basis(rc.basis[static_cast<std::size_t>(i)], 350.0, kScenario, k) ==
            Approx(expect).margin(1e-10));
    }
  }
}
