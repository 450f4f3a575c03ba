/*
 * Copyright 2026 The PVL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <doctest.h>

#include <cmath>

#include "flow_map.hpp"
#include "support.hpp"
#include "variation.hpp"

using namespace pvl;
using pvl_test::random_divfree;

namespace {
const Grid g2(2, 64);
const double kT = 1.0;

TestVectorField make_test_field(const char* profile, double T = kT) {
  return TestVectorField(battery_profile(g2, profile), TimeEnvelope::basic(T), profile);
}
}  // namespace

TEST_CASE("envelope: admissible families vanish at the endpoints") {
  TimeEnvelope b = TimeEnvelope::basic(2.0);
  CHECK(b.s(0.0) == 0.0);
  CHECK(b.s(2.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(b.s(1.0) == doctest::Approx(1.0));  // t^2 (T-t)^2 at t=1, T=2
  // derivative by finite differences
  const double t = 0.7, h = 1e-6;
  CHECK(b.ds(t) == doctest::Approx((b.s(t + h) - b.s(t - h)) / (2 * h)).epsilon(1e-8));

  TimeEnvelope tl = TimeEnvelope::tilted(2.0);
  CHECK(tl.s(0.0) == 0.0);
  CHECK(std::fabs(tl.s(2.0)) < 1e-12);
  CHECK(tl.ds(t) == doctest::Approx((tl.s(t + h) - tl.s(t - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("test field: endpoint and divergence validation") {
  VectorField w = battery_profile(g2, "taylor_green");

  SUBCASE("s(T) != 0 is rejected") {
    TimeEnvelope bad;
    bad.T = kT;
    bad.coeff = {0.0, 1.0};  // s(t) = t, nonzero at T
    bad.name = "linear";
    CHECK_THROWS_AS(TestVectorField(w, bad, "bad"), InvalidArgument);
  }
  SUBCASE("s(0) != 0 is rejected") {
    TimeEnvelope bad;
    bad.T = kT;
    bad.coeff = {1.0, -2.0, 1.0};  // (1-t)^2
    bad.name = "shifted";
    CHECK_THROWS_AS(TestVectorField(w, bad, "bad"), InvalidArgument);
  }
  SUBCASE("divergent profiles are rejected") {
    VectorField bad = VectorField::sample(g2, [](const double* x, double* v) {
      v[0] = std::sin(x[0]);
      v[1] = 0.0;
    });
    CHECK_THROWS_AS(TestVectorField(bad, TimeEnvelope::basic(kT), "bad"), InvalidArgument);
  }
}

TEST_CASE("integrate_flow: eps = 0 gives the identity at all times") {
  TestVectorField v = make_test_field("mixed");
  auto maps = integrate_flow(v, 0.0, kT, 40);
  REQUIRE(maps.size() == 41);
  for (const auto& m : maps) CHECK(max_abs(m.displacement) == 0.0);
}

TEST_CASE("integrate_flow: constant profile is a rigid translation") {
  const double c[2] = {0.8, -0.5};
  TestVectorField v(VectorField::constant(g2, c), TimeEnvelope::basic(kT), "const");
  const double eps = 0.3;
  auto maps = integrate_flow(v, eps, kT, 50);
  for (const auto& m : maps) {
    const double s = v.envelope.s(m.time);  // s(0) = 0
    for (int d = 0; d < 2; ++d) {
      ScalarField expect = ScalarField::constant(g2, eps * s * c[d]);
      CHECK(max_abs(m.displacement.comp[d] - expect) < 1e-12);
    }
  }
}

TEST_CASE("integrate_flow: volume preservation for generic profiles") {
  TestVectorField v = make_test_field("mixed");
  auto maps = integrate_flow(v, 0.1, kT, 100);
  double worst = 0.0;
  for (const auto& m : maps) worst = std::max(worst, max_volume_defect(m));
  CHECK(worst <= 1e-6);
}

TEST_CASE("integrate_flow: step-size violations are reported") {
  TimeEnvelope wild;
  wild.T = kT;
  wild.coeff = {0.0, 0.0, 300.0, -600.0, 300.0};  // 300 t^2 (1-t)^2
  wild.name = "wild";
  TestVectorField v(battery_profile(g2, "diag3"), wild, "wild");
  CHECK_THROWS_AS((void)integrate_flow(v, 1.0, kT, 8), NumericError);
  CHECK_THROWS_AS((void)integrate_flow(v, 1.5, kT, 200), InvalidArgument);  // |eps| > 1
}

TEST_CASE("invert_map: identity and translation") {
  TorusMap id = TorusMap::identity(g2, 0.0);
  CHECK(max_abs(invert_map(id).displacement) == 0.0);

  const double a[2] = {0.3, -0.2};
  TorusMap tr;
  tr.time = 0.0;
  tr.displacement = VectorField::constant(g2, a);
  TorusMap inv = invert_map(tr);
  for (int d = 0; d < 2; ++d)
    CHECK(max_abs(inv.displacement.comp[d] - ScalarField::constant(g2, -a[d])) < 1e-10);
}

TEST_CASE("invert_map: composition and involution on a generic small map") {
  TestVectorField v = make_test_field("taylor_green");
  auto maps = integrate_flow(v, 0.08, kT, 60);
  const TorusMap& m = maps[30];
  REQUIRE(max_abs(m.displacement) > 1e-4);
  TorusMap inv = invert_map(m);

  // invert(m) o m = id: x -> x + d(x) -> should come back
  SpectralEvaluator ieval(inv.displacement);
  double x[3], p[3], val[3], worst = 0.0;
  for (std::size_t i = 0; i < g2.points(); ++i) {
    g2.point(i, x);
    for (int d = 0; d < 2; ++d) p[d] = x[d] + m.displacement.comp[d].v[i];
    ieval.value(p, val);
    for (int d = 0; d < 2; ++d)
      worst = std::max(worst, std::fabs(p[d] + val[d] - x[d]));
  }
  CHECK(worst < 1e-8);

  TorusMap twice = invert_map(inv);
  CHECK(max_abs(twice.displacement - m.displacement) < 1e-8);
}

TEST_CASE("invert_map: large displacement is rejected") {
  const double a[2] = {2.0, 0.0};
  TorusMap big;
  big.displacement = VectorField::constant(g2, a);
  CHECK_THROWS_AS((void)invert_map(big), NumericError);
}

TEST_CASE("map_derivatives: identity, translation, symbolic case") {
  TorusMap id = TorusMap::identity(g2, 0.0);
  MapDerivatives md = map_derivatives(id);
  CHECK(max_abs(md.jacobian[0] - ScalarField::constant(g2, 1.0)) < 1e-14);
  CHECK(max_abs(md.jacobian[1]) < 1e-14);
  CHECK(max_abs(md.laplacian) < 1e-14);

  TorusMap shear;
  shear.time = 0.0;
  const double a = 0.25;
  shear.displacement = VectorField::sample(g2, [&](const double* x, double* v) {
    v[0] = a * std::sin(x[1]);
    v[1] = 0.0;
  });
  MapDerivatives ms = map_derivatives(shear);
  ScalarField expect_dxdy =
      ScalarField::sample(g2, [&](const double* x) { return a * std::cos(x[1]); });
  CHECK(max_abs(ms.jacobian[0 * 2 + 1] - expect_dxdy) < 1e-12);
  VectorField expect_lap = VectorField::sample(g2, [&](const double* x, double* v) {
    v[0] = -a * std::sin(x[1]);
    v[1] = 0.0;
  });
  CHECK(max_abs(ms.laplacian - expect_lap) < 1e-12);
}

TEST_CASE("composed_drift: eps = 0 returns u exactly") {
  RngStream rng(31, 0);
  const double off[2] = {0.5, 0.1};
  VectorField u = random_divfree(g2, 3, 1.0, off, rng);
  TestVectorField v = make_test_field("cosy");
  TorusMap id = TorusMap::identity(g2, 0.4);
  VectorField pre = composed_drift(u, id, v, 0.0, DriftMode::pre);
  VectorField post = composed_drift(u, id, v, 0.0, DriftMode::post);
  CHECK(max_abs(pre - u) == 0.0);
  CHECK(max_abs(post - u) == 0.0);
}

TEST_CASE("composed_drift: pure translation of the zero trajectory") {
  const double c[2] = {1.2, 0.4};
  TestVectorField v(VectorField::constant(g2, c), TimeEnvelope::basic(kT), "const");
  const double eps = 0.2;
  auto maps = integrate_flow(v, eps, kT, 40);
  VectorField zero(g2);
  for (const auto& m : maps) {
    VectorField f = composed_drift(zero, m, v, eps, DriftMode::post);
    const double sd = v.envelope.ds(m.time);
    for (int d = 0; d < 2; ++d)
      CHECK(max_abs(f.comp[d] - ScalarField::constant(g2, eps * sd * c[d])) < 1e-11);
  }
}

// The first-variation field: d/deps composed_drift at eps = 0 must equal
// v' + [u,v] + 1/2 Lap v. Central difference in eps against the spectral
// calculus, which never touches the flow integrator.
TEST_CASE("composed_drift: eps-linearization matches the first variation") {
  VectorField u = VectorField::sample(g2, [](const double* x, double* v) {
    v[0] = std::sin(x[0]) * std::cos(x[1]);
    v[1] = -std::cos(x[0]) * std::sin(x[1]);
  });
  TestVectorField v = make_test_field("mixed");
  const int K = 50;
  const int k = 27;
  const double t = kT * k / K;
  const double de = 1e-3;

  auto drift_at = [&](double eps) {
    auto maps = integrate_flow(v, eps, kT, K);
    return composed_drift(u, maps[k], v, eps, DriftMode::post);
  };
  VectorField dplus = drift_at(de);
  VectorField dminus = drift_at(-de);
  VectorField fd = (1.0 / (2.0 * de)) * (dplus - dminus);

  VectorField expect(g2);
  axpy(v.envelope.ds(t), v.profile, expect);
  axpy(v.envelope.s(t), lie_bracket(u, v.profile), expect);
  axpy(0.5 * v.envelope.s(t), laplacian(v.profile), expect);

  CHECK(max_abs(fd - expect) <= 1e-6);
}
