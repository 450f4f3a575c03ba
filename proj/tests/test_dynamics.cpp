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

#include "dynamics.hpp"
#include "support.hpp"

using namespace pvl;
using pvl_test::random_divfree;

namespace {
const Grid g2(2, 64);
}

TEST_CASE("momentum: q = 2 is the identity") {
  RngStream rng(41, 0);
  const double off[2] = {0.3, 0.0};
  VectorField u = random_divfree(g2, 3, 1.0, off, rng);
  CHECK(max_abs(momentum(u, 2.0) - u) == 0.0);
}

TEST_CASE("momentum: q = 3 on a constant field") {
  const double c[2] = {2.0, 0.0};
  VectorField u = VectorField::constant(g2, c);
  VectorField m = momentum(u, 3.0);
  CHECK(max_abs(m.comp[0] - ScalarField::constant(g2, 4.0)) < 1e-13);
  CHECK(max_abs(m.comp[1]) < 1e-13);
}

TEST_CASE("momentum: round trip away from zeros") {
  RngStream rng(43, 0);
  const double off[2] = {1.5, 0.4};  // keeps ||u|| well away from zero
  VectorField u = random_divfree(g2, 3, 0.5, off, rng);
  for (double q : {2.5, 3.0, 4.0}) {
    VectorField back = velocity_from_momentum(momentum(u, q), q);
    double worst = 0.0;
    ScalarField nrm = pointwise_norm(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (nrm.v[i] < 1e-6) continue;
      for (int d = 0; d < 2; ++d)
        worst = std::max(worst, std::fabs(back.comp[d].v[i] - u.comp[d].v[i]));
    }
    CHECK(worst <= 1e-10);
  }
  CHECK_THROWS_AS((void)momentum(u, 1.5), InvalidArgument);
}

TEST_CASE("stencil weights differentiate t^4 exactly") {
  const double dt = 0.1;
  auto poly = [](double t) { return t * t * t * t - 2.0 * t * t + 3.0; };
  auto dpoly = [](double t) { return 4.0 * t * t * t - 4.0 * t; };
  for (int pos = 0; pos < 5; ++pos) {
    auto w = stencil5_weights(pos, dt);
    double acc = 0.0;
    for (int j = 0; j < 5; ++j) acc += w[j] * poly(dt * j);
    CHECK(acc == doctest::Approx(dpoly(dt * pos)).epsilon(1e-11));
  }
}

TEST_CASE("el_residual: constant trajectories have zero residual") {
  FamilyParams p;
  p.c = {0.7, -0.4, 0.0};
  for (double q : {2.0, 5.0}) {
    Trajectory traj = exact_family(ExactFamily::constant, p, q, g2, 1.0, 16);
    ElResidual r = el_residual(traj, 8, PdeForm::proof_form);
    CHECK(max_abs(r.raw) < 1e-13);
    CHECK(max_abs(r.projected) < 1e-13);
  }
}

TEST_CASE("el_residual: boundary nodes are rejected") {
  Trajectory traj = exact_family(ExactFamily::taylor_green, {}, 2.0, g2, 1.0, 16);
  CHECK_THROWS_AS((void)el_residual(traj, 0, PdeForm::proof_form), InvalidArgument);
  CHECK_THROWS_AS((void)el_residual(traj, 1, PdeForm::proof_form), InvalidArgument);
  CHECK_THROWS_AS((void)el_residual(traj, 15, PdeForm::proof_form), InvalidArgument);
}

TEST_CASE("el_residual: Taylor-Green solves the q = 2 equation") {
  Trajectory traj = exact_family(ExactFamily::taylor_green, {}, 2.0, g2, 1.0, 200);
  ResidualScan scan = residual_scan(traj, PdeForm::proof_form);
  CHECK(scan.max_projected_rel <= 1e-6);
  // the raw residual is the gradient absorbed by the pressure
  double raw_max = 0.0;
  for (double r : scan.raw_l2) raw_max = std::max(raw_max, r);
  CHECK(raw_max > 1e-2);
}

TEST_CASE("el_residual: shear family solves the momentum-form equation") {
  FamilyParams p;
  p.base = 1.0;
  p.wave = 0.5;
  for (double q : {2.5, 3.0, 4.0}) {
    Trajectory traj = exact_family(ExactFamily::shear, p, q, g2, 1.0, 64);
    ResidualScan scan = residual_scan(traj, PdeForm::proof_form);
    CHECK(scan.max_projected_rel <= 1e-6);
  }
}

TEST_CASE("el_residual: the two forms coincide at q = 2") {
  Trajectory traj = exact_family(ExactFamily::taylor_green, {}, 2.0, g2, 1.0, 32);
  ElResidual a = el_residual(traj, 16, PdeForm::proof_form);
  ElResidual b = el_residual(traj, 16, PdeForm::literal_form);
  CHECK(max_abs(a.raw - b.raw) <= 1e-12);
}

TEST_CASE("el_residual: frozen Taylor-Green has an order-one projected residual") {
  Trajectory traj = frozen_taylor_green({}, g2, 1.0, 32);
  ResidualScan scan = residual_scan(traj, PdeForm::proof_form);
  CHECK(scan.max_projected_rel > 0.1);
}

TEST_CASE("exact_family: parameter validation") {
  CHECK_THROWS_AS((void)exact_family(ExactFamily::taylor_green, {}, 3.0, g2, 1.0, 16),
                  InvalidArgument);
  FamilyParams bad;
  bad.base = 0.5;
  bad.wave = 0.6;  // momentum would cross zero
  CHECK_THROWS_AS((void)exact_family(ExactFamily::shear, bad, 3.0, g2, 1.0, 16),
                  InvalidArgument);
  CHECK_THROWS_AS((void)exact_family(ExactFamily::constant, {}, 1.0, g2, 1.0, 16),
                  InvalidArgument);
  CHECK_THROWS_AS(family_from_string("bogus"), InvalidArgument);
}

TEST_CASE("solve_ns: zero and constant data are fixed points") {
  VectorField zero(g2);
  Trajectory t0 = solve_ns(zero, 0.1, 1e-3, 10);
  for (const auto& u : t0.nodes) CHECK(max_abs(u) == 0.0);

  const double c[2] = {0.4, -0.3};
  VectorField uc = VectorField::constant(g2, c);
  Trajectory tc = solve_ns(uc, 0.1, 1e-3, 10);
  for (const auto& u : tc.nodes) CHECK(max_abs(u - uc) < 1e-12);
}

TEST_CASE("solve_ns: Taylor-Green decay, conservation and dissipation") {
  Trajectory exact = exact_family(ExactFamily::taylor_green, {}, 2.0, g2, 1.0, 200);
  Trajectory num = solve_ns(exact.nodes.front(), 1.0, 1e-3, 200);

  // analytic decay at t = 1
  const VectorField diff = num.nodes.back() - exact.nodes.back();
  CHECK(l2_norm(diff) / l2_norm(exact.nodes.front()) <= 1e-6);

  // zero mode conserved exactly, divergence-free at every node,
  // energy non-increasing
  double prev_energy = lq_integral(num.nodes.front(), 2.0);
  for (const auto& u : num.nodes) {
    for (int d = 0; d < 2; ++d) CHECK(std::fabs(integral(u.comp[d])) <= 1e-15);
    CHECK(max_divergence(u) <= 1e-10 * std::max(1.0, max_abs(u)));
  }
  for (std::size_t k = 1; k < num.nodes.size(); ++k) {
    const double e = lq_integral(num.nodes[k], 2.0);
    CHECK(e <= prev_energy * (1.0 + 1e-14));
    prev_energy = e;
  }
}

TEST_CASE("solve_ns: energy dissipates monotonically on random data") {
  RngStream rng(47, 0);
  const double off[2] = {0.0, 0.0};
  VectorField u0 = random_divfree(g2, 3, 0.5, off, rng);
  Trajectory t = solve_ns(u0, 0.2, 1e-3, 20);
  double prev = lq_integral(t.nodes.front(), 2.0);
  for (std::size_t k = 1; k < t.nodes.size(); ++k) {
    const double e = lq_integral(t.nodes[k], 2.0);
    CHECK(e <= prev * (1.0 + 1e-14));
    prev = e;
  }
}

TEST_CASE("solve_ns: CFL violation is reported") {
  FamilyParams p;
  p.amplitude = 60.0;  // max|u| dt / h = 60 * 1e-2 / 0.098 > 0.5
  Trajectory init = exact_family(ExactFamily::taylor_green, p, 2.0, g2, 1.0, 16);
  CHECK_THROWS_AS((void)solve_ns(init.nodes.front(), 0.2, 1e-2, 10), NumericError);
}

TEST_CASE("trajectory: validation catches bad inputs") {
  Trajectory traj = exact_family(ExactFamily::taylor_green, {}, 2.0, g2, 1.0, 16);
  CHECK_NOTHROW(traj.validate());
  traj.q = 1.0;
  CHECK_THROWS_AS(traj.validate(), InvalidArgument);
  traj.q = 2.0;
  traj.nodes[3] = VectorField::sample(g2, [](const double* x, double* v) {
    v[0] = std::sin(x[0]);  // not divergence-free
    v[1] = 0.0;
  });
  CHECK_THROWS_AS(traj.validate(), InvalidArgument);
}
