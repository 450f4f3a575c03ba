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

#include "reduce.hpp"
#include "support.hpp"
#include "variation.hpp"

using namespace pvl;

namespace {

// Unit tests run at a reduced desk scale; the acceptance suite re-runs the
// theorem checks at the full default scale.
const Grid g32(2, 32);
const double kT = 1.0;
const int kK = 64;

std::vector<TestVectorField> small_battery(const Grid& g) { return standard_battery(g, kT); }

// independent high-resolution quadrature of |s'|^q on [0,T]
double envelope_rate_integral(const TimeEnvelope& env, double q) {
  const int n = 20000;
  std::vector<double> f(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double t = env.T * i / n;
    f[i] = std::pow(std::fabs(env.ds(t)), q);
  }
  return simpson(f, env.T / n);
}

}  // namespace

TEST_CASE("energy: eps = 0 collapses to the unperturbed integrand") {
  FamilyParams p;
  p.c = {0.8, 0.6, 0.0};
  const double q = 3.0;
  Trajectory traj = exact_family(ExactFamily::constant, p, q, g32, kT, 16);
  auto battery = small_battery(g32);
  const double e = energy(traj, battery[0], 0.0, q);
  CHECK(e == doctest::Approx(kT / q).epsilon(1e-13));  // ||c|| = 1

  Trajectory tg = exact_family(ExactFamily::taylor_green, {}, 2.0, g32, kT, 64);
  std::vector<double> integrand(tg.nodes.size());
  for (std::size_t k = 0; k < tg.nodes.size(); ++k)
    integrand[k] = lq_integral(tg.nodes[k], 2.0);
  const double direct = simpson(integrand, tg.dt()) / 2.0;
  CHECK(energy(tg, battery[0], 0.0, 2.0) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("energy: translation flow of the zero trajectory (quadrature oracle)") {
  const double c[2] = {2.0, 0.0};
  TestVectorField v(VectorField::constant(g32, c), TimeEnvelope::basic(kT), "const");
  Trajectory zero;
  zero.T = kT;
  zero.q = 2.0;
  zero.nodes.assign(kK + 1, VectorField(g32));

  const double eps = 0.4;
  SUBCASE("q = 2 against the closed form and the same-grid quadrature") {
    // int_0^1 (s')^2 dt = 2/105 for s = t^2 (1-t)^2; the K-node Simpson
    // value carries the quadrature truncation, so match it exactly and
    // the continuum value to its error level
    const double expect = (eps * eps / 2.0) * (2.0 / 105.0) * 4.0;  // ||c||^2 = 4
    CHECK(energy(zero, v, eps, 2.0) == doctest::Approx(expect).epsilon(2e-5));

    std::vector<double> f(kK + 1);
    for (int k = 0; k <= kK; ++k) {
      const double sd = v.envelope.ds(kT * k / kK);
      f[k] = eps * eps * sd * sd * 4.0;
    }
    const double same_grid = simpson(f, kT / kK) / 2.0;
    CHECK(energy(zero, v, eps, 2.0) == doctest::Approx(same_grid).epsilon(1e-12));
  }
  SUBCASE("q = 3 against fine quadrature") {
    const double expect =
        std::pow(eps, 3.0) / 3.0 * envelope_rate_integral(v.envelope, 3.0) * 8.0;
    CHECK(energy(zero, v, eps, 3.0) == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("derivative_analytic: zero direction and constant trajectories") {
  FamilyParams p;
  p.c = {1.0, 0.5, 0.0};
  Trajectory traj = exact_family(ExactFamily::constant, p, 3.0, g32, kT, kK);

  TestVectorField vzero(VectorField(g32), TimeEnvelope::basic(kT), "zero");
  CHECK(derivative_analytic(traj, vzero, 3.0) == 0.0);

  for (const auto& v : small_battery(g32))
    CHECK(std::fabs(derivative_analytic(traj, v, 3.0)) <= 1e-13);
}

TEST_CASE("derivative_analytic: linear in the direction") {
  Trajectory traj = exact_family(ExactFamily::taylor_green, {}, 2.0, g32, kT, kK);
  VectorField w1 = battery_profile(g32, "mixed");
  VectorField w2 = battery_profile(g32, "diag3");
  TimeEnvelope env = TimeEnvelope::basic(kT);
  const double a = 0.37, b = -1.21;
  VectorField wc(g32);
  axpy(a, w1, wc);
  axpy(b, w2, wc);
  const double d1 = derivative_analytic(traj, TestVectorField(w1, env, "w1"), 2.0);
  const double d2 = derivative_analytic(traj, TestVectorField(w2, env, "w2"), 2.0);
  const double dc = derivative_analytic(traj, TestVectorField(wc, env, "wc"), 2.0);
  CHECK(dc == doctest::Approx(a * d1 + b * d2).epsilon(1e-10));
}

TEST_CASE("derivative_el: raw and projected pairings agree for admissible v") {
  Trajectory traj = frozen_taylor_green({}, g32, kT, kK);
  auto battery = small_battery(g32);
  for (const auto& v : battery) {
    const double raw = derivative_el(traj, v, 2.0, PdeForm::proof_form, false);
    const double proj = derivative_el(traj, v, 2.0, PdeForm::proof_form, true);
    CHECK(std::fabs(raw - proj) <= 1e-9 * std::max(1.0, std::fabs(raw)));
  }
}

// Cross-route oracle on a non-solution: all three routes must agree on the
// nonzero derivative (fd vs analytic to 1e-4, analytic vs -el to 1e-5).
TEST_CASE("three derivative routes agree on the frozen Taylor-Green flow") {
  Trajectory traj = frozen_taylor_green({}, g32, kT, kK);
  auto battery = small_battery(g32);
  bool saw_nonzero = false;
  for (const auto& v : battery) {
    const FdDerivative fd = derivative_fd(traj, v, 2.0, 1e-3);
    const double an = derivative_analytic(traj, v, 2.0);
    const double el = derivative_el(traj, v, 2.0, PdeForm::proof_form);
    const double scale = std::max(1.0, std::fabs(an));
    CHECK(std::fabs(fd.value - an) <= 1e-4 * scale);
    CHECK(std::fabs(an + el) <= 1e-5 * scale);
    if (std::fabs(an) > 1e-3) saw_nonzero = true;
  }
  CHECK(saw_nonzero);
}

TEST_CASE("exact families have vanishing Gateaux derivatives") {
  FamilyParams shear;
  shear.base = 1.0;
  shear.wave = 0.5;
  Trajectory traj = exact_family(ExactFamily::shear, shear, 3.0, g32, kT, kK);
  auto battery = small_battery(g32);
  const double escale = std::max(1.0, energy(traj, battery[0], 0.0, 3.0));
  for (const auto& v : battery) {
    const FdDerivative fd = derivative_fd(traj, v, 3.0, 1e-3);
    CHECK(std::fabs(fd.value) <= 1e-4 * escale);
  }
}

TEST_CASE("criticality_report: verdicts") {
  auto battery = small_battery(g32);

  SUBCASE("shear q = 3 is critical") {
    FamilyParams p;
    p.base = 1.0;
    p.wave = 0.5;
    Trajectory traj = exact_family(ExactFamily::shear, p, 3.0, g32, kT, kK);
    VariationReport rep = criticality_report(traj, battery);
    CHECK(rep.verdict == Verdict::critical);
    CHECK(rep.residual_norm_rel <= rep.theta_res);
    CHECK(rep.max_abs_fd <= rep.theta_crit);
  }

  SUBCASE("frozen Taylor-Green is non-critical with a wide margin") {
    Trajectory traj = frozen_taylor_green({}, g32, kT, kK);
    VariationReport rep = criticality_report(traj, battery);
    CHECK(rep.verdict == Verdict::non_critical);
    CHECK(rep.max_abs_fd >= 10.0 * rep.theta_crit);
    CHECK(rep.residual_norm_rel > rep.theta_res);
  }

  SUBCASE("zero trajectory is critical") {
    FamilyParams p;
    p.c = {0.0, 0.0, 0.0};
    Trajectory traj = exact_family(ExactFamily::constant, p, 3.0, g32, kT, kK);
    VariationReport rep = criticality_report(traj, battery);
    CHECK(rep.verdict == Verdict::critical);
  }

  SUBCASE("small batteries are rejected") {
    Trajectory traj = frozen_taylor_green({}, g32, kT, kK);
    std::vector<TestVectorField> few(battery.begin(), battery.begin() + 4);
    CHECK_THROWS_AS((void)criticality_report(traj, few), InvalidArgument);
  }
}

TEST_CASE("derivative_fd: step validation") {
  Trajectory traj = frozen_taylor_green({}, g32, kT, 16);
  auto battery = small_battery(g32);
  CHECK_THROWS_AS((void)derivative_fd(traj, battery[0], 2.0, 1e-5), InvalidArgument);
  CHECK_THROWS_AS((void)derivative_fd(traj, battery[0], 2.0, 0.1), InvalidArgument);
}
