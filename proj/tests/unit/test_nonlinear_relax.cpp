#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stiff_relax/errors.hpp"
#include "stiff_relax/nonlinear_relax.hpp"
#include "stiff_relax/spectral_linear.hpp"

using namespace stiff_relax;

namespace {

NonlinearState constant_state(std::size_t n, double u, double v) {
  NonlinearState s{CellField(n, 1.0), CellField(n, 1.0)};
  std::fill(s.u.values.begin(), s.u.values.end(), u);
  std::fill(s.v.values.begin(), s.v.values.end(), v);
  return s;
}

double max_abs_diff(const CellField& a, const CellField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.cells(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace

TEST_CASE("spatially constant equilibrium is a fixed point") {
  const NonlinearParams p{0.2, 1e-3};
  for (int q = 1; q <= 4; ++q) {
    NonlinearHistory h(q);
    for (int i = 0; i < q; ++i) h.push(constant_state(16, 0.8, 0.2 * 0.64), 0.01 * i);
    for (int s = 0; s < 10; ++s) step_bdf_nonlinear(h, bdf_tableau(q), p, 0.01);
    for (std::size_t i = 0; i < 16; ++i) {
      CHECK(h.newest().u.values[i] == doctest::Approx(0.8).epsilon(1e-14));
      CHECK(h.newest().v.values[i] == doctest::Approx(0.128).epsilon(1e-14));
    }
  }
}

TEST_CASE("stiff limit relaxes onto the local equilibrium") {
  const double b = 0.2, dt = 0.0025;
  NonlinearParams p{b, 1e-14};
  for (int q = 1; q <= 4; ++q) {
    CAPTURE(q);
    NonlinearHistory h(q);
    for (int i = 0; i < q; ++i) {
      NonlinearState s = nonlinear_initial_state(100, p, 1);
      // Shift each level slightly so the explicit part is not trivial.
      for (double& u : s.u.values) u *= 1.0 + 0.01 * i;
      for (std::size_t j = 0; j < s.u.cells(); ++j) s.v.values[j] = b * s.u.values[j] * s.u.values[j];
      h.push(s, i * dt);
    }
    const NonlinearState& n = step_bdf_nonlinear(h, bdf_tableau(q), p, dt);
    double m = 0.0;
    for (std::size_t j = 0; j < n.u.cells(); ++j)
      m = std::max(m, std::abs(n.v.values[j] - b * n.u.values[j] * n.u.values[j]));
    CHECK(m <= 1e-10);
  }
}

TEST_CASE("mass is conserved") {
  const NonlinearParams p{0.2, 1e-2};
  const double dx = 1.0 / 80, dt = dx / 4;
  const NonlinearState init = nonlinear_initial_state(80, p, 1);
  NonlinearHistory h = bootstrap_nonlinear(init, 3, 0.0, dt, p, 50);
  const double m0 = total_mass(init.u);
  for (int s = 0; s < 200; ++s) step_bdf_nonlinear(h, bdf_tableau(3), p, dt);
  CHECK(std::abs(total_mass(h.newest().u) - m0) <= 1e-12);
}

TEST_CASE("bootstrap") {
  const NonlinearParams p{0.2, 1e-3};
  const NonlinearState init = nonlinear_initial_state(40, p, 1);
  const NonlinearHistory h1 = bootstrap_nonlinear(init, 1, 0.5, 0.01, p);
  REQUIRE(h1.size() == 1);
  CHECK(max_abs_diff(h1[0].u, init.u) == 0.0);
  CHECK(h1.time(0) == 0.5);

  const NonlinearState eq = constant_state(20, 0.5, 0.05);
  const NonlinearHistory he = bootstrap_nonlinear(eq, 3, 0.0, 0.01, p, 20);
  for (int i = 0; i < 3; ++i) {
    CHECK(max_abs_diff(he[i].u, eq.u) <= 1e-14);
    CHECK(max_abs_diff(he[i].v, eq.v) <= 1e-14);
  }

  // Refining the substep converges at the RK order.
  const double dt = 0.02;
  const NonlinearParams q{0.2, 0.1};
  auto level = [&](int sub) { return bootstrap_nonlinear(init, 2, 0.0, dt, q, sub)[1]; };
  const NonlinearState ref = level(400);
  const double e1 = max_abs_diff(level(4).u, ref.u) + max_abs_diff(level(4).v, ref.v);
  const double e2 = max_abs_diff(level(8).u, ref.u) + max_abs_diff(level(8).v, ref.v);
  CHECK(std::log2(e1 / e2) > 2.5);

  CHECK_THROWS_AS(bootstrap_nonlinear(init, 0, 0.0, dt, p), InvalidArgument);
  CHECK_THROWS_AS(bootstrap_nonlinear(init, 2, 0.0, dt, p, 0), InvalidArgument);
}

TEST_CASE("b = 0 agrees with the spectral solution of the linear system") {
  const double eps = 0.1, L = 1.0, t_final = 0.2;
  const NonlinearParams p{0.0, eps};
  ConservedState s0{project([](double x) { return Complex(nonlinear_u0(x)); }, 48, L),
                    SpectralField(48, L)};
  const ConservedState ex = exact_solution(s0, t_final, {0.0, eps});
  auto error = [&](std::size_t n) {
    const double dt = L / n / 4;
    NonlinearHistory h = bootstrap_nonlinear(nonlinear_initial_state(n, p, 1), 2, 0.0, dt, p, 50);
    const int steps = static_cast<int>(std::lround(t_final / dt)) - 1;
    for (int s = 0; s < steps; ++s) step_bdf_nonlinear(h, bdf_tableau(2), p, dt);
    REQUIRE(h.newest_time() == doctest::Approx(t_final));
    const CellField ue = cell_averages([&](double x) { return ex.u.evaluate(x).real(); }, n, L);
    const CellField ve = cell_averages([&](double x) { return ex.v.evaluate(x).real(); }, n, L);
    return max_abs_diff(h.newest().u, ue) + max_abs_diff(h.newest().v, ve);
  };
  const double e1 = error(100), e2 = error(200);
  CHECK(e1 <= 5e-4);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("no spurious extrema on step data in the stiff regime") {
  const NonlinearParams p{0.2, 1e-6};
  const std::size_t n = 100;
  const double dt = 0.25 / n;
  NonlinearState s{cell_averages([](double x) { return (x >= 0.25 && x < 0.75) ? 1.0 : 0.5; },
                                 n, 1.0),
                   CellField(n, 1.0)};
  for (std::size_t i = 0; i < n; ++i) s.v.values[i] = p.b * s.u.values[i] * s.u.values[i];
  NonlinearHistory h = bootstrap_nonlinear(s, 2, 0.0, dt, p, 20);
  for (int k = 0; k < 40; ++k) step_bdf_nonlinear(h, bdf_tableau(2), p, dt);
  const auto [lo, hi] = std::minmax_element(h.newest().u.values.begin(), h.newest().u.values.end());
  CHECK(*lo >= 0.5 - 1e-3);
  CHECK(*hi <= 1.0 + 1e-3);
}

TEST_CASE("initial data") {
  const NonlinearParams p{0.2, 0.05};
  const NonlinearState s1 = nonlinear_initial_state(50, p, 1);
  const NonlinearState s2 = nonlinear_initial_state(50, p, 2);
  CHECK(max_abs_diff(s1.u, s2.u) == 0.0);
  const double pi = std::numbers::pi;
  const double x = 0.3;
  CHECK(nonlinear_u0(x) == doctest::Approx(0.5 * std::exp(std::sin(2 * pi * x))));
  CHECK(nonlinear_u0_dx(x) ==
        doctest::Approx((nonlinear_u0(x + 1e-6) - nonlinear_u0(x - 1e-6)) / 2e-6).epsilon(1e-8));
  // Difference of the two initializations is the averaged first-order correction.
  const CellField corr = cell_averages(
      [&](double y) {
        const double u = nonlinear_u0(y);
        return -p.eps * (1 - 4 * p.b * p.b * u * u) * nonlinear_u0_dx(y);
      },
      50, 1.0);
  for (std::size_t i = 0; i < 50; ++i)
    CHECK(s2.v.values[i] - s1.v.values[i] == doctest::Approx(corr.values[i]).epsilon(1e-10));
  CHECK_THROWS_AS(nonlinear_initial_state(50, p, 3), InvalidArgument);
  CHECK_THROWS_AS(nonlinear_initial_state(50, {0.2, 0.0}, 1), InvalidArgument);
}

TEST_CASE("packing round trip") {
  const NonlinearParams p{0.2, 1.0};
  NonlinearSystem sys(12, 1.0, p);
  const NonlinearState s = nonlinear_initial_state(12, p, 2);
  const auto y = sys.pack(s);
  CHECK(y.size() == sys.size());
  const NonlinearState back = sys.unpack(y);
  CHECK(max_abs_diff(back.u, s.u) == 0.0);
  CHECK(max_abs_diff(back.v, s.v) == 0.0);
  CHECK_THROWS_AS(NonlinearSystem(4, 1.0, p), InvalidArgument);
}
