#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "stiff_relax/bgk.hpp"
#include "stiff_relax/errors.hpp"

using namespace stiff_relax;

namespace {

constexpr double kPi = std::numbers::pi;

Moments uniform_moments(std::size_t nx, double rho, double u, double t) {
  const std::vector<double> r(nx, rho), v(nx, u), tt(nx, t);
  return Moments::from_primitive(r, v, tt);
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  return m;
}

double max_abs_diff(const KineticField& a, const KineticField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) m = std::max(m, std::abs(a.data[k] - b.data[k]));
  return m;
}

}  // namespace

TEST_CASE("velocity grid is symmetric midpoints") {
  const VelocityGrid vg(60, 10.0);
  CHECK(vg.size() == 60);
  CHECK(vg.dv() == doctest::Approx(20.0 / 60));
  CHECK(vg[0] == doctest::Approx(-10.0 + vg.dv() / 2));
  for (std::size_t j = 0; j < 60; ++j) CHECK(vg[j] == -vg[59 - j]);
  const VelocityGrid odd(7, 1.0);
  CHECK(odd[3] == 0.0);
  CHECK_THROWS_AS(VelocityGrid(1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(VelocityGrid(10, 0.0), InvalidArgument);
}

TEST_CASE("Maxwellian values and moment round trip") {
  const VelocityGrid odd(151, 15.0);
  const KineticField m = maxwellian(uniform_moments(5, 1.0, 0.0, 1.0), odd, 1.0);
  CHECK(m(2, 75) == doctest::Approx(0.3989422804).epsilon(1e-10));

  const VelocityGrid vg(150, 15.0);
  for (double t : {0.5, 1.0, 2.0})
    for (double u : {-2.0, 0.0, 1.3, 2.0}) {
      const Moments in = uniform_moments(3, 1.7, u, t);
      const Moments out = moments(maxwellian(in, vg, 1.0), vg);
      CHECK(max_rel(out.rho, in.rho) <= 1e-12);
      CHECK(max_rel(out.momentum, in.momentum) <= 1e-12);
      CHECK(max_rel(out.energy, in.energy) <= 1e-12);
    }

  const KineticField m1 = maxwellian(uniform_moments(4, 1.0, 0.3, 0.8), vg, 1.0);
  const KineticField m3 = maxwellian(uniform_moments(4, 3.0, 0.3, 0.8), vg, 1.0);
  for (std::size_t k = 0; k < m1.data.size(); ++k)
    CHECK(m3.data[k] == doctest::Approx(3.0 * m1.data[k]).epsilon(1e-14));
}

TEST_CASE("realizability") {
  const VelocityGrid vg(20, 5.0);
  CHECK_THROWS_AS(moments(KineticField(6, 20, 1.0), vg), RealizabilityError);
  CHECK_THROWS_AS(maxwellian(uniform_moments(3, 1.0, 0.0, -1.0), vg, 1.0), RealizabilityError);
  CHECK_THROWS_AS(maxwellian(uniform_moments(3, 0.0, 0.0, 1.0), vg, 1.0), RealizabilityError);
  const Moments raw = raw_moments(KineticField(6, 20, 1.0), vg);
  CHECK(raw.rho[0] == 0.0);
  CHECK_THROWS_AS(moments(KineticField(6, 21, 1.0), vg), ShapeMismatch);
}

TEST_CASE("shifting in velocity shifts the bulk velocity") {
  const VelocityGrid vg(150, 15.0);
  // g(v) = v^2 exp(-v^2) shape, not a Maxwellian.
  auto g = [](double v) { return (0.2 + v * v) * std::exp(-v * v / 1.5); };
  KineticField f(4, 150, 1.0), fs(4, 150, 1.0);
  const double u0 = 0.7;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 150; ++j) {
      f(i, j) = g(vg[j]);
      fs(i, j) = g(vg[j] - u0);
    }
  const Moments a = moments(f, vg), b = moments(fs, vg);
  CHECK(b.rho[1] == doctest::Approx(a.rho[1]).epsilon(1e-12));
  CHECK(b.velocity(1) == doctest::Approx(a.velocity(1) + u0).epsilon(1e-12));
  CHECK(b.temperature(1) == doctest::Approx(a.temperature(1)).epsilon(1e-12));
}

TEST_CASE("transport of uniform data vanishes and telescopes") {
  const VelocityGrid vg(20, 5.0);
  const KineticField m = maxwellian(uniform_moments(10, 1.0, 0.5, 1.0), vg, 2.0);
  const KineticField r = transport_rhs(m, vg);
  for (double v : r.data) CHECK(std::abs(v) <= 1e-13);

  const KineticField f = chapman_init(default_bgk_profile(), 0.1, vg, 24, 2.0, 2);
  const KineticField t = transport_rhs(f, vg);
  for (std::size_t j = 0; j < vg.size(); ++j) {
    const auto row = t.row(j);
    CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0)) <= 1e-12);
  }
  CHECK_THROWS_AS(transport_rhs(KineticField(4, 20, 1.0), vg), InvalidArgument);
}

TEST_CASE("transport converges at high order") {
  const VelocityGrid vg(8, 2.0);
  auto err = [&](std::size_t nx) {
    const double h = 2.0 / nx;
    KineticField f(nx, 8, 2.0);
    for (std::size_t i = 0; i < nx; ++i) {
      // Cell averages of sin(pi x).
      const double avg = -(std::cos(kPi * (i + 1) * h) - std::cos(kPi * i * h)) / (kPi * h);
      for (std::size_t j = 0; j < 8; ++j) f(i, j) = avg * std::exp(-vg[j] * vg[j]);
    }
    const KineticField r = transport_rhs(f, vg);
    double e = 0.0;
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < 8; ++j) {
        // Cell average of -v pi cos(pi x) g(v).
        const double exact =
            -vg[j] * (std::sin(kPi * (i + 1) * h) - std::sin(kPi * i * h)) / h * std::exp(-vg[j] * vg[j]);
        e = std::max(e, std::abs(r(i, j) - exact));
      }
    return e;
  };
  CHECK(std::log2(err(40) / err(80)) > 4.0);
  CHECK(std::log2(err(80) / err(160)) > 4.0);
}

TEST_CASE("global Maxwellian is stationary") {
  const VelocityGrid vg(40, 8.0);
  const KineticField m = maxwellian(uniform_moments(16, 1.2, 0.4, 0.9), vg, 2.0);
  for (int q = 1; q <= 4; ++q) {
    BgkHistory h(q);
    for (int i = 0; i < q; ++i) h.push(m, 0.01 * i);
    for (int s = 0; s < 10; ++s) step_bdf_bgk(h, bdf_tableau(q), {1e-3}, 0.01, vg);
    CHECK(max_abs_diff(h.newest(), m) <= 1e-12);
  }
}

TEST_CASE("stiff limit projects onto the Maxwellian") {
  const VelocityGrid vg(40, 8.0);
  const KineticField f0 = chapman_init(default_bgk_profile(), 0.5, vg, 32, 2.0, 2);
  const double dt = 2.0 / 32 / (3 * 8.0);
  for (double eps : {1e-14, 1e-12}) {
    BgkHistory h(2);
    h.push(f0, 0.0);
    h.push(f0, dt);
    const KineticField& f = step_bdf_bgk(h, bdf_tableau(2), {eps}, dt, vg);
    const KineticField m = maxwellian(moments(f, vg), vg, 2.0);
    double norm = 0.0;
    for (double v : f.data) norm = std::max(norm, std::abs(v));
    CHECK(max_abs_diff(f, m) <= 1e-8 * norm);
  }
}

TEST_CASE("conservation per step") {
  const VelocityGrid vg(60, 10.0);
  const double dt = 2.0 / 40 / 30;
  const KineticField f0 = chapman_init(default_bgk_profile(), 0.01, vg, 40, 2.0, 2);
  BgkHistory h = bootstrap_bgk(f0, 2, 0.0, dt, {0.01}, vg, 10);
  ConservedTotals prev = conserved_totals(h.newest(), vg);
  for (int s = 0; s < 20; ++s) {
    step_bdf_bgk(h, bdf_tableau(2), {0.01}, dt, vg);
    const ConservedTotals c = conserved_totals(h.newest(), vg);
    CHECK(std::abs(c.mass - prev.mass) <= 1e-10 * std::abs(prev.mass));
    CHECK(std::abs(c.momentum - prev.momentum) <= 1e-10 * std::abs(prev.momentum));
    CHECK(std::abs(c.energy - prev.energy) <= 1e-10 * std::abs(prev.energy));
    prev = c;
  }
}

TEST_CASE("Chapman-Enskog initial data") {
  const VelocityGrid vg(60, 10.0);
  const BgkProfile p = default_bgk_profile();
  CHECK(p.rho(0.0) == 1.0);
  CHECK(p.rho(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.temperature(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.u(0.3) == 1.0);
  CHECK(p.temperature_dx(0.4) ==
        doctest::Approx((p.temperature(0.4 + 1e-6) - p.temperature(0.4 - 1e-6)) / 2e-6)
            .epsilon(1e-7));

  const KineticField a = chapman_init(p, 0.0, vg, 20, 2.0, 1);
  const KineticField b = chapman_init(p, 0.0, vg, 20, 2.0, 2);
  CHECK(max_abs_diff(a, b) == 0.0);

  // The correction is odd in (v - u) and carries no mass or momentum.
  const KineticField c = chapman_init(p, 0.3, vg, 20, 2.0, 2);
  const Moments ma = moments(a, vg), mc = moments(c, vg);
  CHECK(max_rel(mc.rho, ma.rho) <= 1e-10);

  // Zero temperature gradient: no correction.
  BgkProfile flat{[](double) { return 1.0; }, [](double) { return 0.5; },
                  [](double) { return 0.8; }, [](double) { return 0.0; }};
  const KineticField f1 = chapman_init(flat, 0.0, vg, 10, 2.0, 1);
  const KineticField f2 = chapman_init(flat, 0.7, vg, 10, 2.0, 2);
  CHECK(max_abs_diff(f1, f2) == 0.0);
  const KineticField fm = chapman_init(uniform_moments(10, 1.0, 0.5, 0.8), 0.7, vg, 2.0, 2);
  CHECK(max_abs_diff(f1, fm) <= 1e-14);

  CHECK_THROWS_AS(chapman_init(p, 0.1, vg, 20, 2.0, 3), InvalidArgument);
  CHECK_THROWS_AS(chapman_init(p, -0.1, vg, 20, 2.0, 1), InvalidArgument);
}

TEST_CASE("bootstrap levels") {
  const VelocityGrid vg(30, 8.0);
  const KineticField f0 = chapman_init(default_bgk_profile(), 1e-3, vg, 20, 2.0, 1);
  const BgkHistory h1 = bootstrap_bgk(f0, 1, 0.0, 0.01, {1e-3}, vg);
  CHECK(max_abs_diff(h1[0], f0) == 0.0);

  const KineticField m = maxwellian(uniform_moments(20, 1.0, 0.2, 1.0), vg, 2.0);
  const BgkHistory he = bootstrap_bgk(m, 3, 0.0, 0.005, {1e-6}, vg, 10);
  for (int i = 0; i < 3; ++i) CHECK(max_abs_diff(he[i], m) <= 1e-11);
  CHECK(he.time(2) == doctest::Approx(0.01));
}

TEST_CASE("restriction and distance") {
  const VelocityGrid vg(10, 4.0);
  KineticField fine(8, 10, 2.0);
  for (std::size_t k = 0; k < fine.data.size(); ++k) fine.data[k] = static_cast<double>(k % 8);
  const KineticField c = coarsen_pairs(fine);
  CHECK(c.nx == 4);
  CHECK(c(1, 3) == 2.5);
  KineticField z(4, 10, 2.0);
  KineticField one = z;
  one(0, 0) = 1.0;
  CHECK(kinetic_l2_distance(z, one, vg) == doctest::Approx(std::sqrt(0.5 * 0.8)));
  CHECK_THROWS_AS(coarsen_pairs(KineticField(5, 10, 2.0)), ShapeMismatch);
  CHECK_THROWS_AS(kinetic_l2_distance(z, fine, vg), ShapeMismatch);
}
