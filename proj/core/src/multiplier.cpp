#include "stiff_relax/multiplier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "stiff_relax/errors.hpp"

namespace stiff_relax {
namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;

Wide sqrt30() {
  static const Wide s = boost::multiprecision::sqrt(Wide(30));
  return s;
}

// phi(z) = sum_k p_k z^(2k), coefficients p_0..p_4 of z^0, z^2, ..., z^8.
std::array<Wide, 5> phi_coefficients() {
  const Wide s = sqrt30();
  return {Wide(-1534797) + Wide(280098) * s,
          -(Wide(-1279488) + Wide(225012) * s),
          Wide(-10632888) + Wide(2085424) * s,
          -(Wide(-9118528) + Wide(864688) * s),
          Wide(-49444432) + Wide(8018016) * s};
}

Wide phi(const Wide& z) {
  static const auto p = phi_coefficients();
  const Wide z2 = z * z;
  Wide acc = p[4];
  for (int k = 3; k >= 0; --k) acc = acc * z2 + p[static_cast<std::size_t>(k)];
  return acc;
}

Wide zstar_wide() {
  Wide lo("0.106"), hi("0.107");
  Wide flo = phi(lo);
  const Wide fhi = phi(hi);
  if (flo * fhi > 0)
    throw NumericalFailure("solve_zstar: phi does not change sign on (0.106, 0.107)");
  for (int it = 0; it < 200; ++it) {
    const Wide mid = (lo + hi) / 2;
    const Wide fm = phi(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

MultiplierSet multiplier_q3() {
  const Wide s = sqrt30();
  const Wide z = zstar_wide();
  const Wide z2 = z * z, z3 = z2 * z, z4 = z2 * z2, z5 = z4 * z, z6 = z4 * z2,
             z7 = z6 * z;
  auto d = [](const Wide& w) { return static_cast<double>(w); };

  MultiplierSet ms;
  ms.q = 3;
  ms.g.resize(3, 3);
  ms.g(0, 0) = d(s / 187 + Wide(8) / 187);
  ms.g(1, 1) = d(s / 34 + Wide(95) / 187);
  ms.g(2, 2) = d(s / 22 + Wide(7) / 11);
  ms.g(0, 1) = ms.g(1, 0) = d(-3 * s / 187 - Wide(24) / 187);
  ms.g(0, 2) = ms.g(2, 0) = d(3 * s / 187 + Wide(24) / 187);
  ms.g(1, 2) = ms.g(2, 1) = d(-6 * s / 187 - Wide(9) / 17);

  ms.eta.resize(2);
  ms.eta(0) = d(s / 17 - Wide(9) / 17);
  ms.eta(1) = d(-2 * s / 17 + Wide(18) / 17);
  ms.d1 = d(-s / 22 + Wide(4) / 11);
  ms.d2 = d(11 * s / 102 + Wide(44) / 51);

  const Wide a11 =
      ((Wide(5576634533850159812LL) - Wide(1018149509409713088LL) * s) * z6 +
       (Wide(-827564175794699168LL) + Wide(151091855378090876LL) * s) * z4 +
       (Wide(1317402834013463958LL) - Wide(240523749880736072LL) * s) * z2 +
       (Wide(-150042582540986748LL) + Wide(27393902345391585LL) * s)) /
      (Wide(-1011078865344820767LL) + Wide(184596900652059714LL) * s);
  const Wide a12 =
      -((Wide(20162952) - Wide(3576664) * s) * z6 +
        (Wide(-11669820) + Wide(2036872) * s) * z4 +
        (Wide(9540978) - Wide(1747158) * s) * z2 +
        (Wide(-4604391) + Wide(840294) * s)) /
      (Wide(-7213644) + Wide(1314780) * s);
  const Wide a22 = 1 - z2;
  ms.a.resize(2, 2);
  ms.a(0, 0) = d(a11);
  ms.a(0, 1) = ms.a(1, 0) = d(a12);
  ms.a(1, 1) = d(a22);

  const Wide c1 = ((Wide(1454248) - Wide(235824) * s) * z7 +
                   (Wide(-268192) + Wide(25432) * s) * z5 +
                   (Wide(312732) - Wide(61336) * s) * z3 +
                   (Wide(-37632) + Wide(6618) * s) * z) /
                  (Wide(-106083) + Wide(19335) * s);
  const Wide c2 = (Wide(-39304) * z7 + (Wide(28900) + Wide(1156) * s) * z5 +
                   (Wide(-8466) + Wide(1904) * s) * z3 +
                   (Wide(4617) - Wide(819) * s) * z) /
                  (Wide(-3078) + Wide(546) * s);
  ms.c.resize(3);
  ms.c(0) = d(c1);
  ms.c(1) = d(c2);
  ms.c(2) = d(z);
  return ms;
}

MultiplierSet multiplier_q4() {
  MultiplierSet ms;
  ms.q = 4;
  ms.g.resize(4, 4);
  auto sym = [](Eigen::MatrixXd& m, int i, int j, double v) {
    m(i - 1, j - 1) = v;
    m(j - 1, i - 1) = v;
  };
  sym(ms.g, 1, 1, 0.0039752881793877403062594960990749);
  sym(ms.g, 2, 2, 0.064911795951738806179916997308306);
  sym(ms.g, 3, 3, 0.15895411498724386738087416173813);
  sym(ms.g, 4, 4, 0.094405276410813782029324113702474);
  sym(ms.g, 1, 2, -0.015901152717550961225037984396299);
  sym(ms.g, 1, 3, 0.023851729076326441837556976594449);
  sym(ms.g, 1, 4, -0.015901152717550961225037984396299);
  sym(ms.g, 2, 3, -0.099845362848676151804359071547141);
  sym(ms.g, 2, 4, 0.068060968391835181509937875064459);
  sym(ms.g, 3, 4, -0.11343769059020016642872820354501);

  ms.eta.resize(3);
  ms.eta << 0.15803668922323725486664131361509,
      -0.71978015153831346379435821236894, 1.4954886593252805371567252971026;
  ms.d1 = 0.90559472358918621797067588629753;
  ms.d2 = 0.13803083956207431618956583677343;

  ms.a.resize(3, 3);
  sym(ms.a, 1, 1, 0.33641496341408589312936763149214);
  sym(ms.a, 2, 2, 0.76333671636580335303312323666967);
  sym(ms.a, 3, 3, 0.98143988982596163900489424649966);
  sym(ms.a, 1, 2, -0.37897607563001842534574230771888);
  sym(ms.a, 1, 3, 0.27087482555618781445745449601102);
  sym(ms.a, 2, 3, -0.68412028602560052688774821729113);

  ms.c.resize(4);
  ms.c << 0.58001289935145915953659169454951,
      -0.65339249532858690456475648019655, 0.46701517476433063541910705624076,
      -0.13623549527945483633692800818261;
  return ms;
}

// Multiplier vector over u_0..u_q: m_0 = 0, m_j = -eta_j, m_q = 1.
Eigen::VectorXd multiplier_vector(const MultiplierSet& ms) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(ms.q + 1);
  for (int j = 1; j < ms.q; ++j) m(j) = -ms.eta(j - 1);
  m(ms.q) = 1.0;
  return m;
}

void require_same_order(const MultiplierSet& ms, const BdfTableau& tab) {
  if (ms.q != tab.q)
    throw ShapeMismatch("multiplier set and tableau have different orders");
}

// Hermitian form sum_ij h_ij x_i conj(x_j) on consecutive entries of u
// starting at `offset`.
double hermitian_form(const Eigen::MatrixXd& h, std::span<const Complex> u,
                      std::size_t offset) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      sum += h(i, j) * (u[offset + static_cast<std::size_t>(i)] *
                        std::conj(u[offset + static_cast<std::size_t>(j)]))
                           .real();
  return sum;
}

Complex multiplier_value(const MultiplierSet& ms, std::span<const Complex> u) {
  Complex m = u[static_cast<std::size_t>(ms.q)];
  for (int j = 1; j < ms.q; ++j) m -= ms.eta(j - 1) * u[static_cast<std::size_t>(j)];
  return m;
}

template <class Residual>
double max_sampled(int q, int samples, std::uint64_t seed, Residual&& residual) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Complex> u(static_cast<std::size_t>(q) + 1);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    for (auto& x : u) {
      const double re = unit(rng);
      x = Complex(re, unit(rng));
    }
    worst = std::max(worst, residual(u));
  }
  return worst;
}

}  // namespace

double solve_zstar() { return static_cast<double>(zstar_wide()); }

double zstar_polynomial(double z) {
  static const auto p = phi_coefficients();
  const double z2 = z * z;
  double acc = static_cast<double>(p[4]);
  for (int k = 3; k >= 0; --k)
    acc = acc * z2 + static_cast<double>(p[static_cast<std::size_t>(k)]);
  return acc;
}

double zstar_polynomial_scale(double z) {
  static const auto p = phi_coefficients();
  double scale = 0.0;
  double zp = 1.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    scale += std::abs(static_cast<double>(p[k])) * zp;
    zp *= z * z;
  }
  return scale;
}

MultiplierSet multiplier_set(int q) {
  switch (q) {
    case 1: {
      MultiplierSet ms;
      ms.q = 1;
      ms.g = Eigen::MatrixXd::Constant(1, 1, 0.5);
      ms.a.resize(0, 0);
      ms.eta.resize(0);
      ms.c = Eigen::VectorXd::Constant(1, 1.0);
      ms.d1 = 0.5;
      ms.d2 = 1.0;
      return ms;
    }
    case 2: {
      MultiplierSet ms;
      ms.q = 2;
      ms.g.resize(2, 2);
      ms.g << 1.0 / 6.0, -1.0 / 3.0, -1.0 / 3.0, 5.0 / 6.0;
      ms.a = Eigen::MatrixXd::Zero(1, 1);
      ms.eta = Eigen::VectorXd::Zero(1);
      ms.c.resize(2);
      ms.c << 0.0, 1.0;
      ms.d1 = 1.0 / 6.0;
      ms.d2 = 1.5;
      return ms;
    }
    case 3:
      return multiplier_q3();
    case 4:
      return multiplier_q4();
    default:
      throw UnsupportedOrder(q);
  }
}

double identity_g_residual(const MultiplierSet& ms, const BdfTableau& tab,
                           std::span<const Complex> u) {
  require_same_order(ms, tab);
  const int q = ms.q;
  if (u.size() != static_cast<std::size_t>(q) + 1)
    throw ShapeMismatch("identity_g_residual: need q+1 values");
  const Complex m = multiplier_value(ms, u);
  Complex bdf = 0.0, explicit_part = 0.0;
  for (int i = 0; i <= q; ++i) bdf += tab.alpha[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
  for (int i = 0; i < q; ++i)
    explicit_part += tab.gamma[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
  const double lhs = (std::conj(m) * bdf).real();
  const double rhs = hermitian_form(ms.g, u, 1) - hermitian_form(ms.g, u, 0) +
                     ms.d1 * std::norm(m - ms.d2 * explicit_part);
  return std::abs(lhs - rhs);
}

double identity_a_residual(const MultiplierSet& ms, std::span<const Complex> u) {
  const int q = ms.q;
  if (u.size() != static_cast<std::size_t>(q) + 1)
    throw ShapeMismatch("identity_a_residual: need q+1 values");
  const Complex m = multiplier_value(ms, u);
  Complex lin = 0.0;
  for (int i = 1; i <= q; ++i) lin += ms.c(i - 1) * u[static_cast<std::size_t>(i)];
  const double lhs = (std::conj(m) * u[static_cast<std::size_t>(q)]).real();
  const double rhs = hermitian_form(ms.a, u, 2) - hermitian_form(ms.a, u, 1) +
                     std::norm(lin);
  return std::abs(lhs - rhs);
}

IdentityResidual verify_identity_g(const MultiplierSet& ms,
                                   const BdfTableau& tab, int samples,
                                   std::uint64_t seed) {
  require_same_order(ms, tab);
  const int q = ms.q;
  IdentityResidual r;
  r.sampled = max_sampled(q, samples, seed, [&](std::span<const Complex> u) {
    return identity_g_residual(ms, tab, u);
  });

  // Both sides as symmetric coefficient matrices over u_0..u_q.
  const Eigen::VectorXd m = multiplier_vector(ms);
  Eigen::VectorXd alpha(q + 1), gamma = Eigen::VectorXd::Zero(q + 1);
  for (int i = 0; i <= q; ++i) alpha(i) = tab.alpha[static_cast<std::size_t>(i)];
  for (int i = 0; i < q; ++i) gamma(i) = tab.gamma[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd lhs = 0.5 * (m * alpha.transpose() + alpha * m.transpose());
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(q + 1, q + 1);
  rhs.block(1, 1, q, q) += ms.g;
  rhs.block(0, 0, q, q) -= ms.g;
  const Eigen::VectorXd square = m - ms.d2 * gamma;
  rhs += ms.d1 * square * square.transpose();
  r.coefficient = (lhs - rhs).cwiseAbs().maxCoeff();
  return r;
}

IdentityResidual verify_identity_a(const MultiplierSet& ms, int samples,
                                   std::uint64_t seed) {
  const int q = ms.q;
  IdentityResidual r;
  r.sampled = max_sampled(q, samples, seed, [&](std::span<const Complex> u) {
    return identity_a_residual(ms, u);
  });

  const Eigen::VectorXd m = multiplier_vector(ms);
  Eigen::VectorXd last = Eigen::VectorXd::Zero(q + 1);
  last(q) = 1.0;
  const Eigen::MatrixXd lhs = 0.5 * (m * last.transpose() + last * m.transpose());
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(q + 1, q + 1);
  if (q > 1) {
    rhs.block(2, 2, q - 1, q - 1) += ms.a;
    rhs.block(1, 1, q - 1, q - 1) -= ms.a;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(q + 1);
  c.tail(q) = ms.c;
  rhs += c * c.transpose();
  r.coefficient = (lhs - rhs).cwiseAbs().maxCoeff();
  return r;
}

EigenExtrema quadratic_form_extrema(const Eigen::MatrixXd& input) {
  if (input.rows() != input.cols())
    throw InvalidArgument("quadratic_form_extrema: matrix is not square");
  const Eigen::Index n = input.rows();
  if (n == 0) return {};
  const double scale = std::max(input.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(input(i, j) - input(j, i)) > 1e-12 * scale)
        throw InvalidArgument("quadratic_form_extrema: matrix is not symmetric");

  Eigen::MatrixXd a = 0.5 * (input + input.transpose());
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index r = p + 1; r < n; ++r) off += a(p, r) * a(p, r);
    if (off <= 1e-34 * scale * scale) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const double apr = a(p, r);
        if (apr == 0.0) continue;
        const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akr = a(k, r);
          a(k, p) = cs * akp - sn * akr;
          a(k, r) = sn * akp + cs * akr;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), ark = a(r, k);
          a(p, k) = cs * apk - sn * ark;
          a(r, k) = sn * apk + cs * ark;
        }
      }
    }
  }
  const Eigen::VectorXd diag = a.diagonal();
  return {diag.minCoeff(), diag.maxCoeff()};
}

EnergyDiagnostic energy_functional(std::span<const SpectralField> u_levels,
                                   std::span<const SpectralField> w_levels,
                                   const MultiplierSet& ms, double b, double dt,
                                   double eps, double beta) {
  const auto q = static_cast<std::size_t>(ms.q);
  if (u_levels.size() != q || w_levels.size() != q)
    throw ShapeMismatch("energy_functional: histories must hold exactly q levels");
  for (std::size_t i = 0; i < q; ++i) {
    if (!u_levels[i].same_shape(u_levels[0]) || !w_levels[i].same_shape(u_levels[0]))
      throw ShapeMismatch("energy_functional: mode count or period mismatch");
  }
  const double period = u_levels[0].period();
  auto inner = [period](const SpectralField& f, const SpectralField& g) {
    Complex s = 0.0;
    auto cf = f.coeffs();
    auto cg = g.coeffs();
    for (std::size_t k = 0; k < cf.size(); ++k) s += cf[k] * std::conj(cg[k]);
    return period * s.real();
  };
  auto form = [&](const Eigen::MatrixXd& h, std::span<const SpectralField> levels) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      for (Eigen::Index j = 0; j < h.cols(); ++j)
        sum += h(i, j) * inner(levels[static_cast<std::size_t>(i)],
                               levels[static_cast<std::size_t>(j)]);
    return sum;
  };

  EnergyDiagnostic e;
  e.g_u = form(ms.g, u_levels);
  e.g_w = form(ms.g, w_levels);
  e.a_w = q > 1 ? form(ms.a, w_levels.subspan(1)) : 0.0;
  e.energy = (1.0 - b * b) * e.g_u + e.g_w + (beta * dt / eps) * e.a_w;
  return e;
}

}  // namespace stiff_relax
