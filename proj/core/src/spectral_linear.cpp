#include "stiff_relax/spectral_linear.hpp"

#include <algorithm>
#include <cmath>

#include "stiff_relax/errors.hpp"

namespace stiff_relax {
namespace {

void require_tableau(const BdfHistory<MicroMacroState>& hist, const BdfTableau& tab) {
  hist.require_full("step_bdf_linear");
  if (hist.order() != tab.q)
    throw ShapeMismatch("step_bdf_linear: history order differs from tableau");
}

Eigen::Matrix2cd mode_matrix(double wavenumber, const LinearParams& p) {
  const Complex ik(0.0, wavenumber);
  Eigen::Matrix2cd m;
  m << 0.0, -ik, -ik + p.b / p.eps, -1.0 / p.eps;
  return m;
}

// (e^z - 1) / z, accurate for small |z|.
Complex phi1(Complex z) {
  if (std::abs(z) < 0.5) {
    Complex term = 1.0, sum = 1.0;
    for (int n = 2; n < 30; ++n) {
      term *= z / static_cast<double>(n);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(z) - 1.0) / z;
}

}  // namespace

void LinearParams::validate() const {
  if (!(std::abs(b) < 1.0)) throw InvalidArgument("LinearParams: |b| must be < 1");
  if (!(eps > 0.0)) throw InvalidArgument("LinearParams: eps must be > 0");
}

MicroMacroState to_micro_macro(const ConservedState& s, double b) {
  MicroMacroState out{s.u, s.v};
  out.w -= Complex(b) * s.u;
  return out;
}

ConservedState to_conserved(const MicroMacroState& s, double b) {
  ConservedState out{s.u, s.w};
  out.v += Complex(b) * s.u;
  return out;
}

const MicroMacroState& step_bdf_linear(LinearHistory& hist, const BdfTableau& tab,
                                       const LinearParams& p, double dt) {
  require_tableau(hist, tab);
  p.validate();
  if (!(dt > 0.0)) throw InvalidArgument("step_bdf_linear: dt must be > 0");
  const int q = tab.q;
  const SpectralField& ref = hist[0].u;
  const int n_modes = ref.max_mode();
  const double b = p.b;
  const double one_minus_b2 = 1.0 - b * b;
  const double relax = 1.0 + tab.beta * dt / p.eps;

  MicroMacroState next{SpectralField(n_modes, ref.period()),
                       SpectralField(n_modes, ref.period())};
  for (int k = -n_modes; k <= n_modes; ++k) {
    const Complex ik(0.0, ref.wavenumber(k));
    Complex u_acc = 0.0, w_acc = 0.0;
    for (int i = 0; i < q; ++i) {
      const auto& lvl = hist[static_cast<std::size_t>(i)];
      const double a = tab.alpha[static_cast<std::size_t>(i)];
      const double g = dt * tab.gamma[static_cast<std::size_t>(i)];
      const Complex ui = lvl.u[k], wi = lvl.w[k];
      u_acc -= a * ui + g * ik * (b * ui + wi);
      w_acc -= a * wi + g * ik * (one_minus_b2 * ui - b * wi);
    }
    next.u[k] = u_acc;
    next.w[k] = w_acc / relax;
  }
  hist.push(std::move(next), hist.newest_time() + dt);
  return hist.newest();
}

const SpectralField& step_limit_linear(BdfHistory<SpectralField>& hist,
                                       const BdfTableau& tab, double b, double dt) {
  hist.require_full("step_limit_linear");
  if (hist.order() != tab.q)
    throw ShapeMismatch("step_limit_linear: history order differs from tableau");
  const SpectralField& ref = hist[0];
  SpectralField next(ref.max_mode(), ref.period());
  for (int k = -ref.max_mode(); k <= ref.max_mode(); ++k) {
    const Complex ik(0.0, ref.wavenumber(k));
    Complex acc = 0.0;
    for (int i = 0; i < tab.q; ++i) {
      const Complex ui = hist[static_cast<std::size_t>(i)][k];
      acc -= tab.alpha[static_cast<std::size_t>(i)] * ui +
             dt * tab.gamma[static_cast<std::size_t>(i)] * ik * b * ui;
    }
    next[k] = acc;
  }
  hist.push(std::move(next), hist.newest_time() + dt);
  return hist.newest();
}

Eigen::Matrix2cd mode_propagator_series(double wavenumber, double t,
                                        const LinearParams& p) {
  const Eigen::Matrix2cd mt = mode_matrix(wavenumber, p) * t;
  const double norm = mt.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const Eigen::Matrix2cd scaled = mt / std::ldexp(1.0, squarings);

  Eigen::Matrix2cd sum = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd term = Eigen::Matrix2cd::Identity();
  for (int n = 1; n <= 24; ++n) {
    term = term * scaled / static_cast<double>(n);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

Eigen::Matrix2cd mode_propagator(double wavenumber, double t, const LinearParams& p) {
  if (t == 0.0) return Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd m = mode_matrix(wavenumber, p);
  const Complex tr = m.trace();
  const Complex det = m.determinant();
  const Complex root = std::sqrt(tr * tr - 4.0 * det);
  // Larger-magnitude eigenvalue first, the other from det = l1 * l2.
  const double sign = (std::conj(tr) * root).real() >= 0.0 ? 1.0 : -1.0;
  const Complex l1 = 0.5 * (tr + sign * root);
  const Complex l2 = det / l1;
  const double scale = std::max(std::abs(l1), std::abs(l2));
  if (std::abs(l1 - l2) < 1e-8 * scale) return mode_propagator_series(wavenumber, t, p);

  // Cayley-Hamilton: exp(M t) = e^{l2 t} [I + t phi1((l1 - l2) t) (M - l2 I)].
  const Complex dd = t * phi1((l1 - l2) * t);
  Eigen::Matrix2cd out = m - l2 * Eigen::Matrix2cd::Identity();
  out *= dd;
  out += Eigen::Matrix2cd::Identity();
  return std::exp(l2 * t) * out;
}

ConservedState exact_solution(const ConservedState& init, double t,
                              const LinearParams& p) {
  p.validate();
  if (t < 0.0) throw InvalidArgument("exact_solution: t must be >= 0");
  if (!init.u.same_shape(init.v)) throw ShapeMismatch("exact_solution: shape mismatch");
  ConservedState out{SpectralField(init.u.max_mode(), init.u.period()),
                     SpectralField(init.u.max_mode(), init.u.period())};
  for (int k = -init.u.max_mode(); k <= init.u.max_mode(); ++k) {
    const Eigen::Matrix2cd e = mode_propagator(init.u.wavenumber(k), t, p);
    const Eigen::Vector2cd y0(init.u[k], init.v[k]);
    const Eigen::Vector2cd y = e * y0;
    out.u[k] = y(0);
    out.v[k] = y(1);
  }
  return out;
}

LinearHistory bootstrap_linear(const ConservedState& init, int q, double t0,
                               double dt, const LinearParams& p) {
  if (q < 1) throw InvalidArgument("bootstrap_linear: q must be >= 1");
  LinearHistory hist(q);
  for (int i = 0; i < q; ++i) {
    const double t = t0 + i * dt;
    hist.push(to_micro_macro(exact_solution(init, t, p), p.b), t);
  }
  return hist;
}

double spectral_cfl_number(double dt, int max_mode, double period) {
  const double kmax = 2.0 * M_PI * max_mode / period;
  return dt * kmax * kmax;
}

double level_norm_squared(const MicroMacroState& s) {
  const double nu = l2_norm(s.u), nw = l2_norm(s.w);
  return nu * nu + nw * nw;
}

}  // namespace stiff_relax
