#include "stiff_relax/bdf_tableau.hpp"

#include <boost/rational.hpp>

#include "stiff_relax/errors.hpp"

namespace stiff_relax {
namespace {

void require_supported(int q) {
  if (q < kMinBdfOrder || q > kMaxBdfOrder) throw UnsupportedOrder(q);
}

using Poly = std::vector<Rational>;  // coefficient of z^i at index i

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly power(const Poly& p, int n) {
  Poly out{Rational(1)};
  for (int i = 0; i < n; ++i) out = multiply(out, p);
  return out;
}

void accumulate(Poly& into, const Poly& p, Rational scale) {
  if (into.size() < p.size()) into.resize(p.size(), Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) into[i] += scale * p[i];
}

std::vector<double> to_doubles(const std::vector<Rational>& r) {
  std::vector<double> out;
  out.reserve(r.size());
  for (const auto& x : r) out.push_back(boost::rational_cast<double>(x));
  return out;
}

}  // namespace

BdfTableau ExactBdfTableau::to_double() const {
  return BdfTableau{q, to_doubles(alpha), to_doubles(gamma),
                    boost::rational_cast<double>(beta)};
}

ExactBdfTableau bdf_tableau_exact(int q) {
  require_supported(q);
  using R = Rational;
  switch (q) {
    case 1:
      return {1, {R(-1), R(1)}, {R(1)}, R(1)};
    case 2:
      return {2, {R(1, 3), R(-4, 3), R(1)}, {R(-2, 3), R(4, 3)}, R(2, 3)};
    case 3:
      return {3,
              {R(-2, 11), R(9, 11), R(-18, 11), R(1)},
              {R(6, 11), R(-18, 11), R(18, 11)},
              R(6, 11)};
    default:
      return {4,
              {R(3, 25), R(-16, 25), R(36, 25), R(-48, 25), R(1)},
              {R(-12, 25), R(48, 25), R(-72, 25), R(48, 25)},
              R(12, 25)};
  }
}

BdfTableau bdf_tableau(int q) { return bdf_tableau_exact(q).to_double(); }

ExactBdfTableau bdf_from_polynomials(int q) {
  require_supported(q);
  Rational harmonic(0);
  for (int j = 1; j <= q; ++j) harmonic += Rational(1, j);
  const Rational beta = Rational(1) / harmonic;

  const Poly z{Rational(0), Rational(1)};
  const Poly z_minus_one{Rational(-1), Rational(1)};

  Poly alpha;
  for (int j = 1; j <= q; ++j) {
    accumulate(alpha, multiply(power(z, q - j), power(z_minus_one, j)),
               beta / Rational(j));
  }

  Poly gamma;
  accumulate(gamma, power(z, q), beta);
  accumulate(gamma, power(z_minus_one, q), -beta);
  // the z^q terms cancel
  gamma.resize(static_cast<std::size_t>(q));

  alpha.resize(static_cast<std::size_t>(q) + 1, Rational(0));
  return {q, alpha, gamma, beta};
}

}  // namespace stiff_relax
