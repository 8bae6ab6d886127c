#include "stiff_relax/imex_rk.hpp"

#include "stiff_relax/errors.hpp"

namespace stiff_relax {

ImexRkTableau ars443() {
  ImexRkTableau t;
  t.name = "ARS(4,4,3)";
  t.stages = 5;
  t.c = {0.0, 1.0 / 2.0, 2.0 / 3.0, 1.0 / 2.0, 1.0};
  t.a_explicit = {
      {0.0, 0.0, 0.0, 0.0, 0.0},
      {1.0 / 2.0, 0.0, 0.0, 0.0, 0.0},
      {11.0 / 18.0, 1.0 / 18.0, 0.0, 0.0, 0.0},
      {5.0 / 6.0, -5.0 / 6.0, 1.0 / 2.0, 0.0, 0.0},
      {1.0 / 4.0, 7.0 / 4.0, 3.0 / 4.0, -7.0 / 4.0, 0.0},
  };
  t.a_implicit = {
      {0.0, 0.0, 0.0, 0.0, 0.0},
      {0.0, 1.0 / 2.0, 0.0, 0.0, 0.0},
      {0.0, 1.0 / 6.0, 1.0 / 2.0, 0.0, 0.0},
      {0.0, -1.0 / 2.0, 1.0 / 2.0, 1.0 / 2.0, 0.0},
      {0.0, 3.0 / 2.0, -3.0 / 2.0, 1.0 / 2.0, 1.0 / 2.0},
  };
  t.b_explicit = {1.0 / 4.0, 7.0 / 4.0, 3.0 / 4.0, -7.0 / 4.0, 0.0};
  t.b_implicit = {0.0, 3.0 / 2.0, -3.0 / 2.0, 1.0 / 2.0, 1.0 / 2.0};
  return t;
}

void imex_rk_step(const ImexSystem& system, const ImexRkTableau& tableau,
                  std::vector<double>& y, double dt) {
  const std::size_t n = system.size();
  if (y.size() != n) throw ShapeMismatch("imex_rk_step: state size mismatch");
  const int s = tableau.stages;

  // Explicit derivatives are only needed for stages referenced later.
  std::vector<bool> need_explicit(static_cast<std::size_t>(s), false);
  std::vector<bool> need_implicit(static_cast<std::size_t>(s), false);
  for (int j = 0; j < s; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    need_explicit[uj] = tableau.b_explicit[uj] != 0.0;
    need_implicit[uj] = tableau.b_implicit[uj] != 0.0;
    for (int i = j + 1; i < s; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      need_explicit[uj] = need_explicit[uj] || tableau.a_explicit[ui][uj] != 0.0;
      need_implicit[uj] = need_implicit[uj] || tableau.a_implicit[ui][uj] != 0.0;
    }
  }

  std::vector<std::vector<double>> f_ex(static_cast<std::size_t>(s));
  std::vector<std::vector<double>> f_im(static_cast<std::size_t>(s));
  std::vector<double> rhs(n), stage(n);
  const auto last = static_cast<std::size_t>(s - 1);
  const bool stiffly_accurate = tableau.b_explicit == tableau.a_explicit[last] &&
                                tableau.b_implicit == tableau.a_implicit[last];

  for (int i = 0; i < s; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    rhs = y;
    for (int j = 0; j < i; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const double ae = dt * tableau.a_explicit[ui][uj];
      const double ai = dt * tableau.a_implicit[ui][uj];
      if (ae != 0.0)
        for (std::size_t k = 0; k < n; ++k) rhs[k] += ae * f_ex[uj][k];
      if (ai != 0.0)
        for (std::size_t k = 0; k < n; ++k) rhs[k] += ai * f_im[uj][k];
    }
    const double diag = dt * tableau.a_implicit[ui][ui];
    if (diag != 0.0) {
      system.solve_implicit(rhs, diag, stage);
    } else {
      stage = rhs;
    }
    if (stiffly_accurate && ui == last) {
      y = stage;
      return;
    }
    if (need_explicit[ui]) {
      f_ex[ui].resize(n);
      system.explicit_rhs(stage, f_ex[ui]);
    }
    if (need_implicit[ui]) {
      f_im[ui].resize(n);
      if (diag != 0.0) {
        // S(Y_i) recovered from the stage equation; avoids evaluating the
        // stiff term directly when it is O(1/eps).
        for (std::size_t k = 0; k < n; ++k)
          f_im[ui][k] = (stage[k] - rhs[k]) / diag;
      } else {
        system.implicit_rhs(stage, f_im[ui]);
      }
    }
  }

  for (int j = 0; j < s; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double be = dt * tableau.b_explicit[uj];
    const double bi = dt * tableau.b_implicit[uj];
    if (be != 0.0)
      for (std::size_t k = 0; k < n; ++k) y[k] += be * f_ex[uj][k];
    if (bi != 0.0)
      for (std::size_t k = 0; k < n; ++k) y[k] += bi * f_im[uj][k];
  }
}

void imex_rk_advance(const ImexSystem& system, const ImexRkTableau& tableau,
                     std::vector<double>& y, double dt, int substeps) {
  if (substeps < 1) throw InvalidArgument("imex_rk_advance: substeps < 1");
  const double h = dt / substeps;
  for (int i = 0; i < substeps; ++i) imex_rk_step(system, tableau, y, h);
}

}  // namespace stiff_relax
