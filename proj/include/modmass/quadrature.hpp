#ifndef MODMASS_QUADRATURE_HPP
#define MODMASS_QUADRATURE_HPP

#include "modmass/halfplane.hpp"
#include "modmass/special.hpp"

#include <functional>
#include <mutex>
#include <vector>

// Adaptive quadrature over the truncated fundamental domain
// {|x| <= 1/2, |z| >= 1, y <= y_max} against dmu = dx dy / y^2.

namespace modmass {

struct QuadratureResult {
  Complex value;
  Real error_estimate;
  std::uint64_t cells_used = 0;
  Real y_cutoff;
};

namespace detail {

struct GaussLegendre7 {
  std::vector<Real> node, weight;  // on [0, 1]
};

// Degree-7 Legendre nodes by Newton iteration at working precision.
inline const GaussLegendre7& gl7() {
  static std::mutex m;
  static GaussLegendre7 cached;
  static unsigned cached_prec = 0;
  std::lock_guard<std::mutex> lock(m);
  unsigned prec = Real::default_precision();
  if (cached_prec == prec) return cached;
  auto legendre = [](const Real& x, Real& p, Real& dp) {
    Real pm1 = 1, pc = x;
    for (int n = 1; n < 7; ++n) {
      Real pn = ((2 * n + 1) * x * pc - n * pm1) / (n + 1);
      pm1 = pc;
      pc = pn;
    }
    p = pc;
    dp = 7 * (x * pc - pm1) / (x * x - 1);
  };
  cached.node.assign(7, Real(0));
  cached.weight.assign(7, Real(0));
  for (int i = 0; i < 7; ++i) {
    Real x = cos(pi() * (Real(i) + Real(3) / 4) / Real(7.5));
    for (int it = 0; it < 200; ++it) {
      Real p, dp;
      legendre(x, p, dp);
      Real dx = p / dp;
      x -= dx;
      if (abs(dx) < ldexp(Real(1), -static_cast<int>(prec * 3.4))) break;
    }
    Real p, dp;
    legendre(x, p, dp);
    cached.node[i] = (1 - x) / 2;                   // map [-1,1] -> [0,1], i ascending
    cached.weight[i] = 1 / ((1 - x * x) * dp * dp);  // = standard weight / 2
  }
  cached_prec = prec;
  return cached;
}

}  // namespace detail

// The caller supplies the integrand on half-plane points; a tail bound for
// the part above y_max (if any) is folded into error_estimate.
inline QuadratureResult integrate_fd(const std::function<Complex(const HPoint&)>& f,
                                     const Real& tol, const Real& y_max,
                                     const Real& tail_bound = Real(0),
                                     std::uint64_t budget = 10000000) {
  if (!(y_max > 1)) throw DomainError("integrate_fd: y_max must exceed 1");
  const auto& gl = detail::gl7();
  std::uint64_t evals = 0;

  // (u, v) in [-1/2,1/2] x [0,1]; x = u, y = b(u) + v (y_max - b(u)),
  // b(u) = sqrt(1-u^2); integrand against dmu picks up (y_max - b(u)) / y^2.
  auto g = [&](const Real& u, const Real& v) {
    if (++evals > budget) throw ConvergenceError("integrate_fd: evaluation budget exceeded");
    Real b = sqrt(1 - u * u);
    Real span = y_max - b;
    Real y = b + v * span;
    return f(HPoint(u, y)) * (span / (y * y));
  };

  struct Cell {
    Real u0, du, v0, dv;
  };
  auto rule = [&](const Cell& c) {
    Complex acc(Real(0));
    for (int i = 0; i < 7; ++i) {
      Real u = c.u0 + gl.node[i] * c.du;
      Complex row(Real(0));
      for (int j = 0; j < 7; ++j)
        row += gl.weight[j] * g(u, c.v0 + gl.node[j] * c.dv);
      acc += gl.weight[i] * row;
    }
    return acc * (c.du * c.dv);
  };

  // First pass for the accuracy scale.
  Cell root{Real(-1) / 2, Real(1), Real(0), Real(1)};
  Complex rough = rule(root);
  Real scale = abs(rough) + 1;

  Complex total(Real(0));
  Real err_total = 0;
  std::uint64_t cells = 0;
  // Depth-first, fixed child order: deterministic accumulation.
  std::vector<std::pair<Cell, int>> stack{{root, 0}};
  while (!stack.empty()) {
    auto [c, depth] = stack.back();
    stack.pop_back();
    Complex whole = rule(c);
    // split both ways, keep the better-converged refinement
    Cell uh1{c.u0, c.du / 2, c.v0, c.dv}, uh2{c.u0 + c.du / 2, c.du / 2, c.v0, c.dv};
    Cell vh1{c.u0, c.du, c.v0, c.dv / 2}, vh2{c.u0, c.du, c.v0 + c.dv / 2, c.dv / 2};
    Complex us = rule(uh1) + rule(uh2);
    Complex vs = rule(vh1) + rule(vh2);
    Real ue = abs(us - whole), ve = abs(vs - whole);
    Real err = std::max(ue, ve);
    Real area = c.du * c.dv;
    if (err <= tol * scale * area || depth >= 40) {
      total += (ue > ve) ? us : vs;
      err_total += err;
      ++cells;
      continue;
    }
    if (ue > ve) {
      stack.push_back({uh2, depth + 1});
      stack.push_back({uh1, depth + 1});
    } else {
      stack.push_back({vh2, depth + 1});
      stack.push_back({vh1, depth + 1});
    }
  }
  return {total, err_total + tail_bound, cells, y_max};
}

// Petersson inner product <F, G> = int F conj(G) dmu for equal weights.
inline QuadratureResult petersson(const std::function<Complex(const HPoint&)>& F,
                                  unsigned weight_f,
                                  const std::function<Complex(const HPoint&)>& G,
                                  unsigned weight_g, const Real& tol,
                                  const Real& y_max_opt = Real(0),
                                  const Real& tail_bound = Real(0)) {
  if (weight_f != weight_g)
    throw DomainError("petersson: integrand is invariant only for equal weights");
  Real y_max = y_max_opt > 1 ? y_max_opt : Real(std::max(weight_f, 10u));
  auto integrand = [&](const HPoint& z) { return F(z) * conj(G(z)); };
  return integrate_fd(integrand, tol, y_max, tail_bound);
}

}  // namespace modmass

#endif
