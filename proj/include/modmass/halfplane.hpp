#ifndef MODMASS_HALFPLANE_HPP
#define MODMASS_HALFPLANE_HPP

#include "modmass/complex.hpp"

#include <cstdint>

// Upper half-plane points, integral Moebius transformations, and Gauss
// reduction into the standard fundamental domain |x| <= 1/2, |z| >= 1.

namespace modmass {

struct HPoint {
  Real x, y;
  HPoint(Real xx, Real yy) : x(std::move(xx)), y(std::move(yy)) {
    if (!(y > 0)) throw DomainError("HPoint: y must be positive");
  }
  Complex to_complex() const { return Complex(x, y); }
};

struct GroupElement {
  Integer a = 1, b = 0, c = 0, d = 1;

  GroupElement() = default;
  GroupElement(Integer aa, Integer bb, Integer cc, Integer dd)
      : a(std::move(aa)), b(std::move(bb)), c(std::move(cc)), d(std::move(dd)) {
    if (a * d - b * c != 1) throw DomainError("GroupElement: determinant must be 1");
  }

  static GroupElement identity() { return {}; }
  static GroupElement translation(const Integer& n) { return {1, n, 0, 1}; }
  static GroupElement inversion() { return {0, -1, 1, 0}; }

  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

  GroupElement operator*(const GroupElement& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }

  HPoint apply(const HPoint& z) const {
    // (az+b)/(cz+d) with ad-bc = 1, so Im = y/|cz+d|^2
    Real cr = Real(c), dr = Real(d);
    Real u = cr * z.x + dr, v = cr * z.y;
    Real denom = u * u + v * v;
    Real xn = (Real(a) * z.x + Real(b)) * u + Real(a) * z.y * v;
    return HPoint(xn / denom, z.y / denom);
  }
};

// j_gamma(z) = (cz+d)/|cz+d|, the unimodular automorphy phase.
inline Complex cocycle_j(const GroupElement& g, const HPoint& z) {
  Complex czd(Real(g.c) * z.x + Real(g.d), Real(g.c) * z.y);
  return czd / abs(czd);
}

// Gauss reduction: returns (z', gamma) with z' = gamma z in the closed
// fundamental domain.  Each inversion strictly increases y, so the loop
// terminates; the guard is a safety net for degenerate rounding.
inline std::pair<HPoint, GroupElement> reduce(HPoint z) {
  GroupElement g;
  for (int iter = 0; iter < 100000; ++iter) {
    Integer n = Integer(Real(floor(z.x + Real(1) / 2)));
    if (n != 0) {
      z.x -= Real(n);
      g = GroupElement::translation(-n) * g;
    }
    Real r2 = z.x * z.x + z.y * z.y;
    if (r2 >= 1) return {z, g};
    // z -> -1/z
    z = HPoint(-z.x / r2, z.y / r2);
    g = GroupElement::inversion() * g;
  }
  throw ConvergenceError("reduce: did not terminate");
}

}  // namespace modmass

#endif
