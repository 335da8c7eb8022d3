#ifndef MODMASS_WHITTAKER_HPP
#define MODMASS_WHITTAKER_HPP

#include "modmass/arith.hpp"
#include "modmass/special.hpp"

// Whittaker W functions in the two flavours the Fourier expansions need:
// the terminating family W_{alpha+k, alpha-1/2} attached to raised
// holomorphic forms, and W_{kappa, it} at integer kappa for Maass forms.

namespace modmass {

// W_{alpha+k, alpha-1/2}(y)
//   = e^{-y/2} y^alpha sum_{l=0}^{k} y^{k-l} (-1)^l C(k,l) (2a+k-l)_l
// where the Pochhammer factor is Gamma(2a+k)/Gamma(2a+k-l) written as a
// product, so no gamma evaluations are involved.
inline Real w_holomorphic_shift(const Real& alpha, unsigned k, const Real& y) {
  if (!(y > 0)) throw DomainError("w_holomorphic_shift: y must be positive");
  if (!(alpha > 0)) throw DomainError("w_holomorphic_shift: alpha must be positive");
  Real sum = 0;
  Real ratio = 1;  // Gamma(2a+k)/Gamma(2a+k-l)
  for (unsigned l = 0; l <= k; ++l) {
    Real sign = (l % 2 == 0) ? 1 : -1;
    sum += sign * Real(binomial(k, l)) * ratio * pow(y, Real(k - l));
    ratio *= 2 * alpha + Real(k) - Real(l + 1);
  }
  return exp(-y / 2) * pow(y, alpha) * sum;
}

// d/dy of the above, from the same terminating sum.
inline Real w_holomorphic_shift_deriv(const Real& alpha, unsigned k, const Real& y) {
  if (!(y > 0)) throw DomainError("w_holomorphic_shift_deriv: y must be positive");
  Real sum = 0, dsum = 0;
  Real ratio = 1;
  for (unsigned l = 0; l <= k; ++l) {
    Real sign = (l % 2 == 0) ? 1 : -1;
    Real c = sign * Real(binomial(k, l)) * ratio;
    Real p = alpha + Real(k - l);  // exponent of y including the y^alpha front
    sum += c * pow(y, p);
    dsum += c * p * pow(y, p - 1);
    ratio *= 2 * alpha + Real(k) - Real(l + 1);
  }
  Real e = exp(-y / 2);
  return e * (dsum - sum / 2);
}

// One raising step W_{lambda+1, mu}(y) = (y/2 - lambda) W - y W'.  The
// second index mu is inert; it is kept in the signature because the step
// is only valid along a fixed-mu family.
inline Real recursion_step(const Real& w_val, const Real& w_deriv, const Real& lambda,
                           const Real& /*mu*/, const Real& y) {
  return (y / 2 - lambda) * w_val - y * w_deriv;
}

// W_{0,mu}(y) = sqrt(y/pi) K_mu(y/2)
inline Complex w_zero(const Complex& mu, const Real& y) {
  if (!(y > 0)) throw DomainError("w_zero: y must be positive");
  return sqrt(y / pi()) * bessel_k(mu, y / 2);
}

inline Real w_zero(const Real& t, const Real& y) {
  return w_zero(Complex(Real(0), t), y).re;  // K_{it} is real for real t
}

// W_{kappa, mu}(y) at integer kappa, reached from the kappa = 0, 1 seeds by
// W_{kappa+1} = (y - 2 kappa) W_kappa + (mu^2 - (kappa - 1/2)^2) W_{kappa-1},
// run upward for kappa >= 2 and solved for W_{kappa-1} going downward.
inline Complex whittaker_w(int kappa, const Complex& mu, const Real& y) {
  if (!(y > 0)) throw DomainError("whittaker_w: y must be positive");
  Real x = y / 2;
  Complex w0 = sqrt(y / pi()) * bessel_k(mu, x);
  if (kappa == 0) return w0;
  // W_{1,mu} from the raising step; K_mu' = -(K_{mu-1} + K_{mu+1})/2.
  Complex kd = (bessel_k(mu - Complex(1), x) + bessel_k(mu + Complex(1), x)) *
               Real(-0.5);
  Complex w0d = w0 / (2 * y) + sqrt(y / pi()) * kd / Real(2);
  Complex w1 = (y / 2) * w0 - y * w0d;
  if (kappa == 1) return w1;
  Complex mu2 = mu * mu;
  if (kappa > 1) {
    Complex prev = w0, cur = w1;
    for (int j = 1; j < kappa; ++j) {
      Complex next = (y - Real(2 * j)) * cur +
                     (mu2 - Complex(pow(Real(j) - Real(1) / 2, 2))) * prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  // kappa < 0: solve the same relation for the lower index.
  Complex above = w1, cur = w0;
  for (int j = 0; j > kappa; --j) {
    Complex denom = mu2 - Complex(pow(Real(j) - Real(1) / 2, 2));
    if (abs(denom) < ldexp(Real(1), -static_cast<int>(Real::default_precision()) * 2))
      throw PoleError("whittaker_w: vanishing recursion coefficient");
    Complex below = (above - (y - Real(2 * j)) * cur) / denom;
    above = cur;
    cur = below;
  }
  return cur;
}

// Exact rational Jakobson coefficient (-k)_l (k)_l / ((1/2)_l 4^l l!).
inline Rational jakobson_coefficient(unsigned k, unsigned l) {
  Rational num = pochhammer_rat(Rational(-static_cast<long>(k)), l) *
                 pochhammer_rat(Rational(k), l);
  Rational den = pochhammer_rat(Rational(1, 2), l) * Rational(Integer(1) << (2 * l)) *
                 Rational(factorial(l));
  return num / den;
}

// F(k,t,y) = W_{k,it}/Gamma(1/2+k+it) + W_{-k,it}/Gamma(1/2-k+it), through
// the terminating expansion in shifted Bessel orders:
// F = 2 (-1)^k sum_{l=0}^{k} c_{k,l} y^l W_{0,l+it}(y) / Gamma(1/2+l+it).
inline Complex jakobson_f(unsigned k, const Real& t, const Real& y) {
  if (!(y > 0)) throw DomainError("jakobson_f: y must be positive");
  Complex acc(Real(0));
  for (unsigned l = 0; l <= k; ++l) {
    Rational c = jakobson_coefficient(k, l);
    if (c == 0) continue;
    Complex mu(Real(l), t);
    Complex term = Real(c) * pow(y, Real(l)) * w_zero(mu, y) /
                   gamma(Complex(Real(l) + Real(1) / 2, t));
    acc += term;
  }
  Real sign = (k % 2 == 0) ? 2 : -2;
  return sign * acc;
}

// Envelope 4^k max(k,1)^A sqrt(y) ((1+|t|)/y)^A (1 + (1+|t|)/y)^eps that
// dominates |F(k,t,y)| up to one absolute constant.
inline Real f_bound_rhs(unsigned k, const Real& t, const Real& y, unsigned A,
                        const Real& eps) {
  if (!(y > 0)) throw DomainError("f_bound_rhs: y must be positive");
  Real r = (1 + abs(t)) / y;
  return pow(Real(4), Real(k)) * pow(Real(std::max(k, 1u)), Real(A)) * sqrt(y) *
         pow(r, Real(A)) * pow(1 + r, eps);
}

}  // namespace modmass

#endif
