#ifndef MODMASS_SPECIAL_HPP
#define MODMASS_SPECIAL_HPP

#include "modmass/arith.hpp"

#include <mutex>
#include <utility>
#include <vector>

// Classical special functions at working precision: Gamma (complex
// argument), the completed zeta machinery, and the K-Bessel function of
// complex order.

namespace modmass {

inline const Real& pi() {
  static const Real p = boost::math::constants::pi<Real>();
  return p;
}

// Exact Bernoulli numbers B_0, B_1, ... computed by the defining
// recurrence and cached.
inline const Rational& bernoulli(unsigned n) {
  static std::vector<Rational> cache{Rational(1)};
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  while (cache.size() <= n) {
    unsigned m = static_cast<unsigned>(cache.size());
    Rational s = 0;
    for (unsigned j = 0; j < m; ++j)
      s += Rational(binomial(m + 1, j)) * cache[j];
    cache.push_back(-s / Rational(m + 1));
  }
  return cache[n];
}

namespace detail {

// Stirling series for log Gamma, valid once Re(z) is comfortably large.
// The shift radius and the term count both scale with the working
// precision so the remainder stays below the mantissa.
inline unsigned stirling_radius() {
  unsigned bits = static_cast<unsigned>(Real::default_precision() * 3.33) + 1;
  return std::max(32u, bits / 4 + 8);
}

inline Complex log_gamma_stirling(const Complex& z) {
  const Real half = Real(1) / 2;
  Complex lg = (z - Complex(half)) * log(z) - z +
               Complex(log(2 * pi()) / 2);
  Complex zinv2 = Complex(Real(1)) / (z * z);
  Complex zpow = Complex(Real(1)) / z;  // z^{-(2n-1)}
  unsigned max_terms = stirling_radius() + 8;
  Real eps = ldexp(Real(1), -static_cast<int>(Real::default_precision() * 3.33) - 8);
  for (unsigned n = 1; n <= max_terms; ++n) {
    Real coeff = Real(bernoulli(2 * n)) / (2 * n * (2 * n - 1));
    Complex term = Complex(coeff) * zpow;
    lg += term;
    if (abs(term) < eps * abs(lg)) break;
    zpow *= zinv2;
  }
  return lg;
}

}  // namespace detail

// Gamma on the principal branch.  Nonpositive integers are poles.
inline Complex gamma(const Complex& s) {
  Real tol = ldexp(Real(1), -static_cast<int>(Real::default_precision() * 3.33 / 2));
  if (s.re <= Real("0.5") && abs(s.im) < tol) {
    Real r = round(s.re);
    if (r <= 0 && abs(s.re - r) < tol && abs(s.im) < tol)
      throw PoleError("gamma: pole at non-positive integer argument");
  }
  if (s.re < Real("0.5")) {
    // Reflection keeps the shift product short for far-left arguments.
    Complex z = Complex(Real(1)) - s;
    Complex sp = sin(Complex(pi()) * s);
    return Complex(pi()) / (sp * gamma(z));
  }
  unsigned radius = detail::stirling_radius();
  unsigned shift = 0;
  if (s.re < radius) shift = static_cast<unsigned>(ceil(Real(radius) - s.re).convert_to<long>());
  Complex prod(Real(1));
  for (unsigned j = 0; j < shift; ++j) prod *= s + Complex(Real(j));
  Complex lg = detail::log_gamma_stirling(s + Complex(Real(shift)));
  return exp(lg) / prod;
}

// log Gamma for positive real argument (used where Gamma itself would be
// astronomically large).
inline Real log_gamma(const Real& x) {
  if (x <= 0) throw DomainError("log_gamma: requires x > 0");
  return lgamma(x);
}

// Gamma_R(s) = pi^{-s/2} Gamma(s/2).
inline Complex gamma_r(const Complex& s) {
  Complex half_s = s / Real(2);
  return pow(pi(), -half_s) * gamma(half_s);
}

// Riemann zeta by Euler-Maclaurin.  The cutoff N grows with |Im s| and
// with the working precision; the correction sum stops adaptively.
inline Complex zeta(const Complex& s) {
  unsigned bits = static_cast<unsigned>(Real::default_precision() * 3.33) + 1;
  Real tol = ldexp(Real(1), -static_cast<int>(bits) + 4);
  if (abs(s - Complex(Real(1))) < tol)
    throw PoleError("zeta: pole at s = 1");

  unsigned N = std::max<unsigned>(
      50, static_cast<unsigned>(0.55 * bits) +
              static_cast<unsigned>(1.5 * abs(s.im).convert_to<double>()) + 8);
  Complex acc(Real(0));
  for (unsigned n = 1; n < N; ++n) acc += pow(Real(n), -s);
  Complex Ns = pow(Real(N), -s);
  acc += Ns * Complex(Real(N)) / (s - Complex(Real(1)));  // N^{1-s}/(s-1)
  acc += Ns / Real(2);

  // Tail corrections: B_{2r}/(2r)! (s)_{2r-1} N^{-s-2r+1}.
  Complex poch(Real(1));
  Complex Npow = Ns * Complex(Real(N));  // N^{1-s}
  const Real Ninv2 = Real(1) / (Real(N) * Real(N));
  unsigned max_r = bits / 2 + 16;
  for (unsigned r = 1; r <= max_r; ++r) {
    poch *= (r == 1) ? s : (s + Complex(Real(2 * r - 3))) * (s + Complex(Real(2 * r - 2)));
    Npow *= Ninv2;  // N^{1-s-2r}
    Real coeff = Real(bernoulli(2 * r)) / Real(factorial(2 * r));
    Complex term = Complex(coeff) * poch * Npow;  // N^{-s-2r+1}
    acc += term;
    if (abs(term) < tol * abs(acc)) break;
  }
  return acc;
}

// xi(s) = Gamma_R(s) zeta(s).
inline Complex xi(const Complex& s) {
  Real tol = ldexp(Real(1), -static_cast<int>(Real::default_precision() * 3.33) + 4);
  if (abs(s) < tol) throw PoleError("xi: pole at s = 0");
  return gamma_r(s) * zeta(s);
}

struct AsymptoticValue {
  Complex value;
  Real error_bound;  // magnitude of the first omitted term
};

// Large-argument expansion sqrt(pi/2y) e^{-y} sum_j a_j(nu) y^{-j},
// truncated at the smallest term.  The error bound is heuristic (first
// omitted term), as is standard for this divergent series.
inline AsymptoticValue bessel_k_asymptotic(const Complex& nu, const Real& y) {
  if (y <= 0) throw DomainError("bessel_k_asymptotic: requires y > 0");
  Complex nu2 = nu * nu * Real(4);
  Complex term(Real(1));
  Complex acc = term;
  Real prev_mag = 1;
  unsigned max_j = 200;
  for (unsigned j = 1; j <= max_j; ++j) {
    Real odd = Real(2 * j - 1);
    term *= (nu2 - Complex(odd * odd)) / (Real(8) * Real(j) * y);
    Real mag = abs(term);
    if (mag >= prev_mag) break;  // divergence onset
    acc += term;
    prev_mag = mag;
  }
  Real pref = sqrt(pi() / (2 * y)) * exp(-y);
  return {Complex(pref) * acc, pref * prev_mag};
}

// K_nu(y) = int_0^infty exp(-y cosh t) cosh(nu t) dt for y > 0.  The
// integrand is even and analytic in a strip, so the trapezoid rule
// converges geometrically under step halving.
inline Complex bessel_k(const Complex& nu_in, const Real& y) {
  if (y <= 0) throw DomainError("bessel_k: requires y > 0");
  Complex nu = nu_in;
  if (nu.re < 0) nu = -nu;  // K_nu = K_{-nu}

  unsigned bits = static_cast<unsigned>(Real::default_precision() * 3.33) + 1;
  Real tol = ldexp(Real(1), -std::max(16, static_cast<int>(bits) - 48) + 7);

  // Truncation point: e^{-y cosh T + Re(nu) T} below tol * e^{-y}.
  Real L = (Real(bits) + 64) * log(Real(2));
  Real T = 5;
  for (int it = 0; it < 8; ++it) {
    Real target = (y + L + nu.re * T + abs(nu.im) + 1) / y;
    T = log(target + sqrt(target * target - 1));  // acosh
  }

  auto f = [&](const Real& t) -> Complex {
    return exp(-y * cosh(t)) * cosh(nu * Complex(t));
  };

  Real h = Real(1) / 4;
  // Initial trapezoid sum (even integrand; the t=0 node carries weight 1/2).
  Complex sum = f(Real(0)) / Real(2);
  for (unsigned k = 1; Real(k) * h <= T; ++k) sum += f(Real(k) * h);
  Complex result = sum * h;

  Complex prev = result;
  for (unsigned level = 0; level < 14; ++level) {
    Real h2 = h / 2;
    Complex odd(Real(0));
    for (unsigned k = 0; Real(2 * k + 1) * h2 <= T; ++k)
      odd += f(Real(2 * k + 1) * h2);
    result = result / Real(2) + odd * h2;
    h = h2;
    if (level >= 1 && abs(result - prev) <= tol * std::max(abs(result), Real(exp(-y))))
      return result;
    prev = result;
  }
  throw ConvergenceError("bessel_k: trapezoid refinement did not converge");
}

}  // namespace modmass

#endif
