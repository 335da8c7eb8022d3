#ifndef MODMASS_COMPLEX_HPP
#define MODMASS_COMPLEX_HPP

#include "modmass/precision.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/fpclassify.hpp>

// std::complex does not accept the MPFR number type, so we carry our own
// minimal complex value class.  Only the operations the library needs.

namespace modmass {

struct Complex {
  Real re, im;

  Complex() : re(0), im(0) {}
  Complex(Real r) : re(std::move(r)), im(0) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r) : re(r), im(0) {}
  Complex(double r, double i) : re(r), im(i) {}
  Complex(int r) : re(r), im(0) {}

  bool is_real(const Real& tol = Real(0)) const { return abs(im) <= tol; }

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = r;
    return *this;
  }
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
inline Complex operator+(const Complex& a) { return a; }

inline Complex operator*(const Real& s, Complex a) { a.re *= s; a.im *= s; return a; }
inline Complex operator*(Complex a, const Real& s) { return s * a; }
inline Complex operator/(Complex a, const Real& s) { a.re /= s; a.im /= s; return a; }

inline bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }

inline Complex conj(const Complex& a) { return Complex(a.re, -a.im); }
inline Real norm(const Complex& a) { return a.re * a.re + a.im * a.im; }
inline Real abs(const Complex& a) { return hypot(a.re, a.im); }
inline Real arg(const Complex& a) { return atan2(a.im, a.re); }

inline Complex exp(const Complex& a) {
  Real e = exp(a.re);
  return Complex(e * cos(a.im), e * sin(a.im));
}

// Principal branch.
inline Complex log(const Complex& a) { return Complex(log(abs(a)), arg(a)); }

inline Complex sqrt(const Complex& a) {
  Real m = abs(a);
  if (m == 0) return Complex(Real(0));
  Real r = sqrt((m + a.re) / 2);
  Real i = sqrt((m - a.re) / 2);
  if (a.im < 0) i = -i;
  return Complex(r, i);
}

inline Complex sin(const Complex& a) {
  return Complex(sin(a.re) * cosh(a.im), cos(a.re) * sinh(a.im));
}

inline Complex cos(const Complex& a) {
  return Complex(cos(a.re) * cosh(a.im), -sin(a.re) * sinh(a.im));
}

inline Complex cosh(const Complex& a) {
  return Complex(cosh(a.re) * cos(a.im), sinh(a.re) * sin(a.im));
}

// a^b on the principal branch, a != 0.
inline Complex pow(const Complex& a, const Complex& b) {
  return exp(b * log(a));
}

inline Complex pow(const Real& a, const Complex& b) {
  if (a > 0) return exp(b * Complex(log(a)));
  return pow(Complex(a), b);
}

// e(x) = exp(2 pi i x)
inline Complex e_of(const Real& x) {
  Real t = 2 * boost::math::constants::pi<Real>() * x;
  return Complex(cos(t), sin(t));
}

inline bool is_finite(const Complex& a) {
  return boost::math::isfinite(a.re) && boost::math::isfinite(a.im);
}

}  // namespace modmass

#endif
