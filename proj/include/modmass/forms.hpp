#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "modmass/arith.hpp"
#include "modmass/complex.hpp"
#include "modmass/halfplane.hpp"
#include "modmass/hecke.hpp"
#include "modmass/precision.hpp"
#include "modmass/quadrature.hpp"
#include "modmass/special.hpp"
#include "modmass/whittaker.hpp"

namespace modmass {

namespace detail {

// u assumed unimodular; negative exponents via conjugation.
inline Complex unit_pow(const Complex& u, int n) {
  Complex base = n < 0 ? conj(u) : u;
  unsigned e = static_cast<unsigned>(n < 0 ? -n : n);
  Complex acc(1);
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

// Truncated coset sum over bottom rows (c,d), gcd(c,d)=1, one row per
// Gamma_infty-coset.  Re(s) >= 3/2 keeps the dropped tail O(1/B^{2Re(s)-2}).
inline Complex eisenstein_coset_sum(unsigned k, const HPoint& z, const Complex& s,
                                    unsigned B, Real* tail_out = nullptr) {
  if (k % 2) throw DomainError("eisenstein_coset_sum: weight must be even");
  if (!(s.re >= Real(3) / 2))
    throw ConvergenceError("eisenstein_coset_sum: requires Re(s) >= 3/2");
  Complex total = pow(z.y, s);  // (c,d) = (0,1)
  for (std::uint64_t c = 1; c <= B; ++c) {
    for (std::int64_t d = -static_cast<std::int64_t>(B); d <= static_cast<std::int64_t>(B);
         ++d) {
      std::uint64_t ad = static_cast<std::uint64_t>(d < 0 ? -d : d);
      if (detail::gcd_u64(c, ad) != 1) continue;
      Complex w(Real(c) * z.x + Real(static_cast<long long>(d)), Real(c) * z.y);
      Real n2 = norm(w);
      Complex term = pow(z.y, s) * pow(n2, -s);
      if (k) term = term * detail::unit_pow(conj(w) / sqrt(n2), static_cast<int>(k));
      total = total + term;
    }
  }
  if (tail_out) {
    // sum over max(|c|,|d|) > B of y^sigma / |cz+d|^{2 sigma}, crudely
    Real sigma = s.re;
    *tail_out = 8 * pow(z.y, sigma) * pow(Real(B) * std::min(Real(1), z.y), -2 * sigma + 2) /
                (2 * sigma - 2);
  }
  return total;
}

// Four-part Fourier expansion.  The Gamma ratios are expanded as finite
// products in s, so the formula stays finite where Gamma(s - k/2) has poles.
inline Complex eisenstein_fourier(unsigned k, const HPoint& z, const Complex& s,
                                  unsigned n_fourier = 0, Real* tail_out = nullptr) {
  if (k % 2) throw DomainError("eisenstein_fourier: weight must be even");
  if (!(z.y >= Real(1) / 10)) throw DomainError("eisenstein_fourier: requires y >= 0.1");
  if (k == 0 && s.im == 0 && s.re == 1)
    throw PoleError("eisenstein_fourier: pole at s = 1 for weight 0");
  if (n_fourier == 0)
    n_fourier = 40 + static_cast<unsigned>(ceil(Real(10) / z.y));
  const int half = static_cast<int>(k / 2);
  const Real sign = (half % 2) ? Real(-1) : Real(1);
  Complex prod_minus(1);  // Gamma(s) / Gamma(s - k/2)
  for (int l = 1; l <= half; ++l) prod_minus = prod_minus * (s - Real(l));
  Complex prod_plus(1);  // Gamma(s + k/2) / Gamma(s)
  for (int l = 0; l < half; ++l) prod_plus = prod_plus * (s + Real(l));
  Complex xi2s = xi(Real(2) * s);
  Complex phi = xi(Real(2) * s - 1) / xi2s;
  Complex val = pow(z.y, s) + sign * prod_minus / prod_plus * phi * pow(z.y, Real(1) - s);
  Complex cpos = sign / (prod_plus * xi2s);
  Complex cneg = sign * prod_minus / xi2s;
  Complex mu = s - Real(1) / 2;
  Complex nu = Real(1) - Real(2) * s;
  // Either side can vanish identically (prod_minus = 0 at integer s <= k/2);
  // skip its Whittaker factor, whose recursion may be singular right there.
  bool has_pos = cpos.re != 0 || cpos.im != 0;
  bool has_neg = cneg.re != 0 || cneg.im != 0;
  Real last_mag = 0;
  for (std::uint64_t n = 1; n <= n_fourier; ++n) {
    Complex sig(0);
    for (std::uint64_t d : divisors(n)) sig = sig + pow(Real(d), nu);
    Complex coeff = pow(Real(n), s - 1) * sig;
    Real u = 4 * pi() * Real(n) * z.y;
    Complex term(0);
    if (has_pos)
      term = term + cpos * coeff * whittaker_w(half, mu, u) * e_of(Real(n) * z.x);
    if (has_neg)
      term = term + cneg * coeff * (half ? whittaker_w(-half, mu, u) : whittaker_w(0, mu, u)) *
                        e_of(-Real(n) * z.x);
    val = val + term;
    last_mag = abs(term);
  }
  if (tail_out) *tail_out = 4 * last_mag;
  return val;
}

// Cubic B-spline bump supported on [a, b], scaled so the peak value is 2/3.
struct BumpWindow {
  Real a, b;
  BumpWindow(const Real& a_, const Real& b_) : a(a_), b(b_) {
    if (!(a > 0)) throw DomainError("BumpWindow: support must satisfy a > 0");
    if (!(b > a)) throw DomainError("BumpWindow: support must satisfy b > a");
  }

  Real operator()(const Real& y) const {
    if (!(y > a) || !(y < b)) return Real(0);
    Real u = 4 * (y - a) / (b - a);
    if (u < 1) return u * u * u / 6;
    if (u < 2) return (((-3 * u + 12) * u - 12) * u + 4) / 6;
    if (u < 3) return (((3 * u - 24) * u + 60) * u - 44) / 6;
    Real v = 4 - u;
    return v * v * v / 6;
  }

  // Mellin transform: integral of psi(y) y^{s-1} dy.  Composite Gauss panels,
  // aligned with the four polynomial pieces of the spline.
  Complex mellin(const Complex& s) const {
    const auto& gl = detail::gl7();
    const int panels = 48;
    Complex acc(0);
    Real quarter = (b - a) / 4;
    for (int piece = 0; piece < 4; ++piece) {
      Real lo = a + piece * quarter;
      Real w = quarter / panels;
      for (int p = 0; p < panels; ++p) {
        Real left = lo + p * w;
        for (int i = 0; i < 7; ++i) {
          Real y = left + gl.node[i] * w;
          acc = acc + (gl.weight[i] * w * (*this)(y)) * pow(y, s - 1);
        }
      }
    }
    return acc;
  }
};

// Direct sum over the finitely many cosets whose orbit height lands in the
// support: Im(gamma z) = y / |cz+d|^2 <= min(y, 1/(c^2 y)) for c != 0.
inline Complex incomplete_eisenstein(unsigned k, const HPoint& z, const BumpWindow& psi) {
  if (k % 2) throw DomainError("incomplete_eisenstein: weight must be even");
  Complex total = psi(z.y);  // identity coset, j = 1
  Real c_bound = sqrt(1 / (psi.a * z.y));
  for (std::uint64_t c = 1; Real(c) <= c_bound; ++c) {
    Real disc = z.y / psi.a - Real(c) * Real(c) * z.y * z.y;
    if (!(disc >= 0)) continue;
    Real r = sqrt(disc);
    Real center = -Real(c) * z.x;
    std::int64_t dmin = static_cast<std::int64_t>(Real(ceil(center - r)));
    std::int64_t dmax = static_cast<std::int64_t>(Real(floor(center + r)));
    for (std::int64_t d = dmin; d <= dmax; ++d) {
      std::uint64_t ad = static_cast<std::uint64_t>(d < 0 ? -d : d);
      if (detail::gcd_u64(c, ad) != 1) continue;
      Complex w(Real(c) * z.x + Real(static_cast<long long>(d)), Real(c) * z.y);
      Real n2 = norm(w);
      Real h = z.y / n2;
      Real p = psi(h);
      if (p == 0) continue;
      Complex term(p);
      if (k) term = term * detail::unit_pow(conj(w) / sqrt(n2), static_cast<int>(k));
      total = total + term;
    }
  }
  return total;
}

// alpha^2(s, k) = prod over 0 <= l < k/2 of 1 / ((l + s)(l + 1 - s)).
inline Complex alpha_sq(const Complex& s, unsigned k) {
  if (k % 2) throw DomainError("alpha_sq: weight must be even");
  Real floor_mag = ldexp(Real(1), -static_cast<int>(Real::default_precision() * 3.0));
  Complex acc(1);
  for (unsigned l = 0; l < k / 2; ++l) {
    Complex factor = (Real(l) + s) * (Real(l) + 1 - s);
    if (abs(factor) < floor_mag) throw PoleError("alpha_sq: factor vanishes");
    acc = acc / factor;
  }
  return acc;
}

// beta^2(m, k) = Gamma(m) / (Gamma((k+m)/2) Gamma((k-m)/2 + 1)), exactly.
inline Rational beta_sq(unsigned m, unsigned k) {
  if (m % 2 || k % 2) throw DomainError("beta_sq: weights must be even");
  if (m < 2 || m > k) throw DomainError("beta_sq: requires 2 <= m <= k");
  return Rational(factorial(m - 1), factorial((k + m) / 2 - 1) * factorial((k - m) / 2));
}

// R_{k1}^{k2} of the L^2-normalized y^{k1/2} f(z).  Fourier sum
//   (-1)^{(k2-k1)/2} beta(k1,k2) a_f(1) (4 pi)^{-k1/2}
//     sum lambda(n)/sqrt(n) W_{k2/2,(k1-1)/2}(4 pi n y) e(nx),
// where W_{k2/2,(k1-1)/2} is the closed family with alpha = k1/2, shift
// (k2-k1)/2.  The (4 pi)^{-k1/2} makes the k2 = k1 case literally equal
// y^{k1/2} f(z) for the q-expansion normalization of a_f.
inline Complex raised_cusp_form(const HeckeEigenform& f, unsigned k2, const HPoint& z,
                                unsigned n_fourier = 0) {
  unsigned k1 = f.weight();
  if (k2 % 2) throw DomainError("raised_cusp_form: target weight must be even");
  if (k2 < k1) throw DomainError("raised_cusp_form: requires k2 >= k1");
  unsigned shift = (k2 - k1) / 2;
  Real alpha = Real(k1) / 2;
  if (n_fourier == 0) {
    Real need = (Real(Real::default_precision()) * Real(2.4) + Real(32) + Real(k2)) /
                (2 * pi() * z.y);
    n_fourier = 24 + static_cast<unsigned>(ceil(need));
  }
  Real beta = sqrt(Real(beta_sq(k1, k2)));
  Real a1 = sqrt(a1_squared(f));
  Real pref = beta * a1 * pow(4 * pi(), -alpha);
  Complex sum(0);
  Real term_mag = 0;
  for (std::uint64_t n = 1; n <= n_fourier; ++n) {
    Real u = 4 * pi() * Real(n) * z.y;
    Real w = w_holomorphic_shift(alpha, shift, u);
    Complex term = (f.lambda(n) / sqrt(Real(n)) * w) * e_of(Real(n) * z.x);
    sum = sum + term;
    term_mag = abs(term);
  }
  if (term_mag > abs(sum) / 1000)
    throw ConvergenceError("raised_cusp_form: truncation too aggressive");
  Complex val = pref * sum;
  return (shift % 2) ? -val : val;
}

struct MaassData {
  Real t;
  bool even_parity = true;
  unsigned n_coeffs = 0;
  std::vector<Real> c;  // c[i] holds c(i+1)

  Real coeff(std::uint64_t n) const {
    if (n == 0 || n > n_coeffs) throw DomainError("MaassData: coefficient out of range");
    return c[static_cast<std::size_t>(n - 1)];
  }
};

inline MaassData read_maass(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("maass: empty input");
  std::istringstream hs(line);
  std::string magic, version, tfield, pfield, nfield;
  hs >> magic >> version >> tfield >> pfield >> nfield;
  if (magic != "maass" || version != "v1" || tfield.rfind("t=", 0) != 0 ||
      pfield.rfind("parity=", 0) != 0 || nfield.rfind("N=", 0) != 0)
    throw ParseError("maass: bad header: " + line);
  MaassData m;
  try {
    m.t = Real(tfield.substr(2));
  } catch (const std::exception&) {
    throw ParseError("maass: bad spectral parameter: " + tfield);
  }
  std::string parity = pfield.substr(7);
  if (parity == "even")
    m.even_parity = true;
  else if (parity == "odd")
    m.even_parity = false;
  else
    throw ParseError("maass: bad parity: " + parity);
  long n_signed = 0;
  try {
    n_signed = std::stol(nfield.substr(2));
  } catch (const std::exception&) {
    throw ParseError("maass: bad N: " + nfield);
  }
  if (n_signed < 1) throw ParseError("maass: N must be positive");
  m.n_coeffs = static_cast<unsigned>(n_signed);
  m.c.assign(m.n_coeffs, Real(0));
  std::vector<bool> seen(m.n_coeffs, false);
  unsigned line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    long n = 0;
    std::string cstr;
    if (!(ls >> n >> cstr))
      throw ParseError("maass: bad coefficient line " + std::to_string(line_no));
    if (n < 1 || static_cast<unsigned>(n) > m.n_coeffs)
      throw ParseError("maass: index out of range at line " + std::to_string(line_no));
    if (seen[static_cast<std::size_t>(n - 1)])
      throw ParseError("maass: duplicate index at line " + std::to_string(line_no));
    seen[static_cast<std::size_t>(n - 1)] = true;
    try {
      m.c[static_cast<std::size_t>(n - 1)] = Real(cstr);
    } catch (const std::exception&) {
      throw ParseError("maass: bad coefficient value at line " + std::to_string(line_no));
    }
  }
  if (!seen[0] || m.c[0] == 0) throw ParseError("maass: c(1) missing or zero");
  return m;
}

inline void write_maass(std::ostream& out, const MaassData& m) {
  out << "maass v1 t=" << real_to_string(m.t)
      << " parity=" << (m.even_parity ? "even" : "odd") << " N=" << m.n_coeffs << "\n";
  for (unsigned n = 1; n <= m.n_coeffs; ++n)
    out << n << " " << real_to_string(m.c[n - 1]) << "\n";
}

// Weight-k raise of a weight-0 Maass form from its coefficient table:
//   u_{j,k} = (-1)^{k/2} Gamma(1/2+it)/Gamma(1/2+k/2+it)
//               sum_{n>0} c(n)/sqrt(n) W_{k/2,it}(4 pi n y) e(nx)
//           + the mirrored n < 0 sum with Gamma(1/2-k/2+it) and W_{-k/2,it}.
// Odd parity flips the sign of the n < 0 coefficients.
inline Complex raised_maass_form(const MaassData& m, unsigned k, const HPoint& z,
                                 unsigned n_fourier = 0) {
  if (k % 2) throw DomainError("raised_maass_form: weight must be even");
  if (n_fourier == 0) n_fourier = m.n_coeffs;
  if (n_fourier > m.n_coeffs)
    throw DomainError("raised_maass_form: not enough stored coefficients");
  int half = static_cast<int>(k / 2);
  Real sign = (half % 2) ? Real(-1) : Real(1);
  Complex mu(Real(0), m.t);
  Complex g0 = gamma(Complex(Real(1) / 2, m.t));
  Complex cpos = sign * g0 / gamma(Complex(Real(1) / 2 + half, m.t));
  Complex cneg = sign * g0 / gamma(Complex(Real(1) / 2 - half, m.t));
  Real parity = m.even_parity ? Real(1) : Real(-1);
  Complex val(0);
  for (std::uint64_t n = 1; n <= n_fourier; ++n) {
    Real u = 4 * pi() * Real(n) * z.y;
    Complex wp = whittaker_w(half, mu, u);
    Complex wn = half ? whittaker_w(-half, mu, u) : wp;
    Real base = m.coeff(n) / sqrt(Real(n));
    val = val + cpos * (base * wp) * e_of(Real(n) * z.x) +
          cneg * (parity * base * wn) * e_of(-Real(n) * z.x);
  }
  return val;
}

using FormFn = std::function<Complex(const HPoint&)>;

namespace detail {

struct Stencil {
  Complex fx, fy, fxx, fyy, f0;
};

inline Stencil stencil_at(const FormFn& f, const HPoint& z, const Real& h) {
  auto at = [&](const Real& dx, const Real& dy) { return f(HPoint(z.x + dx, z.y + dy)); };
  Stencil s;
  s.f0 = at(0, 0);
  Complex xp1 = at(h, 0), xp2 = at(2 * h, 0), xm1 = at(-h, 0), xm2 = at(-2 * h, 0);
  Complex yp1 = at(0, h), yp2 = at(0, 2 * h), ym1 = at(0, -h), ym2 = at(0, -2 * h);
  s.fx = (-xp2 + Real(8) * xp1 - Real(8) * xm1 + xm2) / (12 * h);
  s.fy = (-yp2 + Real(8) * yp1 - Real(8) * ym1 + ym2) / (12 * h);
  s.fxx = (-xp2 + Real(16) * xp1 - Real(30) * s.f0 + Real(16) * xm1 - xm2) / (12 * h * h);
  s.fyy = (-yp2 + Real(16) * yp1 - Real(30) * s.f0 + Real(16) * ym1 - ym2) / (12 * h * h);
  return s;
}

inline Real fd_step(const HPoint& z, const Real& h_user) {
  if (h_user > 0) return h_user;
  Real h = z.y * ldexp(Real(1), -static_cast<int>(Real::default_precision() * 3.32 / 4));
  Real floor_h = Real(1) / 1000000;
  return h > floor_h ? h : floor_h;
}

template <typename Op>
inline Complex richardson_apply(const FormFn& f, const HPoint& z, const Real& h_user,
                                Op&& op) {
  Real h = fd_step(z, h_user);
  Stencil coarse = stencil_at(f, z, h);
  Stencil fine = stencil_at(f, z, h / 2);
  Complex vc = op(coarse), vf = op(fine);
  Real scale = abs(vf);
  Real f0 = abs(fine.f0);
  if (f0 > scale) scale = f0;
  if (scale == 0) scale = 1;
  if (abs(vc - vf) > scale / 1000000)
    throw ConvergenceError("finite differences: step sizes h and h/2 disagree");
  return vf;
}

}  // namespace detail

// K_k = k/2 + y(i d/dx + d/dy)
inline Complex raising_numeric(const FormFn& f, unsigned k, const HPoint& z,
                               const Real& h = Real(0)) {
  return detail::richardson_apply(f, z, h, [&](const detail::Stencil& s) {
    return Real(k) / 2 * s.f0 + z.y * (Complex(0, 1) * s.fx + s.fy);
  });
}

// Lambda_k = k/2 + y(i d/dx - d/dy)
inline Complex lowering_numeric(const FormFn& f, unsigned k, const HPoint& z,
                                const Real& h = Real(0)) {
  return detail::richardson_apply(f, z, h, [&](const detail::Stencil& s) {
    return Real(k) / 2 * s.f0 + z.y * (Complex(0, 1) * s.fx - s.fy);
  });
}

// Weight-k Laplacian, in the sign convention that makes it non-negative:
// Delta_k = -y^2 (d^2/dx^2 + d^2/dy^2) + i k y d/dx, so eigenfunctions with
// spectral parameter s carry eigenvalue lambda(s) = s(1-s).
inline Complex laplacian_numeric(const FormFn& f, unsigned k, const HPoint& z,
                                 const Real& h = Real(0)) {
  return detail::richardson_apply(f, z, h, [&](const detail::Stencil& s) {
    return Complex(0, Real(k)) * z.y * s.fx - z.y * z.y * (s.fxx + s.fyy);
  });
}

// a_l(y) of a periodic automorphic function, by the trapezoid rule in x.
inline Complex fourier_coefficient_x(const FormFn& f, std::int64_t l, const Real& y,
                                     unsigned points = 128) {
  Complex acc(0);
  for (unsigned j = 0; j < points; ++j) {
    Real x = Real(j) / points - Real(1) / 2;
    acc = acc + f(HPoint(x, y)) * e_of(-Real(static_cast<long long>(l)) * x);
  }
  return acc / Real(points);
}

}  // namespace modmass
