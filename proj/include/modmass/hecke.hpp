#ifndef MODMASS_HECKE_HPP
#define MODMASS_HECKE_HPP

#include "modmass/qseries.hpp"
#include "modmass/special.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>

// Hecke eigenforms of level 1: eigenvalues lambda_f(n), L-series,
// the symmetric-square value at 1 and the first-coefficient normalization.

namespace modmass {

class HeckeEigenform {
public:
  HeckeEigenform(unsigned weight, std::vector<Real> lambda)
      : weight_(weight), lambda_(std::move(lambda)) {
    if (lambda_.size() < 3) throw DomainError("HeckeEigenform: need lambda up to n >= 2");
    if (abs(lambda_[1] - 1) > Real("1e-30"))
      throw Error("HeckeEigenform: lambda(1) must be 1");
  }

  unsigned weight() const { return weight_; }
  unsigned trunc() const { return static_cast<unsigned>(lambda_.size()) - 1; }

  // lambda_f(n); values past the stored range are synthesized through the
  // Hecke recursion from stored prime eigenvalues.
  Real lambda(std::uint64_t n) const {
    if (n == 0) throw DomainError("lambda: n must be >= 1");
    if (n <= trunc()) return lambda_[static_cast<std::size_t>(n)];
    std::lock_guard<std::mutex> lock(synth_->mutex);
    auto it = synth_->cache.find(n);
    if (it != synth_->cache.end()) return it->second;
    Real v = synthesize(n);
    synth_->cache.emplace(n, v);
    return v;
  }

  bool has_l_sym2_at_1() const { return l_sym2_set_; }
  const Real& l_sym2_at_1() const {
    if (!l_sym2_set_) throw Error("HeckeEigenform: l_sym2_at_1 not computed");
    return l_sym2_value_;
  }
  void set_l_sym2_at_1(Real v) {
    l_sym2_value_ = std::move(v);
    l_sym2_set_ = true;
  }

private:
  Real lambda_prime_power(std::uint64_t p, unsigned e) const {
    if (p > trunc())
      throw DomainError("lambda: prime beyond stored q-expansion range");
    Real lm2 = 1, lm1 = lambda_[static_cast<std::size_t>(p)];
    if (e == 0) return lm2;
    for (unsigned i = 2; i <= e; ++i) {
      Real cur = lambda_[static_cast<std::size_t>(p)] * lm1 - lm2;
      lm2 = lm1;
      lm1 = cur;
    }
    return lm1;
  }

  Real synthesize(std::uint64_t n) const {
    Real v = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
      if (n % p != 0) continue;
      unsigned e = 0;
      while (n % p == 0) { n /= p; ++e; }
      v *= lambda_prime_power(p, e);
    }
    if (n > 1) v *= lambda_prime_power(n, 1);
    return v;
  }

  unsigned weight_;
  std::vector<Real> lambda_;  // index n, 0 unused
  Real l_sym2_value_ = 0;
  bool l_sym2_set_ = false;
  struct SynthCache {
    std::mutex mutex;
    std::map<std::uint64_t, Real> cache;
  };
  // behind a pointer so the class stays movable despite the mutex
  mutable std::unique_ptr<SynthCache> synth_ = std::make_unique<SynthCache>();
};

// Diagonalizes T_2 on the Victor-Miller basis and returns the eigenforms
// normalized to lambda(1) = 1, with lambda(n) for n <= trunc.
inline std::vector<HeckeEigenform> eigenforms(unsigned k, unsigned trunc) {
  unsigned d = dim_cusp_forms(k);
  if (k % 2 != 0 || k < 12) throw DomainError("eigenforms: k must be even and >= 12");
  if (trunc < 2 * d) throw DomainError("eigenforms: trunc must be >= 2 dim S_k");

  auto half = [&](std::uint64_t n) {  // n^{(k-1)/2}
    return pow(Real(n), Real(k - 1) / 2);
  };

  std::vector<HeckeEigenform> out;
  if (d == 1) {
    auto basis = victor_miller_basis(k, trunc);
    std::vector<Real> lam(trunc + 1);
    for (std::uint64_t n = 1; n <= trunc; ++n)
      lam[n] = Real(basis[0].coeff(static_cast<unsigned>(n))) / half(n);
    out.emplace_back(k, std::move(lam));
    return out;
  }

  // Higher dimension: diagonalize T_2 numerically.
  auto basis = victor_miller_basis(k, 2 * trunc);
  if (d != 2)
    throw DomainError("eigenforms: dim S_k > 2 not supported at desk scale");
  // Matrix entries of T_2 read off the echelon coefficients at q^1, q^2.
  QSeries t0 = hecke_operator_prime(basis[0], 2);
  QSeries t1 = hecke_operator_prime(basis[1], 2);
  Real m00 = Real(t0.coeff(1)), m10 = Real(t0.coeff(2));
  Real m01 = Real(t1.coeff(1)), m11 = Real(t1.coeff(2));
  Real tr = m00 + m11, det = m00 * m11 - m01 * m10;
  Real disc = tr * tr - 4 * det;
  if (disc <= 0) throw Error("eigenforms: T_2 eigenvalues not real");
  Real rt = sqrt(disc);
  unsigned bits = static_cast<unsigned>(Real::default_precision() * 3.33);
  if (rt < ldexp(Real(1), -static_cast<int>(bits / 2)) * (1 + abs(tr)))
    throw Error("eigenforms: T_2 eigenvalue clustering");
  for (int sign : {1, -1}) {
    Real ev = (tr + sign * rt) / 2;
    // Eigenvector (v0, v1) of [[m00, m01], [m10, m11]].
    Real v0, v1;
    if (abs(m01) > abs(m10)) {
      v0 = m01;
      v1 = ev - m00;
    } else {
      v0 = ev - m11;
      v1 = m10;
    }
    // a(n) of the eigenform, then scale so a(1) = 1.
    Real a1 = v0 * Real(basis[0].coeff(1)) + v1 * Real(basis[1].coeff(1));
    std::vector<Real> lam(trunc + 1);
    for (std::uint64_t n = 1; n <= trunc; ++n) {
      Real an = v0 * Real(basis[0].coeff(static_cast<unsigned>(n))) +
                v1 * Real(basis[1].coeff(static_cast<unsigned>(n)));
      lam[n] = an / (a1 * half(n));
    }
    out.emplace_back(k, std::move(lam));
  }
  return out;
}

struct LValue {
  Real value;
  Real tail_bound;  // heuristic, from |lambda(n)| <= tau(n)
};

namespace detail {

// Heuristic Dirichlet tail: sum_{n>N} tau(n)^m n^{-s} ~ integral of
// (log x)^m x^{-s}, m = 1 for one form, 2 for a product of two.
inline Real dirichlet_tail(std::uint64_t N, const Real& s, unsigned m) {
  Real lnN = log(Real(N));
  Real poly = 1;
  Real sm1 = s - 1;
  // int_N^inf log^m x x^{-s} dx expanded by parts
  Real acc = 0, c = 1;
  for (unsigned j = 0; j <= m; ++j) {
    acc += c * pow(lnN, Real(m - j));
    c *= Real(m - j) / sm1;
  }
  return acc * pow(Real(N), -sm1) / sm1;
}

}  // namespace detail

// L(s, f) = sum lambda(n) n^{-s}, s > 1, by partial sums.
inline LValue l_series(const HeckeEigenform& f, const Real& s, std::uint64_t N) {
  if (s <= 1) throw DomainError("l_series: requires s > 1");
  Real acc = 0;
  for (std::uint64_t n = 1; n <= N; ++n) acc += f.lambda(n) * pow(Real(n), -s);
  return {acc, detail::dirichlet_tail(N, s, 1)};
}

// Euler-product route for L(s, f), cross-check oracle for the sum route.
inline Real l_series_euler(const HeckeEigenform& f, const Real& s, std::uint64_t P) {
  if (s <= 1) throw DomainError("l_series_euler: requires s > 1");
  Real acc = 1;
  for (auto p : primes_up_to(P)) {
    Real ps = pow(Real(p), -s);
    acc /= 1 - f.lambda(p) * ps + ps * ps;
  }
  return acc;
}

// Rankin-Selberg convolution L(s, f x g) = zeta(2s) sum lambda_f lambda_g n^{-s}.
inline LValue l_rankin_selberg(const HeckeEigenform& f, const HeckeEigenform& g,
                               const Real& s, std::uint64_t N) {
  if (s <= 1) throw DomainError("l_rankin_selberg: requires s > 1");
  Real acc = 0;
  for (std::uint64_t n = 1; n <= N; ++n)
    acc += f.lambda(n) * g.lambda(n) * pow(Real(n), -s);
  Real z2s = zeta(Complex(2 * s)).re;
  return {acc * z2s, detail::dirichlet_tail(N, s, 2) * z2s};
}

// Degree-4 Euler product route for L(s, f x g).  The local roots alpha,
// beta are the (unimodular) zeros of 1 - lambda(p) x + x^2.
inline Real l_rankin_selberg_euler(const HeckeEigenform& f, const HeckeEigenform& g,
                                   const Real& s, std::uint64_t P) {
  Real acc = 1;
  for (auto p : primes_up_to(P)) {
    Real ps = pow(Real(p), -s);
    auto roots = [&](const HeckeEigenform& h) {
      Real l = h.lambda(p);
      Complex disc = sqrt(Complex(l * l - 4));
      return std::pair<Complex, Complex>{(Complex(l) + disc) / Real(2),
                                         (Complex(l) - disc) / Real(2)};
    };
    auto [af, bf] = roots(f);
    auto [ag, bg] = roots(g);
    Complex one(Real(1));
    Complex factor = (one - af * ag * ps) * (one - af * bg * ps) *
                     (one - bf * ag * ps) * (one - bf * bg * ps);
    acc /= factor.re;  // the product of the four factors is real
  }
  return acc;
}

namespace detail {

// Dirichlet coefficients of L(s, sym^2 f), multiplicative, local factor
// (1 - a^2 x)^{-1} (1 - b^2 x)^{-1} (1 - x)^{-1} whose power sums give the
// recurrence c(p^m) = L2 c(p^{m-1}) - L2 c(p^{m-2}) + c(p^{m-3}),
// L2 = lambda(p^2).
inline std::vector<Real> sym2_coefficients(const HeckeEigenform& f, std::uint64_t M) {
  std::vector<Real> c(M + 1);
  c[1] = 1;
  std::vector<std::uint64_t> spf(M + 1, 0);  // smallest prime factor
  for (std::uint64_t p = 2; p <= M; ++p)
    if (spf[p] == 0)
      for (std::uint64_t m = p; m <= M; m += p)
        if (spf[m] == 0) spf[m] = p;
  for (std::uint64_t n = 2; n <= M; ++n) {
    std::uint64_t p = spf[n], q = 1, rest = n;
    while (rest % p == 0) { rest /= p; q *= p; }
    if (rest > 1) {
      c[n] = c[q] * c[rest];
      continue;
    }
    // prime power p^e = n: c(p^m) = L2 (c(p^{m-1}) - c(p^{m-2})) + c(p^{m-3})
    // with c(p^0) = 1 and c(p^{m<0}) = 0, L2 = lambda(p^2).
    Real L2 = f.lambda(p) * f.lambda(p) - 1;
    auto at = [&](std::uint64_t m, int back) -> Real {
      std::uint64_t q = m;
      for (int i = 0; i < back; ++i) {
        if (q == 1) return 0;
        q /= p;
      }
      return q == 1 ? Real(1) : c[q];
    };
    c[n] = L2 * (at(n, 1) - at(n, 2)) + at(n, 3);
  }
  return c;
}

}  // namespace detail

// L(s, sym^2 f) for s > 1 by partial Dirichlet sums:
// zeta(2s) sum lambda(n^2) n^{-s} / ... evaluated directly as
// L(s, f x f)/zeta(s).
inline LValue l_sym2(const HeckeEigenform& f, const Real& s, std::uint64_t N) {
  if (s < 1) throw DomainError("l_sym2: requires s >= 1");
  if (s == 1) {
    // Conditionally convergent: zeta(2) sum lambda(n^2)/n, damped by
    // averaging the partial sums over the back half of the range.
    std::uint64_t nmax = 1;
    while ((nmax + 1) * (nmax + 1) <= f.trunc() && nmax + 1 <= N) ++nmax;
    Real acc = 0, avg = 0;
    std::uint64_t lo = nmax / 2;
    for (std::uint64_t n = 1; n <= nmax; ++n) {
      acc += f.lambda(n * n) / Real(n);
      if (n > lo) avg += acc;
    }
    avg /= Real(nmax - lo);
    return {avg * zeta(Complex(2)).re, Real("1e-2")};  // stabilization-grade
  }
  LValue rs = l_rankin_selberg(f, f, s, N);
  Real zs = zeta(Complex(s)).re;
  return {rs.value / zs, rs.tail_bound / zs};
}

// High-accuracy L(1, sym^2 f) through the completed L-function: the
// functional equation Lambda(s) = Lambda(1-s) with
// Lambda(s) = Gamma_R(s+1) Gamma_R(s+k-1) Gamma_R(s+k) L(s) turns the
// conditionally convergent series into two rapidly decaying sums.
// Contour parameters (step, truncation height) default to values whose
// trapezoid and truncation errors sit far below the 1e-5 budget this value
// is consumed at; the term count scales with the symmetric-square conductor.
inline Real l_sym2_at_1_completed(const HeckeEigenform& f, std::uint64_t max_terms = 0,
                                  double h = 0.2, double tmax = 9.0) {
  unsigned k = f.weight();
  auto Q = [&](const Complex& s) {
    return gamma_r(s + Complex(1)) * gamma_r(s + Complex(Real(k - 1))) *
           gamma_r(s + Complex(Real(k)));
  };

  // Nodes u = 2 + i j h, j >= 0; the j < 0 half follows by conjugation.
  const int J = static_cast<int>(tmax / h + 0.5);
  std::vector<Complex> w1(J + 1), w0(J + 1);
  for (int j = 0; j <= J; ++j) {
    Complex u(Real(2), Real(j) * Real(h));
    Complex reg = exp(u * u) / u;
    w1[j] = Q(u + Complex(1)) * reg;
    w0[j] = Q(u) * reg;
  }
  Real pref = Real(h) / (2 * pi());

  std::uint64_t M = max_terms ? max_terms
                              : std::max<std::uint64_t>(20000, 150ull * k * k);
  if (M > f.trunc()) M = f.trunc();
  auto c = detail::sym2_coefficients(f, M);

  Real lam = 0;
  Real floor = ldexp(Real(1), -72);
  unsigned tiny_run = 0;
  for (std::uint64_t n = 1; n <= M; ++n) {
    Real y(n), lny = log(y);
    // y^{-u} = y^{-2} omega^j along the contour, omega = e^{-i h ln y}
    Complex omega(cos(Real(h) * lny), -sin(Real(h) * lny));
    Complex opow = omega;
    Complex s1 = w1[0], s0 = w0[0];
    Real h1 = s1.re, h0 = s0.re;
    for (int j = 1; j <= J; ++j) {
      h1 += 2 * (w1[j] * opow).re;
      h0 += 2 * (w0[j] * opow).re;
      opow = opow * omega;
    }
    Real y2 = 1 / (y * y);
    h1 *= pref * y2;
    h0 *= pref * y2;
    lam += c[n] * (h1 / y + h0);
    if ((abs(h1) / y + abs(h0)) * 1000 < floor * (1 + abs(lam))) {
      if (++tiny_run >= 4) break;
    } else {
      tiny_run = 0;
    }
  }
  return lam / Q(Complex(1)).re;
}

// |a_f(1)|^2 = 2 pi^2 (4 pi)^{k-1} / (Gamma(k) L(1, sym^2 f)), computed
// through log-gamma differences.
inline Real a1_squared(const HeckeEigenform& f) {
  unsigned k = f.weight();
  const Real& L = f.l_sym2_at_1();
  Real lg = log(2 * pi() * pi()) + Real(k - 1) * log(4 * pi()) -
            log_gamma(Real(k)) - log(L);
  return exp(lg);
}

// Analytic conductor C(f) = ((k+1)/2)((k+3)/2).
inline Real analytic_conductor(unsigned k) {
  return Real(k + 1) * Real(k + 3) / 4;
}

// C(f x g): product of the four (1 + |mu_j|) factors of the Rankin-Selberg
// gamma factors, mu = {(k1+k2)/2, (k1+k2)/2 - 1, (k2-k1)/2, (k2-k1)/2 + 1}.
inline Real conductor_pair(unsigned k1, unsigned k2) {
  if (k1 > k2) std::swap(k1, k2);
  Real sp = Real(k1 + k2) / 2, dm = Real(k2 - k1) / 2;
  return (1 + sp) * (1 + abs(sp - 1)) * (1 + dm) * (1 + dm + 1);
}

// --- eigenform cache file -------------------------------------------------
//
//   modmass-eigenform v1
//   k=<weight> index=<i> N=<trunc> lsym2=<value|na>
//   <n> <lambda(n)>          (N lines)

inline std::string real_to_string(const Real& x) {
  std::ostringstream os;
  os.precision(25);
  os << x;
  return os.str();
}

inline void write_eigenform_cache(std::ostream& os,
                                  const std::vector<HeckeEigenform>& forms) {
  os << "modmass-eigenform v1\n";
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const auto& f = forms[i];
    os << "k=" << f.weight() << " index=" << i << " N=" << f.trunc()
       << " lsym2=" << (f.has_l_sym2_at_1() ? real_to_string(f.l_sym2_at_1()) : "na")
       << "\n";
    for (std::uint64_t n = 1; n <= f.trunc(); ++n)
      os << n << " " << real_to_string(f.lambda(n)) << "\n";
  }
}

inline std::vector<HeckeEigenform> read_eigenform_cache(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "modmass-eigenform v1")
    throw ParseError("eigenform cache: bad or missing version header");
  std::vector<HeckeEigenform> forms;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    unsigned k = 0, index = 0;
    std::uint64_t N = 0;
    char lsym2_buf[128] = {0};
    if (std::sscanf(line.c_str(), "k=%u index=%u N=%llu lsym2=%127s", &k, &index,
                    reinterpret_cast<unsigned long long*>(&N), lsym2_buf) != 4)
      throw ParseError("eigenform cache: bad record header: " + line);
    std::vector<Real> lam(N + 1);
    for (std::uint64_t n = 1; n <= N; ++n) {
      if (!std::getline(is, line))
        throw ParseError("eigenform cache: truncated record");
      std::istringstream ls(line);
      std::uint64_t m;
      std::string val;
      if (!(ls >> m >> val) || m != n)
        throw ParseError("eigenform cache: bad coefficient line: " + line);
      lam[n] = Real(val);
    }
    HeckeEigenform f(k, std::move(lam));
    if (std::string(lsym2_buf) != "na") f.set_l_sym2_at_1(Real(lsym2_buf));
    forms.push_back(std::move(f));
  }
  return forms;
}

}  // namespace modmass

#endif
