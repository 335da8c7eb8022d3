#ifndef MODMASS_QSERIES_HPP
#define MODMASS_QSERIES_HPP

#include "modmass/arith.hpp"

#include <algorithm>
#include <cstring>
#include <vector>

// Truncated q-expansions with exact integer coefficients, and the
// Victor-Miller basis of S_k built from E4, E6 and the discriminant form.

namespace modmass {

class QSeries {
public:
  QSeries() = default;
  QSeries(int weight, unsigned trunc) : weight_(weight), coeffs_(trunc + 1) {}

  int weight() const { return weight_; }
  unsigned trunc() const { return static_cast<unsigned>(coeffs_.size()) - 1; }

  const Integer& coeff(unsigned n) const { return coeffs_.at(n); }
  Integer& coeff(unsigned n) { return coeffs_.at(n); }
  const std::vector<Integer>& coeffs() const { return coeffs_; }

  bool is_cusp_form() const { return coeffs_.at(0) == 0; }

  QSeries& truncate(unsigned n) {
    if (n + 1 < coeffs_.size()) coeffs_.resize(n + 1);
    return *this;
  }

  friend QSeries operator+(const QSeries& a, const QSeries& b) {
    QSeries r(a.weight_, std::min(a.trunc(), b.trunc()));
    for (unsigned i = 0; i <= r.trunc(); ++i) r.coeffs_[i] = a.coeffs_[i] + b.coeffs_[i];
    return r;
  }
  friend QSeries operator-(const QSeries& a, const QSeries& b) {
    QSeries r(a.weight_, std::min(a.trunc(), b.trunc()));
    for (unsigned i = 0; i <= r.trunc(); ++i) r.coeffs_[i] = a.coeffs_[i] - b.coeffs_[i];
    return r;
  }
  friend QSeries operator*(const Integer& s, QSeries a) {
    for (auto& c : a.coeffs_) c *= s;
    return a;
  }

  // Exact scalar division; throws if any coefficient is not divisible.
  QSeries div_exact(const Integer& s) const {
    QSeries r(weight_, trunc());
    for (unsigned i = 0; i <= trunc(); ++i) {
      if (coeffs_[i] % s != 0) throw Error("QSeries::div_exact: inexact division");
      r.coeffs_[i] = coeffs_[i] / s;
    }
    return r;
  }

  friend QSeries operator*(const QSeries& a, const QSeries& b);

  QSeries pow(unsigned e) const {
    QSeries r(0, trunc());
    r.coeffs_[0] = 1;
    QSeries base = *this;
    unsigned n = e;
    while (n) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n) base = base * base;
    }
    r.weight_ = weight_ * static_cast<int>(e);
    return r;
  }

private:
  int weight_ = 0;
  std::vector<Integer> coeffs_;
};

namespace detail {

// Packs a vector of non-negative coefficients into one big integer with
// `field_bytes` bytes per slot, so that GMP's FFT multiplication does the
// polynomial product (Kronecker substitution).
inline Integer kronecker_pack(const std::vector<Integer>& c, std::size_t field_bytes) {
  std::vector<unsigned char> buf(c.size() * field_bytes, 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    std::size_t count = 0;
    mpz_export(buf.data() + i * field_bytes, &count, -1, 1, -1, 0,
               c[i].backend().data());
  }
  Integer packed;
  mpz_import(packed.backend().data(), buf.size(), -1, 1, -1, 0, buf.data());
  return packed;
}

inline std::vector<Integer> kronecker_unpack(const Integer& v, std::size_t n_slots,
                                             std::size_t field_bytes) {
  std::size_t v_bytes = (mpz_sizeinbase(v.backend().data(), 2) + 7) / 8;
  std::vector<unsigned char> buf(std::max(n_slots * field_bytes, v_bytes) + 8, 0);
  std::size_t count = 0;
  mpz_export(buf.data(), &count, -1, 1, -1, 0, v.backend().data());
  std::vector<Integer> out(n_slots);
  for (std::size_t i = 0; i < n_slots; ++i) {
    mpz_import(out[i].backend().data(), field_bytes, -1, 1, -1, 0,
               buf.data() + i * field_bytes);
  }
  return out;
}

// Product of two non-negative coefficient vectors, truncated to n_out slots.
inline std::vector<Integer> poly_mul_nonneg(const std::vector<Integer>& a,
                                            const std::vector<Integer>& b,
                                            std::size_t n_out) {
  std::size_t max_bits_a = 1, max_bits_b = 1;
  for (const auto& x : a)
    if (x != 0) max_bits_a = std::max(max_bits_a, mpz_sizeinbase(x.backend().data(), 2));
  for (const auto& x : b)
    if (x != 0) max_bits_b = std::max(max_bits_b, mpz_sizeinbase(x.backend().data(), 2));
  std::size_t carry_bits = 1;
  while ((std::size_t(1) << carry_bits) < std::min(a.size(), b.size()) + 1) ++carry_bits;
  std::size_t field_bytes = (max_bits_a + max_bits_b + carry_bits + 8) / 8 + 1;

  Integer pa = kronecker_pack(a, field_bytes);
  Integer pb = kronecker_pack(b, field_bytes);
  Integer prod = pa * pb;
  auto full = kronecker_unpack(prod, std::min(n_out, a.size() + b.size() - 1), field_bytes);
  full.resize(n_out);
  return full;
}

}  // namespace detail

inline QSeries operator*(const QSeries& a, const QSeries& b) {
  unsigned trunc = std::min(a.trunc(), b.trunc());
  std::size_t n = trunc + 1;
  // Split signed coefficients into positive and negative parts.
  std::vector<Integer> ap(n), an(n), bp(n), bn(n);
  for (std::size_t i = 0; i < n; ++i) {
    (a.coeff(i) >= 0 ? ap[i] : an[i]) = abs(a.coeff(i));
    (b.coeff(i) >= 0 ? bp[i] : bn[i]) = abs(b.coeff(i));
  }
  auto pp = detail::poly_mul_nonneg(ap, bp, n);
  auto nn = detail::poly_mul_nonneg(an, bn, n);
  auto pn = detail::poly_mul_nonneg(ap, bn, n);
  auto np = detail::poly_mul_nonneg(an, bp, n);
  QSeries r(a.weight() + b.weight(), trunc);
  for (std::size_t i = 0; i < n; ++i) r.coeff(i) = pp[i] + nn[i] - pn[i] - np[i];
  return r;
}

// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n,
// for k in {4, 6} (all the generators we need).
inline QSeries eisenstein_qexp(unsigned k, unsigned trunc) {
  if (k != 4 && k != 6) throw DomainError("eisenstein_qexp: only k = 4, 6 supported");
  QSeries E(static_cast<int>(k), trunc);
  E.coeff(0) = 1;
  // divisor-power sieve
  std::vector<Integer> sig(trunc + 1);
  for (std::uint64_t d = 1; d <= trunc; ++d) {
    Integer dk = pow(Integer(d), k - 1);
    for (std::uint64_t m = d; m <= trunc; m += d) sig[m] += dk;
  }
  Integer factor = (k == 4) ? Integer(240) : Integer(-504);
  for (unsigned n = 1; n <= trunc; ++n) E.coeff(n) = factor * sig[n];
  return E;
}

// Discriminant cusp form of weight 12: (E4^3 - E6^2)/1728.
inline QSeries delta_qexp(unsigned trunc) {
  QSeries e4 = eisenstein_qexp(4, trunc);
  QSeries e6 = eisenstein_qexp(6, trunc);
  return (e4.pow(3) - e6.pow(2)).div_exact(1728);
}

inline unsigned dim_cusp_forms(unsigned k) {
  if (k % 2 != 0 || k < 4) return 0;
  unsigned d = k / 12;
  if (k % 12 == 2) d -= 1;
  return d;
}

// Echelonized basis of S_k: element i has coefficient delta_{ij} at q^j
// for 1 <= j <= dim.  Coefficients are exact integers.
inline std::vector<QSeries> victor_miller_basis(unsigned k, unsigned trunc) {
  if (k % 2 != 0 || k < 12)
    throw DomainError("victor_miller_basis: k must be even and >= 12");
  unsigned d = dim_cusp_forms(k);
  if (d == 0) return {};
  if (trunc < d) throw DomainError("victor_miller_basis: trunc below dim S_k");

  QSeries e4 = eisenstein_qexp(4, trunc);
  QSeries e6 = eisenstein_qexp(6, trunc);
  QSeries delta = delta_qexp(trunc);

  std::vector<QSeries> rows;
  for (unsigned j = 1; j <= d; ++j) {
    unsigned w = k - 12 * j;
    unsigned b = (w % 4 == 2) ? 1 : 0;
    unsigned a = (w - 6 * b) / 4;
    QSeries m = delta.pow(j);
    if (a) m = m * e4.pow(a);
    if (b) m = m * e6;
    rows.push_back(std::move(m));
  }

  // Gauss-Jordan on the leading d coefficients (exact rational pivoting,
  // result is integral for this basis).
  std::vector<std::vector<Rational>> R(d, std::vector<Rational>(trunc + 1));
  for (unsigned i = 0; i < d; ++i)
    for (unsigned n = 0; n <= trunc; ++n) R[i][n] = Rational(rows[i].coeff(n));

  for (unsigned col = 1; col <= d; ++col) {
    unsigned r = col - 1;
    unsigned piv = r;
    while (piv < d && R[piv][col] == 0) ++piv;
    if (piv == d) throw Error("victor_miller_basis: unexpected rank deficiency");
    std::swap(R[r], R[piv]);
    Rational p = R[r][col];
    for (auto& x : R[r]) x /= p;
    for (unsigned i = 0; i < d; ++i) {
      if (i == r || R[i][col] == 0) continue;
      Rational f = R[i][col];
      for (unsigned n = 0; n <= trunc; ++n) R[i][n] -= f * R[r][n];
    }
  }

  std::vector<QSeries> basis;
  for (unsigned i = 0; i < d; ++i) {
    QSeries f(static_cast<int>(k), trunc);
    for (unsigned n = 0; n <= trunc; ++n) {
      if (denominator(R[i][n]) != 1)
        throw Error("victor_miller_basis: non-integral echelon coefficient");
      f.coeff(n) = numerator(R[i][n]);
    }
    basis.push_back(std::move(f));
  }
  return basis;
}

// Hecke operator T_p on a weight-k q-expansion (level 1, p prime).
// Output truncation shrinks by the factor p.
inline QSeries hecke_operator_prime(const QSeries& f, std::uint64_t p) {
  unsigned out_trunc = f.trunc() / static_cast<unsigned>(p);
  QSeries r(f.weight(), out_trunc);
  Integer pk = pow(Integer(p), static_cast<unsigned>(f.weight()) - 1);
  for (unsigned n = 0; n <= out_trunc; ++n) {
    r.coeff(n) = f.coeff(n * static_cast<unsigned>(p));
    if (n % p == 0) r.coeff(n) += pk * f.coeff(n / static_cast<unsigned>(p));
  }
  return r;
}

}  // namespace modmass

#endif
