#include <catch2/catch_amalgamated.hpp>

#include "modmass/qseries.hpp"

#include <random>

using namespace modmass;

namespace {

// Oracle: schoolbook multiplication, no packing tricks.
QSeries schoolbook_mul(const QSeries& a, const QSeries& b) {
  unsigned n = std::min(a.trunc(), b.trunc());
  QSeries r(a.weight() + b.weight(), n);
  for (unsigned i = 0; i <= n; ++i)
    for (unsigned j = 0; i + j <= n; ++j)
      r.coeff(i + j) += a.coeff(i) * b.coeff(j);
  return r;
}

// Oracle: q prod_{n<=m}(1 - q^n)^24 expanded term by term.
QSeries delta_product_oracle(unsigned trunc) {
  QSeries r(12, trunc);
  r.coeff(1) = 1;  // the leading q
  for (unsigned n = 1; n <= trunc; ++n) {
    QSeries factor(0, trunc);
    factor.coeff(0) = 1;
    if (n <= trunc) factor.coeff(n) = -1;
    for (int i = 0; i < 24; ++i) r = schoolbook_mul(r, factor);
  }
  return r;
}

}  // namespace

TEST_CASE("eisenstein q-expansions match classical coefficients", "[qseries]") {
  auto e4 = eisenstein_qexp(4, 6);
  CHECK(e4.coeff(0) == 1);
  CHECK(e4.coeff(1) == 240);
  CHECK(e4.coeff(2) == 2160);
  CHECK(e4.coeff(3) == 6720);
  CHECK(e4.coeff(4) == 17520);
  CHECK(e4.coeff(5) == 30240);

  auto e6 = eisenstein_qexp(6, 5);
  CHECK(e6.coeff(0) == 1);
  CHECK(e6.coeff(1) == -504);
  CHECK(e6.coeff(2) == -16632);
  CHECK(e6.coeff(3) == -122976);
  CHECK(e6.coeff(4) == -532728);
}

TEST_CASE("delta matches the product expansion oracle", "[qseries]") {
  unsigned n = 12;
  auto d = delta_qexp(n);
  auto oracle = delta_product_oracle(n);
  for (unsigned i = 0; i <= n; ++i) CHECK(d.coeff(i) == oracle.coeff(i));
  // spot values: tau(n)
  CHECK(d.coeff(1) == 1);
  CHECK(d.coeff(2) == -24);
  CHECK(d.coeff(3) == 252);
  CHECK(d.coeff(4) == -1472);
  CHECK(d.coeff(5) == 4830);
  CHECK(d.coeff(6) == -6048);
  CHECK(d.coeff(12) == -370944);
}

TEST_CASE("packed multiplication agrees with schoolbook on random signed input",
          "[qseries]") {
  std::mt19937_64 rng(20260826);
  std::uniform_int_distribution<long> small(-999, 999);
  for (int iter = 0; iter < 20; ++iter) {
    unsigned n = 1 + static_cast<unsigned>(rng() % 60);
    QSeries a(4, n), b(6, n);
    for (unsigned i = 0; i <= n; ++i) {
      a.coeff(i) = small(rng);
      b.coeff(i) = small(rng);
    }
    auto fast = a * b;
    auto slow = schoolbook_mul(a, b);
    for (unsigned i = 0; i <= n; ++i) REQUIRE(fast.coeff(i) == slow.coeff(i));
  }
  // also stress the packing with huge coefficients
  QSeries a(0, 8), b(0, 8);
  Integer big = pow(Integer(10), 80);
  for (unsigned i = 0; i <= 8; ++i) {
    a.coeff(i) = (i % 2 ? -big : big) + Integer(i);
    b.coeff(i) = (i % 3 ? big : -big) - Integer(i);
  }
  auto fast = a * b;
  auto slow = schoolbook_mul(a, b);
  for (unsigned i = 0; i <= 8; ++i) REQUIRE(fast.coeff(i) == slow.coeff(i));
}

TEST_CASE("victor-miller basis rank matches the dimension formula", "[qseries]") {
  struct Case { unsigned k, dim; };
  for (auto [k, dim] : {Case{12, 1}, Case{16, 1}, Case{18, 1}, Case{20, 1},
                        Case{22, 1}, Case{24, 2}, Case{26, 1}, Case{28, 2}}) {
    CHECK(dim_cusp_forms(k) == dim);
    auto basis = victor_miller_basis(k, 3 * dim);
    REQUIRE(basis.size() == dim);
    // echelon shape: basis[i] = q^{i+1} + O(q^{dim+1})
    for (unsigned i = 0; i < dim; ++i)
      for (unsigned j = 1; j <= dim; ++j)
        CHECK(basis[i].coeff(j) == (j == i + 1 ? 1 : 0));
  }
  CHECK(dim_cusp_forms(14) == 0);
}

TEST_CASE("weight-12 basis element is delta", "[qseries]") {
  auto basis = victor_miller_basis(12, 30);
  auto d = delta_qexp(30);
  for (unsigned i = 0; i <= 30; ++i) CHECK(basis[0].coeff(i) == d.coeff(i));
}

TEST_CASE("hecke operator on delta reproduces tau multiplicativity", "[qseries]") {
  auto d = delta_qexp(40);
  for (std::uint64_t p : {2, 3, 5}) {
    auto td = hecke_operator_prime(d, static_cast<unsigned>(p));
    // delta is an eigenform: T_p delta = tau(p) delta
    Integer taup = d.coeff(static_cast<unsigned>(p));
    for (unsigned n = 1; n <= td.trunc(); ++n)
      CHECK(td.coeff(n) == taup * d.coeff(n));
  }
}
