#include <catch2/catch_amalgamated.hpp>

#include "modmass/forms.hpp"
#include "modmass/quadrature.hpp"

#include <random>
#include <sstream>

using namespace modmass;

namespace {
struct PrecisionSetup {
  PrecisionSetup() { set_global_precision(Precision{192}); }
};
PrecisionSetup precision_setup;

HeckeEigenform make_eigenform(unsigned k) {
  auto fs = eigenforms(k, 128);
  HeckeEigenform f = std::move(fs[0]);
  f.set_l_sym2_at_1(l_sym2_at_1_completed(f));
  return f;
}
}  // namespace

TEST_CASE("coset sum with no cosets reduces to y^s", "[forms]") {
  HPoint z(Real("0.37"), Real("1.4"));
  Complex s(Real(2), Real("0.5"));
  CHECK(abs(eisenstein_coset_sum(0, z, s, 0) - pow(z.y, s)) < Real("1e-50"));
}

TEST_CASE("coset sum guards", "[forms]") {
  HPoint z(Real(0), Real(1));
  CHECK_THROWS_AS(eisenstein_coset_sum(3, z, Complex(2), 10), DomainError);
  CHECK_THROWS_AS(eisenstein_coset_sum(0, z, Complex(Real("1.2")), 10), ConvergenceError);
}

TEST_CASE("fourier route guards", "[forms]") {
  CHECK_THROWS_AS(eisenstein_fourier(3, HPoint(Real(0), Real(1)), Complex(2)), DomainError);
  CHECK_THROWS_AS(eisenstein_fourier(0, HPoint(Real(0), Real("0.05")), Complex(2)),
                  DomainError);
  CHECK_THROWS_AS(eisenstein_fourier(0, HPoint(Real(0), Real(1)), Complex(1)), PoleError);
}

TEST_CASE("coset and fourier routes agree", "[forms]") {
  HPoint z(Real("0.21"), Real("1.1"));
  for (unsigned k : {0u, 2u, 4u}) {
    Real tail_coset = 0, tail_fourier = 0;
    Complex a = eisenstein_coset_sum(k, z, Complex(3), 400, &tail_coset);
    Complex b = eisenstein_fourier(k, z, Complex(3), 0, &tail_fourier);
    CHECK(abs(a - b) < Real("1e-8"));
    CHECK(abs(a - b) < tail_coset + tail_fourier);
  }
  // slower lattice decay: agreement only within the reported tail bound
  Real tail = 0;
  Complex a2 = eisenstein_coset_sum(0, z, Complex(2), 400, &tail);
  Complex b2 = eisenstein_fourier(0, z, Complex(2));
  CHECK(abs(a2 - b2) < tail);
  CHECK(tail < Real("1e-3"));
}

TEST_CASE("periodicity in x", "[forms]") {
  HPoint z(Real("0.17"), Real("0.9"));
  HPoint zt(z.x + 1, z.y);
  Complex s(3);
  Complex a = eisenstein_coset_sum(2, z, s, 150);
  Complex b = eisenstein_coset_sum(2, zt, s, 150);
  CHECK(abs(a - b) < Real("1e-6"));
  Complex c = eisenstein_fourier(2, z, s);
  Complex d = eisenstein_fourier(2, zt, s);
  CHECK(abs(c - d) < Real("1e-45") * abs(c));
}

TEST_CASE("inversion automorphy at weight two", "[forms]") {
  HPoint z(Real("0.3"), Real("1.1"));
  GroupElement S = GroupElement::inversion();
  HPoint sz = S.apply(z);
  Complex j = cocycle_j(S, z);
  Complex s(2);
  Complex lhs = eisenstein_fourier(2, sz, s, 60);
  Complex rhs = detail::unit_pow(j, 2) * eisenstein_fourier(2, z, s, 60);
  CHECK(abs(lhs - rhs) < Real("1e-50") * abs(rhs));
}

TEST_CASE("residue of the weight-zero series at s = 1", "[forms]") {
  HPoint z(Real("0.3"), Real("1.2"));
  Complex s = Complex(Real(1) + Real("1e-6"));
  Complex v = (s - Real(1)) * eisenstein_fourier(0, z, s, 40);
  CHECK(abs(v - Complex(3 / pi())) < Real("1e-4"));
}

TEST_CASE("constant term at weight two", "[forms]") {
  Real y("1.3");
  Complex s(2);
  FormFn e2 = [&](const HPoint& w) { return eisenstein_fourier(2, w, s, 14); };
  Complex a0 = fourier_coefficient_x(e2, 0, y, 12);
  Complex phi = xi(Complex(3)) / xi(Complex(4));
  Complex want = Complex(y * y) - phi / Real(2) * (1 / y);
  CHECK(abs(a0 - want) < Real("1e-30"));
}

TEST_CASE("raising the weight-zero series", "[forms]") {
  HPoint z(Real("0.28"), Real("0.9"));
  for (int sv : {2, 3}) {
    Complex s(sv);
    FormFn E0 = [&](const HPoint& w) { return eisenstein_fourier(0, w, s, 40); };
    Complex k0e = raising_numeric(E0, 0, z);
    Complex e2 = eisenstein_fourier(2, z, s, 40);
    CHECK(abs(k0e - s * e2) < Real("1e-20") * abs(e2));
    // second rung of the chain: s K_2 E_2 = s(s+1) E_4
    FormFn E2 = [&](const HPoint& w) { return eisenstein_fourier(2, w, s, 40); };
    Complex chain = s * raising_numeric(E2, 2, z);
    Complex e4 = eisenstein_fourier(4, z, s, 40);
    CHECK(abs(chain - s * (s + Real(1)) * e4) < Real("1e-20") * abs(e4));
  }
}

TEST_CASE("incomplete series support", "[forms]") {
  // window above every lattice height at z = i: every term vanishes
  BumpWindow psi(Real(2), Real(3));
  CHECK(abs(incomplete_eisenstein(0, HPoint(Real(0), Real(1)), psi)) == 0);
  CHECK_THROWS_AS(incomplete_eisenstein(1, HPoint(Real(0), Real(1)), psi), DomainError);
}

TEST_CASE("incomplete series matches a naive enumeration", "[forms]") {
  BumpWindow psi(Real(1) / 2, Real(3));
  for (unsigned k : {0u, 2u, 4u}) {
    for (HPoint z : {HPoint(Real(0), Real(2)), HPoint(Real("0.3"), Real("1.7"))}) {
      Complex lib = incomplete_eisenstein(k, z, psi);
      Complex naive = Complex(psi(z.y));
      for (std::int64_t c = 1; c <= 40; ++c) {
        for (std::int64_t d = -60; d <= 60; ++d) {
          if (detail::gcd_u64(static_cast<std::uint64_t>(c),
                              static_cast<std::uint64_t>(d < 0 ? -d : d)) != 1)
            continue;
          Complex w(Real(c) * z.x + Real(d), Real(c) * z.y);
          Real n2 = norm(w);
          Real p = psi(z.y / n2);
          if (p == 0) continue;
          Complex term(p);
          if (k) term = term * detail::unit_pow(conj(w) / sqrt(n2), static_cast<int>(k));
          naive = naive + term;
        }
      }
      CHECK(abs(lib - naive) < Real("1e-50"));
      CHECK(abs(lib) > Real("0.1"));  // the comparison is not vacuous
    }
  }
}

TEST_CASE("bump window shape and moments", "[forms]") {
  CHECK_THROWS_AS(BumpWindow(Real(0), Real(1)), DomainError);
  CHECK_THROWS_AS(BumpWindow(Real(2), Real(1)), DomainError);
  BumpWindow psi(Real(1), Real(3));
  CHECK(psi(Real("0.5")) == 0);
  CHECK(psi(Real(1)) == 0);
  CHECK(psi(Real(3)) == 0);
  CHECK(abs(psi(Real(2)) - Real(2) / 3) < Real("1e-55"));
  // integral (b-a)/4  and  first moment (b-a)(a+b)/8
  CHECK(abs(psi.mellin(Complex(1)) - Complex(Real(1) / 2)) < Real("1e-40"));
  CHECK(abs(psi.mellin(Complex(2)) - Complex(Real(1))) < Real("1e-40"));
}

TEST_CASE("unfolding the incomplete series", "[forms]") {
  BumpWindow psi(Real("1.2"), Real("2.5"));
  auto E = [&](const HPoint& w) { return incomplete_eisenstein(0, w, psi); };
  auto q = integrate_fd(E, Real("1e-9"), Real(3));
  Complex want = psi.mellin(Complex(-1));
  CHECK(abs(q.value - want) < Real("1e-8"));
}

TEST_CASE("fourier coefficients of the incomplete series stay enveloped", "[forms]") {
  BumpWindow psi(Real(1), Real(2));
  Real best = 0, largest = 0;
  for (unsigned k : {0u, 2u, 4u}) {
    for (const char* yd : {"0.5", "0.8", "1.3", "1.9"}) {
      Real y(yd);
      const int P = 128;
      std::vector<Complex> vals;
      vals.reserve(P);
      for (int j = 0; j < P; ++j)
        vals.push_back(incomplete_eisenstein(k, HPoint(Real(j) / P - Real(1) / 2, y), psi));
      for (unsigned n = 1; n <= 10; ++n) {
        Complex ap(0), am(0);
        for (int j = 0; j < P; ++j) {
          Real x = Real(j) / P - Real(1) / 2;
          ap = ap + vals[j] * e_of(-Real(n) * x);
          am = am + vals[j] * e_of(Real(n) * x);
        }
        Real mag = abs(ap + am) / Real(P);
        if (mag > largest) largest = mag;
        for (unsigned A : {0u, 1u}) {
          Real env = pow(Real(2), Real(k)) * pow(Real(std::max(k, 1u)), Real(A)) * sqrt(y) *
                     Real(tau(n)) * pow(1 / (Real(n) * y), Real(A)) *
                     pow(1 + 1 / (Real(n) * y), Real(1) / 2);
          Real r = mag / env;
          if (r > best) best = r;
        }
      }
    }
  }
  CHECK(best < Real(1) / 2);     // fitted constant: measured 0.134
  CHECK(largest > Real(1) / 10);  // the sample is not degenerate
}

TEST_CASE("alpha normalizer", "[forms]") {
  Complex s(Real("1.7"), Real("0.3"));
  CHECK(abs(alpha_sq(s, 0) - Complex(1)) == 0);
  // product form vs the gamma-quotient closed form
  for (unsigned k : {2u, 4u, 8u}) {
    Complex want = gamma(s) * gamma(Real(1) - s) /
                   (gamma(s + Real(k / 2)) * gamma(Real(1) - s + Real(k / 2)));
    Complex got = alpha_sq(s, k);
    CHECK(abs(got - want) < Real("1e-40") * abs(want));
  }
  CHECK_THROWS_AS(alpha_sq(Complex(1), 2), PoleError);
  CHECK_THROWS_AS(alpha_sq(s, 3), DomainError);
}

TEST_CASE("beta normalizer", "[forms]") {
  CHECK(beta_sq(12, 12) == Rational(1));
  CHECK(beta_sq(12, 16) == Rational(1, 312));
  CHECK_THROWS_AS(beta_sq(11, 16), DomainError);
  CHECK_THROWS_AS(beta_sq(12, 10), DomainError);
  CHECK_THROWS_AS(beta_sq(0, 12), DomainError);
}

TEST_CASE("raised cusp form reduces at equal weight", "[forms]") {
  HeckeEigenform f12 = make_eigenform(12);
  Real a1 = sqrt(a1_squared(f12));
  for (HPoint z : {HPoint(Real("0.3"), Real("0.8")), HPoint(Real("-0.12"), Real("1.33"))}) {
    Complex raised = raised_cusp_form(f12, 12, z, 80);
    Complex direct(0);
    for (unsigned n = 1; n <= 80; ++n)
      direct = direct + (a1 * f12.lambda(n) * pow(Real(n), Real(11) / 2) *
                         exp(-2 * pi() * Real(n) * z.y)) *
                            e_of(Real(n) * z.x);
    direct = pow(z.y, Real(6)) * direct;
    CHECK(abs(raised - direct) < Real("1e-25") * abs(direct));
  }
}

TEST_CASE("raised cusp form guards", "[forms]") {
  HeckeEigenform f12 = make_eigenform(12);
  HPoint z(Real(0), Real(1));
  CHECK_THROWS_AS(raised_cusp_form(f12, 15, z), DomainError);
  CHECK_THROWS_AS(raised_cusp_form(f12, 10, z), DomainError);
  // too few terms at low height: the tail is not negligible
  CHECK_THROWS_AS(raised_cusp_form(f12, 16, HPoint(Real(0), Real("0.15")), 4),
                  ConvergenceError);
}

TEST_CASE("raised cusp form automorphy", "[forms]") {
  HeckeEigenform f12 = make_eigenform(12);
  HPoint z(Real("0.28"), Real("0.9"));
  GroupElement T = GroupElement::translation(1);
  GroupElement S = GroupElement::inversion();
  for (const GroupElement& g : {T, S, T * S}) {
    HPoint gz = g.apply(z);
    Complex j = cocycle_j(g, z);
    Complex lhs = raised_cusp_form(f12, 16, gz);
    Complex rhs = detail::unit_pow(j, 16) * raised_cusp_form(f12, 16, z);
    CHECK(abs(lhs - rhs) < Real("1e-50") * abs(rhs));
  }
}

TEST_CASE("raised cusp form keeps unit norm", "[forms]") {
  HeckeEigenform f12 = make_eigenform(12);
  auto RF = [&](const HPoint& w) { return raised_cusp_form(f12, 16, w, 60); };
  auto nr = petersson(RF, 16, RF, 16, Real("1e-6"));
  CHECK(abs(nr.value - Complex(1)) < Real("1e-4"));
}

TEST_CASE("lowering annihilates the holomorphic rung", "[forms]") {
  HeckeEigenform f12 = make_eigenform(12);
  FormFn F = [&](const HPoint& w) { return raised_cusp_form(f12, 12, w); };
  CHECK(abs(lowering_numeric(F, 12, HPoint(Real("0.3"), Real("0.8")))) < Real("1e-8"));
}

TEST_CASE("laplacian eigenvalue at weight twelve", "[forms]") {
  HeckeEigenform f12 = make_eigenform(12);
  FormFn F = [&](const HPoint& w) { return raised_cusp_form(f12, 12, w); };
  HPoint z(Real("0.1"), Real(1));
  Complex ratio = laplacian_numeric(F, 12, z) / F(z);
  // lambda(k/2) = (k/2)(1 - k/2) = -30 at k = 12
  CHECK(abs(ratio - Complex(-30)) < Real("1e-6"));
}

TEST_CASE("raising and lowering are adjoint", "[forms][slow]") {
  HeckeEigenform f12 = make_eigenform(12);
  FormFn F = [&](const HPoint& w) { return raised_cusp_form(f12, 12, w, 60); };
  FormFn G = [&](const HPoint& w) { return raised_cusp_form(f12, 14, w, 60); };
  auto I1 = integrate_fd(
      [&](const HPoint& w) { return raising_numeric(F, 12, w) * conj(G(w)); },
      Real("1e-5"), Real(12));
  auto I2 = integrate_fd(
      [&](const HPoint& w) { return F(w) * conj(lowering_numeric(G, 14, w)); },
      Real("1e-5"), Real(12));
  CHECK(abs(I1.value - I2.value) < Real("1e-3") * abs(I1.value));
  CHECK(abs(I1.value) > Real("0.1"));
}

TEST_CASE("raising obeys the product rule", "[forms]") {
  HeckeEigenform f12 = make_eigenform(12);
  HeckeEigenform f16 = make_eigenform(16);
  FormFn F = [&](const HPoint& w) { return raised_cusp_form(f12, 12, w); };
  FormFn G = [&](const HPoint& w) { return raised_cusp_form(f16, 16, w); };
  FormFn FG = [&](const HPoint& w) { return F(w) * G(w); };
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.7, 1.5);
  for (int i = 0; i < 6; ++i) {
    HPoint z(Real(ux(rng)), Real(uy(rng)));
    Complex lhs = raising_numeric(FG, 28, z);
    Complex rhs = raising_numeric(F, 12, z) * G(z) + F(z) * raising_numeric(G, 16, z);
    CHECK(abs(lhs - rhs) < Real("1e-6"));
  }
}

TEST_CASE("finite differences reject a kink", "[forms]") {
  FormFn f = [](const HPoint& w) {
    Real v = w.x * w.x;
    if (!(w.x > Real(1) / 3)) v = -v;
    return Complex(v);
  };
  CHECK_THROWS_AS(raising_numeric(f, 0, HPoint(Real(1) / 3, Real(1))), ConvergenceError);
}

namespace {
std::string synthetic_maass(const char* parity = "even") {
  std::ostringstream os;
  os << "maass v1 t=1.5 parity=" << parity << " N=10\n";
  for (int n = 1; n <= 10; ++n)
    os << n << " " << ((n % 2) ? "" : "-") << "0." << (97531 % (n * n + 7)) << "1\n";
  return os.str();
}
}  // namespace

TEST_CASE("maass data round-trips", "[forms]") {
  std::istringstream is(synthetic_maass());
  MaassData m = read_maass(is);
  CHECK(m.t == Real("1.5"));
  CHECK(m.even_parity);
  CHECK(m.n_coeffs == 10);
  CHECK(m.coeff(1) == Real("0.31"));
  CHECK(m.coeff(2) == Real("-0.51"));
  std::ostringstream os;
  write_maass(os, m);
  std::istringstream is2(os.str());
  MaassData m2 = read_maass(is2);
  CHECK(m2.t == m.t);
  CHECK(m2.even_parity == m.even_parity);
  for (unsigned n = 1; n <= 10; ++n) CHECK(m2.coeff(n) == m.coeff(n));
  CHECK_THROWS_AS(m.coeff(11), DomainError);
  CHECK_THROWS_AS(m.coeff(0), DomainError);
}

TEST_CASE("maass parser rejects malformed input", "[forms]") {
  auto parse = [](const std::string& text) {
    std::istringstream is(text);
    return read_maass(is);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("massive v1 t=1 parity=even N=1\n1 0.5\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v2 t=1 parity=even N=1\n1 0.5\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v1 t=abc parity=even N=1\n1 0.5\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v1 t=1 parity=sideways N=1\n1 0.5\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v1 t=1 parity=even N=zero\n1 0.5\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v1 t=1 parity=even N=0\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v1 t=1 parity=even N=2\n1 0.5\nbroken\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v1 t=1 parity=even N=2\n1 0.5\n3 0.5\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v1 t=1 parity=even N=2\n1 0.5\n1 0.5\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v1 t=1 parity=even N=2\n1 0.5\n2 x\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v1 t=1 parity=even N=2\n2 0.5\n"), ParseError);
  CHECK_THROWS_AS(parse("maass v1 t=1 parity=even N=1\n1 0\n"), ParseError);
}

TEST_CASE("raised maass form reduces at weight zero", "[forms]") {
  std::istringstream is(synthetic_maass());
  MaassData m = read_maass(is);
  HPoint z(Real("0.27"), Real("0.85"));
  Complex u0 = raised_maass_form(m, 0, z);
  // independent oracle: W_{0,it}(4 pi n y) = 2 sqrt(ny) K_it(2 pi n y)
  Complex oracle(0);
  for (unsigned n = 1; n <= 10; ++n) {
    Complex w = 2 * sqrt(Real(n) * z.y) * bessel_k(Complex(Real(0), m.t), 2 * pi() * Real(n) * z.y);
    oracle = oracle + (m.coeff(n) / sqrt(Real(n))) * w * (e_of(Real(n) * z.x) + e_of(-Real(n) * z.x));
  }
  CHECK(abs(u0 - oracle) < Real("1e-30") * abs(oracle));
}

TEST_CASE("maass parity and periodicity", "[forms]") {
  std::istringstream ise(synthetic_maass("even"));
  MaassData me = read_maass(ise);
  std::istringstream iso(synthetic_maass("odd"));
  MaassData mo = read_maass(iso);
  HPoint z(Real("0.22"), Real("0.9"));
  HPoint zr(-z.x, z.y);
  Complex ue = raised_maass_form(me, 0, z);
  CHECK(abs(raised_maass_form(me, 0, zr) - ue) < Real("1e-50") * abs(ue));
  Complex uo = raised_maass_form(mo, 0, z);
  CHECK(abs(raised_maass_form(mo, 0, zr) + uo) < Real("1e-50") * abs(uo));
  Complex u2 = raised_maass_form(me, 2, z);
  Complex u2t = raised_maass_form(me, 2, HPoint(z.x + 1, z.y));
  CHECK(abs(u2t - u2) < Real("1e-45") * abs(u2));
  CHECK_THROWS_AS(raised_maass_form(me, 2, z, 20), DomainError);
  CHECK_THROWS_AS(raised_maass_form(me, 3, z), DomainError);
}

TEST_CASE("raised maass form keeps its eigenvalue", "[forms]") {
  std::istringstream is(synthetic_maass());
  MaassData m = read_maass(is);
  FormFn U = [&](const HPoint& w) { return raised_maass_form(m, 2, w); };
  HPoint z(Real("0.13"), Real("0.9"));
  Complex ratio = laplacian_numeric(U, 2, z) / U(z);
  Complex want(Real(1) / 4 + m.t * m.t);
  CHECK(abs(ratio - want) < Real("1e-6") * abs(want));
}

TEST_CASE("fourier coefficients of the raised maass form stay enveloped", "[forms]") {
  std::istringstream is(synthetic_maass());
  MaassData m = read_maass(is);
  Real best = 0;
  for (unsigned k : {2u, 4u}) {
    for (const char* yd : {"0.5", "1.0"}) {
      Real y(yd);
      const int P = 24;
      std::vector<Complex> vals;
      vals.reserve(P);
      for (int j = 0; j < P; ++j)
        vals.push_back(raised_maass_form(m, k, HPoint(Real(j) / P - Real(1) / 2, y)));
      for (unsigned n = 1; n <= 10; ++n) {
        Complex ap(0), am(0);
        for (int j = 0; j < P; ++j) {
          Real x = Real(j) / P - Real(1) / 2;
          ap = ap + vals[j] * e_of(-Real(n) * x);
          am = am + vals[j] * e_of(Real(n) * x);
        }
        Real mag = abs(ap + am) / Real(P);
        for (unsigned A : {0u, 1u}) {
          Real env = pow(Real(2), Real(k)) * pow(Real(k), Real(A)) * sqrt(y) *
                     abs(m.coeff(n)) * pow((1 + abs(m.t)) / (Real(n) * y), Real(A));
          Real r = mag / env;
          if (r > best) best = r;
        }
      }
    }
  }
  CHECK(best < Real(1) / 5);  // fitted constant: measured 0.038
}
