#ifndef MODMASS_PRECISION_HPP
#define MODMASS_PRECISION_HPP

#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <cstdlib>
#include <stdexcept>
#include <string>

// Arithmetic policy for the whole library: one global mantissa width,
// MPFR-backed reals, exact GMP integers/rationals for q-expansions.

namespace modmass {

using Real = boost::multiprecision::mpfr_float;
using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

class PoleError : public Error {
public:
  explicit PoleError(const std::string& what) : Error(what) {}
};

class ConvergenceError : public Error {
public:
  explicit ConvergenceError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

struct Precision {
  unsigned mantissa_bits = 192;

  Precision() = default;
  explicit Precision(unsigned bits) : mantissa_bits(bits) {
    if (bits < 64) throw DomainError("Precision: mantissa_bits must be >= 64");
  }

  // Heuristic accuracy target: 48 bits of headroom below the mantissa.
  Real target_rel_error() const {
    Real t = 1;
    return ldexp(t, -static_cast<int>(mantissa_bits - 48));
  }

  static unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(bits * 0.30103) + 2;
  }
};

// Installs `p` as the process-wide working precision.  Values created
// before the switch keep their old width; call this once at startup.
inline void set_global_precision(const Precision& p) {
  Real::default_precision(Precision::digits10_for_bits(p.mantissa_bits));
}

inline Precision global_precision_from_env() {
  unsigned bits = 192;
  if (const char* e = std::getenv("MODMASS_PRECISION_BITS")) {
    long v = std::strtol(e, nullptr, 10);
    if (v >= 64 && v <= 1 << 20) bits = static_cast<unsigned>(v);
  }
  return Precision(bits);
}

}  // namespace modmass

#endif
