#pragma once

// Numeric modes.
//
// Exact mode runs on GMP-backed rationals and is the authority for every
// inequality that does not need a fractional power. Float mode runs on
// IEEE double (53 significand bits) or a 113-bit binary float used for
// rechecking suspicious float results. Algorithms are templates over the
// scalar type and are explicitly instantiated for the three types below,
// so a single computation never mixes modes.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#include "rlab/errors.hpp"

namespace rlab {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Quad = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<113, boost::multiprecision::digit_base_2, void,
                                         std::int16_t, -16382, 16383>,
    boost::multiprecision::et_off>;

template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double> || std::same_as<T, Quad>;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

enum class Mode { Exact, Float };

template <Scalar T>
constexpr Mode mode_of() {
  return is_exact_v<T> ? Mode::Exact : Mode::Float;
}

std::string to_string(Mode mode);
Mode parse_mode(std::string_view text);

// Relative tolerance for float-mode equalities that are exact in theory
// (weights summing to one, equimeasurable norms).
inline constexpr double kFloatRelTol = 0x1p-40;

// Parses "3", "-0.25", "1.5e-3", "7/12". Decimal literals are converted
// exactly. Throws InvalidInput on anything else.
Rational parse_rational(std::string_view text);

// True when the literal uses the "p/q" form.
bool is_fraction_literal(std::string_view text);

// Rationals whose denominator is 2^a 5^b print as terminating decimals,
// everything else as "p/q". Floats print as shortest round-trip decimals.
std::string to_string(const Rational& value);
std::string to_string(double value);
std::string to_string(const Quad& value);

// Parses a literal directly into the target mode. Decimal literals are
// correctly rounded in float mode.
template <Scalar T>
T parse_scalar(std::string_view text);

template <>
Rational parse_scalar<Rational>(std::string_view text);
template <>
double parse_scalar<double>(std::string_view text);
template <>
Quad parse_scalar<Quad>(std::string_view text);

// Correctly rounded when numerator and denominator fit the significand.
double rational_to_double(const Rational& value);
Quad rational_to_quad(const Rational& value);

template <Scalar T>
T from_rational(const Rational& value) {
  if constexpr (is_exact_v<T>) {
    return value;
  } else if constexpr (std::is_same_v<T, double>) {
    return rational_to_double(value);
  } else {
    return rational_to_quad(value);
  }
}

template <Scalar T>
double to_double(const T& value) {
  if constexpr (std::is_same_v<T, double>) {
    return value;
  } else {
    return value.template convert_to<double>();
  }
}

// Exact conversion of a float into a rational (binary floats are dyadic).
template <Scalar T>
Rational to_rational(const T& value) {
  if constexpr (is_exact_v<T>) {
    return value;
  } else if constexpr (std::is_same_v<T, double>) {
    if (!std::isfinite(value)) throw InvalidInput("cannot convert non-finite value to rational");
    return Rational(value);
  } else {
    if (!boost::multiprecision::isfinite(value)) {
      throw InvalidInput("cannot convert non-finite value to rational");
    }
    int exponent = 0;
    Quad mantissa = boost::multiprecision::frexp(value, &exponent);
    mantissa = boost::multiprecision::ldexp(mantissa, 113);
    exponent -= 113;
    // The mantissa is integral now; fixed format still appends a fraction.
    std::string digits = mantissa.str(0, std::ios_base::fixed);
    digits = digits.substr(0, digits.find('.'));
    Rational result{Integer(digits)};
    Integer two_pow = 1;
    two_pow <<= static_cast<unsigned>(exponent < 0 ? -exponent : exponent);
    return exponent < 0 ? result / Rational(two_pow) : result * Rational(two_pow);
  }
}

template <Scalar T>
T abs_of(const T& value) {
  using std::abs;
  return abs(value);
}

template <Scalar T>
T max_of(const T& a, const T& b) {
  return a < b ? b : a;
}

template <Scalar T>
T min_of(const T& a, const T& b) {
  return b < a ? b : a;
}

// Exponent in [1, ∞]. Finite exponents are rational so that Hölder tuples
// such as (1, ∞, 1, 4, 4/3) can be validated exactly.
class Exponent {
 public:
  static Exponent infinity() { return Exponent(); }
  static Exponent finite(const Rational& p);
  static Exponent parse(std::string_view text);

  bool is_infinite() const { return infinite_; }
  const Rational& value() const;
  // 1/p, with 1/∞ = 0.
  Rational reciprocal() const;
  // Hölder conjugate p' with 1/p + 1/p' = 1.
  Exponent conjugate() const;
  bool is_integer() const;
  bool is_one() const { return !infinite_ && value_ == 1; }

  std::string to_string() const;

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  Exponent() = default;

  bool infinite_ = true;
  Rational value_ = 0;
};

// x^p for x ≥ 0 and finite p. Exact for integer p in exact mode.
template <Scalar T>
T power(const T& x, const Exponent& p) {
  if (p.is_infinite()) throw InvalidInput("power() needs a finite exponent");
  if (p.is_one()) return x;
  if (p.is_integer()) {
    auto k = p.value().template convert_to<long>();
    T result = 1;
    T base = x;
    while (k > 0) {
      if (k & 1) result *= base;
      base *= base;
      k >>= 1;
    }
    return result;
  }
  if constexpr (is_exact_v<T>) {
    throw InexactOperation("fractional power " + p.to_string() + " in exact mode");
  } else {
    using std::pow;
    return pow(x, from_rational<T>(p.value()));
  }
}

// x^{1/p} for x ≥ 0 and finite p; only p = 1 is exact.
template <Scalar T>
T root(const T& x, const Exponent& p) {
  if (p.is_infinite()) throw InvalidInput("root() needs a finite exponent");
  if (p.is_one()) return x;
  if constexpr (is_exact_v<T>) {
    throw InexactOperation("root of order " + p.to_string() + " in exact mode");
  } else {
    using std::pow;
    using std::sqrt;
    if (p.value() == 2) return sqrt(x);
    return pow(x, from_rational<T>(p.reciprocal()));
  }
}

// Relative comparison used for float-mode identities; exact mode demands
// equality.
template <Scalar T>
bool nearly_equal(const T& a, const T& b, double rel_tol) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    T scale = max_of(abs_of(a), abs_of(b));
    return abs_of(T(a - b)) <= T(rel_tol) * scale;
  }
}

}  // namespace rlab
