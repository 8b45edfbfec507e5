#include "rlab/scalar.hpp"

#include <array>
#include <cctype>
#include <charconv>

namespace rlab {

namespace {

using mpz_int = Integer;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// The string constructor auto-detects the base, so "025" would be octal.
mpz_int decimal_integer(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return digits.empty() ? mpz_int(0) : mpz_int(std::string(digits));
}

mpz_int pow10(unsigned k) {
  mpz_int r = 1;
  for (unsigned i = 0; i < k; ++i) r *= 10;
  return r;
}

Rational parse_decimal(std::string_view text, std::string_view original) {
  auto fail = [&] { return InvalidInput("malformed number literal '" + std::string(original) + "'"); };
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = text.substr(e + 1);
    text = text.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) throw fail();
    std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), exponent);
    if (exp_negative) exponent = -exponent;
  }
  std::string_view int_part = text;
  std::string_view frac_part;
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    int_part = text.substr(0, dot);
    frac_part = text.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) throw fail();
  if (!int_part.empty() && !all_digits(int_part)) throw fail();
  if (!frac_part.empty() && !all_digits(frac_part)) throw fail();

  std::string digits(int_part);
  digits += frac_part;
  const mpz_int numer = decimal_integer(digits);
  long scale = static_cast<long>(frac_part.size()) - exponent;
  Rational result(numer);
  if (scale > 0) {
    result /= Rational(pow10(static_cast<unsigned>(scale)));
  } else if (scale < 0) {
    result *= Rational(pow10(static_cast<unsigned>(-scale)));
  }
  return negative ? Rational(-result) : result;
}

}  // namespace

double rational_to_double(const Rational& value) {
  const mpz_int& num = numerator(value);
  const mpz_int& den = denominator(value);
  if (msb(abs(num) + 1) < 53 && msb(den) < 53) {
    return num.convert_to<double>() / den.convert_to<double>();
  }
  return value.convert_to<double>();
}

Quad rational_to_quad(const Rational& value) {
  const mpz_int& num = numerator(value);
  const mpz_int& den = denominator(value);
  if (msb(abs(num) + 1) < 113 && msb(den) < 113) {
    return Quad(num.str()) / Quad(den.str());
  }
  return value.convert_to<Quad>();
}

template <>
Rational parse_scalar<Rational>(std::string_view text) {
  return parse_rational(text);
}

template <>
double parse_scalar<double>(std::string_view text) {
  const Rational exact = parse_rational(text);
  if (is_fraction_literal(text)) return rational_to_double(exact);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc()) return rational_to_double(exact);
  return value;
}

template <>
Quad parse_scalar<Quad>(std::string_view text) {
  const Rational exact = parse_rational(text);
  if (is_fraction_literal(text)) return rational_to_quad(exact);
  return Quad(std::string(text));
}

std::string to_string(Mode mode) { return mode == Mode::Exact ? "exact" : "float"; }

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::Exact;
  if (text == "float") return Mode::Float;
  throw InvalidInput("unknown arithmetic mode '" + std::string(text) + "'");
}

bool is_fraction_literal(std::string_view text) { return text.find('/') != std::string_view::npos; }

Rational parse_rational(std::string_view text) {
  std::string_view original = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InvalidInput("empty number literal");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) {
      throw InvalidInput("malformed rational literal '" + std::string(original) + "'");
    }
    const mpz_int d = decimal_integer(den);
    if (d == 0) throw InvalidInput("zero denominator in '" + std::string(original) + "'");
    Rational r(decimal_integer(num), d);
    return negative ? Rational(-r) : r;
  }
  return parse_decimal(text, original);
}

std::string to_string(const Rational& value) {
  mpz_int den = denominator(value);
  unsigned twos = 0;
  unsigned fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return value.str();

  const unsigned places = std::max(twos, fives);
  mpz_int scaled = numerator(value) * pow10(places) / denominator(value);
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  if (places > 0) {
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, 1, '.');
  }
  return negative ? "-" + digits : digits;
}

std::string to_string(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string to_string(const Quad& value) {
  if (boost::multiprecision::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (boost::multiprecision::isnan(value)) return "nan";
  // 36 significant digits round-trip a 113-bit significand.
  return value.str(36, std::ios_base::fmtflags(0));
}

Exponent Exponent::finite(const Rational& p) {
  if (p < 1) throw InvalidInput("exponent must satisfy p >= 1, got " + rlab::to_string(p));
  Exponent e;
  e.infinite_ = false;
  e.value_ = p;
  return e;
}

Exponent Exponent::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Infinity" || text == "∞") {
    return infinity();
  }
  return finite(parse_rational(text));
}

const Rational& Exponent::value() const {
  if (infinite_) throw InvalidInput("value() of infinite exponent");
  return value_;
}

Rational Exponent::reciprocal() const { return infinite_ ? Rational(0) : Rational(1 / value_); }

Exponent Exponent::conjugate() const {
  if (infinite_) return finite(1);
  if (value_ == 1) return infinity();
  return finite(value_ / (value_ - 1));
}

bool Exponent::is_integer() const { return !infinite_ && denominator(value_) == 1; }

std::string Exponent::to_string() const { return infinite_ ? "inf" : rlab::to_string(value_); }

}  // namespace rlab
