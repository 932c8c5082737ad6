#include "hgm/rational.hpp"

#include <cctype>

#include "hgm/errors.hpp"

namespace hgm {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Int parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("malformed integer in '" + std::string(whole) + "'");
  Int v(std::string(s), 10);
  return negative ? Int(-v) : v;
}

Int pow10(unsigned long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rat parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Int num = parse_integer(trim(s.substr(0, slash)), s);
    std::string_view den_text = trim(s.substr(slash + 1));
    if (!all_digits(den_text)) throw ParseError("malformed denominator in '" + std::string(s) + "'");
    Int den(std::string(den_text), 10);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    Rat q(num, den);
    q.canonicalize();
    return q;
  }

  std::string_view rest = s;
  bool negative = false;
  if (rest.front() == '+' || rest.front() == '-') {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = rest.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6)
      throw ParseError("malformed exponent in '" + std::string(s) + "'");
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    rest = rest.substr(0, e);
  }
  std::string digits;
  if (auto dot = rest.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = rest.substr(0, dot);
    std::string_view frac_part = rest.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)))
      throw ParseError("malformed decimal '" + std::string(s) + "'");
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(rest)) throw ParseError("malformed number '" + std::string(s) + "'");
    digits = std::string(rest);
  }
  Int mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  Rat q;
  if (exponent >= 0) {
    q = Rat(mantissa * pow10(static_cast<unsigned long>(exponent)));
  } else {
    q = Rat(mantissa, pow10(static_cast<unsigned long>(-exponent)));
    q.canonicalize();
  }
  return q;
}

std::string to_exact_string(const Rat& q) { return q.get_str(10); }

std::string to_decimal(const Rat& q, int digits) {
  if (digits < 1) digits = 1;
  if (sgn(q) == 0) return "0";
  const bool negative = sgn(q) < 0;
  const Int a = abs(q.get_num());
  const Int b = q.get_den();

  // Find e with 10^e <= a/b < 10^(e+1).
  long e = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 10));
  auto scaled = [&](long shift, Int& num, Int& den) {
    num = a;
    den = b;
    if (shift >= 0)
      num *= pow10(static_cast<unsigned long>(shift));
    else
      den *= pow10(static_cast<unsigned long>(-shift));
  };
  for (;;) {
    Int num, den;
    scaled(-e, num, den);  // a/b * 10^-e
    if (num < den) {
      --e;
    } else if (num >= 10 * den) {
      ++e;
    } else {
      break;
    }
  }

  Int num, den;
  scaled(digits - 1 - e, num, den);
  Int quotient, remainder;
  mpz_fdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  const int cmp_half = cmp(2 * remainder, den);
  if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(quotient.get_mpz_t()))) quotient += 1;
  if (quotient == pow10(static_cast<unsigned long>(digits))) {
    quotient = pow10(static_cast<unsigned long>(digits - 1));
    ++e;
  }

  std::string mant = quotient.get_str(10);
  std::string out = negative ? "-" : "";
  out += mant.substr(0, 1);
  if (mant.size() > 1) {
    out += ".";
    out += mant.substr(1);
  }
  out += "e";
  out += e < 0 ? "-" : "+";
  std::string exp_digits = std::to_string(e < 0 ? -e : e);
  if (exp_digits.size() < 2) exp_digits.insert(0, "0");
  out += exp_digits;
  return out;
}

Int factorial(long n) {
  Int r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n < 0 ? 0 : n));
  return r;
}

Rat power(const Rat& base, long exponent) {
  if (exponent < 0) {
    if (sgn(base) == 0) throw PreconditionError("zero raised to a negative power");
    Rat inv = 1 / base;
    return power(inv, -exponent);
  }
  Int num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return Rat(num, den);
}

}  // namespace hgm
