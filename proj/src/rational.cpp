#include "wmms/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "wmms/errors.hpp"

namespace wmms {

Rat make_rat(long num, long den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool is_integer_token(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  if (!is_integer_token(s))
    throw ValidationError("cannot parse number '" + std::string(whole) + "'");
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rat parse_rational(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) throw ValidationError("empty numeric field");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash), text);
    std::string_view den_part = text.substr(slash + 1);
    if (!den_part.empty() && (den_part[0] == '-' || den_part[0] == '+'))
      throw ValidationError("signed denominator in '" + std::string(text) + "'");
    mpz_class den = parse_integer(den_part, text);
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    Rat q(num, den);
    q.canonicalize();
    return q;
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view head = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !head.empty() && head[0] == '-';
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) head.remove_prefix(1);
    if (head.empty() && frac.empty())
      throw ValidationError("cannot parse number '" + std::string(text) + "'");
    mpz_class whole = head.empty() ? mpz_class(0) : parse_integer(head, text);
    mpz_class num = whole;
    mpz_class den(1);
    if (!frac.empty()) {
      mpz_class frac_val = parse_integer(frac, text);
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      num = whole * den + frac_val;
    }
    if (negative) num = -num;
    Rat q(num, den);
    q.canonicalize();
    return q;
  }

  return Rat(parse_integer(text, text));
}

std::string to_fraction_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_decimal_string(const Rat& q, int digits) {
  mpz_class pow10(1);
  for (int i = 0; i < digits; ++i) pow10 *= 10;

  mpz_class num = q.get_num() * pow10;
  bool negative = num < 0;
  if (negative) num = -num;
  const mpz_class& den = q.get_den();

  mpz_class quot, rem;
  mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (rem * 2 >= den) quot += 1;  // round half away from zero

  std::string body = quot.get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits))
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && quot != 0) body.insert(0, "-");
  return body;
}

Rat rat_from_bits(std::uint64_t mantissa, unsigned bits) {
  mpz_class num;
  mpz_import(num.get_mpz_t(), 1, 1, sizeof(mantissa), 0, 0, &mantissa);
  mpz_class den(1);
  den <<= bits;
  Rat q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace wmms
