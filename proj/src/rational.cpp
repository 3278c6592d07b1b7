#include "diamcover/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace diamcover {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rat> rat_parse(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::string body = s;
  bool neg = false;
  if (body[0] == '+' || body[0] == '-') {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  if (body.empty()) return std::nullopt;

  auto slash = body.find('/');
  if (slash != std::string::npos) {
    std::string num = body.substr(0, slash);
    std::string den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class d(den);
    if (d == 0) return std::nullopt;
    Rat q(mpz_class(num), d);
    q.canonicalize();
    return neg ? Rat(-q) : q;
  }

  // Decimal form with optional fraction part and exponent.
  std::string digits;
  long frac_len = 0;
  long exponent = 0;
  size_t i = 0;
  while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i])))
    digits += body[i++];
  if (i < body.size() && body[i] == '.') {
    ++i;
    while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i]))) {
      digits += body[i++];
      ++frac_len;
    }
  }
  if (digits.empty()) return std::nullopt;
  if (i < body.size() && (body[i] == 'e' || body[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < body.size() && (body[i] == '+' || body[i] == '-')) {
      eneg = body[i] == '-';
      ++i;
    }
    std::string e;
    while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i])))
      e += body[i++];
    if (e.empty() || e.size() > 6) return std::nullopt;
    exponent = std::strtol(e.c_str(), nullptr, 10);
    if (eneg) exponent = -exponent;
  }
  if (i != body.size()) return std::nullopt;

  mpz_class num(digits.empty() ? "0" : digits);
  long pow10 = exponent - frac_len;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(pow10)));
  Rat q;
  if (pow10 >= 0)
    q = Rat(num * scale);
  else
    q = Rat(num, scale);
  q.canonicalize();
  return neg ? Rat(-q) : q;
}

std::string rat_to_string(const Rat& q) {
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (den == 1) return num.get_str();

  // den = 2^a * 5^b (a,b bounded) has an exact decimal expansion of
  // max(a,b) digits; prefer it while it stays readable.
  mpz_class d = den;
  unsigned long twos = 0, fives = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  unsigned long places = std::max(twos, fives);
  if (d == 1 && places <= 80) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    mpz_class scaled = num * scale / den;
    bool neg = scaled < 0;
    std::string body = mpz_class(abs(scaled)).get_str();
    if (body.size() <= places) body.insert(0, places + 1 - body.size(), '0');
    body.insert(body.size() - places, ".");
    return neg ? "-" + body : body;
  }
  return num.get_str() + "/" + den.get_str();
}

long rat_floor_div(const Rat& a, const Rat& b) {
  if (b <= 0) throw std::invalid_argument("rat_floor_div: divisor must be positive");
  Rat r = a / b;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  if (!fl.fits_slong_p()) throw std::overflow_error("rat_floor_div: result out of range");
  return fl.get_si();
}

}  // namespace diamcover
