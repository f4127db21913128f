#include "cbm/rational.hpp"

#include <stdexcept>

namespace cbm {

namespace {

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

mpz_class parse_int(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer in rational literal");
  // mpz_class(string) throws std::invalid_argument on any bad character.
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rat rat_from_string(std::string_view text) {
  std::string_view s = trimmed(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    return Rat(parse_int(s));
  }
  mpz_class num = parse_int(trimmed(s.substr(0, slash)));
  mpz_class den = parse_int(trimmed(s.substr(slash + 1)));
  return make_rat(num, den);
}

std::string rat_to_string(const Rat& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double rat_to_double(const Rat& value) { return value.get_d(); }

Rat rat_pow(const Rat& value, unsigned long k) {
  if (k == 0) return Rat(1);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), value.get_num().get_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), value.get_den().get_mpz_t(), k);
  // gcd(p,q) = 1 implies gcd(p^k, q^k) = 1, so the result is canonical.
  Rat r;
  r.get_num() = num;
  r.get_den() = den;
  return r;
}

Rat make_rat(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace cbm
