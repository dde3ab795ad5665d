#include "apfree/rat.hpp"

#include <stdexcept>

namespace apfree {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

Rat::Rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("Rat: zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::domain_error("Rat: division by zero");
  v_ /= o.v_;
  return *this;
}

Rat Rat::parse(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num_s = text.substr(0, slash);
  std::string_view den_s =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num_s) || !is_integer_literal(den_s) || den_s[0] == '-' ||
      den_s[0] == '+') {
    throw std::invalid_argument("Rat: malformed rational '" + std::string(text) + "'");
  }
  if (num_s[0] == '+') num_s.remove_prefix(1);
  mpz_class num(std::string(num_s), 10);
  mpz_class den(std::string(den_s), 10);
  if (den == 0) throw std::invalid_argument("Rat: zero denominator in '" + std::string(text) + "'");
  mpq_class q(num, den);
  q.canonicalize();
  return Rat(std::move(q));
}

Rat Rat::inv_pow2(unsigned k) {
  mpz_class den = 1;
  den <<= k;
  return Rat(mpq_class(mpz_class(1), den));
}

std::string Rat::str() const {
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

long floor_to_long(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
  if (!q.fits_slong_p()) throw std::overflow_error("floor_to_long: out of range");
  return q.get_si();
}

mpz_class floor_int(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
  return q;
}

mpz_class ceil_int(const Rat& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
  return q;
}

std::size_t RatHash::operator()(const Rat& r) const {
  const mpz_srcptr num = r.raw().get_num_mpz_t();
  const mpz_srcptr den = r.raw().get_den_mpz_t();
  std::size_t h1 = static_cast<std::size_t>(mpz_getlimbn(num, 0)) ^
                   static_cast<std::size_t>(mpz_size(num)) * 0x9e3779b97f4a7c15ULL;
  if (mpz_sgn(num) < 0) h1 = ~h1;
  std::size_t h2 = static_cast<std::size_t>(mpz_getlimbn(den, 0));
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

}  // namespace apfree
