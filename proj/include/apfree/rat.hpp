#pragma once

// Exact rational numbers backed by GMP. Values are always in lowest terms
// with a positive denominator; every operation is exact.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>

namespace apfree {

class Rat {
 public:
  Rat() = default;

  template <std::integral I>
  Rat(I n) : v_(static_cast<long>(n)) {}  // NOLINT: implicit on purpose

  Rat(long num, long den);

  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p/q" or "p". Throws std::invalid_argument on malformed text
  /// or a zero denominator.
  static Rat parse(std::string_view text);

  /// 2^-k.
  static Rat inv_pow2(unsigned k);

  /// Always "numerator/denominator", e.g. "0/1", "2/3", "-1/8".
  std::string str() const;

  double to_double() const { return v_.get_d(); }

  const mpq_class& raw() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }

  Rat operator-() const { return Rat(mpq_class(-v_)); }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) {
    return os << r.str();
  }

 private:
  mpq_class v_{0};
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

/// (a + b) / 2
inline Rat midpoint(const Rat& a, const Rat& b) { return (a + b) / Rat(2); }

/// Largest integer <= r.
long floor_to_long(const Rat& r);
mpz_class floor_int(const Rat& r);
mpz_class ceil_int(const Rat& r);

struct RatHash {
  std::size_t operator()(const Rat& r) const;
};

}  // namespace apfree
