#include "unitsq/exact_arith.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace unitsq {

Fraction::Fraction(std::int64_t value) : num_(0), den_(1) {
  // mpz_class has no int64_t constructor on every platform; go via long.
  static_assert(sizeof(long) == sizeof(std::int64_t));
  num_ = static_cast<long>(value);
}

Fraction::Fraction(BigInt num, BigInt den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw std::domain_error("Fraction: zero denominator");
  normalize();
}

void Fraction::normalize() {
  if (sgn(den_) < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  BigInt g;
  mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
  if (g != 1) {
    mpz_divexact(num_.get_mpz_t(), num_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
}

Fraction Fraction::operator+(const Fraction& rhs) const {
  return Fraction(num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_);
}

Fraction Fraction::operator-(const Fraction& rhs) const {
  return Fraction(num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_);
}

Fraction Fraction::operator-() const {
  Fraction out = *this;
  out.num_ = -out.num_;
  return out;
}

std::strong_ordering Fraction::operator<=>(const Fraction& rhs) const {
  const int c = cmp(num_ * rhs.den_, rhs.num_ * den_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Fraction::to_string() const {
  if (den_ == 1) return num_.get_str();
  return num_.get_str() + "/" + den_.get_str();
}

std::ostream& operator<<(std::ostream& os, const Fraction& f) {
  return os << f.to_string();
}

Fraction unit_fraction(std::int64_t x) {
  if (x < 1) throw std::domain_error("unit_fraction: x must be >= 1");
  return Fraction(BigInt(1), BigInt(static_cast<long>(x)));
}

Fraction frac_sub_unit(const Fraction& s, std::int64_t x) {
  if (x < 1) throw std::domain_error("frac_sub_unit: x must be >= 1");
  const BigInt bx(static_cast<long>(x));
  return Fraction(s.num() * bx - s.den(), s.den() * bx);
}

BigInt ceil_recip(const Fraction& s) {
  if (s.sign() <= 0) throw std::domain_error("ceil_recip: s must be positive");
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), s.den().get_mpz_t(), s.num().get_mpz_t());
  return c;
}

BigInt pow(const BigInt& base, unsigned exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

BigInt iroot_floor(const BigInt& n, unsigned r) {
  if (r < 1) throw std::domain_error("iroot_floor: r must be >= 1");
  if (sgn(n) < 0) throw std::domain_error("iroot_floor: n must be >= 0");
  BigInt v;
  mpz_root(v.get_mpz_t(), n.get_mpz_t(), r);
  // mpz_root truncates; confirm the bracket v^r <= n < (v+1)^r.
  while (sgn(v) > 0 && pow(v, r) > n) --v;
  while (pow(v + 1, r) <= n) ++v;
  return v;
}

namespace {

// v^r compared against n without overflow: returns true iff v^r <= n.
bool pow_le(std::uint64_t v, unsigned r, std::uint64_t n) {
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < r; ++i) {
    acc *= v;
    if (acc > n) return false;
  }
  return true;
}

}  // namespace

std::uint64_t iroot_floor(std::uint64_t n, unsigned r) {
  if (r < 1) throw std::domain_error("iroot_floor: r must be >= 1");
  if (r == 1 || n < 2) return n;
  // Binary search on [0, 2^ceil(64/r)]; every probe is an exact comparison.
  std::uint64_t lo = 0;
  std::uint64_t hi = std::uint64_t{1} << ((64 + r - 1) / r);
  if (hi == 0) hi = std::numeric_limits<std::uint64_t>::max();
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (pow_le(mid, r, n)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

BigInt rational_root_floor(const BigInt& n, const Fraction& s, unsigned r) {
  if (s.sign() <= 0) {
    throw std::domain_error("rational_root_floor: s must be positive");
  }
  if (sgn(n) < 0) throw std::domain_error("rational_root_floor: n must be >= 0");
  // v^r * num <= n * den  <=>  v^r <= floor(n * den / num), since v^r is an
  // integer.
  BigInt q;
  const BigInt scaled = n * s.den();
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), s.num().get_mpz_t());
  return iroot_floor(q, r);
}

bool checked_pow(std::int64_t base, unsigned exp, std::int64_t& out) {
  if (base < 0) throw std::domain_error("checked_pow: negative base");
  std::int64_t acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(acc, base, &acc)) return false;
  }
  out = acc;
  return true;
}

}  // namespace unitsq
