#pragma once

// Exact rational arithmetic and integer root extraction.
//
// Nothing in here touches floating point in a way that can affect a result:
// every root is settled by exact integer comparisons.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

namespace unitsq {

using BigInt = mpz_class;

/// A rational number kept in lowest terms with a positive denominator.
class Fraction {
 public:
  Fraction() : num_(0), den_(1) {}
  Fraction(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Fraction(BigInt num, BigInt den);

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  int sign() const { return sgn(num_); }
  bool is_zero() const { return num_ == 0; }

  Fraction operator+(const Fraction& rhs) const;
  Fraction operator-(const Fraction& rhs) const;
  Fraction operator-() const;
  Fraction& operator+=(const Fraction& rhs) { return *this = *this + rhs; }
  Fraction& operator-=(const Fraction& rhs) { return *this = *this - rhs; }

  bool operator==(const Fraction& rhs) const {
    return num_ == rhs.num_ && den_ == rhs.den_;
  }
  std::strong_ordering operator<=>(const Fraction& rhs) const;

  std::string to_string() const;

 private:
  void normalize();

  BigInt num_;
  BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Fraction& f);

/// 1/x for x >= 1.
Fraction unit_fraction(std::int64_t x);

/// s - 1/x, exact and reduced. Negative results are legal.
Fraction frac_sub_unit(const Fraction& s, std::int64_t x);

/// Least integer c with c*s >= 1. Throws std::domain_error if s <= 0.
BigInt ceil_recip(const Fraction& s);

/// The unique v >= 0 with v^r <= n < (v+1)^r. Throws std::domain_error on
/// n < 0 or r < 1.
BigInt iroot_floor(const BigInt& n, unsigned r);
std::uint64_t iroot_floor(std::uint64_t n, unsigned r);

/// Largest v >= 0 with v^r * num(s) <= n * den(s). Throws std::domain_error
/// if s <= 0, n < 0 or r < 1.
BigInt rational_root_floor(const BigInt& n, const Fraction& s, unsigned r);

/// Stores base^exp in out; returns false (out untouched) if the power does
/// not fit in int64. base must be nonnegative.
bool checked_pow(std::int64_t base, unsigned exp, std::int64_t& out);

BigInt pow(const BigInt& base, unsigned exp);

}  // namespace unitsq
