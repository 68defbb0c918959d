#pragma once

// Slow, obviously-correct reference computations used only by tests.
// Nothing here calls into the search code paths being checked.

#include <cstdint>
#include <vector>

namespace unitsq::testing {

/// Largest v with v^r <= n by linear scan.
std::uint64_t naive_iroot(std::uint64_t n, unsigned r);

/// Least c >= 1 with c * num >= den, by scan (num, den > 0).
std::int64_t naive_ceil_recip(std::int64_t num, std::int64_t den);

/// Largest v with v^r * num <= n * den, by scan.
std::int64_t naive_rational_root(std::int64_t n, std::int64_t num,
                                 std::int64_t den, unsigned r);

/// Largest c with c^(d+1) * num^d <= n * den^d, by scan.
std::int64_t naive_max_cardinality(std::int64_t num, std::int64_t den,
                                   std::int64_t n, unsigned d);

/// Sum of y^d computed directly.
std::int64_t naive_power_sum(const std::vector<std::int64_t>& ys, unsigned d);

/// True iff sum 1/y over ys equals p/q, checked by cross multiplication
/// against the product of all elements (small inputs only).
bool naive_reciprocal_sum_is(const std::vector<std::int64_t>& ys,
                             std::int64_t p, std::int64_t q);

struct ResidueClass {
  std::int64_t modulus;
  std::int64_t residue;
};

/// True iff some class contains m.
bool naive_covers(const std::vector<ResidueClass>& classes, std::int64_t m);

}  // namespace unitsq::testing
