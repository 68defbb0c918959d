#pragma once

// Randomized and exhaustive property checks shared by the unit tests and the
// acceptance runner. Each check returns a verdict with a short diagnostic
// instead of asserting, so callers decide how to report.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "unitsq/search.hpp"
#include "unitsq/translation.hpp"

namespace unitsq::testing {

struct PropertyResult {
  std::string name;
  bool ok = true;
  std::string detail;  // first counterexample, or a count summary on success
  std::uint64_t cases = 0;
};

/// Random certified representations built from {1} by repeatedly replacing
/// an element x with x+1 and x(x+1) (1/x = 1/(x+1) + 1/(x(x+1))) when both
/// are absent. Elements stay <= max_element.
std::vector<std::int64_t> random_split_walk(std::mt19937_64& rng,
                                            std::vector<std::int64_t> start,
                                            int steps, std::int64_t max_element);

/// construct and brute_force_oracle agree on existence for every m in
/// [1, hi] under cons, and every output certifies.
PropertyResult check_oracle_equivalence(std::int64_t hi,
                                        const SearchConstraints& cons);

/// Same comparison over random avoid sets and minimum bounds.
PropertyResult check_avoidance_fuzz(int trials, std::uint64_t seed);

/// min X within bounds_for_min and |X| <= max_cardinality, for the whole set
/// and every suffix, over `reps` random certified representations, some of
/// them produced by construct.
PropertyResult check_bound_soundness(int reps, std::uint64_t seed);

/// Recursion depth stays within the root cardinality bound.
PropertyResult check_termination(std::int64_t hi);

/// Found under t+1 implies found under t, for m <= hi and t < max_t.
PropertyResult check_monotone_t(std::int64_t hi, std::int64_t max_t);

/// Searches with and without the window bound, and in GMP-only mode, return
/// identical results.
PropertyResult check_search_modes(std::int64_t hi, int random_cases,
                                  std::uint64_t seed);

/// apply_translation output certifies as a representation of
/// scale*m + shift in the translation's domain, for random valid
/// translations and random legal inputs.
PropertyResult check_translation_fuzz(int trials, std::uint64_t seed);

/// Scales and shifts of the built-in families.
PropertyResult check_family_constants();

/// is_complete_set agrees with direct residue matching on `samples` random
/// integers for the built-in families and an incomplete set.
PropertyResult check_completeness_crosscheck(int samples, std::uint64_t seed);

/// write/read round trip, byte-identical regeneration, and byte-identical
/// resume after interruption at several points; files go under dir.
PropertyResult check_table_roundtrip(const std::filesystem::path& dir);
PropertyResult check_table_resume(const std::filesystem::path& dir);

/// Tables over [lo, hi] from 1 and `jobs` workers are identical.
PropertyResult check_parallel_equality(std::int64_t lo, std::int64_t hi,
                                       unsigned jobs);

}  // namespace unitsq::testing
