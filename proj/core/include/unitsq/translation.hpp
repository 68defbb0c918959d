#pragma once

// Translations map representations of m to representations of
// scale * m + shift by scaling every element by k and prepending a fixed
// prefix whose reciprocals sum to 1 - 1/k.
//
// Two domains are supported:
//  * MinTranslation keeps every element >= t (t-representations);
//  * AvoidingTranslation keeps the result disjoint from a forbidden set S.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "unitsq/search.hpp"

namespace unitsq {

struct MinTranslation {
  std::int64_t k = 0;
  std::vector<std::int64_t> ys;
  std::int64_t t = 1;
  bool operator==(const MinTranslation&) const = default;
};

struct AvoidingTranslation {
  std::int64_t k = 0;
  std::vector<std::int64_t> ys;
  std::vector<std::int64_t> avoid;  // sorted, unique
  bool operator==(const AvoidingTranslation&) const = default;
};

using Translation = std::variant<MinTranslation, AvoidingTranslation>;

/// k^d.
std::int64_t scale(std::int64_t k, unsigned d = 2);
std::int64_t scale(const Translation& r, unsigned d = 2);
/// Sum of y^d over the prefix.
std::int64_t shift(const Translation& r, unsigned d = 2);

/// "(k; y1, ..., yl)"
std::string to_string(const Translation& r);

enum class ViolationKind {
  kBadMultiplier,        // k < 2
  kNotIncreasing,        // ys not strictly increasing positive
  kReciprocalIdentity,   // sum 1/y != 1 - 1/k
  kBelowMinimum,         // y1 < t
  kCollidesWithScaled,   // y >= t*k and k | y
  kPrefixInAvoidSet,     // y in S
  kMultipleOutsideAvoid, // k | y but y/k not in S u {1}
  kAvoidNotClosed,       // s in S, k | s, s/k not in S u {1}
};

struct Violation {
  ViolationKind kind;
  std::size_t index = 0;      // position in ys (or in avoid for kAvoidNotClosed)
  std::int64_t value = 0;     // offending element
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }
  /// First violation message, or "ok".
  std::string summary() const;
};

ValidationReport validate_min_translation(const MinTranslation& r);
ValidationReport validate_avoiding_translation(const AvoidingTranslation& r);
ValidationReport validate(const Translation& r);

/// The translated set ys u kX, re-certified as a representation of
/// scale*m + shift in the translation's domain.
///
/// Throws std::invalid_argument if r is invalid or X is not a certified
/// representation of m in r's domain (min X >= t, resp. X avoids S and
/// X != {1}), and std::logic_error if ys and kX intersect or the result
/// fails certification.
Representation apply_translation(const Translation& r, const Representation& x,
                                 std::int64_t m, unsigned d = 2);

/// Constraints describing r's domain (t, or avoid set) at power d.
SearchConstraints domain_constraints(const Translation& r, unsigned d = 2);

struct TranslationSet {
  std::vector<Translation> members;

  bool empty() const { return members.empty(); }
  std::int64_t max_scale(unsigned d = 2) const;
  std::int64_t max_shift(unsigned d = 2) const;
  /// Members share one flavor and one domain; throws std::invalid_argument
  /// otherwise, or when the set is empty.
  SearchConstraints domain(unsigned d = 2) const;
};

struct CompletenessReport {
  bool complete = false;
  std::int64_t modulus = 0;                    // lcm of scales
  std::vector<std::int64_t> uncovered;         // residues in [0, modulus)
};

/// Exhaustive covering check over residues [0, lcm of scales).
CompletenessReport check_completeness(const TranslationSet& ts, unsigned d = 2);
bool is_complete_set(const TranslationSet& ts, unsigned d = 2);

/// Member whose shift matches m modulo its scale, if any.
std::optional<std::size_t> matching_member(const TranslationSet& ts,
                                           std::int64_t m, unsigned d = 2);

/// Per-m representability test used as the base-case oracle.
using RepresentabilityOracle =
    std::function<std::optional<Representation>(std::int64_t m)>;

struct FrontierCertificate {
  bool established = false;
  std::int64_t frontier = 0;       // n
  std::int64_t max_scale = 0;      // q
  std::int64_t max_shift = 0;      // s
  std::int64_t base_lo = 0;        // n + 1
  std::int64_t base_hi = 0;        // q n + s
  std::int64_t checked_through = 0;  // last m examined
  std::optional<std::int64_t> first_failure;
  std::vector<std::pair<std::int64_t, Representation>> witnesses;  // ascending
};

struct FrontierOptions {
  unsigned jobs = 1;
  /// Inspect only the first `limit` integers of the base interval (smoke
  /// runs). The certificate is established only if q n + s was reached.
  std::optional<std::int64_t> limit;
  /// Called in ascending m order for every verified witness.
  std::function<void(std::int64_t, const Representation&)> on_witness;
  /// Polled between oracle calls; true abandons the run.
  std::function<bool()> should_stop;
};

/// Checks the induction step arithmetic for every member: for m > q n + s
/// and the member r with m = shift(r) (mod scale(r)), the preimage
/// m' = (m - shift(r)) / scale(r) satisfies n < m' < m. Returns a
/// description of the first failing member, or nullopt.
std::optional<std::string> check_induction_step(const TranslationSet& ts,
                                                std::int64_t n, unsigned d = 2);

/// Verifies with `oracle` that every m in [n+1, q n + s] is representable in
/// the set's domain, which together with completeness and the induction step
/// establishes representability of every integer greater than n. Each
/// witness is re-certified. Throws std::invalid_argument if the set is
/// invalid, incomplete (naming an uncovered residue), or n < 1.
FrontierCertificate frontier_theorem_check(const TranslationSet& ts,
                                           std::int64_t n,
                                           const RepresentabilityOracle& oracle,
                                           const FrontierOptions& opts = {},
                                           unsigned d = 2);

/// Parses the plain-text set format, one translation per line:
///   k ; y1 y2 ... yl [| t=T] [| avoid=a,b,c]
/// '#' starts a comment line. Lines without a suffix take `default_domain`
/// (a MinTranslation with default_domain.t when its avoid set is empty,
/// otherwise an AvoidingTranslation). Throws std::invalid_argument with the
/// 1-based line number on malformed input.
TranslationSet parse_translation_set(std::string_view text,
                                     const SearchConstraints& default_domain);
TranslationSet read_translation_set(const std::string& path,
                                    const SearchConstraints& default_domain);
std::string format_translation_set(const TranslationSet& ts);

/// The four scale-4 6-translations whose shifts cover every residue mod 4.
TranslationSet six_translation_set();
/// f0..f3 on {21,39}-avoiding representations, shifts 4, 16545, 1822, 14423.
TranslationSet avoiding_family();

}  // namespace unitsq
