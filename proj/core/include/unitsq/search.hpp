#pragma once

// Backtracking search for sets of distinct positive integers whose
// reciprocals sum to a target fraction and whose d-th powers sum to a
// target integer.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unitsq/exact_arith.hpp"

namespace unitsq {

/// Strictly increasing list of positive integers.
class Representation {
 public:
  Representation() = default;
  /// Throws std::invalid_argument unless elements are positive and strictly
  /// increasing.
  explicit Representation(std::vector<std::int64_t> elements);
  Representation(std::initializer_list<std::int64_t> elements)
      : Representation(std::vector<std::int64_t>(elements)) {}

  std::span<const std::int64_t> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  std::int64_t min() const { return elements_.front(); }
  std::int64_t max() const { return elements_.back(); }
  bool contains(std::int64_t x) const;

  /// Sum of reciprocals, exact.
  Fraction reciprocal_sum() const;
  /// Sum of d-th powers; throws std::overflow_error beyond int64.
  std::int64_t power_sum(unsigned d) const;

  /// Elements joined by single spaces.
  std::string to_string() const;

  bool operator==(const Representation&) const = default;

 private:
  std::vector<std::int64_t> elements_;
};

struct SearchConstraints {
  std::int64_t t = 1;               // minimum allowed element
  std::vector<std::int64_t> avoid;  // forbidden elements, sorted, unique
  unsigned d = 2;                   // power

  /// Normalizes avoid (sort + dedup) and checks t >= 1, d >= 1, avoid > 0.
  /// Throws std::invalid_argument.
  void validate();
  bool forbids(std::int64_t x) const;
  bool operator==(const SearchConstraints&) const = default;
};

/// Inclusive candidate range for the minimum element; empty when lo > hi.
struct CandidateRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  bool empty() const { return lo > hi; }
};

/// Range for min X given a remaining reciprocal sum s and power sum n:
///   max(ceil(1/s), t) <= min X <= min(floor((n/s)^(1/(d+1))), floor(n^(1/d))).
/// Throws std::domain_error if s <= 0 or n < 1.
CandidateRange bounds_for_min(std::int64_t t, const Fraction& s,
                              std::int64_t n, unsigned d);

/// floor(s * (n/s)^(1/(d+1))), the largest c with c^(d+1) num^d <= n den^d.
/// Upper bound on |X| for any X with sum 1/x = s and sum x^d = n.
std::int64_t max_cardinality(const Fraction& s, std::int64_t n, unsigned d);

/// Integer arithmetic used for the running reciprocal sum.
enum class Arithmetic {
  kAuto,  // 128-bit fast path, escalating per subtree to GMP on overflow
  kBig,   // GMP throughout
};

struct SearchOptions {
  Arithmetic arithmetic = Arithmetic::kAuto;
  /// Extra cut on top of bounds_for_min: a candidate x is abandoned (with
  /// every larger one) once the smallest allowed elements x, x', x'', ...
  /// whose d-th powers still fit in n cannot reach the reciprocal sum s.
  /// Nodes with room for at most three more elements are then finished
  /// directly (closed form for one or two, an index of triples for three).
  bool window_bound = true;
  /// Prime-denominator cuts. For each prime p, the elements divisible by p
  /// must have reciprocals summing to s up to a p-adic integer. Elements
  /// that fit no such subset are dropped before the search, and a partial
  /// set is abandoned once the remaining multiples of some p can no longer
  /// cancel its p-part.
  bool residue_bound = true;
  // Both only remove subtrees without solutions and keep the ascending
  // candidate order, so the first representation found is unchanged; off
  // gives the plain bounds.
};

struct SearchStats {
  std::uint64_t nodes = 0;        // recursive calls (skipped leaves excluded)
  std::uint64_t escalations = 0;  // subtrees handed to the GMP path
  std::uint64_t window_cuts = 0;  // loops ended by the window bound
  std::uint64_t leaf_skips = 0;   // children rejected before the call
  std::uint64_t closed_forms = 0; // nodes finished without the candidate loop
  std::uint64_t residue_cuts = 0; // loops ended or children skipped on p-parts
  std::size_t dropped = 0;        // elements excluded up front by residues
  std::size_t max_depth = 0;      // most elements on any partial path
  std::int64_t depth_limit = 0;   // max_cardinality at the root
};

/// Finds Y with min Y >= cons.t, Y disjoint from cons.avoid,
/// sum 1/y = s and sum y^d = n. Candidate minima are explored in ascending
/// order, so the result is deterministic. Returns nullopt when no such set
/// exists (including s <= 0 or n <= 0 at the root).
std::optional<Representation> construct(const SearchConstraints& cons,
                                        const Fraction& s, std::int64_t n,
                                        SearchStats* stats = nullptr,
                                        const SearchOptions& opts = {});

/// construct(cons, 1, m).
std::optional<Representation> find_representation(
    std::int64_t m, const SearchConstraints& cons,
    SearchStats* stats = nullptr, const SearchOptions& opts = {});

/// True iff X is strictly increasing, every element >= cons.t and outside
/// cons.avoid, sum 1/x == 1 exactly, and sum x^d == m.
bool is_representation(const Representation& x, std::int64_t m,
                       const SearchConstraints& cons);

/// Largest candidate element brute_force_oracle agrees to enumerate up to.
inline constexpr std::int64_t kBruteForceMaxElement = 24;

/// Enumerates subsets of {t, ..., floor(m^(1/d))} \ avoid and returns one
/// meeting the representation definition. Independent of construct().
/// Throws std::invalid_argument when floor(m^(1/d)) exceeds
/// kBruteForceMaxElement.
std::optional<Representation> brute_force_oracle(std::int64_t m,
                                                 const SearchConstraints& cons);

}  // namespace unitsq
