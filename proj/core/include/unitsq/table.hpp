#pragma once

// Representability tables: range sweeps, frontier detection, and the
// on-disk line format
//
//   # key=value            header (constraints, range)
//   m: x1 x2 ... xk        representation, ascending
//   m: NONE                search exhausted, no representation
//   # checkpoint m=K       every 100 entries and at completion
//
// Entries that violate the primary constraints but satisfy the fallback
// constraints are fallback-sourced; the file does not mark them, they are
// recognized again on read.

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "unitsq/search.hpp"

namespace unitsq {

inline constexpr std::int64_t kCheckpointInterval = 100;

struct TableEntry {
  std::optional<Representation> rep;  // nullopt: certified NONE
  bool fallback = false;              // found only under the fallback
  bool operator==(const TableEntry&) const = default;
};

struct TableHeader {
  SearchConstraints constraints;
  std::optional<SearchConstraints> fallback;
  std::int64_t lo = 1;
  std::int64_t hi = 0;  // target upper end of the sweep
  bool operator==(const TableHeader&) const = default;
};

struct RepTable {
  TableHeader header;
  std::map<std::int64_t, TableEntry> entries;  // contiguous from header.lo

  /// Last m present, header.lo - 1 when empty.
  std::int64_t last() const;
  bool complete() const { return last() == header.hi; }
  bool operator==(const RepTable&) const = default;
};

/// Runs construct under cons, then under fallback if nothing was found.
TableEntry evaluate_entry(std::int64_t m, const SearchConstraints& cons,
                          const std::optional<SearchConstraints>& fallback);

struct EnumerateOptions {
  unsigned jobs = 1;
  /// Called in ascending m order as entries complete.
  std::function<void(std::int64_t, const TableEntry&)> on_entry;
  /// Polled between searches; true ends the sweep early with the
  /// contiguous prefix.
  std::function<bool()> should_stop;
  /// Continue an existing partial table instead of starting at lo.
  const RepTable* resume_from = nullptr;
};

/// Table for [lo, hi]. Output is independent of opts.jobs. Throws
/// std::invalid_argument unless 1 <= lo <= hi.
RepTable enumerate_range(std::int64_t lo, std::int64_t hi,
                         const SearchConstraints& cons,
                         const std::optional<SearchConstraints>& fallback,
                         const EnumerateOptions& opts = {});

/// Largest m in the table with a NONE entry.
std::optional<std::int64_t> find_frontier(const RepTable& table);

/// Ascending list of m with a representation.
std::vector<std::int64_t> representable_values(const RepTable& table);
/// Ascending list of fallback-sourced m.
std::vector<std::int64_t> fallback_values(const RepTable& table);

/// Table file problem; line is 1-based, 0 when not tied to a line.
class TableError : public std::runtime_error {
 public:
  TableError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::string format_entry(std::int64_t m, const TableEntry& entry);
std::string format_header(const TableHeader& header);
/// "# checkpoint m=K"
std::string format_checkpoint(std::int64_t m);

/// Streams a table to disk in ascending m order, flushing at every
/// checkpoint line.
class TableWriter {
 public:
  /// Starts a fresh file (truncating) and writes `preamble` (comment lines,
  /// each ending in '\n') followed by the header.
  TableWriter(const std::string& path, const TableHeader& header,
              const std::string& preamble = {});

  /// Reopens a partial file: drops everything after its last checkpoint
  /// line, loading the surviving entries into `loaded`. A file without any
  /// checkpoint is restarted from scratch with `preamble`. Throws TableError
  /// if the kept part is corrupt or its header differs from `expect`.
  static TableWriter resume(const std::string& path, const TableHeader& expect,
                            RepTable& loaded, const std::string& preamble = {});

  void append(std::int64_t m, const TableEntry& entry);
  /// Writes the closing checkpoint (if the last entry lacks one) and flushes.
  void finish();
  /// Flushes without writing a checkpoint; entries past the last checkpoint
  /// are discarded on resume.
  void flush();
  /// Raw append of a trailing comment line (after finish()).
  void annotate(const std::string& line) { out_ << line << '\n'; out_.flush(); }
  std::int64_t next_m() const { return next_; }

 private:
  TableWriter(std::ofstream out, TableHeader header, std::int64_t next,
              std::int64_t since_checkpoint);

  std::ofstream out_;
  TableHeader header_;
  std::int64_t next_;
  std::int64_t since_checkpoint_ = 0;
  bool at_checkpoint_ = false;
};

void write_table(const RepTable& table, const std::string& path);

/// Parses and re-verifies a table file: every representation must certify
/// under the header constraints (or the fallback), entries must be
/// contiguous from lo. Throws TableError naming the first bad line.
RepTable read_table(const std::string& path);
RepTable parse_table(std::istream& in);

struct VerifyLine {
  std::size_t line = 0;
  std::int64_t m = 0;
  bool none = false;            // NONE entry
  bool valid = false;           // representation certifies (or NONE)
  bool constraints_ok = false;  // t and avoid hold (vacuous for NONE)
};

struct VerifyReport {
  std::vector<VerifyLine> lines;
  std::size_t valid = 0;
  std::size_t invalid = 0;
  std::size_t none = 0;
  std::vector<std::int64_t> constraint_exceptions;  // valid but outside cons
  bool ok() const { return invalid == 0; }
};

struct VerifyOptions {
  /// Constraints are only checked for m >= constraints_from.
  std::int64_t constraints_from = 0;
};

/// Checks every entry line of an externally supplied table, ignoring its
/// header: validity of each representation at power cons.d, and whether
/// cons.t and cons.avoid hold. Throws TableError on I/O or parse errors.
VerifyReport verify_table(const std::string& path, const SearchConstraints& cons,
                          const VerifyOptions& opts = {});
VerifyReport verify_table(std::istream& in, const SearchConstraints& cons,
                          const VerifyOptions& opts = {});

}  // namespace unitsq
