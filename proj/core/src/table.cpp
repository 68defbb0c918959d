#include "unitsq/table.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <sstream>
#include <string_view>

#include "unitsq/parallel.hpp"

namespace unitsq {

namespace {

constexpr std::string_view kMagic = "# unitsq table v1";
constexpr std::string_view kCheckpointPrefix = "# checkpoint m=";

std::string join_csv(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

bool parse_i64(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::int64_t require_i64(std::string_view s, std::size_t line) {
  std::int64_t v;
  if (!parse_i64(s, v)) {
    throw TableError(line, "bad integer '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::int64_t> parse_csv(std::string_view s, std::size_t line) {
  std::vector<std::int64_t> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    out.push_back(require_i64(s.substr(pos, comma - pos), line));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct ParsedEntry {
  std::int64_t m = 0;
  std::optional<std::vector<std::int64_t>> elements;  // nullopt: NONE
};

// "m: x1 ... xk" or "m: NONE". Strict mode insists on the canonical spacing.
ParsedEntry parse_entry(std::string_view line, std::size_t line_no, bool strict) {
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) {
    throw TableError(line_no, "expected 'm: ...'");
  }
  std::string_view head = line.substr(0, colon);
  std::string_view body = line.substr(colon + 1);
  if (!strict) {
    while (!head.empty() && head.back() == ' ') head.remove_suffix(1);
    while (!head.empty() && head.front() == ' ') head.remove_prefix(1);
  }
  ParsedEntry e;
  e.m = require_i64(head, line_no);
  if (strict) {
    if (body.empty() || body.front() != ' ') {
      throw TableError(line_no, "expected a single space after ':'");
    }
    body.remove_prefix(1);
    if (body == "NONE") return e;
    std::vector<std::int64_t> xs;
    std::size_t pos = 0;
    while (true) {
      const auto sp = body.find(' ', pos);
      xs.push_back(require_i64(body.substr(pos, sp - pos), line_no));
      if (sp == std::string_view::npos) break;
      pos = sp + 1;
    }
    e.elements = std::move(xs);
    return e;
  }
  std::vector<std::int64_t> xs;
  std::size_t pos = 0;
  bool none = false;
  while (pos < body.size()) {
    pos = body.find_first_not_of(" \t\r", pos);
    if (pos == std::string_view::npos) break;
    auto end = body.find_first_of(" \t\r", pos);
    if (end == std::string_view::npos) end = body.size();
    const std::string_view tok = body.substr(pos, end - pos);
    if (tok == "NONE") {
      none = true;
    } else {
      xs.push_back(require_i64(tok, line_no));
    }
    pos = end;
  }
  if (none) {
    if (!xs.empty()) throw TableError(line_no, "NONE mixed with elements");
    return e;
  }
  if (xs.empty()) throw TableError(line_no, "entry has no elements");
  e.elements = std::move(xs);
  return e;
}

bool increasing_positive(const std::vector<std::int64_t>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < 1 || (i > 0 && xs[i] <= xs[i - 1])) return false;
  }
  return !xs.empty();
}

RepTable load(std::istream& in) {
  RepTable table;
  TableHeader& h = table.header;
  bool saw_magic = false;
  bool saw_entry = false;
  bool fallback_seen = false;
  SearchConstraints fb;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) throw TableError(line_no, "empty line");
    if (line.front() == '#') {
      std::string_view v(line);
      if (!saw_magic) {
        // Preamble lines (e.g. a certificate claim) may precede the header.
        saw_magic = v == kMagic;
        continue;
      }
      if (v.starts_with(kCheckpointPrefix)) {
        const std::int64_t k = require_i64(v.substr(kCheckpointPrefix.size()), line_no);
        if (k != table.last()) {
          throw TableError(line_no, "checkpoint m=" + std::to_string(k) +
                                        " does not match last entry");
        }
        continue;
      }
      if (saw_entry) continue;  // trailing annotations are ignored
      v.remove_prefix(1);
      while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
      const auto eq = v.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string_view key = v.substr(0, eq);
      const std::string_view val = v.substr(eq + 1);
      if (key == "d") {
        h.constraints.d = static_cast<unsigned>(require_i64(val, line_no));
      } else if (key == "t") {
        h.constraints.t = require_i64(val, line_no);
      } else if (key == "avoid") {
        h.constraints.avoid = parse_csv(val, line_no);
      } else if (key == "lo") {
        h.lo = require_i64(val, line_no);
      } else if (key == "hi") {
        h.hi = require_i64(val, line_no);
      } else if (key == "fallback_d") {
        fallback_seen = true;
        fb.d = static_cast<unsigned>(require_i64(val, line_no));
      } else if (key == "fallback_t") {
        fallback_seen = true;
        fb.t = require_i64(val, line_no);
      } else if (key == "fallback_avoid") {
        fallback_seen = true;
        fb.avoid = parse_csv(val, line_no);
      }
      continue;
    }
    if (!saw_magic) throw TableError(line_no, "missing table header");
    if (!saw_entry) {
      try {
        h.constraints.validate();
        if (fallback_seen) {
          fb.validate();
          h.fallback = fb;
        }
      } catch (const std::invalid_argument& e) {
        throw TableError(line_no, std::string("header: ") + e.what());
      }
      saw_entry = true;
    }
    const ParsedEntry e = parse_entry(line, line_no, true);
    if (e.m != table.last() + 1) {
      throw TableError(line_no, "expected entry for m=" +
                                    std::to_string(table.last() + 1) +
                                    ", found m=" + std::to_string(e.m));
    }
    TableEntry entry;
    if (e.elements) {
      if (!increasing_positive(*e.elements)) {
        throw TableError(line_no, "elements must be strictly increasing");
      }
      Representation rep(*e.elements);
      if (is_representation(rep, e.m, h.constraints)) {
        entry.rep = std::move(rep);
      } else if (h.fallback && is_representation(rep, e.m, *h.fallback)) {
        entry.rep = std::move(rep);
        entry.fallback = true;
      } else {
        throw TableError(line_no, "{" + rep.to_string() +
                                      "} is not a representation of " +
                                      std::to_string(e.m) +
                                      " under the header constraints");
      }
    }
    table.entries.emplace(e.m, std::move(entry));
  }
  if (!saw_magic && line_no > 0) throw TableError(line_no, "missing table header");
  if (!saw_entry) {
    h.constraints.validate();
    if (fallback_seen) {
      fb.validate();
      h.fallback = fb;
    }
  }
  return table;
}

}  // namespace

std::int64_t RepTable::last() const {
  return entries.empty() ? header.lo - 1 : entries.rbegin()->first;
}

TableEntry evaluate_entry(std::int64_t m, const SearchConstraints& cons,
                          const std::optional<SearchConstraints>& fallback) {
  TableEntry entry;
  entry.rep = find_representation(m, cons);
  if (!entry.rep && fallback) {
    entry.rep = find_representation(m, *fallback);
    entry.fallback = entry.rep.has_value();
  }
  return entry;
}

RepTable enumerate_range(std::int64_t lo, std::int64_t hi,
                         const SearchConstraints& cons,
                         const std::optional<SearchConstraints>& fallback,
                         const EnumerateOptions& opts) {
  if (lo < 1 || hi < lo) {
    throw std::invalid_argument("enumerate_range: need 1 <= lo <= hi");
  }
  RepTable table;
  table.header.constraints = cons;
  table.header.constraints.validate();
  if (fallback) {
    table.header.fallback = fallback;
    table.header.fallback->validate();
  }
  table.header.lo = lo;
  table.header.hi = hi;
  if (opts.resume_from) {
    if (opts.resume_from->header != table.header) {
      throw std::invalid_argument("enumerate_range: resume table differs in header");
    }
    table.entries = opts.resume_from->entries;
  }
  const SearchConstraints primary = table.header.constraints;
  const std::optional<SearchConstraints> secondary = table.header.fallback;
  ordered_parallel_for(
      table.last() + 1, hi, std::max(1u, opts.jobs),
      [&](std::int64_t m) { return evaluate_entry(m, primary, secondary); },
      [&](std::int64_t m, TableEntry entry) {
        if (opts.on_entry) opts.on_entry(m, entry);
        table.entries.emplace(m, std::move(entry));
      },
      [&] { return opts.should_stop && opts.should_stop(); });
  return table;
}

std::optional<std::int64_t> find_frontier(const RepTable& table) {
  for (auto it = table.entries.rbegin(); it != table.entries.rend(); ++it) {
    if (!it->second.rep) return it->first;
  }
  return std::nullopt;
}

std::vector<std::int64_t> representable_values(const RepTable& table) {
  std::vector<std::int64_t> out;
  for (const auto& [m, e] : table.entries) {
    if (e.rep) out.push_back(m);
  }
  return out;
}

std::vector<std::int64_t> fallback_values(const RepTable& table) {
  std::vector<std::int64_t> out;
  for (const auto& [m, e] : table.entries) {
    if (e.fallback) out.push_back(m);
  }
  return out;
}

std::string format_entry(std::int64_t m, const TableEntry& entry) {
  return std::to_string(m) + ": " + (entry.rep ? entry.rep->to_string() : "NONE");
}

std::string format_checkpoint(std::int64_t m) {
  return std::string(kCheckpointPrefix) + std::to_string(m);
}

std::string format_header(const TableHeader& header) {
  std::ostringstream os;
  os << kMagic << '\n';
  os << "# d=" << header.constraints.d << '\n';
  os << "# t=" << header.constraints.t << '\n';
  os << "# avoid=" << join_csv(header.constraints.avoid) << '\n';
  if (header.fallback) {
    os << "# fallback_d=" << header.fallback->d << '\n';
    os << "# fallback_t=" << header.fallback->t << '\n';
    os << "# fallback_avoid=" << join_csv(header.fallback->avoid) << '\n';
  }
  os << "# lo=" << header.lo << '\n';
  os << "# hi=" << header.hi << '\n';
  return os.str();
}

TableWriter::TableWriter(const std::string& path, const TableHeader& header,
                         const std::string& preamble)
    : header_(header), next_(header.lo) {
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw TableError(0, "cannot open " + path + " for writing");
  out_ << preamble << format_header(header_);
  out_.flush();
}

TableWriter::TableWriter(std::ofstream out, TableHeader header,
                         std::int64_t next, std::int64_t since_checkpoint)
    : out_(std::move(out)),
      header_(std::move(header)),
      next_(next),
      since_checkpoint_(since_checkpoint),
      at_checkpoint_(true) {}

TableWriter TableWriter::resume(const std::string& path,
                                const TableHeader& expect, RepTable& loaded,
                                const std::string& preamble) {
  std::string text;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TableError(0, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  // Cut after the last complete checkpoint line; anything later may be a
  // torn write.
  std::size_t cut = std::string::npos;
  std::size_t line_start = 0;
  for (std::size_t pos = text.rfind(kCheckpointPrefix); pos != std::string::npos;
       pos = pos == 0 ? std::string::npos : text.rfind(kCheckpointPrefix, pos - 1)) {
    const auto eol = text.find('\n', pos);
    if ((pos == 0 || text[pos - 1] == '\n') && eol != std::string::npos) {
      cut = eol + 1;
      line_start = pos;
      break;
    }
  }
  if (cut == std::string::npos) {
    loaded = RepTable{};
    loaded.header = expect;
    return TableWriter(path, expect, preamble);
  }
  text.resize(cut);
  std::istringstream prefix(text);
  RepTable table = load(prefix);
  if (table.header != expect) {
    throw TableError(0, path + ": header does not match the requested sweep");
  }
  const auto count = static_cast<std::int64_t>(table.entries.size());
  const std::int64_t since = count % kCheckpointInterval;
  // An off-interval checkpoint left by an early shutdown is dropped, so the
  // continued file matches an uninterrupted run byte for byte.
  const bool drop_last = (since != 0 || count == 0) && !table.complete();
  if (drop_last) cut = line_start;
  std::filesystem::resize_file(path, static_cast<std::uintmax_t>(cut));
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw TableError(0, "cannot reopen " + path);
  const std::int64_t next = table.last() + 1;
  loaded = std::move(table);
  TableWriter writer(std::move(out), expect, next, since);
  writer.at_checkpoint_ = !drop_last;
  return writer;
}

void TableWriter::append(std::int64_t m, const TableEntry& entry) {
  if (m != next_) {
    throw std::logic_error("TableWriter: expected m=" + std::to_string(next_) +
                           ", got m=" + std::to_string(m));
  }
  out_ << format_entry(m, entry) << '\n';
  ++next_;
  at_checkpoint_ = false;
  if (++since_checkpoint_ == kCheckpointInterval) {
    out_ << kCheckpointPrefix << m << '\n';
    out_.flush();
    since_checkpoint_ = 0;
    at_checkpoint_ = true;
  }
  if (!out_) throw TableError(0, "write failed");
}

void TableWriter::finish() {
  if (!at_checkpoint_) {
    out_ << kCheckpointPrefix << (next_ - 1) << '\n';
    at_checkpoint_ = true;
    since_checkpoint_ = 0;
  }
  out_.flush();
  if (!out_) throw TableError(0, "write failed");
}

void TableWriter::flush() { out_.flush(); }

void write_table(const RepTable& table, const std::string& path) {
  for (const auto& [m, e] : table.entries) {
    if (e.rep) {
      const SearchConstraints& c =
          e.fallback ? table.header.fallback.value() : table.header.constraints;
      if (!is_representation(*e.rep, m, c)) {
        throw TableError(0, "write_table: entry for " + std::to_string(m) +
                                " does not certify");
      }
    }
  }
  TableWriter writer(path, table.header);
  for (const auto& [m, e] : table.entries) writer.append(m, e);
  writer.finish();
}

RepTable parse_table(std::istream& in) { return load(in); }

RepTable read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TableError(0, "cannot open " + path);
  return parse_table(in);
}

VerifyReport verify_table(std::istream& in, const SearchConstraints& cons,
                          const VerifyOptions& opts) {
  VerifyReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const ParsedEntry e = parse_entry(line, line_no, false);
    VerifyLine v;
    v.line = line_no;
    v.m = e.m;
    if (!e.elements) {
      v.none = true;
      v.valid = true;
      v.constraints_ok = true;
      ++report.none;
      ++report.valid;
    } else {
      const auto& xs = *e.elements;
      SearchConstraints plain;
      plain.d = cons.d;
      v.valid = increasing_positive(xs) &&
                is_representation(Representation(xs), e.m, plain);
      if (v.valid) {
        ++report.valid;
        const bool checked = e.m >= opts.constraints_from;
        v.constraints_ok =
            !checked || is_representation(Representation(xs), e.m, cons);
        if (!v.constraints_ok) report.constraint_exceptions.push_back(e.m);
      } else {
        ++report.invalid;
      }
    }
    report.lines.push_back(v);
  }
  if (in.bad()) throw TableError(line_no, "read error");
  return report;
}

VerifyReport verify_table(const std::string& path, const SearchConstraints& cons,
                          const VerifyOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TableError(0, "cannot open " + path);
  return verify_table(in, cons, opts);
}

}  // namespace unitsq
