#include "cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "unitsq/parallel.hpp"
#include "unitsq/search.hpp"
#include "unitsq/table.hpp"
#include "unitsq/translation.hpp"

namespace unitsq::cli {

namespace {

using Clock = std::chrono::steady_clock;

struct ConstraintFlags {
  std::int64_t t = 1;
  std::vector<std::int64_t> avoid;
  unsigned power = 2;

  SearchConstraints build() const {
    SearchConstraints c;
    c.t = t;
    c.avoid = avoid;
    c.d = power;
    c.validate();
    return c;
  }
};

void add_constraint_flags(CLI::App* cmd, ConstraintFlags& f) {
  cmd->add_option("--t", f.t, "Minimum allowed element")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--avoid", f.avoid, "Forbidden elements, comma separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  cmd->add_option("--power", f.power, "Exponent d of the power sum")
      ->check(CLI::PositiveNumber);
}

std::string join(const std::vector<std::int64_t>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

std::string resolve_output(const std::string& path) {
  const std::filesystem::path p(path);
  const char* dir = std::getenv(kOutputDirEnv);
  if (p.is_relative() && dir && *dir) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / p).string();
  }
  return path;
}

nlohmann::json entry_json(std::int64_t m, const TableEntry& e, bool with_fallback) {
  nlohmann::json j;
  j["m"] = m;
  if (e.rep) {
    j["representation"] = std::vector<std::int64_t>(e.rep->elements().begin(),
                                                    e.rep->elements().end());
  } else {
    j["representation"] = nullptr;
  }
  if (with_fallback) j["fallback"] = e.fallback;
  return j;
}

// Table lines to a stream that cannot be truncated (stdout): same text a
// TableWriter would produce.
class StreamTable {
 public:
  StreamTable(std::ostream& os, const TableHeader& h, const std::string& preamble)
      : os_(os) {
    os_ << preamble << format_header(h);
  }
  void append(std::int64_t m, const TableEntry& e) {
    os_ << format_entry(m, e) << '\n';
    last_ = m;
    at_checkpoint_ = false;
    if (++since_ == kCheckpointInterval) {
      os_ << format_checkpoint(m) << '\n';
      since_ = 0;
      at_checkpoint_ = true;
    }
    os_.flush();
  }
  void finish() {
    if (!at_checkpoint_ && last_) os_ << format_checkpoint(*last_) << '\n';
    at_checkpoint_ = true;
    os_.flush();
  }
  void annotate(const std::string& line) { os_ << line << '\n' << std::flush; }

 private:
  std::ostream& os_;
  std::int64_t since_ = 0;
  std::optional<std::int64_t> last_;
  bool at_checkpoint_ = false;
};

// Either a resumable file or a plain stream.
class TableSink {
 public:
  static TableSink to_stream(std::ostream& os, const TableHeader& h,
                             const std::string& preamble = {}) {
    TableSink s;
    s.stream_ = std::make_unique<StreamTable>(os, h, preamble);
    return s;
  }
  static TableSink to_file(const std::string& path, const TableHeader& h,
                           bool resume, RepTable& loaded,
                           const std::string& preamble = {}) {
    TableSink s;
    if (resume && std::filesystem::exists(path)) {
      s.file_ = std::make_unique<TableWriter>(
          TableWriter::resume(path, h, loaded, preamble));
    } else {
      loaded = RepTable{};
      loaded.header = h;
      s.file_ = std::make_unique<TableWriter>(path, h, preamble);
    }
    return s;
  }
  void append(std::int64_t m, const TableEntry& e) {
    if (file_) file_->append(m, e); else stream_->append(m, e);
  }
  void finish() {
    if (file_) file_->finish(); else stream_->finish();
  }
  void annotate(const std::string& line) {
    if (file_) file_->annotate(line); else stream_->annotate(line);
  }

 private:
  std::unique_ptr<TableWriter> file_;
  std::unique_ptr<StreamTable> stream_;
};

class Progress {
 public:
  Progress(std::ostream& err, bool quiet, std::int64_t lo, std::int64_t hi)
      : err_(err), quiet_(quiet), lo_(lo), hi_(hi), start_(Clock::now()),
        last_(start_) {}
  void tick(std::int64_t m) {
    if (quiet_) return;
    const auto now = Clock::now();
    if (now - last_ < std::chrono::seconds(2) && m != hi_) return;
    last_ = now;
    const double secs = std::chrono::duration<double>(now - start_).count();
    err_ << "progress: m=" << m << " (" << (m - lo_ + 1) << "/" << (hi_ - lo_ + 1)
         << ") " << static_cast<long>(secs) << "s\n";
  }

 private:
  std::ostream& err_;
  bool quiet_;
  std::int64_t lo_;
  std::int64_t hi_;
  Clock::time_point start_;
  Clock::time_point last_;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  const std::atomic<bool>* interrupted;
  bool stop_requested() const { return interrupted && interrupted->load(); }
};

// ---- find -----------------------------------------------------------------

struct FindArgs {
  std::int64_t m = 0;
  ConstraintFlags cons;
  std::string format = "table";
  bool stats = false;
};

int cmd_find(const FindArgs& a, Context& ctx) {
  const SearchConstraints cons = a.cons.build();
  SearchStats stats;
  const auto start = Clock::now();
  TableEntry e;
  e.rep = find_representation(a.m, cons, &stats);
  if (a.format == "json") {
    ctx.out << entry_json(a.m, e, false).dump() << '\n';
  } else {
    ctx.out << format_entry(a.m, e) << '\n';
  }
  if (a.stats) {
    ctx.err << "nodes=" << stats.nodes << " max_depth=" << stats.max_depth
            << " depth_limit=" << stats.depth_limit
            << " escalations=" << stats.escalations << " seconds="
            << std::chrono::duration<double>(Clock::now() - start).count() << '\n';
  }
  return e.rep ? kOk : kNegative;
}

// ---- enumerate ------------------------------------------------------------

struct EnumerateArgs {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  ConstraintFlags cons;
  bool fallback = false;
  unsigned jobs = default_jobs();
  std::string out;
  bool resume = false;
  std::string format = "table";
  bool quiet = false;
};

void summarize(const RepTable& table, std::ostream& err) {
  const auto reps = representable_values(table);
  const auto count = static_cast<std::int64_t>(table.entries.size());
  err << "summary: entries=" << count << " representable=" << reps.size()
      << " none=" << (count - static_cast<std::int64_t>(reps.size()));
  if (table.header.fallback) err << " fallback=" << join(fallback_values(table));
  if (auto f = find_frontier(table)) err << " largest_none=" << *f;
  err << '\n';
}

int cmd_enumerate(const EnumerateArgs& a, Context& ctx) {
  if (a.lo < 1 || a.hi < a.lo) {
    ctx.err << "enumerate: need 1 <= lo <= hi\n";
    return kUsage;
  }
  if (a.resume && (a.out.empty() || a.format != "table")) {
    ctx.err << "enumerate: --resume needs --out with table format\n";
    return kUsage;
  }
  TableHeader header;
  header.constraints = a.cons.build();
  if (a.fallback) {
    SearchConstraints fb;
    fb.d = header.constraints.d;
    header.fallback = fb;
  }
  header.lo = a.lo;
  header.hi = a.hi;

  Progress progress(ctx.err, a.quiet, a.lo, a.hi);
  EnumerateOptions opts;
  opts.jobs = a.jobs;
  opts.should_stop = [&] { return ctx.stop_requested(); };

  RepTable loaded;
  std::optional<TableSink> sink;
  std::ofstream json_file;
  std::ostream* json_out = nullptr;
  const bool json = a.format == "json";
  if (json) {
    if (!a.out.empty()) {
      json_file.open(resolve_output(a.out), std::ios::binary | std::ios::trunc);
      if (!json_file) {
        ctx.err << "enumerate: cannot write " << a.out << '\n';
        return kIo;
      }
      json_out = &json_file;
    } else {
      json_out = &ctx.out;
    }
  } else if (!a.out.empty()) {
    sink = TableSink::to_file(resolve_output(a.out), header, a.resume, loaded);
    if (!loaded.entries.empty()) {
      opts.resume_from = &loaded;
      ctx.err << "resuming after m=" << loaded.last() << '\n';
    }
  } else {
    sink = TableSink::to_stream(ctx.out, header);
  }

  opts.on_entry = [&](std::int64_t m, const TableEntry& e) {
    if (json) {
      *json_out << entry_json(m, e, header.fallback.has_value()).dump() << '\n';
    } else {
      sink->append(m, e);
    }
    progress.tick(m);
  };
  const RepTable table = enumerate_range(a.lo, a.hi, header.constraints,
                                         header.fallback, opts);
  if (sink) sink->finish();
  if (json_out) json_out->flush();
  summarize(table, ctx.err);
  if (!table.complete()) {
    ctx.err << "interrupted after m=" << table.last() << "; checkpoint written\n";
    return kInterrupted;
  }
  return kOk;
}

// ---- check-set ------------------------------------------------------------

struct CheckSetArgs {
  std::string path;
  ConstraintFlags cons;
};

int cmd_check_set(const CheckSetArgs& a, Context& ctx) {
  const SearchConstraints cons = a.cons.build();
  const TranslationSet ts = read_translation_set(a.path, cons);
  bool ok = !ts.empty();
  for (std::size_t i = 0; i < ts.members.size(); ++i) {
    const auto& r = ts.members[i];
    const ValidationReport report = validate(r);
    ctx.out << "member " << (i + 1) << ": " << to_string(r)
            << " scale=" << scale(r, cons.d) << " shift=" << shift(r, cons.d);
    if (report) {
      ctx.out << " valid\n";
    } else {
      ok = false;
      ctx.out << " INVALID: " << report.summary() << '\n';
    }
  }
  if (ts.empty()) {
    ctx.out << "complete: no (empty set)\n";
    return kNegative;
  }
  try {
    ts.domain(cons.d);
  } catch (const std::invalid_argument& e) {
    ctx.out << "domain: " << e.what() << '\n';
    ok = false;
  }
  const CompletenessReport c = check_completeness(ts, cons.d);
  ctx.out << "complete: " << (c.complete ? "yes" : "no") << " modulus=" << c.modulus;
  if (!c.complete) {
    std::vector<std::int64_t> head(
        c.uncovered.begin(),
        c.uncovered.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(20, c.uncovered.size())));
    ctx.out << " uncovered=" << join(head);
    if (c.uncovered.size() > head.size()) ctx.out << ",...";
    ok = false;
  }
  ctx.out << '\n';
  return ok ? kOk : kNegative;
}

// ---- prove ----------------------------------------------------------------

struct ProveArgs {
  std::string set;
  std::int64_t frontier = 0;
  ConstraintFlags cons;
  unsigned jobs = default_jobs();
  std::string out;
  bool check_frontier_none = false;
  std::optional<std::int64_t> limit;
  bool resume = false;
  bool quiet = false;
};

int cmd_prove(const ProveArgs& a, Context& ctx) {
  if (a.resume && a.out.empty()) {
    ctx.err << "prove: --resume needs --out\n";
    return kUsage;
  }
  const unsigned d = a.cons.power;
  const TranslationSet ts = read_translation_set(a.set, a.cons.build());
  if (ts.empty()) {
    ctx.out << "# verdict: FAILED empty translation set\n";
    return kNegative;
  }
  for (const auto& r : ts.members) {
    const ValidationReport report = validate(r);
    if (!report) {
      ctx.out << "# verdict: FAILED invalid member " << to_string(r) << ": "
              << report.summary() << '\n';
      return kNegative;
    }
  }
  SearchConstraints cons;
  try {
    cons = ts.domain(d);
  } catch (const std::invalid_argument& e) {
    ctx.out << "# verdict: FAILED " << e.what() << '\n';
    return kNegative;
  }
  const CompletenessReport completeness = check_completeness(ts, d);
  if (!completeness.complete) {
    ctx.err << "prove: translation set is incomplete\n";
    ctx.out << "# verdict: FAILED incomplete uncovered residue "
            << completeness.uncovered.front() << " mod " << completeness.modulus
            << '\n';
    return kNegative;
  }
  if (auto bad = check_induction_step(ts, a.frontier, d)) {
    ctx.out << "# verdict: FAILED induction step: " << *bad << '\n';
    return kNegative;
  }

  const std::int64_t q = ts.max_scale(d);
  const std::int64_t s = ts.max_shift(d);
  std::ostringstream pre;
  pre << "# theorem t=" << cons.t;
  if (!cons.avoid.empty()) pre << " avoid=" << join(cons.avoid);
  if (d != 2) pre << " d=" << d;
  pre << " frontier=" << a.frontier << " q=" << q << " s=" << s << '\n';
  pre << "# completeness: COMPLETE modulus=" << completeness.modulus << '\n';
  pre << "# induction: OK\n";

  bool frontier_ok = true;
  if (a.check_frontier_none) {
    const auto rep = find_representation(a.frontier, cons);
    frontier_ok = !rep;
    pre << "# frontier-none: " << (frontier_ok ? "CERTIFIED" : "FAILED")
        << " m=" << a.frontier;
    if (rep) pre << " representation " << rep->to_string();
    pre << '\n';
  }

  TableHeader header;
  header.constraints = cons;
  header.lo = a.frontier + 1;
  header.hi = q * a.frontier + s;

  RepTable loaded;
  TableSink sink = a.out.empty()
                       ? TableSink::to_stream(ctx.out, header, pre.str())
                       : TableSink::to_file(resolve_output(a.out), header,
                                            a.resume, loaded, pre.str());
  if (!frontier_ok) {
    sink.finish();
    const std::string v = "# verdict: FAILED m=" + std::to_string(a.frontier);
    sink.annotate(v);
    if (!a.out.empty()) ctx.out << v << '\n';
    return kNegative;
  }
  const std::int64_t resumed_through = loaded.last();
  if (!loaded.entries.empty()) ctx.err << "resuming after m=" << resumed_through << '\n';

  Progress progress(ctx.err, a.quiet, header.lo,
                    a.limit ? std::min(header.hi, header.lo + *a.limit - 1) : header.hi);
  FrontierOptions opts;
  opts.jobs = a.jobs;
  opts.limit = a.limit;
  opts.should_stop = [&] { return ctx.stop_requested(); };
  opts.on_witness = [&](std::int64_t m, const Representation& rep) {
    if (m > resumed_through) sink.append(m, TableEntry{rep, false});
    progress.tick(m);
  };
  const RepresentabilityOracle oracle =
      [&](std::int64_t m) -> std::optional<Representation> {
    if (m <= resumed_through) return loaded.entries.at(m).rep;
    return find_representation(m, cons);
  };
  const FrontierCertificate cert =
      frontier_theorem_check(ts, a.frontier, oracle, opts, d);

  std::string verdict;
  int code = kNegative;
  if (cert.first_failure) {
    sink.append(*cert.first_failure, TableEntry{});
    verdict = "# verdict: FAILED m=" + std::to_string(*cert.first_failure);
  } else if (cert.established) {
    verdict = "# verdict: ESTABLISHED m=" + std::to_string(a.frontier);
    code = kOk;
  } else if (ctx.stop_requested()) {
    sink.finish();
    ctx.err << "interrupted after m=" << cert.checked_through
            << "; checkpoint written\n";
    return kInterrupted;
  } else {
    verdict = "# verdict: PARTIAL m=" + std::to_string(cert.checked_through);
  }
  sink.finish();
  sink.annotate(verdict);
  if (!a.out.empty()) ctx.out << verdict << '\n';
  ctx.err << "base interval [" << cert.base_lo << ", " << cert.base_hi
          << "] checked through " << cert.checked_through << '\n';
  return code;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string path;
  ConstraintFlags cons;
  std::int64_t from = 0;
};

int cmd_verify(const VerifyArgs& a, Context& ctx) {
  VerifyOptions opts;
  opts.constraints_from = a.from;
  const VerifyReport report = verify_table(a.path, a.cons.build(), opts);
  for (const auto& l : report.lines) {
    if (!l.valid) ctx.out << "line " << l.line << " m=" << l.m << " INVALID\n";
  }
  ctx.out << "lines=" << report.lines.size() << " valid=" << report.valid
          << " invalid=" << report.invalid << " none=" << report.none
          << " constraint_exceptions=" << join(report.constraint_exceptions)
          << '\n';
  return report.ok() ? kOk : kNegative;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const std::atomic<bool>* interrupted) {
  CLI::App app{"Representations of integers as sums of powers whose reciprocals sum to 1"};
  app.name("unitsq");
  app.require_subcommand(1);

  FindArgs find;
  auto* c_find = app.add_subcommand("find", "Search one m");
  c_find->add_option("m", find.m, "Target power sum")->required()->check(CLI::PositiveNumber);
  add_constraint_flags(c_find, find.cons);
  c_find->add_option("--format", find.format)->check(CLI::IsMember({"table", "json"}));
  c_find->add_flag("--stats", find.stats, "Search statistics to stderr");

  EnumerateArgs en;
  auto* c_en = app.add_subcommand("enumerate", "Sweep [lo, hi] into a table");
  c_en->add_option("lo", en.lo)->required();
  c_en->add_option("hi", en.hi)->required();
  add_constraint_flags(c_en, en.cons);
  c_en->add_flag("--fallback", en.fallback,
                 "Retry failures without t/avoid; such entries are fallback-sourced");
  c_en->add_option("--jobs", en.jobs)->check(CLI::PositiveNumber);
  c_en->add_option("--out", en.out, "Output file (default stdout)");
  c_en->add_flag("--resume", en.resume, "Continue a partial --out file");
  c_en->add_option("--format", en.format)->check(CLI::IsMember({"table", "json"}));
  c_en->add_flag("--quiet", en.quiet, "No progress on stderr");

  CheckSetArgs cs;
  auto* c_cs = app.add_subcommand("check-set", "Validate a translation set file");
  c_cs->add_option("path", cs.path)->required();
  add_constraint_flags(c_cs, cs.cons);

  ProveArgs pr;
  auto* c_pr = app.add_subcommand("prove", "Verify a frontier claim with a translation set");
  c_pr->add_option("--set", pr.set)->required();
  c_pr->add_option("--frontier", pr.frontier)->required()->check(CLI::PositiveNumber);
  add_constraint_flags(c_pr, pr.cons);
  c_pr->add_option("--jobs", pr.jobs)->check(CLI::PositiveNumber);
  c_pr->add_option("--out", pr.out, "Certificate file (default stdout)");
  c_pr->add_flag("--check-frontier-none", pr.check_frontier_none,
                 "Also certify that the frontier itself has no representation");
  c_pr->add_option("--limit", pr.limit, "Check only the first N base integers")
      ->check(CLI::PositiveNumber);
  c_pr->add_flag("--resume", pr.resume, "Continue a partial --out certificate");
  c_pr->add_flag("--quiet", pr.quiet, "No progress on stderr");

  VerifyArgs ve;
  auto* c_ve = app.add_subcommand("verify", "Check every line of a table file");
  c_ve->add_option("path", ve.path)->required();
  add_constraint_flags(c_ve, ve.cons);
  c_ve->add_option("--from", ve.from, "Check t/avoid only for m >= this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Context ctx{out, err, interrupted};
  try {
    if (*c_find) return cmd_find(find, ctx);
    if (*c_en) return cmd_enumerate(en, ctx);
    if (*c_cs) return cmd_check_set(cs, ctx);
    if (*c_pr) return cmd_prove(pr, ctx);
    if (*c_ve) return cmd_verify(ve, ctx);
  } catch (const TableError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    // Malformed input files and inconsistent constraint values.
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, const std::atomic<bool>* interrupted) {
  std::vector<const char*> argv{"unitsq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err, interrupted);
}

}  // namespace unitsq::cli
