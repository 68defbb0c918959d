#include "support/properties.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "support/oracles.hpp"
#include "unitsq/table.hpp"

namespace unitsq::testing {

namespace {

std::string show(const std::optional<Representation>& r) {
  return r ? "{" + r->to_string() + "}" : "NONE";
}

std::string show(const SearchConstraints& c) {
  std::ostringstream os;
  os << "d=" << c.d << " t=" << c.t << " avoid=";
  for (std::size_t i = 0; i < c.avoid.size(); ++i) {
    os << (i ? "," : "") << c.avoid[i];
  }
  return os.str();
}

PropertyResult fail(PropertyResult r, std::string why) {
  r.ok = false;
  r.detail = std::move(why);
  return r;
}

PropertyResult pass(PropertyResult r) {
  if (r.detail.empty()) r.detail = std::to_string(r.cases) + " cases";
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// Compares construct with the brute-force walk for one (m, cons).
std::optional<std::string> compare_with_oracle(std::int64_t m,
                                               const SearchConstraints& cons) {
  const auto a = find_representation(m, cons);
  const auto b = brute_force_oracle(m, cons);
  if (a.has_value() != b.has_value()) {
    return "m=" + std::to_string(m) + " " + show(cons) + ": construct " +
           show(a) + ", oracle " + show(b);
  }
  for (const auto* r : {&a, &b}) {
    if (*r && !is_representation(**r, m, cons)) {
      return "m=" + std::to_string(m) + ": " + show(*r) + " does not certify";
    }
  }
  return std::nullopt;
}

std::vector<std::int64_t> random_avoid(std::mt19937_64& rng, std::int64_t top,
                                       int max_count) {
  std::vector<std::int64_t> avoid;
  const int count = static_cast<int>(uniform(rng, 0, max_count));
  for (int i = 0; i < count; ++i) avoid.push_back(uniform(rng, 2, top));
  std::sort(avoid.begin(), avoid.end());
  avoid.erase(std::unique(avoid.begin(), avoid.end()), avoid.end());
  return avoid;
}

// Exact 1 - 1/k prefixes to start translation walks from.
std::vector<std::int64_t> prefix_seed(std::int64_t k) {
  switch (k) {
    case 2: return {2};
    case 3: return {2, 6};
    case 4: return {2, 4};
    default: return {2, 3};  // 5/6, k = 6
  }
}

}  // namespace

std::vector<std::int64_t> random_split_walk(std::mt19937_64& rng,
                                            std::vector<std::int64_t> start,
                                            int steps, std::int64_t max_element) {
  std::set<std::int64_t> set(start.begin(), start.end());
  for (int i = 0; i < steps; ++i) {
    auto it = set.begin();
    std::advance(it, uniform(rng, 0, static_cast<std::int64_t>(set.size()) - 1));
    const std::int64_t x = *it;
    std::vector<std::int64_t> parts;
    if (uniform(rng, 0, 2) == 0) {
      parts = {2 * x, 3 * x, 6 * x};  // 1/x = 1/2x + 1/3x + 1/6x
    } else {
      parts = {x + 1, x * (x + 1)};   // 1/x = 1/(x+1) + 1/(x(x+1))
    }
    const bool fits = std::all_of(parts.begin(), parts.end(), [&](auto v) {
      return v <= max_element && v != x && !set.count(v);
    });
    if (!fits || parts[0] == parts[1]) continue;
    set.erase(x);
    set.insert(parts.begin(), parts.end());
  }
  return {set.begin(), set.end()};
}

PropertyResult check_oracle_equivalence(std::int64_t hi,
                                        const SearchConstraints& cons) {
  PropertyResult r{"oracle equivalence (" + show(cons) + ")"};
  for (std::int64_t m = 1; m <= hi; ++m, ++r.cases) {
    if (auto bad = compare_with_oracle(m, cons)) return fail(r, *bad);
  }
  return pass(r);
}

PropertyResult check_avoidance_fuzz(int trials, std::uint64_t seed) {
  PropertyResult r{"avoidance fuzz"};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < trials; ++i, ++r.cases) {
    SearchConstraints cons;
    cons.d = uniform(rng, 0, 1) ? 2 : 1;
    cons.t = uniform(rng, 1, 3);
    cons.avoid = random_avoid(rng, 24, 3);
    // Brute force reaches m <= 24 at d = 1 and m <= 400 at d = 2; beyond
    // that only avoidance and certification are checked.
    const std::int64_t oracle_top = cons.d == 1 ? 24 : 400;
    const std::int64_t m = uniform(rng, 1, cons.d == 1 ? 300 : oracle_top);
    if (m <= oracle_top) {
      if (auto bad = compare_with_oracle(m, cons)) return fail(r, *bad);
      continue;
    }
    const auto found = find_representation(m, cons);
    if (!found) continue;
    for (auto a : cons.avoid) {
      if (found->contains(a)) {
        return fail(r, "m=" + std::to_string(m) + " " + show(cons) + ": " +
                           show(found) + " contains " + std::to_string(a));
      }
    }
    if (!is_representation(*found, m, cons)) {
      return fail(r, "m=" + std::to_string(m) + ": " + show(found) +
                         " does not certify");
    }
  }
  return pass(r);
}

PropertyResult check_bound_soundness(int reps, std::uint64_t seed) {
  PropertyResult r{"bound soundness"};
  std::mt19937_64 rng(seed);
  const std::vector<std::vector<std::int64_t>> seeds = {
      {2, 3, 6}, {2, 4, 6, 12}, {2, 3, 10, 15}, {2, 3, 7, 42}};

  auto check_set = [&](const std::vector<std::int64_t>& xs,
                       unsigned d) -> std::optional<std::string> {
    // Walk suffixes from the smallest one outward, accumulating exactly.
    Fraction s;
    std::int64_t n = 0;
    for (std::size_t i = xs.size(); i-- > 0;) {
      s += unit_fraction(xs[i]);
      n += naive_power_sum({xs[i]}, d);
      const std::int64_t t = i == 0 ? 1 : xs[i - 1] + 1;
      const CandidateRange range = bounds_for_min(t, s, n, d);
      const auto size = static_cast<std::int64_t>(xs.size() - i);
      if (xs[i] < range.lo || xs[i] > range.hi) {
        return "element " + std::to_string(xs[i]) + " outside [" +
               std::to_string(range.lo) + ", " + std::to_string(range.hi) +
               "] for s=" + s.to_string() + " n=" + std::to_string(n);
      }
      if (size > max_cardinality(s, n, d)) {
        return "suffix of size " + std::to_string(size) +
               " exceeds max_cardinality for s=" + s.to_string();
      }
    }
    return std::nullopt;
  };

  // One in five comes from construct on a random m with d = 1, where every
  // m > 77 is representable; the rest from split walks, checked at d = 1..3.
  for (int i = 0; i < reps; ++i, ++r.cases) {
    std::vector<std::int64_t> xs;
    std::vector<unsigned> powers;
    if (i % 5 == 0) {
      SearchConstraints cons;
      cons.d = 1;
      const std::int64_t m = uniform(rng, 78, 600);
      const auto found = find_representation(m, cons);
      if (!found || !is_representation(*found, m, cons)) {
        return fail(r, "construct failed to certify m=" + std::to_string(m) +
                           " at d=1");
      }
      xs.assign(found->elements().begin(), found->elements().end());
      powers = {1, 2};
    } else {
      const auto& start = seeds[static_cast<std::size_t>(i) % seeds.size()];
      xs = random_split_walk(rng, start, static_cast<int>(uniform(rng, 0, 12)),
                             100000);
      powers = {1, 2, 3};
    }
    if (!naive_reciprocal_sum_is(xs, 1, 1)) {
      return fail(r, "generator produced a non-representation");
    }
    for (unsigned d : powers) {
      if (auto bad = check_set(xs, d)) {
        return fail(r, "d=" + std::to_string(d) + " {" +
                           Representation(xs).to_string() + "}: " + *bad);
      }
    }
  }
  return pass(r);
}

PropertyResult check_termination(std::int64_t hi) {
  PropertyResult r{"termination depth"};
  for (unsigned d : {1u, 2u}) {
    SearchConstraints cons;
    cons.d = d;
    for (std::int64_t m = 1; m <= hi; ++m, ++r.cases) {
      SearchStats stats;
      find_representation(m, cons, &stats);
      if (static_cast<std::int64_t>(stats.max_depth) > stats.depth_limit) {
        return fail(r, "m=" + std::to_string(m) + " depth " +
                           std::to_string(stats.max_depth) + " > " +
                           std::to_string(stats.depth_limit));
      }
    }
  }
  return pass(r);
}

PropertyResult check_monotone_t(std::int64_t hi, std::int64_t max_t) {
  PropertyResult r{"monotone t"};
  for (unsigned d : {1u, 2u}) {
    for (std::int64_t m = 1; m <= hi; ++m) {
      bool prev = true;
      for (std::int64_t t = 1; t <= max_t; ++t, ++r.cases) {
        SearchConstraints cons;
        cons.t = t;
        cons.d = d;
        const bool found = find_representation(m, cons).has_value();
        if (found && !prev) {
          return fail(r, "m=" + std::to_string(m) + " d=" + std::to_string(d) +
                             ": found at t=" + std::to_string(t) +
                             " but not at t=" + std::to_string(t - 1));
        }
        prev = found;
      }
    }
  }
  return pass(r);
}

PropertyResult check_search_modes(std::int64_t hi, int random_cases,
                                  std::uint64_t seed) {
  PropertyResult r{"search modes agree"};
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::string, SearchOptions>> modes;
  {
    SearchOptions o;
    o.window_bound = false;
    o.residue_bound = false;
    modes.emplace_back("plain", o);
    o.window_bound = true;
    modes.emplace_back("window only", o);
    o.window_bound = false;
    o.residue_bound = true;
    modes.emplace_back("residues only", o);
    SearchOptions big;
    big.arithmetic = Arithmetic::kBig;
    modes.emplace_back("gmp", big);
  }

  auto compare = [&](const SearchConstraints& cons, const Fraction& s,
                     std::int64_t n) -> std::optional<std::string> {
    const auto a = construct(cons, s, n);
    for (const auto& [name, opts] : modes) {
      const auto b = construct(cons, s, n, nullptr, opts);
      if (a != b) {
        return "s=" + s.to_string() + " n=" + std::to_string(n) + " " + show(cons) +
               ": " + show(a) + " / " + name + " " + show(b);
      }
    }
    return std::nullopt;
  };

  for (std::int64_t m = 1; m <= hi; ++m, ++r.cases) {
    if (auto bad = compare(SearchConstraints{}, Fraction(1), m)) return fail(r, *bad);
  }
  for (int i = 0; i < random_cases; ++i, ++r.cases) {
    SearchConstraints cons;
    cons.d = static_cast<unsigned>(uniform(rng, 1, 3));
    cons.t = uniform(rng, 1, 4);
    cons.avoid = random_avoid(rng, 40, 3);
    const std::int64_t top = cons.d == 1 ? 400 : cons.d == 2 ? 2500 : 40000;
    if (auto bad = compare(cons, Fraction(1), uniform(rng, 1, top))) return fail(r, *bad);
  }
  // Partial targets that are known to be reachable: the reciprocal and
  // power sums of a random set, so denominators carry arbitrary primes.
  for (int i = 0; i < random_cases; ++i, ++r.cases) {
    SearchConstraints cons;
    cons.d = static_cast<unsigned>(uniform(rng, 1, 2));
    std::vector<std::int64_t> ys;
    const auto size = uniform(rng, 1, 5);
    while (static_cast<std::int64_t>(ys.size()) < size) {
      const auto y = uniform(rng, 2, 40);
      if (std::find(ys.begin(), ys.end(), y) == ys.end()) ys.push_back(y);
    }
    std::sort(ys.begin(), ys.end());
    cons.t = uniform(rng, 1, ys.front());
    const Representation y(ys);
    const Fraction s = y.reciprocal_sum();
    const std::int64_t n = y.power_sum(cons.d);
    const auto found = construct(cons, s, n);
    if (!found || found->reciprocal_sum() != s || found->power_sum(cons.d) != n ||
        found->min() < cons.t) {
      return fail(r, "no completion found for the sums of " + y.to_string() + " " + show(cons));
    }
    if (auto bad = compare(cons, s, n)) return fail(r, *bad);
  }
  return pass(r);
}

PropertyResult check_translation_fuzz(int trials, std::uint64_t seed) {
  PropertyResult r{"translation re-certification"};
  std::mt19937_64 rng(seed);

  // Inputs: representations with a known minimum.
  SearchConstraints six;
  six.t = 6;
  const auto rep2579 = find_representation(2579, six);
  if (!rep2579) return fail(r, "no 6-representation of 2579 found");
  const std::vector<std::int64_t> base6(rep2579->elements().begin(),
                                        rep2579->elements().end());

  std::vector<Translation> pool;
  for (const auto& m : six_translation_set().members) pool.push_back(m);
  for (const auto& m : avoiding_family().members) pool.push_back(m);
  pool.push_back(MinTranslation{2, {2}, 2});
  int generated = 0;
  for (int attempt = 0; generated < 60 && attempt < 20000; ++attempt) {
    const std::int64_t k = std::vector<std::int64_t>{2, 3, 4, 6}[uniform(rng, 0, 3)];
    const auto ys = random_split_walk(rng, prefix_seed(k),
                                      static_cast<int>(uniform(rng, 0, 6)), 3000);
    Translation cand;
    if (uniform(rng, 0, 1)) {
      cand = MinTranslation{k, ys, uniform(rng, 1, ys.front())};
    } else {
      // Mark every multiple-of-k prefix quotient forbidden, then close S.
      std::vector<std::int64_t> avoid = random_avoid(rng, 60, 2);
      for (auto y : ys) {
        if (y % k == 0 && y / k != 1) avoid.push_back(y / k);
      }
      std::sort(avoid.begin(), avoid.end());
      avoid.erase(std::unique(avoid.begin(), avoid.end()), avoid.end());
      cand = AvoidingTranslation{k, ys, avoid};
    }
    if (validate(cand).ok()) {
      pool.push_back(cand);
      ++generated;
    }
  }

  for (int i = 0; i < trials; ++i) {
    const Translation& tr =
        pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(pool.size()) - 1))];
    const unsigned d = static_cast<unsigned>(uniform(rng, 1, 2));
    const SearchConstraints cons = domain_constraints(tr, d);
    std::vector<std::int64_t> start;
    if (cons.t <= 2) {
      start = std::vector<std::vector<std::int64_t>>{{2, 3, 6}, {2, 4, 6, 12}}[uniform(rng, 0, 1)];
    } else if (cons.t <= base6.front()) {
      start = base6;
    } else {
      continue;
    }
    const auto xs = random_split_walk(rng, start,
                                      static_cast<int>(uniform(rng, 0, 5)), 5000);
    const Representation x(xs);
    const std::int64_t m = naive_power_sum(xs, d);
    if (!is_representation(x, m, cons)) continue;  // input outside the domain
    ++r.cases;
    Representation y;
    try {
      y = apply_translation(tr, x, m, d);
    } catch (const std::exception& e) {
      return fail(r, to_string(tr) + " on {" + x.to_string() + "}: " + e.what());
    }
    const std::vector<std::int64_t> ys(y.elements().begin(), y.elements().end());
    const std::int64_t target = scale(tr, d) * m + shift(tr, d);
    if (naive_power_sum(ys, d) != target || !naive_reciprocal_sum_is(ys, 1, 1) ||
        !is_representation(y, target, cons)) {
      return fail(r, to_string(tr) + " on {" + x.to_string() + "} gave {" +
                         y.to_string() + "}, not a representation of " +
                         std::to_string(target));
    }
  }
  if (r.cases == 0) return fail(r, "no applicable cases generated");
  r.detail = std::to_string(r.cases) + " applications over " +
             std::to_string(pool.size()) + " translations";
  return r;
}

PropertyResult check_family_constants() {
  PropertyResult r{"translation constants"};
  auto expect_shifts = [&](const TranslationSet& ts,
                           const std::vector<std::int64_t>& want)
      -> std::optional<std::string> {
    if (ts.members.size() != want.size()) return "wrong member count";
    for (std::size_t i = 0; i < want.size(); ++i, ++r.cases) {
      const auto& tr = ts.members[i];
      const auto& ys = std::visit([](const auto& v) -> const std::vector<std::int64_t>& {
        return v.ys;
      }, tr);
      if (scale(tr) != 4 || shift(tr) != want[i] ||
          naive_power_sum(ys, 2) != want[i] || !validate(tr).ok()) {
        return to_string(tr) + ": scale " + std::to_string(scale(tr)) +
               ", shift " + std::to_string(shift(tr)) + ", expected 4, " +
               std::to_string(want[i]);
      }
    }
    return std::nullopt;
  };
  if (auto bad = expect_shifts(avoiding_family(), {4, 16545, 1822, 14423})) {
    return fail(r, *bad);
  }
  if (auto bad = expect_shifts(six_translation_set(), {13036, 13657, 13946, 12747})) {
    return fail(r, *bad);
  }
  // The affine maps themselves, on {2,3,6} (49).
  const Representation x{2, 3, 6};
  for (const auto& tr : avoiding_family().members) {
    ++r.cases;
    const Representation y = apply_translation(tr, x, 49);
    if (y.power_sum(2) != 4 * 49 + shift(tr)) {
      return fail(r, to_string(tr) + " does not map 49 to 4*49 + shift");
    }
  }
  if (!is_complete_set(six_translation_set()) || !is_complete_set(avoiding_family())) {
    return fail(r, "built-in family reported incomplete");
  }
  return pass(r);
}

PropertyResult check_completeness_crosscheck(int samples, std::uint64_t seed) {
  PropertyResult r{"completeness cross-check"};
  std::mt19937_64 rng(seed);
  TranslationSet lone;
  lone.members.push_back(MinTranslation{2, {2}, 2});
  TranslationSet mixed;  // scales 4 and 9
  mixed.members.push_back(MinTranslation{2, {2}, 2});
  mixed.members.push_back(MinTranslation{3, {4, 5, 6, 20}, 3});

  for (const auto* ts : {&lone, &mixed}) {
    for (const auto& tr : ts->members) {
      if (!validate(tr).ok()) return fail(r, to_string(tr) + " invalid");
    }
  }
  const std::vector<std::pair<std::string, const TranslationSet*>> sets = {
      {"six", nullptr}, {"avoiding", nullptr}, {"lone", &lone}, {"mixed", &mixed}};
  const TranslationSet six = six_translation_set();
  const TranslationSet avoiding = avoiding_family();

  for (const auto& [name, given] : sets) {
    const TranslationSet& ts =
        given ? *given : (name == "six" ? six : avoiding);
    std::vector<ResidueClass> classes;
    for (const auto& tr : ts.members) {
      const auto& ys = std::visit([](const auto& v) -> const std::vector<std::int64_t>& {
        return v.ys;
      }, tr);
      const std::int64_t k = std::visit([](const auto& v) { return v.k; }, tr);
      classes.push_back({k * k, naive_power_sum(ys, 2)});
    }
    const CompletenessReport report = check_completeness(ts);
    const std::set<std::int64_t> uncovered(report.uncovered.begin(),
                                           report.uncovered.end());
    for (int i = 0; i < samples; ++i, ++r.cases) {
      const std::int64_t m = uniform(rng, -1000000000, 1000000000);
      const std::int64_t residue =
          ((m % report.modulus) + report.modulus) % report.modulus;
      const bool direct = naive_covers(classes, m);
      const bool matched = matching_member(ts, m).has_value();
      if (direct != !uncovered.count(residue) || direct != matched) {
        return fail(r, name + ": disagreement at m=" + std::to_string(m));
      }
    }
    if (report.complete != uncovered.empty() ||
        report.complete != is_complete_set(ts)) {
      return fail(r, name + ": inconsistent completeness report");
    }
    const bool expect_complete = name == "six" || name == "avoiding";
    if (report.complete != expect_complete) {
      return fail(r, name + ": unexpected completeness verdict");
    }
  }
  return pass(r);
}

PropertyResult check_table_roundtrip(const std::filesystem::path& dir) {
  PropertyResult r{"table round trip"};
  std::filesystem::create_directories(dir);
  const auto a = dir / "roundtrip_a.txt";
  const auto b = dir / "roundtrip_b.txt";

  SearchConstraints squares;
  const RepTable t1 = enumerate_range(1, 350, squares, std::nullopt);
  write_table(t1, a.string());
  if (read_table(a.string()) != t1) return fail(r, "d=2 table changed on read");
  write_table(enumerate_range(1, 350, squares, std::nullopt), b.string());
  if (slurp(a) != slurp(b)) return fail(r, "regeneration is not byte-identical");
  r.cases += 350;

  // Fallback flags survive the trip: t=2 sweeps at d=1 fall back to t=1.
  SearchConstraints strict;
  strict.d = 1;
  strict.t = 2;
  SearchConstraints loose;
  loose.d = 1;
  const RepTable t2 = enumerate_range(1, 120, strict, loose);
  write_table(t2, a.string());
  const RepTable back = read_table(a.string());
  if (back != t2) return fail(r, "fallback table changed on read");
  if (fallback_values(back) != fallback_values(t2) || fallback_values(t2).empty()) {
    return fail(r, "fallback entries not recovered");
  }
  r.cases += 120;

  // A corrupted representation is rejected with its line number.
  write_table(t1, a.string());
  std::string text = slurp(a);
  const auto pos = text.find("200: 2 4 6 12\n");
  if (pos == std::string::npos) return fail(r, "expected line for 200 missing");
  text.replace(pos, 14, "200: 2 4 6 13\n");
  {
    std::ofstream out(b, std::ios::binary);
    out << text;
  }
  try {
    read_table(b.string());
    return fail(r, "corrupted table accepted");
  } catch (const TableError& e) {
    const auto line = static_cast<std::size_t>(
        std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n') + 1);
    if (e.line() != line) {
      return fail(r, "corruption reported at line " + std::to_string(e.line()) +
                         ", expected " + std::to_string(line));
    }
  }
  ++r.cases;
  return pass(r);
}

PropertyResult check_table_resume(const std::filesystem::path& dir) {
  PropertyResult r{"table resume"};
  std::filesystem::create_directories(dir);
  const auto ref_path = dir / "resume_ref.txt";
  const auto path = dir / "resume_run.txt";
  const std::int64_t hi = 450;
  SearchConstraints cons;
  const RepTable full = enumerate_range(1, hi, cons, std::nullopt);
  write_table(full, ref_path.string());
  const std::string ref = slurp(ref_path);

  for (std::int64_t k : {0, 37, 100, 199, 250, 449}) {
    for (bool early_finish : {false, true}) {
      ++r.cases;
      {
        TableWriter w(path.string(), full.header);
        for (std::int64_t m = 1; m <= k; ++m) w.append(m, full.entries.at(m));
        if (early_finish) {
          w.finish();  // shutdown checkpoint off the interval
        } else {
          w.flush();
        }
      }
      if (!early_finish) {
        std::ofstream torn(path, std::ios::binary | std::ios::app);
        torn << "4";  // half-written line
      }
      RepTable loaded;
      TableWriter w = TableWriter::resume(path.string(), full.header, loaded);
      EnumerateOptions opts;
      opts.resume_from = &loaded;
      opts.on_entry = [&](std::int64_t m, const TableEntry& e) { w.append(m, e); };
      const RepTable done = enumerate_range(1, hi, cons, std::nullopt, opts);
      w.finish();
      if (done != full) {
        return fail(r, "resumed table differs (k=" + std::to_string(k) + ")");
      }
      if (slurp(path) != ref) {
        return fail(r, "resumed file not byte-identical (k=" + std::to_string(k) +
                           (early_finish ? ", early checkpoint)" : ")"));
      }
    }
  }
  return pass(r);
}

PropertyResult check_parallel_equality(std::int64_t lo, std::int64_t hi,
                                       unsigned jobs) {
  PropertyResult r{"parallel equals sequential"};
  SearchConstraints cons;
  EnumerateOptions seq;
  EnumerateOptions par;
  par.jobs = jobs;
  std::vector<std::int64_t> order;
  par.on_entry = [&](std::int64_t m, const TableEntry&) { order.push_back(m); };
  const RepTable a = enumerate_range(lo, hi, cons, std::nullopt, seq);
  const RepTable b = enumerate_range(lo, hi, cons, std::nullopt, par);
  r.cases = static_cast<std::uint64_t>(hi - lo + 1);
  if (a != b) return fail(r, "tables differ");
  std::vector<std::int64_t> want(static_cast<std::size_t>(hi - lo + 1));
  std::iota(want.begin(), want.end(), lo);
  if (order != want) return fail(r, "entries not delivered in ascending order");
  return pass(r);
}

}  // namespace unitsq::testing
