#include "unitsq/translation.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "unitsq/parallel.hpp"

namespace unitsq {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::int64_t multiplier(const Translation& r) {
  return std::visit([](const auto& v) { return v.k; }, r);
}

const std::vector<std::int64_t>& prefix(const Translation& r) {
  return std::visit(
      [](const auto& v) -> const std::vector<std::int64_t>& { return v.ys; }, r);
}

bool in_set_or_one(const std::vector<std::int64_t>& set, std::int64_t v) {
  return v == 1 || std::binary_search(set.begin(), set.end(), v);
}

std::string join(const std::vector<std::int64_t>& v, const char* sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << sep;
    os << v[i];
  }
  return os.str();
}

// Checks shared by both flavors: k >= 2, increasing prefix, and
// sum 1/y == 1 - 1/k. Returns false if the prefix is not even well formed.
bool check_common(std::int64_t k, const std::vector<std::int64_t>& ys,
                  ValidationReport& report) {
  if (k < 2) {
    report.violations.push_back({ViolationKind::kBadMultiplier, 0, k,
                                 "multiplier k=" + std::to_string(k) +
                                     " must be at least 2"});
    return false;
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ys[i] < 1 || (i > 0 && ys[i] <= ys[i - 1])) {
      report.violations.push_back(
          {ViolationKind::kNotIncreasing, i, ys[i],
           "prefix must be strictly increasing positive integers; element " +
               std::to_string(i) + " is " + std::to_string(ys[i])});
      return false;
    }
  }
  Fraction sum;
  for (auto y : ys) sum += unit_fraction(y);
  const Fraction want = frac_sub_unit(Fraction(1), k);
  if (sum != want) {
    report.violations.push_back(
        {ViolationKind::kReciprocalIdentity, 0, 0,
         "reciprocal sum of prefix is " + sum.to_string() + ", expected " +
             want.to_string()});
  }
  return true;
}

}  // namespace

std::int64_t scale(std::int64_t k, unsigned d) {
  std::int64_t out;
  if (!checked_pow(k, d, out)) throw std::overflow_error("scale overflows int64");
  return out;
}

std::int64_t scale(const Translation& r, unsigned d) {
  return scale(multiplier(r), d);
}

std::int64_t shift(const Translation& r, unsigned d) {
  std::int64_t total = 0;
  for (auto y : prefix(r)) {
    std::int64_t p;
    if (!checked_pow(y, d, p) || __builtin_add_overflow(total, p, &total)) {
      throw std::overflow_error("shift overflows int64");
    }
  }
  return total;
}

std::string to_string(const Translation& r) {
  return "(" + std::to_string(multiplier(r)) + "; " + join(prefix(r), ", ") +
         ")";
}

std::string ValidationReport::summary() const {
  return violations.empty() ? "ok" : violations.front().message;
}

ValidationReport validate_min_translation(const MinTranslation& r) {
  ValidationReport report;
  if (!check_common(r.k, r.ys, report)) return report;
  if (r.t < 1) {
    report.violations.push_back({ViolationKind::kBelowMinimum, 0, r.t,
                                 "domain bound t must be at least 1"});
  }
  if (!r.ys.empty() && r.ys.front() < r.t) {
    report.violations.push_back(
        {ViolationKind::kBelowMinimum, 0, r.ys.front(),
         "smallest prefix element " + std::to_string(r.ys.front()) +
             " is below t=" + std::to_string(r.t)});
  }
  for (std::size_t i = 0; i < r.ys.size(); ++i) {
    const std::int64_t y = r.ys[i];
    if (y >= r.t * r.k && y % r.k == 0) {
      report.violations.push_back(
          {ViolationKind::kCollidesWithScaled, i, y,
           "element " + std::to_string(y) + " = " + std::to_string(r.k) +
               "*" + std::to_string(y / r.k) + " may collide with " +
               std::to_string(r.k) + "X (needs y < t*k or k not dividing y)"});
    }
  }
  return report;
}

ValidationReport validate_avoiding_translation(const AvoidingTranslation& r) {
  ValidationReport report;
  if (!check_common(r.k, r.ys, report)) return report;
  std::vector<std::int64_t> avoid = r.avoid;
  std::sort(avoid.begin(), avoid.end());
  avoid.erase(std::unique(avoid.begin(), avoid.end()), avoid.end());
  for (std::size_t i = 0; i < r.ys.size(); ++i) {
    const std::int64_t y = r.ys[i];
    if (std::binary_search(avoid.begin(), avoid.end(), y)) {
      report.violations.push_back({ViolationKind::kPrefixInAvoidSet, i, y,
                                   "prefix element " + std::to_string(y) +
                                       " lies in the avoid set"});
    }
    if (y % r.k == 0 && !in_set_or_one(avoid, y / r.k)) {
      report.violations.push_back(
          {ViolationKind::kMultipleOutsideAvoid, i, y,
           "prefix element " + std::to_string(y) + " = " +
               std::to_string(r.k) + "*" + std::to_string(y / r.k) + " but " +
               std::to_string(y / r.k) + " is not in the avoid set or {1}"});
    }
  }
  for (std::size_t i = 0; i < avoid.size(); ++i) {
    const std::int64_t a = avoid[i];
    if (a % r.k == 0 && !in_set_or_one(avoid, a / r.k)) {
      report.violations.push_back(
          {ViolationKind::kAvoidNotClosed, i, a,
           "avoid element " + std::to_string(a) + " = " + std::to_string(r.k) +
               "*" + std::to_string(a / r.k) + " but " +
               std::to_string(a / r.k) +
               " is not in the avoid set or {1}, so kX may hit it"});
    }
  }
  return report;
}

ValidationReport validate(const Translation& r) {
  return std::visit(
      Overloaded{
          [](const MinTranslation& v) { return validate_min_translation(v); },
          [](const AvoidingTranslation& v) {
            return validate_avoiding_translation(v);
          }},
      r);
}

SearchConstraints domain_constraints(const Translation& r, unsigned d) {
  SearchConstraints cons;
  cons.d = d;
  std::visit(Overloaded{[&](const MinTranslation& v) { cons.t = v.t; },
                        [&](const AvoidingTranslation& v) {
                          cons.avoid = v.avoid;
                        }},
             r);
  cons.validate();
  return cons;
}

Representation apply_translation(const Translation& r, const Representation& x,
                                 std::int64_t m, unsigned d) {
  const ValidationReport report = validate(r);
  if (!report) {
    throw std::invalid_argument("apply_translation: invalid translation " +
                                to_string(r) + ": " + report.summary());
  }
  const SearchConstraints cons = domain_constraints(r, d);
  if (!is_representation(x, m, cons)) {
    throw std::invalid_argument(
        "apply_translation: input {" + x.to_string() +
        "} is not a certified representation of " + std::to_string(m) +
        " in the translation's domain");
  }
  if (std::holds_alternative<AvoidingTranslation>(r) && x.size() == 1) {
    throw std::invalid_argument(
        "apply_translation: {1} is outside the avoiding domain");
  }
  const std::int64_t k = multiplier(r);
  std::vector<std::int64_t> scaled;
  scaled.reserve(x.size());
  for (auto v : x.elements()) {
    std::int64_t kv;
    if (__builtin_mul_overflow(k, v, &kv)) {
      throw std::overflow_error("apply_translation: k*x overflows int64");
    }
    scaled.push_back(kv);
  }
  const auto& ys = prefix(r);
  std::vector<std::int64_t> merged;
  merged.reserve(ys.size() + scaled.size());
  std::merge(ys.begin(), ys.end(), scaled.begin(), scaled.end(),
             std::back_inserter(merged));
  if (std::adjacent_find(merged.begin(), merged.end()) != merged.end()) {
    throw std::logic_error("apply_translation: prefix of " + to_string(r) +
                           " intersects kX; validator gap");
  }
  Representation out(std::move(merged));
  std::int64_t target;
  if (__builtin_mul_overflow(scale(r, d), m, &target) ||
      __builtin_add_overflow(target, shift(r, d), &target)) {
    throw std::overflow_error("apply_translation: target overflows int64");
  }
  if (!is_representation(out, target, cons)) {
    throw std::logic_error("apply_translation: result {" + out.to_string() +
                           "} does not certify for " + std::to_string(target));
  }
  return out;
}

std::int64_t TranslationSet::max_scale(unsigned d) const {
  std::int64_t q = 0;
  for (const auto& r : members) q = std::max(q, scale(r, d));
  return q;
}

std::int64_t TranslationSet::max_shift(unsigned d) const {
  std::int64_t s = 0;
  for (const auto& r : members) s = std::max(s, shift(r, d));
  return s;
}

SearchConstraints TranslationSet::domain(unsigned d) const {
  if (members.empty()) throw std::invalid_argument("translation set is empty");
  const SearchConstraints first = domain_constraints(members.front(), d);
  for (const auto& r : members) {
    if (r.index() != members.front().index() ||
        domain_constraints(r, d) != first) {
      throw std::invalid_argument(
          "translation set mixes domains: " + to_string(members.front()) +
          " and " + to_string(r));
    }
  }
  return first;
}

CompletenessReport check_completeness(const TranslationSet& ts, unsigned d) {
  constexpr std::int64_t kMaxModulus = std::int64_t{1} << 26;
  CompletenessReport report;
  if (ts.empty()) return report;
  std::int64_t modulus = 1;
  for (const auto& r : ts.members) {
    modulus = std::lcm(modulus, scale(r, d));
    if (modulus > kMaxModulus) {
      throw std::invalid_argument("check_completeness: lcm of scales too large");
    }
  }
  report.modulus = modulus;
  std::vector<char> covered(static_cast<std::size_t>(modulus), 0);
  for (const auto& r : ts.members) {
    const std::int64_t sc = scale(r, d);
    for (std::int64_t res = shift(r, d) % sc; res < modulus; res += sc) {
      covered[static_cast<std::size_t>(res)] = 1;
    }
  }
  for (std::int64_t res = 0; res < modulus; ++res) {
    if (!covered[static_cast<std::size_t>(res)]) report.uncovered.push_back(res);
  }
  report.complete = report.uncovered.empty();
  return report;
}

bool is_complete_set(const TranslationSet& ts, unsigned d) {
  return check_completeness(ts, d).complete;
}

std::optional<std::size_t> matching_member(const TranslationSet& ts,
                                           std::int64_t m, unsigned d) {
  for (std::size_t i = 0; i < ts.members.size(); ++i) {
    const std::int64_t sc = scale(ts.members[i], d);
    const std::int64_t diff = (m % sc) - (shift(ts.members[i], d) % sc);
    if (diff % sc == 0) return i;
  }
  return std::nullopt;
}

std::optional<std::string> check_induction_step(const TranslationSet& ts,
                                                std::int64_t n, unsigned d) {
  using i128 = __int128;
  const i128 q = ts.max_scale(d);
  const i128 s = ts.max_shift(d);
  for (const auto& r : ts.members) {
    const i128 sc = scale(r, d);
    const i128 sh = shift(r, d);
    // m > q n + s >= sc n + sh  gives  m' = (m - sh)/sc > n.
    if (n < 0 || sc * n + sh > q * n + s) {
      return "preimage lower bound fails for " + to_string(r);
    }
    // m' < m  <=>  (sc - 1) m + sh > 0 for every m >= 1.
    if (sc < 2 && sh <= 0) return "preimage is not smaller for " + to_string(r);
  }
  return std::nullopt;
}

FrontierCertificate frontier_theorem_check(const TranslationSet& ts,
                                           std::int64_t n,
                                           const RepresentabilityOracle& oracle,
                                           const FrontierOptions& opts,
                                           unsigned d) {
  if (n < 1) throw std::invalid_argument("frontier_theorem_check: n must be >= 1");
  for (const auto& r : ts.members) {
    const ValidationReport report = validate(r);
    if (!report) {
      throw std::invalid_argument("invalid translation " + to_string(r) + ": " +
                                  report.summary());
    }
  }
  const SearchConstraints cons = ts.domain(d);
  const CompletenessReport completeness = check_completeness(ts, d);
  if (!completeness.complete) {
    throw std::invalid_argument(
        "translation set is not complete: residue " +
        std::to_string(completeness.uncovered.front()) + " mod " +
        std::to_string(completeness.modulus) + " is uncovered");
  }
  if (auto err = check_induction_step(ts, n, d)) {
    throw std::invalid_argument("induction step fails: " + *err);
  }

  FrontierCertificate cert;
  cert.frontier = n;
  cert.max_scale = ts.max_scale(d);
  cert.max_shift = ts.max_shift(d);
  cert.base_lo = n + 1;
  if (__builtin_mul_overflow(cert.max_scale, n, &cert.base_hi) ||
      __builtin_add_overflow(cert.base_hi, cert.max_shift, &cert.base_hi)) {
    throw std::overflow_error("frontier_theorem_check: q n + s overflows");
  }
  std::int64_t hi = cert.base_hi;
  if (opts.limit) hi = std::min(hi, cert.base_lo + *opts.limit - 1);
  cert.checked_through = cert.base_lo - 1;

  bool failed = false;
  auto sink = [&](std::int64_t m, std::optional<Representation> rep) {
    if (failed) return;
    if (!rep || !is_representation(*rep, m, cons)) {
      failed = true;
      cert.first_failure = m;
      cert.checked_through = m;
      return;
    }
    if (opts.on_witness) opts.on_witness(m, *rep);
    cert.witnesses.emplace_back(m, std::move(*rep));
    cert.checked_through = m;
  };
  auto stop = [&] { return failed || (opts.should_stop && opts.should_stop()); };
  ordered_parallel_for(cert.base_lo, hi, std::max(1u, opts.jobs),
                       [&](std::int64_t m) { return oracle(m); }, sink, stop);

  cert.established = !failed && cert.checked_through == cert.base_hi;
  return cert;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_int(std::string_view tok, std::size_t line_no) {
  tok = trim(tok);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) +
                                ": bad integer '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::int64_t> parse_list(std::string_view text, char sep,
                                     std::size_t line_no) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(sep, pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = trim(text.substr(pos, end - pos));
    if (!tok.empty()) {
      // Whitespace-separated lists may also carry several tokens per chunk.
      std::size_t i = 0;
      while (i < tok.size()) {
        std::size_t j = tok.find_first_of(" \t", i);
        if (j == std::string_view::npos) j = tok.size();
        if (j > i) out.push_back(parse_int(tok.substr(i, j - i), line_no));
        i = tok.find_first_not_of(" \t", j);
        if (i == std::string_view::npos) break;
      }
    }
    pos = end + 1;
  }
  return out;
}

}  // namespace

TranslationSet parse_translation_set(std::string_view text,
                                     const SearchConstraints& default_domain) {
  TranslationSet ts;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::string_view body = line;
    std::optional<std::int64_t> t;
    std::optional<std::vector<std::int64_t>> avoid;
    if (auto bar = line.find('|'); bar != std::string_view::npos) {
      body = line.substr(0, bar);
      std::string_view rest = line.substr(bar + 1);
      while (true) {
        const auto next = rest.find('|');
        std::string_view opt = trim(rest.substr(0, next));
        const auto eq = opt.find('=');
        if (eq == std::string_view::npos) {
          throw std::invalid_argument("line " + std::to_string(line_no) +
                                      ": expected key=value after '|'");
        }
        const std::string_view key = trim(opt.substr(0, eq));
        const std::string_view value = opt.substr(eq + 1);
        if (key == "t") {
          t = parse_int(value, line_no);
        } else if (key == "avoid") {
          avoid = parse_list(value, ',', line_no);
        } else {
          throw std::invalid_argument("line " + std::to_string(line_no) +
                                      ": unknown key '" + std::string(key) + "'");
        }
        if (next == std::string_view::npos) break;
        rest = rest.substr(next + 1);
      }
    }
    if (t && avoid) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": a translation takes t= or avoid=, not both");
    }
    const auto semi = body.find(';');
    if (semi == std::string_view::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected 'k ; y1 ... yl'");
    }
    const std::int64_t k = parse_int(body.substr(0, semi), line_no);
    std::vector<std::int64_t> ys = parse_list(body.substr(semi + 1), ' ', line_no);

    const bool avoiding =
        avoid.has_value() || (!t.has_value() && !default_domain.avoid.empty());
    if (avoiding) {
      AvoidingTranslation r{k, std::move(ys), avoid.value_or(default_domain.avoid)};
      std::sort(r.avoid.begin(), r.avoid.end());
      r.avoid.erase(std::unique(r.avoid.begin(), r.avoid.end()), r.avoid.end());
      ts.members.emplace_back(std::move(r));
    } else {
      ts.members.emplace_back(
          MinTranslation{k, std::move(ys), t.value_or(default_domain.t)});
    }
  }
  return ts;
}

TranslationSet read_translation_set(const std::string& path,
                                    const SearchConstraints& default_domain) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_translation_set(buf.str(), default_domain);
}

std::string format_translation_set(const TranslationSet& ts) {
  std::ostringstream os;
  for (const auto& r : ts.members) {
    os << multiplier(r) << " ; " << join(prefix(r), " ");
    std::visit(Overloaded{[&](const MinTranslation& v) { os << " | t=" << v.t; },
                          [&](const AvoidingTranslation& v) {
                            os << " | avoid=" << join(v.avoid, ",");
                          }},
               r);
    os << '\n';
  }
  return os.str();
}

TranslationSet six_translation_set() {
  TranslationSet ts;
  ts.members = {
      MinTranslation{2, {9, 10, 11, 15, 21, 33, 45, 55, 77}, 6},
      MinTranslation{2, {6, 7, 9, 21, 45, 105}, 6},
      MinTranslation{2, {7, 9, 10, 15, 21, 45, 105}, 6},
      MinTranslation{2, {6, 9, 11, 21, 33, 45, 55, 77}, 6},
  };
  return ts;
}

TranslationSet avoiding_family() {
  const std::vector<std::int64_t> avoid{21, 39};
  TranslationSet ts;
  ts.members = {
      AvoidingTranslation{2, {2}, avoid},
      AvoidingTranslation{2, {5, 7, 9, 45, 78, 91}, avoid},
      AvoidingTranslation{2, {3, 7, 42}, avoid},
      AvoidingTranslation{2, {3, 7, 78, 91}, avoid},
  };
  return ts;
}

}  // namespace unitsq
