#include "unitsq/search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace unitsq {

namespace {

using u128 = unsigned __int128;
using u64 = std::uint64_t;

BigInt to_big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

BigInt to_big(u128 v) {
  BigInt hi(static_cast<unsigned long>(static_cast<u64>(v >> 64)));
  BigInt lo(static_cast<unsigned long>(static_cast<u64>(v)));
  return (hi << 64) + lo;
}

bool fits_u128(const BigInt& v, u128& out) {
  if (sgn(v) < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 128) return false;
  const BigInt hi = v >> 64;
  const BigInt lo = v - (hi << 64);
  out = (static_cast<u128>(hi.get_ui()) << 64) | lo.get_ui();
  return true;
}

// a mod b for a 64-bit b; skips the 128-bit division when a is narrow.
inline u64 mod_u64(u128 a, u64 b) {
  if ((a >> 64) == 0) return static_cast<u64>(a) % b;
  return static_cast<u64>(a % b);
}

// floor(sqrt(v)) for v < 2^127.
inline u128 isqrt_u128(u128 v) {
  auto r = static_cast<u128>(std::sqrt(static_cast<long double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

inline u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    if (((a | b) >> 64) == 0) {
      return std::gcd(static_cast<u64>(a), static_cast<u64>(b));
    }
    const u128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

// Prefix sums over the allowed integers 1..top (forbidden ones contribute
// zero): pw of x^d, saturating, hf of ceil(2^32 / x), so that
// (hf[j] - hf[x-1]) / 2^32 bounds the reciprocal sum of any subset of the
// allowed integers in [x, j] from above, and cnt of the allowed integers.
struct WindowTables {
  static constexpr std::int64_t kMaxTop = std::int64_t{1} << 22;
  static constexpr unsigned kFracBits = 32;

  std::vector<std::int64_t> pw;
  std::vector<u64> hf;
  std::vector<std::int64_t> cnt;

  bool build(std::int64_t top, unsigned d, const std::vector<char>& forbidden) {
    if (top < 1 || top > kMaxTop) return false;
    const auto size = static_cast<std::size_t>(top) + 1;
    pw.assign(size, 0);
    hf.assign(size, 0);
    cnt.assign(size, 0);
    for (std::size_t i = 1; i < size; ++i) {
      const bool skip = i < forbidden.size() && forbidden[i] != 0;
      std::int64_t p = 0;
      if (!skip && (!checked_pow(static_cast<std::int64_t>(i), d, p) ||
                    __builtin_add_overflow(pw[i - 1], p, &pw[i]))) {
        pw[i] = std::numeric_limits<std::int64_t>::max();
      } else if (skip) {
        pw[i] = pw[i - 1];
      }
      const u64 h = skip ? 0 : ((u64{1} << kFracBits) + i - 1) / i;
      hf[i] = hf[i - 1] + h;
      cnt[i] = cnt[i - 1] + (skip ? 0 : 1);
    }
    return true;
  }

  std::size_t top() const { return pw.size() - 1; }

  // Grows k to the largest j <= top with pw[j] - pw[x-1] <= n. Callers keep
  // k across ascending x: that maximum never decreases for fixed n.
  void advance(std::size_t& k, std::int64_t x, std::int64_t n) const {
    const auto base = static_cast<std::size_t>(x - 1);
    if (k < base) k = base;
    std::int64_t limit;
    if (__builtin_add_overflow(pw[base], n, &limit)) {
      limit = std::numeric_limits<std::int64_t>::max();
    }
    while (k < top() && pw[k + 1] <= limit) ++k;
  }

  u64 window(std::size_t k, std::int64_t x) const {
    return hf[k] - hf[static_cast<std::size_t>(x - 1)];
  }

  // Upper bound on |Y| for Y within the allowed integers >= x with power
  // sum n, given k from advance(): the c smallest allowed integers from x
  // have the least power sum among c-element choices.
  std::int64_t capacity(std::size_t k, std::int64_t x) const {
    return cnt[k] - cnt[static_cast<std::size_t>(x - 1)];
  }
};

// Every three-element set {y1 < y2 < y3} of allowed integers in [t, top]
// for d = 2, bucketed by y1^2 + y2^2 + y3^2 and in ascending order within a
// bucket, with its reciprocal sum a/b in lowest terms.
class TailIndex {
 public:
  static constexpr std::int64_t kMaxTop = 300;

  struct Tail {
    std::uint32_t a;
    std::uint32_t b;
    std::array<std::uint16_t, 3> y;
  };

  TailIndex(std::int64_t t, std::int64_t top, const std::vector<char>& forbidden)
      : top_(top) {
    std::vector<std::uint16_t> ys;
    for (std::int64_t y = std::max<std::int64_t>(t, 1); y <= top; ++y) {
      const auto i = static_cast<std::size_t>(y);
      if (i >= forbidden.size() || forbidden[i] == 0) ys.push_back(static_cast<std::uint16_t>(y));
    }
    const std::size_t max_n = 3 * static_cast<std::size_t>(top * top);
    offsets_.assign(max_n + 2, 0);
    auto each = [&](auto&& f) {
      for (std::size_t i = 0; i < ys.size(); ++i) {
        for (std::size_t j = i + 1; j < ys.size(); ++j) {
          for (std::size_t k = j + 1; k < ys.size(); ++k) f(ys[i], ys[j], ys[k]);
        }
      }
    };
    auto sq = [](std::uint64_t v) { return v * v; };
    each([&](std::uint64_t u, std::uint64_t v, std::uint64_t w) {
      ++offsets_[sq(u) + sq(v) + sq(w) + 1];
    });
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    tails_.resize(offsets_.back());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    each([&](std::uint64_t u, std::uint64_t v, std::uint64_t w) {
      // 1/u + 1/v + 1/w = (vw + uw + uv) / uvw
      std::uint64_t a = v * w + u * w + u * v;
      std::uint64_t b = u * v * w;
      const std::uint64_t g = std::gcd(a, b);
      a /= g;
      b /= g;
      tails_[fill[sq(u) + sq(v) + sq(w)]++] = {
          static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
          {static_cast<std::uint16_t>(u), static_cast<std::uint16_t>(v),
           static_cast<std::uint16_t>(w)}};
    });
  }

  std::int64_t top() const { return top_; }

  // Lexicographically first tail with y1 >= t, sum 1/y = a/b, sum y^2 = n.
  const Tail* find(std::int64_t t, u128 a, u128 b, std::int64_t n) const {
    if (n < 0 || static_cast<std::size_t>(n) + 1 >= offsets_.size() ||
        (b >> 32) != 0 || (a >> 32) != 0) {
      return nullptr;
    }
    const auto lo = offsets_[static_cast<std::size_t>(n)];
    const auto hi = offsets_[static_cast<std::size_t>(n) + 1];
    for (auto i = lo; i < hi; ++i) {
      const Tail& tail = tails_[i];
      if (tail.b == b && tail.a == a && tail.y[0] >= t) return &tail;
    }
    return nullptr;
  }

 private:
  std::int64_t top_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Tail> tails_;
};

inline u64 inverse_mod(u64 a, u64 m) {
  std::int64_t r0 = static_cast<std::int64_t>(m), r1 = static_cast<std::int64_t>(a % m);
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  const auto mm = static_cast<std::int64_t>(m);
  return static_cast<u64>(((s0 % mm) + mm) % mm);
}

// p-adic bookkeeping over the candidate elements [t, top]. For a prime p
// with largest power M = p^e <= top, an element y = p^v u (p not dividing u)
// contributes c(y) = p^(e-v) u^-1 mod M. Elements above top never occur, so
// the multiples of p in a completion of s have reciprocals summing to s up
// to a p-adic integer exactly when their c values sum to M s mod M (the
// other elements are p-adic units).
class ResidueTables {
 public:
  static constexpr std::int64_t kMaxTop = 1024;

  struct Part {
    std::uint32_t prime;  // index into primes()
    std::uint32_t c;
  };

  struct Prime {
    std::uint32_t p = 0;
    std::uint32_t modulus = 0;
    std::uint32_t target = 0;  // M s mod M
    // Row j, entry rho: the largest smallest-element of a set of candidate
    // multiples of p, none above j p, whose c values sum to rho; 0 if there
    // is none, and unbounded for rho = 0 (the empty set).
    std::vector<std::int32_t> rows;
    std::uint32_t max_row = 0;

    const std::int32_t* last(std::int64_t bound) const {
      const auto j = std::min<std::int64_t>(bound / p, max_row);
      return rows.data() + static_cast<std::size_t>(j) * modulus;
    }
  };

  // Returns false when no set of candidates can have reciprocal sum s: its
  // denominator has a prime above top or a prime power beyond M. Otherwise
  // marks every candidate that belongs to no balanced set of multiples, for
  // some prime dividing it, as forbidden (repeating until stable), counting
  // them in dropped.
  bool build(const Fraction& s, std::int64_t t, std::int64_t top,
             std::vector<char>& forbidden, std::size_t& dropped) {
    const auto size = static_cast<std::size_t>(top) + 1;
    if (forbidden.size() < size) forbidden.resize(size, 0);
    for (std::int64_t y = 1; y < t && y <= top; ++y) forbidden[static_cast<std::size_t>(y)] = 1;

    std::vector<char> composite(size, 0);
    BigInt rest = s.den();
    for (std::size_t p = 2; p < size; ++p) {
      if (composite[p]) continue;
      for (std::size_t q = p * p; q < size; q += p) composite[q] = 1;
      Prime prime;
      prime.p = static_cast<std::uint32_t>(p);
      std::uint32_t e = 0;
      std::uint64_t modulus = 1;
      while (modulus * p <= static_cast<std::uint64_t>(top)) {
        modulus *= p;
        ++e;
      }
      prime.modulus = static_cast<std::uint32_t>(modulus);
      const BigInt pb(static_cast<unsigned long>(p));
      const auto v = static_cast<std::uint32_t>(
          mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), pb.get_mpz_t()));
      if (v > e) return false;
      // M s = p^(e-v) a / (b / p^v), reduced mod M.
      u64 weight = 1;
      for (std::uint32_t i = v; i < e; ++i) weight *= p;
      if (weight % modulus != 0) {
        BigInt unit;
        mpz_divexact(unit.get_mpz_t(), s.den().get_mpz_t(), BigInt(pow(pb, v)).get_mpz_t());
        const u64 a = mpz_fdiv_ui(s.num().get_mpz_t(), modulus);
        const u64 b = mpz_fdiv_ui(unit.get_mpz_t(), modulus);
        prime.target = static_cast<std::uint32_t>(
            static_cast<u128>(weight) * a % modulus * inverse_mod(b, modulus) % modulus);
      }
      primes_.push_back(std::move(prime));
    }
    if (rest != 1) return false;

    auto usable = [&](std::int64_t y) { return forbidden[static_cast<std::size_t>(y)] == 0; };
    for (bool changed = true; changed;) {
      changed = false;
      for (const Prime& prime : primes_) {
        std::vector<std::int64_t> ys;
        std::vector<u64> cs;
        multiples(prime, top, usable, ys, cs);
        const std::size_t count = ys.size();
        if (count == 0) continue;
        const std::size_t m = prime.modulus;
        // pre[i]: sums over subsets of the first i multiples; suf[i]: of the
        // multiples from i on.
        std::vector<char> pre((count + 1) * m, 0);
        std::vector<char> suf((count + 1) * m, 0);
        pre[0] = 1;
        suf[count * m] = 1;
        for (std::size_t i = 0; i < count; ++i) {
          extend(&pre[i * m], &pre[(i + 1) * m], cs[i], m);
        }
        for (std::size_t i = count; i-- > 0;) {
          extend(&suf[(i + 1) * m], &suf[i * m], cs[i], m);
        }
        for (std::size_t i = 0; i < count; ++i) {
          // Some subset through ys[i] sums to the target.
          const u64 want = (prime.target + 2 * m - cs[i]) % m;
          bool ok = false;
          for (std::size_t r = 0; r < m && !ok; ++r) {
            ok = pre[i * m + r] && suf[(i + 1) * m + (want + m - r) % m];
          }
          if (!ok) {
            forbidden[static_cast<std::size_t>(ys[i])] = 1;
            ++dropped;
            changed = true;
          }
        }
      }
    }

    offsets_.assign(size + 1, 0);
    for (std::uint32_t i = 0; i < primes_.size(); ++i) {
      Prime& prime = primes_[i];
      std::vector<std::int64_t> ys;
      std::vector<u64> cs;
      multiples(prime, top, usable, ys, cs);
      const std::size_t m = prime.modulus;
      prime.max_row = static_cast<std::uint32_t>(top / prime.p);
      prime.rows.assign((prime.max_row + 1) * m, 0);
      prime.rows[0] = std::numeric_limits<std::int32_t>::max();
      // Adding a new largest multiple y: a set through y keeps its smaller
      // minimum, or is {y} alone.
      std::size_t next = 0;
      for (std::uint32_t j = 1; j <= prime.max_row; ++j) {
        std::int32_t* row = &prime.rows[j * m];
        std::copy_n(row - m, m, row);
        if (next < ys.size() && ys[next] == static_cast<std::int64_t>(j) * prime.p) {
          const std::int32_t* before = row - m;
          const u64 c = cs[next];
          const auto y = static_cast<std::int32_t>(ys[next]);
          for (std::size_t r = 1; r < m; ++r) {
            const std::size_t from = (r + m - c) % m;
            const std::int32_t via = from == 0 ? y : before[from];
            row[r] = std::max(row[r], via);
          }
          ++next;
        }
      }
      for (std::size_t j = 0; j < ys.size(); ++j) {
        ++offsets_[static_cast<std::size_t>(ys[j]) + 1];
      }
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    parts_.resize(offsets_.back());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::uint32_t i = 0; i < primes_.size(); ++i) {
      std::vector<std::int64_t> ys;
      std::vector<u64> cs;
      multiples(primes_[i], top, usable, ys, cs);
      for (std::size_t j = 0; j < ys.size(); ++j) {
        parts_[fill[static_cast<std::size_t>(ys[j])]++] = {i, static_cast<std::uint32_t>(cs[j])};
      }
    }
    return true;
  }

  const std::vector<Prime>& primes() const { return primes_; }

  std::span<const Part> parts(std::int64_t x) const {
    const auto i = static_cast<std::size_t>(x);
    return {parts_.data() + offsets_[i], parts_.data() + offsets_[i + 1]};
  }

 private:
  template <class Usable>
  static void multiples(const Prime& prime, std::int64_t top, Usable&& usable,
                        std::vector<std::int64_t>& ys, std::vector<u64>& cs) {
    for (std::int64_t y = prime.p; y <= top; y += prime.p) {
      if (!usable(y)) continue;
      std::int64_t u = y;
      u64 weight = prime.modulus;
      while (u % prime.p == 0) {
        u /= prime.p;
        weight /= prime.p;
      }
      ys.push_back(y);
      cs.push_back(weight * inverse_mod(static_cast<u64>(u), prime.modulus) % prime.modulus);
    }
  }

  // to = from u (from + c) over residues mod m.
  static void extend(const char* from, char* to, u64 c, std::size_t m) {
    for (std::size_t r = 0; r < m; ++r) to[r] = from[r];
    for (std::size_t r = 0; r < m; ++r) {
      if (from[r]) to[(r + c) % m] = 1;
    }
  }

  std::vector<Prime> primes_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Part> parts_;
};

class Searcher {
 public:
  Searcher(const SearchConstraints& cons, SearchStats& stats,
           const SearchOptions& opts)
      : cons_(cons), stats_(stats), opts_(opts) {
    if (!cons_.avoid.empty()) {
      forbidden_.assign(static_cast<std::size_t>(cons_.avoid.back()) + 1, 0);
      for (auto a : cons_.avoid) forbidden_[static_cast<std::size_t>(a)] = 1;
    }
  }

  bool run(const Fraction& s, std::int64_t n) {
    if (s.sign() <= 0 || n <= 0) return false;
    stats_.depth_limit = max_cardinality(s, n, cons_.d);
    // No element exceeds floor(n^(1/d)).
    const auto root = static_cast<std::int64_t>(iroot_floor(static_cast<u64>(n), cons_.d));
    if (opts_.residue_bound && root <= ResidueTables::kMaxTop) {
      if (!residues_.build(s, cons_.t, root, forbidden_, stats_.dropped)) return false;
      residue_ = true;
      for (std::uint32_t i = 0; i < residues_.primes().size(); ++i) {
        need_.push_back(residues_.primes()[i].target);
        open_pos_.push_back(-1);
        if (need_[i] != 0) open(i);
      }
    }
    if (opts_.window_bound) {
      window_ = tables_.build(root, cons_.d, forbidden_);
      if (window_ && cons_.d == 2 && root <= TailIndex::kMaxTop) {
        tails_ = std::make_unique<TailIndex>(cons_.t, root, forbidden_);
      }
    }
    u128 num = 0;
    u128 den = 0;
    if (opts_.arithmetic == Arithmetic::kAuto && fits_u128(s.num(), num) &&
        fits_u128(s.den(), den)) {
      return fast(cons_.t, num, den, n, root);
    }
    return big(cons_.t, s, n);
  }

  Representation result() const {
    return Representation(std::vector<std::int64_t>(path_));
  }

 private:
  // r^d <= n
  bool fits_power(std::int64_t r, std::int64_t n) const {
    std::int64_t p;
    return checked_pow(r, cons_.d, p) && p <= n;
  }

  bool forbidden(std::int64_t x) const {
    return static_cast<std::size_t>(x) < forbidden_.size() &&
           forbidden_[static_cast<std::size_t>(x)] != 0;
  }

  void open(std::uint32_t i) {
    open_pos_[i] = static_cast<std::int32_t>(open_.size());
    open_.push_back(i);
  }

  void close(std::uint32_t i) {
    const auto at = static_cast<std::size_t>(open_pos_[i]);
    open_[at] = open_.back();
    open_pos_[open_[at]] = static_cast<std::int32_t>(at);
    open_.pop_back();
    open_pos_[i] = -1;
  }

  // Adds (sign +1) or removes (-1) x's contributions to the owed sums.
  void settle(std::int64_t x, int sign) {
    for (const auto& part : residues_.parts(x)) {
      const std::uint32_t m = residues_.primes()[part.prime].modulus;
      const std::uint32_t before = need_[part.prime];
      const std::uint32_t after = sign > 0 ? (before + m - part.c) % m : (before + part.c) % m;
      need_[part.prime] = after;
      if (before == 0 && after != 0) open(part.prime);
      if (before != 0 && after == 0) close(part.prime);
    }
  }

  // Largest admissible smallest element of a completion with elements at
  // most bound: every prime still owed needs a multiple in between.
  std::int64_t residue_cap(std::int64_t bound) const {
    std::int64_t cap = std::numeric_limits<std::int64_t>::max();
    for (const auto i : open_) {
      cap = std::min<std::int64_t>(cap, residues_.primes()[i].last(bound)[need_[i]]);
    }
    return cap;
  }

  // After taking x, every prime of x that is still owed has a multiple in
  // (x, bound] able to settle it.
  bool child_settles(std::int64_t x, std::int64_t bound) const {
    for (const auto& part : residues_.parts(x)) {
      const auto& prime = residues_.primes()[part.prime];
      const std::uint32_t after = (need_[part.prime] + prime.modulus - part.c) % prime.modulus;
      if (after != 0 && prime.last(bound)[after] <= x) return false;
    }
    return true;
  }

  // Recursion depth never exceeds max_cardinality of the root: any partial
  // path is itself a set with sum 1/x <= s and sum x^d <= n.
  void enter() {
    ++stats_.nodes;
    const std::size_t depth = path_.size();
    stats_.max_depth = std::max(stats_.max_depth, depth);
    if (static_cast<std::int64_t>(depth) > stats_.depth_limit) {
      throw std::logic_error("construct: depth exceeded the cardinality bound");
    }
  }

  // Running sum s = num/den in lowest terms, num > 0; root = floor(n^(1/d)).
  bool fast(std::int64_t t, u128 num, u128 den, std::int64_t n,
            std::int64_t root) {
    enter();
    u128 n_den;
    if (__builtin_mul_overflow(den, static_cast<u128>(n), &n_den)) {
      ++stats_.escalations;
      return big(t, Fraction(to_big(num), to_big(den)), n);
    }
    const u128 lower = (den + num - 1) / num;
    if (lower > static_cast<u128>(n)) return false;  // x^d >= x > n
    std::int64_t x = std::max<std::int64_t>(t, static_cast<std::int64_t>(lower));
    // hf window * den against num * 2^32 must fit in 128 bits.
    const bool windowed = window_ && (den >> 88) == 0;
    const u128 num_scaled = num << WindowTables::kFracBits;
    std::size_t k = 0;
    std::int64_t r = root;  // floor((n - x^d)^(1/d)), shrinking with x
    const std::int64_t first = x;
    const std::int64_t cap =
        residue_ ? residue_cap(root) : std::numeric_limits<std::int64_t>::max();
    for (;; ++x) {
      std::int64_t xd;
      if (!checked_pow(x, cons_.d, xd) || xd > n) break;
      // x^(d+1) * num <= n * den
      u128 lhs;
      if (__builtin_mul_overflow(static_cast<u128>(xd) * static_cast<u128>(x),
                                 num, &lhs) ||
          lhs > n_den) {
        break;
      }
      if (x > cap) {
        ++stats_.residue_cuts;
        break;
      }
      if (windowed) {
        tables_.advance(k, x, n);
        if (static_cast<u128>(tables_.window(k, x)) * den < num_scaled) {
          ++stats_.window_cuts;
          break;
        }
        if (x == first && cons_.d <= 2) {
          const std::int64_t capacity = tables_.capacity(k, x);
          if (capacity <= 2 || (capacity == 3 && tails_)) {
            return finish_small(t, num, den, n, capacity);
          }
        }
      }
      if (forbidden(x)) continue;

      const std::int64_t n_next = n - xd;
      const u64 ux = static_cast<u64>(x);
      if (n_next > 0) {
        while (!fits_power(r, n_next)) --r;
        // The child opens at max(x+1, ceil(1/s')) and returns at once when
        // that exceeds r; s' = (num x - den) / (den x) unreduced.
        // x^d + (x+1)^d grows with x, and a larger x cannot close the sum
        // on its own (only x = 1/s can).
        if (x + 1 > r) break;
        const u128 b = num * ux - den;  // no overflow: lhs above is larger
        u128 a;
        u128 rb;
        if (b != 0 && !__builtin_mul_overflow(den, static_cast<u128>(ux), &a) &&
            !__builtin_mul_overflow(static_cast<u128>(r), b, &rb) && a > rb) {
          ++stats_.leaf_skips;
          continue;
        }
      }
      const u64 g = std::gcd(mod_u64(den, ux), ux);
      const u128 den_g = den / g;
      u128 scaled;
      u128 den_next;
      if (__builtin_mul_overflow(num, static_cast<u128>(ux / g), &scaled) ||
          __builtin_mul_overflow(den_g, static_cast<u128>(ux), &den_next)) {
        ++stats_.escalations;
        const Fraction s_next =
            frac_sub_unit(Fraction(to_big(num), to_big(den)), x);
        if (s_next.is_zero()) {
          if (n_next == 0) {
            path_.push_back(x);
            return true;
          }
          continue;
        }
        if (n_next == 0) continue;
        path_.push_back(x);
        if (big(x + 1, s_next, n_next)) return true;
        path_.pop_back();
        continue;
      }
      // x >= den/num, so x*num - den >= 0.
      const u128 num_next = scaled - den_g;
      if (num_next == 0) {
        if (n_next == 0) {
          path_.push_back(x);
          return true;
        }
        continue;
      }
      if (n_next == 0) continue;
      if (residue_ && !child_settles(x, r)) {
        ++stats_.residue_cuts;
        continue;
      }
      // A common factor of num_next and den_next must divide x.
      u128 h = std::gcd(mod_u64(num_next, ux), ux);
      if (h != 1) h = gcd_u128(num_next, den_next);
      path_.push_back(x);
      if (residue_) settle(x, +1);
      if (fast(x + 1, num_next / h, den_next / h, n_next, r)) return true;
      if (residue_) settle(x, -1);
      path_.pop_back();
    }
    return false;
  }

  using Pair = std::array<std::int64_t, 2>;

  // The element 1/s when it is a completion on its own.
  std::optional<std::int64_t> single_completion(std::int64_t t, u128 a, u128 b,
                                                std::int64_t n) const {
    if (a != 1 || b < static_cast<u128>(t) || b > static_cast<u128>(n)) return std::nullopt;
    const auto x = static_cast<std::int64_t>(b);
    std::int64_t xd;
    if (forbidden(x) || !checked_pow(x, cons_.d, xd) || xd != n) return std::nullopt;
    return x;
  }

  // The two-element completion y < z, both >= t, of s = a/b (lowest terms)
  // and power sum n, for d <= 2. It is unique: with p = y + z and q = yz,
  // p b = q a together with y^2 + z^2 = p^2 - 2q = n (d = 2) or p = n
  // (d = 1) fixes q.
  std::optional<Pair> pair_completion(std::int64_t t, u128 a, u128 b,
                                      std::int64_t n) const {
    const auto un = static_cast<u128>(n);
    u128 p = 0;
    if (cons_.d == 2) {
      // a^2 q^2 - 2 b^2 q - n b^2 = 0, so p = (b + e) / a, e^2 = b^2 + a^2 n.
      u128 bb, aa, aan, e2;
      if (__builtin_mul_overflow(b, b, &bb) || __builtin_mul_overflow(a, a, &aa) ||
          __builtin_mul_overflow(aa, un, &aan) || __builtin_add_overflow(bb, aan, &e2) ||
          (e2 >> 126) != 0) {
        return pair_by_loop(t, a, b, n);
      }
      const u128 e = isqrt_u128(e2);
      if (e * e != e2 || (b + e) % a != 0) return std::nullopt;
      p = (b + e) / a;
    } else {
      p = un;
    }
    // p = y + z <= 2 n^(1/d) for any solution.
    if (p >= (u128{1} << 63)) return std::nullopt;
    u128 pb;
    if (__builtin_mul_overflow(p, b, &pb)) return pair_by_loop(t, a, b, n);
    if (pb % a != 0) return std::nullopt;
    const u128 q = pb / a;
    if (p * p < 4 * q) return std::nullopt;
    const u128 disc = p * p - 4 * q;
    const u128 w = isqrt_u128(disc);
    if (w * w != disc || w == 0 || (p - w) % 2 != 0) return std::nullopt;
    const auto y = static_cast<std::int64_t>((p - w) / 2);
    const auto z = static_cast<std::int64_t>((p + w) / 2);
    if (y < t || forbidden(y) || forbidden(z)) return std::nullopt;
    std::int64_t yd, zd, sum;
    if (!checked_pow(y, cons_.d, yd) || !checked_pow(z, cons_.d, zd) ||
        __builtin_add_overflow(yd, zd, &sum) || sum != n) {
      return std::nullopt;
    }
    return Pair{y, z};
  }

  // Same by search over y in (1/s, 2/s) with z = 1/(s - 1/y), for when the
  // closed form would overflow.
  std::optional<Pair> pair_by_loop(std::int64_t t, u128 a, u128 b,
                                   std::int64_t n) const {
    const Fraction s(to_big(a), to_big(b));
    const BigInt a_big = to_big(a);
    const BigInt b2 = 2 * to_big(b);
    for (BigInt y = std::max(ceil_recip(s), to_big(t)); y * a_big < b2; ++y) {
      if (!y.fits_slong_p()) break;
      const std::int64_t yv = y.get_si();
      std::int64_t yd;
      if (!checked_pow(yv, cons_.d, yd) || yd > n) break;
      const Fraction rest = frac_sub_unit(s, yv);
      if (rest.sign() <= 0 || rest.num() != 1 || !rest.den().fits_slong_p()) continue;
      const std::int64_t zv = rest.den().get_si();
      std::int64_t zd, sum;
      if (zv <= yv || forbidden(yv) || forbidden(zv)) continue;
      if (!checked_pow(zv, cons_.d, zd) || __builtin_add_overflow(yd, zd, &sum) ||
          sum != n) {
        continue;
      }
      return Pair{yv, zv};
    }
    return std::nullopt;
  }

  // Finishes a node that can hold at most `capacity` <= 3 more elements with
  // the ascending-first completion, exactly as the loop would find it. A
  // single element 1/s precedes anything longer (every other first element
  // exceeds 1/s); pairs and triples compare lexicographically.
  bool finish_small(std::int64_t t, u128 a, u128 b, std::int64_t n,
                    std::int64_t capacity) {
    ++stats_.closed_forms;
    if (const auto x = single_completion(t, a, b, n)) {
      push_leaves({*x});
      return true;
    }
    if (capacity < 2) return false;
    const auto pair = pair_completion(t, a, b, n);
    const TailIndex::Tail* triple = capacity >= 3 ? tails_->find(t, a, b, n) : nullptr;
    if (triple && (!pair || triple->y[0] < (*pair)[0] ||
                   (triple->y[0] == (*pair)[0] && triple->y[1] < (*pair)[1]))) {
      push_leaves({triple->y[0], triple->y[1], triple->y[2]});
      return true;
    }
    if (pair) {
      push_leaves({(*pair)[0], (*pair)[1]});
      return true;
    }
    return false;
  }

  void push_leaves(std::initializer_list<std::int64_t> xs) {
    for (auto x : xs) path_.push_back(x);
    stats_.max_depth = std::max(stats_.max_depth, path_.size());
  }

  bool big(std::int64_t t, const Fraction& s, std::int64_t n) {
    enter();
    const BigInt n_big = to_big(n);
    const BigInt n_den = n_big * s.den();
    const BigInt lower = ceil_recip(s);
    if (lower > n_big) return false;
    std::int64_t x = std::max<std::int64_t>(t, lower.get_si());
    const BigInt num_scaled = s.num() << WindowTables::kFracBits;
    std::size_t k = 0;
    for (;; ++x) {
      std::int64_t xd;
      if (!checked_pow(x, cons_.d, xd) || xd > n) break;
      if (to_big(xd) * to_big(x) * s.num() > n_den) break;
      if (window_) {
        tables_.advance(k, x, n);
        const BigInt w(static_cast<unsigned long>(tables_.window(k, x)));
        if (w * s.den() < num_scaled) {
          ++stats_.window_cuts;
          break;
        }
      }
      if (forbidden(x)) continue;

      const std::int64_t n_next = n - xd;
      const Fraction s_next = frac_sub_unit(s, x);
      if (s_next.is_zero()) {
        if (n_next == 0) {
          path_.push_back(x);
          return true;
        }
        continue;
      }
      if (n_next == 0) continue;
      path_.push_back(x);
      if (big(x + 1, s_next, n_next)) return true;
      path_.pop_back();
    }
    return false;
  }

  const SearchConstraints& cons_;
  SearchStats& stats_;
  SearchOptions opts_;
  std::vector<char> forbidden_;
  std::vector<std::int64_t> path_;
  WindowTables tables_;
  bool window_ = false;
  std::unique_ptr<const TailIndex> tails_;
  ResidueTables residues_;
  bool residue_ = false;
  std::vector<std::uint32_t> need_;    // per prime: c sum still owed
  std::vector<std::uint32_t> open_;    // primes with need_ != 0
  std::vector<std::int32_t> open_pos_;  // index into open_, or -1
};

}  // namespace

Representation::Representation(std::vector<std::int64_t> elements)
    : elements_(std::move(elements)) {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i] < 1) {
      throw std::invalid_argument("Representation: elements must be positive");
    }
    if (i > 0 && elements_[i] <= elements_[i - 1]) {
      throw std::invalid_argument(
          "Representation: elements must be strictly increasing");
    }
  }
}

bool Representation::contains(std::int64_t x) const {
  return std::binary_search(elements_.begin(), elements_.end(), x);
}

Fraction Representation::reciprocal_sum() const {
  // Common denominator first, one reduction at the end.
  BigInt den = 1;
  for (auto x : elements_) mpz_lcm_ui(den.get_mpz_t(), den.get_mpz_t(), x);
  BigInt num = 0;
  for (auto x : elements_) {
    BigInt q;
    mpz_divexact_ui(q.get_mpz_t(), den.get_mpz_t(), x);
    num += q;
  }
  return Fraction(num, den);
}

std::int64_t Representation::power_sum(unsigned d) const {
  std::int64_t total = 0;
  for (auto x : elements_) {
    std::int64_t p;
    if (!checked_pow(x, d, p) || __builtin_add_overflow(total, p, &total)) {
      throw std::overflow_error("Representation::power_sum overflows int64");
    }
  }
  return total;
}

std::string Representation::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) os << ' ';
    os << elements_[i];
  }
  return os.str();
}

void SearchConstraints::validate() {
  if (t < 1) throw std::invalid_argument("SearchConstraints: t must be >= 1");
  if (d < 1) throw std::invalid_argument("SearchConstraints: d must be >= 1");
  std::sort(avoid.begin(), avoid.end());
  avoid.erase(std::unique(avoid.begin(), avoid.end()), avoid.end());
  if (!avoid.empty() && avoid.front() < 1) {
    throw std::invalid_argument("SearchConstraints: avoid must be positive");
  }
}

bool SearchConstraints::forbids(std::int64_t x) const {
  return std::binary_search(avoid.begin(), avoid.end(), x);
}

CandidateRange bounds_for_min(std::int64_t t, const Fraction& s,
                              std::int64_t n, unsigned d) {
  if (s.sign() <= 0) throw std::domain_error("bounds_for_min: s must be positive");
  if (n < 1) throw std::domain_error("bounds_for_min: n must be >= 1");
  const BigInt n_big = to_big(n);
  BigInt lo = ceil_recip(s);
  if (lo < to_big(t)) lo = to_big(t);
  BigInt hi = rational_root_floor(n_big, s, d + 1);
  const BigInt root = iroot_floor(n_big, d);
  if (root < hi) hi = root;
  CandidateRange out;
  out.hi = hi.get_si();  // hi <= n fits
  // lo may be astronomically large for tiny s; clamp, the range is empty.
  out.lo = lo > to_big(n) ? n + 1 : lo.get_si();
  return out;
}

std::int64_t max_cardinality(const Fraction& s, std::int64_t n, unsigned d) {
  if (s.sign() <= 0 || n < 1 || d < 1) {
    throw std::domain_error("max_cardinality: inputs must be positive");
  }
  // |X| <= s (n/s)^(1/(d+1))  <=>  |X|^(d+1) <= s^d n = num^d n / den^d.
  const BigInt rhs = to_big(n) * pow(s.den(), d);
  BigInt q;
  const BigInt numd = pow(s.num(), d);
  mpz_fdiv_q(q.get_mpz_t(), rhs.get_mpz_t(), numd.get_mpz_t());
  const BigInt c = iroot_floor(q, d + 1);
  if (!c.fits_slong_p()) throw std::overflow_error("max_cardinality: too large");
  return c.get_si();
}

std::optional<Representation> construct(const SearchConstraints& cons,
                                        const Fraction& s, std::int64_t n,
                                        SearchStats* stats,
                                        const SearchOptions& opts) {
  SearchConstraints normalized = cons;
  normalized.validate();
  SearchStats local;
  SearchStats& st = stats ? *stats : local;
  st = SearchStats{};
  Searcher searcher(normalized, st, opts);
  if (!searcher.run(s, n)) return std::nullopt;
  return searcher.result();
}

std::optional<Representation> find_representation(std::int64_t m,
                                                  const SearchConstraints& cons,
                                                  SearchStats* stats,
                                                  const SearchOptions& opts) {
  return construct(cons, Fraction(1), m, stats, opts);
}

bool is_representation(const Representation& x, std::int64_t m,
                       const SearchConstraints& cons) {
  if (x.empty()) return false;
  const auto el = x.elements();
  for (std::size_t i = 0; i < el.size(); ++i) {
    if (el[i] < 1 || (i > 0 && el[i] <= el[i - 1])) return false;
    if (el[i] < cons.t) return false;
    if (std::find(cons.avoid.begin(), cons.avoid.end(), el[i]) !=
        cons.avoid.end()) {
      return false;
    }
  }
  std::int64_t total;
  try {
    total = x.power_sum(cons.d);
  } catch (const std::overflow_error&) {
    return false;
  }
  return total == m && x.reciprocal_sum() == Fraction(1);
}

namespace {

// Plain include/exclude subset enumeration over the candidate pool, cut only
// when the power sum already exceeds m. Reciprocals are checked with
// Fraction arithmetic on complete candidates.
class SubsetWalker {
 public:
  SubsetWalker(std::vector<std::int64_t> pool, std::vector<std::int64_t> powers,
               std::int64_t m)
      : pool_(std::move(pool)), powers_(std::move(powers)), m_(m) {}

  std::optional<Representation> run() {
    if (walk(0, 0)) return Representation(chosen_);
    return std::nullopt;
  }

 private:
  bool walk(std::size_t i, std::int64_t sum) {
    if (sum == m_ && !chosen_.empty()) {
      Fraction r;
      for (auto x : chosen_) r += unit_fraction(x);
      if (r == Fraction(1)) return true;
    }
    if (i == pool_.size()) return false;
    if (sum + powers_[i] <= m_) {
      chosen_.push_back(pool_[i]);
      if (walk(i + 1, sum + powers_[i])) return true;
      chosen_.pop_back();
    }
    return walk(i + 1, sum);
  }

  std::vector<std::int64_t> pool_;
  std::vector<std::int64_t> powers_;
  std::int64_t m_;
  std::vector<std::int64_t> chosen_;
};

}  // namespace

std::optional<Representation> brute_force_oracle(std::int64_t m,
                                                 const SearchConstraints& cons) {
  if (m < 1) return std::nullopt;
  const auto top = static_cast<std::int64_t>(
      iroot_floor(static_cast<std::uint64_t>(m), cons.d));
  if (top > kBruteForceMaxElement) {
    throw std::invalid_argument("brute_force_oracle: m too large to enumerate");
  }
  std::vector<std::int64_t> pool;
  std::vector<std::int64_t> powers;
  for (std::int64_t x = std::max<std::int64_t>(cons.t, 1); x <= top; ++x) {
    if (std::find(cons.avoid.begin(), cons.avoid.end(), x) != cons.avoid.end()) {
      continue;
    }
    std::int64_t p = 0;
    checked_pow(x, cons.d, p);
    pool.push_back(x);
    powers.push_back(p);
  }
  return SubsetWalker(std::move(pool), std::move(powers), m).run();
}

}  // namespace unitsq
