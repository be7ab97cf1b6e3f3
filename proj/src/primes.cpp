#include "gapforge/primes.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <string>

#include "gapforge/error.hpp"

namespace gapforge::primes {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kMax = std::numeric_limits<u64>::max();

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Odd primes up to `limit`, as needed for marking.
std::vector<u64> odd_base_primes(u64 limit) {
  std::vector<u64> out = small_primes(limit);
  if (!out.empty() && out.front() == 2) out.erase(out.begin());
  return out;
}

// Marks bit i of `words` (word offset `word0`) for the odd number first + 2i,
// over `count` odd numbers. Bits start set; composites and 1 are cleared.
void sieve_odd_block(u64 first, u64 count, const std::vector<u64>& base, std::vector<u64>& words,
                     u64 bit0) {
  const u128 last = static_cast<u128>(first) + 2 * static_cast<u128>(count - 1);
  for (u64 p : base) {
    const u128 pp = static_cast<u128>(p) * p;
    if (pp > last) break;
    u128 m = (static_cast<u128>(first) + p - 1) / p * p;
    if (m < pp) m = pp;
    if ((m & 1) == 0) m += p;
    for (u128 i = (m - first) / 2; i < count; i += p) {
      const u64 bit = bit0 + static_cast<u64>(i);
      words[bit >> 6] &= ~(u64{1} << (bit & 63));
    }
  }
  if (first == 1) words[bit0 >> 6] &= ~(u64{1} << (bit0 & 63));
}

struct OddRange {
  u64 first = 0;  // smallest odd >= lo
  u64 count = 0;  // odd numbers in [lo, hi)
};

OddRange odd_range(u64 lo, u64 hi) {
  OddRange r;
  if (lo >= hi) return r;
  r.first = lo | 1;
  if (r.first < lo || r.first >= hi) return {r.first, 0};
  r.count = (hi - r.first + 1) / 2;
  return r;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Sinclair's seven bases: no strong pseudoprime to all of them below 2^64.
constexpr std::array<u64, 7> kWitnesses = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};

void check_span(u64 lo, u64 hi, u64 budget, const char* what) {
  if (hi > lo && hi - lo > budget) {
    throw RangeTooLarge(std::string(what) + ": span " + std::to_string(hi - lo) +
                        " exceeds budget " + std::to_string(budget));
  }
}

}  // namespace

SieveSegment::SieveSegment(u64 lo, u64 hi, std::vector<u64> odd_bits)
    : lo_(lo), hi_(hi), odd_base_(lo | 1), odd_bits_(std::move(odd_bits)) {}

bool SieveSegment::test(u64 n) const {
  if (n < lo_ || n >= hi_) return false;
  if (n == 2) return true;
  if ((n & 1) == 0) return false;
  const u64 bit = (n - odd_base_) / 2;
  return (odd_bits_[bit >> 6] >> (bit & 63)) & 1;
}

u64 SieveSegment::count() const {
  u64 total = (lo_ <= 2 && 2 < hi_) ? 1 : 0;
  for (u64 w : odd_bits_) total += static_cast<u64>(std::popcount(w));
  return total;
}

std::vector<u64> SieveSegment::primes() const {
  std::vector<u64> out;
  if (lo_ <= 2 && 2 < hi_) out.push_back(2);
  for (std::size_t w = 0; w < odd_bits_.size(); ++w) {
    u64 word = odd_bits_[w];
    while (word) {
      const int b = std::countr_zero(word);
      out.push_back(odd_base_ + 2 * (static_cast<u64>(w) * 64 + static_cast<u64>(b)));
      word &= word - 1;
    }
  }
  return out;
}

std::vector<u64> small_primes(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

SieveSegment sieve_range(u64 lo, u64 hi, const SieveOptions& options) {
  if (lo < 2 || hi <= lo) {
    throw ValidationError("sieve_range requires 2 <= lo < hi");
  }
  check_span(lo, hi, options.memory_budget, "sieve_range");
  const OddRange odd = odd_range(lo, hi);
  std::vector<u64> words((odd.count + 63) / 64, ~u64{0});
  if (odd.count % 64) words.back() = (u64{1} << (odd.count % 64)) - 1;
  if (odd.count == 0) return SieveSegment(lo, hi, std::move(words));

  const auto base = odd_base_primes(isqrt(hi - 1));
  const u64 seg = std::max<u64>(64, options.segment_size / 64 * 64);
  for (u64 start = 0; start < odd.count; start += seg) {
    const u64 n = std::min(seg, odd.count - start);
    sieve_odd_block(odd.first + 2 * start, n, base, words, start);
  }
  return SieveSegment(lo, hi, std::move(words));
}

void for_each_prime(u64 lo, u64 hi, const std::function<bool(u64)>& visit,
                    const SieveOptions& options) {
  if (hi <= lo) return;
  check_span(lo, hi, options.scan_budget, "for_each_prime");
  if (lo <= 2 && 2 < hi) {
    if (!visit(2)) return;
  }
  const OddRange odd = odd_range(std::max<u64>(lo, 3), hi);
  if (odd.count == 0) return;

  const auto base = odd_base_primes(isqrt(hi - 1));
  const u64 seg = std::max<u64>(64, options.segment_size / 64 * 64);
  std::vector<u64> words(seg / 64);
  for (u64 start = 0; start < odd.count; start += seg) {
    const u64 n = std::min(seg, odd.count - start);
    std::fill(words.begin(), words.end(), ~u64{0});
    const u64 first = odd.first + 2 * start;
    sieve_odd_block(first, n, base, words, 0);
    for (u64 w = 0; w * 64 < n; ++w) {
      u64 word = words[w];
      if ((w + 1) * 64 > n) word &= (u64{1} << (n - w * 64)) - 1;
      while (word) {
        const int b = std::countr_zero(word);
        if (!visit(first + 2 * (w * 64 + static_cast<u64>(b)))) return;
        word &= word - 1;
      }
    }
  }
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 41 * 41) return true;

  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kWitnesses) {
    a %= n;
    if (a == 0) continue;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::optional<u64> next_prime(u64 n) {
  if (n < 2) return 2;
  for (u64 c = (n + 1) | 1; c > n; c += 2) {
    if (is_prime(c)) return c;
    if (c >= kMax - 1) break;
  }
  return std::nullopt;
}

std::optional<u64> prev_prime(u64 n) {
  if (n <= 2) return std::nullopt;
  if (n == 3) return 2;
  for (u64 c = (n - 1) | 1; c >= 3; c -= 2) {
    if (c < n && is_prime(c)) return c;
  }
  return std::nullopt;
}

std::vector<GapSample> gaps_in(u64 lo, u64 hi, const SieveOptions& options) {
  std::vector<GapSample> out;
  if (hi < lo) throw ValidationError("gaps_in requires lo <= hi");
  if (hi == lo) return out;
  const u64 end = hi == kMax ? kMax : hi + 1;
  const bool ordinal_known = lo <= 2;
  u64 ordinal = 0;
  std::optional<u64> prev;
  for_each_prime(
      lo, end,
      [&](u64 p) {
        ++ordinal;
        if (prev) {
          GapSample g{*prev, p - *prev, std::nullopt};
          if (ordinal_known) g.index_hint = ordinal - 1;
          out.push_back(g);
        }
        prev = p;
        return true;
      },
      options);
  return out;
}

std::vector<GapSample> max_gap_records(u64 limit, const SieveOptions& options) {
  if (limit < 3) throw ValidationError("max_gap_records requires limit >= 3");
  std::vector<GapSample> out;
  u64 best = 0;
  u64 ordinal = 0;
  std::optional<u64> prev;
  auto consider = [&](u64 p) {
    if (prev && p - *prev > best) {
      best = p - *prev;
      out.push_back({*prev, best, ordinal});
    }
    prev = p;
    ++ordinal;
  };
  for_each_prime(
      2, limit + 1,
      [&](u64 p) {
        consider(p);
        return true;
      },
      options);
  // The gap that starts at the last prime <= limit ends beyond it.
  if (prev) {
    if (auto next = next_prime(*prev)) consider(*next);
  }
  return out;
}

u64 prime_count(u64 x, const SieveOptions& options) {
  if (x < 2) return 0;
  const u64 hi = x == kMax ? kMax : x + 1;
  check_span(2, hi, options.scan_budget, "prime_count");
  const unsigned shards = std::max(1u, options.threads);
  if (shards == 1) {
    u64 total = 0;
    for_each_prime(
        2, hi,
        [&](u64) {
          ++total;
          return true;
        },
        options);
    return total;
  }
  const u64 span = hi - 2;
  const u64 chunk = (span + shards - 1) / shards;
  std::vector<std::future<u64>> parts;
  for (u64 a = 2; a < hi; a += chunk) {
    const u64 b = hi - a > chunk ? a + chunk : hi;
    parts.push_back(std::async(std::launch::async, [a, b, options] {
      u64 n = 0;
      for_each_prime(
          a, b,
          [&](u64) {
            ++n;
            return true;
          },
          options);
      return n;
    }));
    if (b == hi) break;
  }
  u64 total = 0;
  for (auto& f : parts) total += f.get();
  return total;
}

}  // namespace gapforge::primes
