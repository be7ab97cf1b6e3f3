#include "gapforge/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "gapforge/error.hpp"

namespace gapforge::explorer {
namespace {

using u64 = std::uint64_t;

// Sieve a window when the progression is dense enough to visit most of it.
constexpr u64 kSieveMaxModulus = 64;
constexpr u64 kSieveMaxSpan = u64{1} << 28;

}  // namespace

std::vector<NormalizedGap> normalized_gaps(u64 lo, u64 hi, const numeric::NormalizerSpec& f,
                                           const primes::SieveOptions& options) {
  std::vector<NormalizedGap> out;
  for (const auto& g : primes::gaps_in(lo, hi, options)) {
    const double fp = f.eval(static_cast<double>(g.p));
    if (!(fp > 0.0)) {
      throw ValidationError("normalizer " + f.name + " not positive at p = " + std::to_string(g.p));
    }
    out.push_back({g.p, g.d, static_cast<double>(g.d) / fp});
  }
  return out;
}

std::vector<std::int64_t> LimitSetEstimate::hit_cells() const {
  std::vector<std::int64_t> out;
  for (const auto& [j, count] : cells) {
    if (count >= hit_threshold) out.push_back(j);
  }
  return out;
}

double LimitSetEstimate::hit_measure() const {
  return static_cast<double>(hit_cells().size()) * grid_step;
}

LimitSetEstimate empirical_limit_set(std::span<const double> samples, double grid_step,
                                     u64 hit_threshold) {
  if (!(grid_step > 0.0)) throw ValidationError("grid_step must be positive");
  LimitSetEstimate out;
  out.grid_step = grid_step;
  out.hit_threshold = hit_threshold;
  for (double r : samples) {
    ++out.cells[static_cast<std::int64_t>(std::floor(r / grid_step))];
    ++out.sample_count;
  }
  return out;
}

std::vector<DyadicMinimum> dyadic_minima(std::span<const NormalizedGap> gaps, u64 lo) {
  std::vector<DyadicMinimum> out;
  if (gaps.empty()) return out;
  u64 N = std::max<u64>(lo, 1);
  double running = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < gaps.size() && gaps[i].p <= N) ++i;
  while (i < gaps.size()) {
    DyadicMinimum block;
    block.N = N;
    block.block_min = std::numeric_limits<double>::infinity();
    const u64 end = N > std::numeric_limits<u64>::max() / 2 ? std::numeric_limits<u64>::max() : 2 * N;
    bool any = false;
    for (; i < gaps.size() && gaps[i].p <= end; ++i) {
      any = true;
      if (gaps[i].ratio < block.block_min) {
        block.block_min = gaps[i].ratio;
        block.witness_p = gaps[i].p;
      }
    }
    if (any) {
      running = std::min(running, block.block_min);
      block.running_min = running;
      out.push_back(block);
    }
    if (end == std::numeric_limits<u64>::max()) break;
    N = end;
  }
  return out;
}

ClusterScanResult cluster_scan(const BigInt& z, const BigInt& W, std::span<const u64> H, u64 lo,
                               u64 hi, std::uint32_t m) {
  if (sgn(W) <= 0 || sgn(z) < 0 || z >= W) throw ValidationError("need 0 <= z < W");
  if (lo >= hi) throw ValidationError("need lo < hi");
  if (H.size() > 64) throw ValidationError("at most 64 tuple offsets");
  for (std::size_t i = 1; i < H.size(); ++i) {
    if (H[i] <= H[i - 1]) throw ValidationError("tuple must be strictly increasing");
  }
  const u64 max_h = H.empty() ? 0 : H.back();
  if (hi > std::numeric_limits<u64>::max() - max_h - 1) {
    throw Overflow("n + max(H) exceeds 64 bits");
  }

  ClusterScanResult out;
  out.z = z;
  out.W = W;
  out.H.assign(H.begin(), H.end());
  out.range_lo = lo;
  out.range_hi = hi;
  out.m = m;

  // Smallest n > lo in the progression.
  BigInt offset = z - big_from_u64(lo + 1);
  mpz_fdiv_r(offset.get_mpz_t(), offset.get_mpz_t(), W.get_mpz_t());
  const BigInt first = big_from_u64(lo + 1) + offset;
  if (first > big_from_u64(hi)) return out;
  const u64 n0 = big_to_u64(first);
  const std::optional<u64> step = fits_u64(W) ? std::optional<u64>(big_to_u64(W)) : std::nullopt;

  std::optional<primes::SieveSegment> segment;
  const u64 span = hi - n0 + max_h + 1;
  if (step && *step <= kSieveMaxModulus && span <= kSieveMaxSpan) {
    const u64 seg_lo = std::max<u64>(2, n0);
    const u64 seg_hi = hi + max_h + 1;
    if (seg_lo < seg_hi) segment = primes::sieve_range(seg_lo, seg_hi);
  }
  auto prime = [&](u64 n) {
    if (segment && n >= segment->lo()) return segment->test(n);
    return primes::is_prime(n);
  };

  for (u64 n = n0;;) {
    ClusterHit hit{n, 0, 0};
    for (std::size_t i = 0; i < H.size(); ++i) {
      if (prime(n + H[i])) {
        hit.mask |= u64{1} << i;
        ++hit.count;
      }
    }
    if (hit.count >= m) out.hits.push_back(hit);
    if (!step || hi - n < *step) break;
    n += *step;
  }
  return out;
}

std::vector<GapWindow> consecutive_gap_cluster(u64 lo, u64 hi, std::uint32_t m, double threshold,
                                               const numeric::NormalizerSpec& f) {
  if (m < 1) throw ValidationError("window length m must be >= 1");
  const auto gaps = normalized_gaps(lo, hi, f);
  std::vector<GapWindow> out;
  for (std::size_t i = 0; i + m <= gaps.size(); ++i) {
    GapWindow w;
    w.first_p = gaps[i].p;
    w.min_ratio = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (std::size_t j = i; j < i + m; ++j) {
      if (gaps[j].ratio < threshold) {
        ok = false;
        break;
      }
      w.gaps.push_back(gaps[j].d);
      w.min_ratio = std::min(w.min_ratio, gaps[j].ratio);
    }
    if (ok) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace gapforge::explorer
