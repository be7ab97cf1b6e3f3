#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gapforge/bigint.hpp"
#include "gapforge/numeric.hpp"
#include "gapforge/primes.hpp"

namespace gapforge::explorer {

// Normalized gaps use f(p_n), the prime itself, not the ordinal n.
inline constexpr const char* kNormalizationNote = "d_n / f(p_n): normalizer evaluated at the prime";

struct NormalizedGap {
  std::uint64_t p = 0;
  std::uint64_t d = 0;
  double ratio = 0.0;

  friend bool operator==(const NormalizedGap&, const NormalizedGap&) = default;
};

/// One record per gap of primes::gaps_in(lo, hi). Throws ValidationError if f
/// is not positive at some gap start.
std::vector<NormalizedGap> normalized_gaps(std::uint64_t lo, std::uint64_t hi,
                                           const numeric::NormalizerSpec& f,
                                           const primes::SieveOptions& options = {});

// Histogram of normalized gaps. It only witnesses values attained in a finite
// range; it says nothing about limit points.
struct LimitSetEstimate {
  std::string normalizer;
  double grid_step = 1.0;
  std::uint64_t hit_threshold = 1;
  std::map<std::int64_t, std::uint64_t> cells;  // j -> samples in [j δ, (j + 1) δ)
  std::uint64_t range_lo = 0;
  std::uint64_t range_hi = 0;
  std::uint64_t sample_count = 0;

  std::vector<std::int64_t> hit_cells() const;
  // Lebesgue measure of the union of hit cells.
  double hit_measure() const;

  friend bool operator==(const LimitSetEstimate&, const LimitSetEstimate&) = default;
};

LimitSetEstimate empirical_limit_set(std::span<const double> samples, double grid_step,
                                     std::uint64_t hit_threshold = 1);

struct DyadicMinimum {
  std::uint64_t N = 0;              // block (N, 2N]
  double block_min = 0.0;           // min d/f over the block
  double running_min = 0.0;         // min over everything up to 2N
  std::uint64_t witness_p = 0;
};

/// Minimum normalized gap over successive dyadic blocks starting at `lo`.
std::vector<DyadicMinimum> dyadic_minima(std::span<const NormalizedGap> gaps, std::uint64_t lo);

struct ClusterHit {
  std::uint64_t n = 0;
  std::uint64_t mask = 0;  // bit i set iff n + h_i is prime
  std::uint32_t count = 0;

  friend bool operator==(const ClusterHit&, const ClusterHit&) = default;
};

struct ClusterScanResult {
  BigInt z = 0;
  BigInt W = 1;
  std::vector<std::uint64_t> H;
  std::uint64_t range_lo = 0;  // scan covers (lo, hi]
  std::uint64_t range_hi = 0;
  std::uint32_t m = 0;
  std::vector<ClusterHit> hits;

  friend bool operator==(const ClusterScanResult&, const ClusterScanResult&) = default;
};

/// Every n in (lo, hi] with n ≡ z (mod W) and at least m primes among n + H,
/// ascending. H holds at most 64 offsets.
ClusterScanResult cluster_scan(const BigInt& z, const BigInt& W, std::span<const std::uint64_t> H,
                               std::uint64_t lo, std::uint64_t hi, std::uint32_t m);

struct GapWindow {
  std::uint64_t first_p = 0;
  std::vector<std::uint64_t> gaps;
  double min_ratio = 0.0;
};

/// Runs of m consecutive gaps in [lo, hi] whose normalized sizes are all at
/// least `threshold`.
std::vector<GapWindow> consecutive_gap_cluster(std::uint64_t lo, std::uint64_t hi, std::uint32_t m,
                                               double threshold, const numeric::NormalizerSpec& f);

}  // namespace gapforge::explorer
