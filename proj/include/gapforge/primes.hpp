#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace gapforge::primes {

struct SieveOptions {
  // Odd entries per sieving segment.
  std::uint64_t segment_size = std::uint64_t{1} << 20;
  // Largest hi - lo that may be materialized as a SieveSegment.
  std::uint64_t memory_budget = std::uint64_t{1} << 34;
  // Largest span a streaming scan (count, gaps, records) may cover.
  std::uint64_t scan_budget = std::uint64_t{1} << 40;
  unsigned threads = 1;
};

// Primality bits for [lo, hi), stored odd-only.
class SieveSegment {
 public:
  SieveSegment() = default;
  SieveSegment(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> odd_bits);

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  std::uint64_t size() const { return hi_ - lo_; }

  // n must lie in [lo, hi).
  bool test(std::uint64_t n) const;
  bool operator[](std::uint64_t i) const { return test(lo_ + i); }

  std::uint64_t count() const;
  std::vector<std::uint64_t> primes() const;

 private:
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  std::uint64_t odd_base_ = 0;  // smallest odd number >= lo
  std::vector<std::uint64_t> odd_bits_;
};

struct GapSample {
  std::uint64_t p = 0;
  std::uint64_t d = 0;
  std::optional<std::uint64_t> index_hint;

  friend bool operator==(const GapSample&, const GapSample&) = default;
};

/// Primes up to `limit` inclusive, by a plain sieve. Used for base primes and
/// the small-prime tables of the other modules.
std::vector<std::uint64_t> small_primes(std::uint64_t limit);

SieveSegment sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options = {});

/// Calls `visit` for every prime in [lo, hi) in ascending order, segment by
/// segment. Returning false from `visit` stops the scan.
void for_each_prime(std::uint64_t lo, std::uint64_t hi,
                    const std::function<bool(std::uint64_t)>& visit,
                    const SieveOptions& options = {});

/// Deterministic Miller-Rabin, exact for every 64-bit n.
bool is_prime(std::uint64_t n);

std::optional<std::uint64_t> next_prime(std::uint64_t n);  // smallest prime > n
std::optional<std::uint64_t> prev_prime(std::uint64_t n);  // largest prime < n

/// Consecutive-prime gaps (p, d) with lo <= p and p + d <= hi.
/// Throws ValidationError when hi < lo.
std::vector<GapSample> gaps_in(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options = {});

/// First-occurrence maximal gaps over all gaps starting at a prime p <= limit.
std::vector<GapSample> max_gap_records(std::uint64_t limit, const SieveOptions& options = {});

/// pi(x). Sharded over `options.threads`; the result never depends on the
/// thread count.
std::uint64_t prime_count(std::uint64_t x, const SieveOptions& options = {});

}  // namespace gapforge::primes
