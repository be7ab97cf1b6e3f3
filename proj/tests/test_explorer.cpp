#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gapforge/error.hpp"
#include "gapforge/explorer.hpp"
#include "oracles.hpp"

using namespace gapforge;
using namespace gapforge::explorer;
using u64 = std::uint64_t;

TEST_CASE("normalized_gaps uses f at the prime") {
  const auto ln = numeric::log_normalizer();
  const auto g = normalized_gaps(2, 12, ln);
  REQUIRE(g.size() == 4);
  CHECK(g[0].p == 2);
  CHECK(g[0].ratio == doctest::Approx(1.0 / std::log(2.0)));
  CHECK(g[3].p == 7);
  CHECK(g[3].d == 4);
  CHECK(g[3].ratio == doctest::Approx(4.0 / std::log(7.0)));

  const auto c = normalized_gaps(100, 130, numeric::constant_normalizer(2.0));
  REQUIRE(c.size() == 5);
  CHECK(c.back().ratio == 7.0);

  const numeric::NormalizerSpec zero{[](double) { return 0.0; }, "zero", 0.1};
  CHECK_THROWS_AS(normalized_gaps(2, 100, zero), ValidationError);
}

TEST_CASE("normalized_gaps composes at a prime split point") {
  const auto ln = numeric::log_normalizer();
  const auto whole = normalized_gaps(1000, 5000, ln);
  auto left = normalized_gaps(1000, 2003, ln);  // 2003 is prime
  const auto right = normalized_gaps(2003, 5000, ln);
  left.insert(left.end(), right.begin(), right.end());
  CHECK(whole == left);
}

TEST_CASE("empirical_limit_set bins") {
  const std::vector<double> samples{0.05, 0.15, 0.19, 1.0, 2.55};
  const auto e = empirical_limit_set(samples, 0.1);
  CHECK(e.sample_count == 5);
  CHECK(e.cells.at(0) == 1);
  CHECK(e.cells.at(1) == 2);
  CHECK(e.cells.at(25) == 1);
  CHECK(e.hit_cells().size() == 4);
  CHECK(e.hit_measure() == doctest::Approx(0.4));

  const auto strict = empirical_limit_set(samples, 0.1, 2);
  CHECK(strict.hit_cells() == std::vector<std::int64_t>{1});

  const auto empty = empirical_limit_set({}, 0.5);
  CHECK(empty.sample_count == 0);
  CHECK(empty.hit_measure() == 0.0);
  CHECK_THROWS_AS(empirical_limit_set(samples, 0.0), ValidationError);
}

TEST_CASE("dyadic_minima") {
  const auto ln = numeric::log_normalizer();
  const auto gaps = normalized_gaps(2, 1'000'000, ln);
  const auto mins = dyadic_minima(gaps, 1000);
  REQUIRE_FALSE(mins.empty());
  CHECK(mins.front().N == 1000);
  for (std::size_t i = 0; i < mins.size(); ++i) {
    if (i) {
      CHECK(mins[i].N == 2 * mins[i - 1].N);
      CHECK(mins[i].running_min <= mins[i - 1].running_min);
    }
    CHECK(mins[i].running_min <= mins[i].block_min);
    CHECK(mins[i].witness_p > mins[i].N);
    CHECK(mins[i].witness_p <= 2 * mins[i].N);
  }
  // Twin primes exist in every block here.
  CHECK(mins.back().block_min == doctest::Approx(2.0 / std::log(static_cast<double>(mins.back().witness_p))));
  CHECK(dyadic_minima({}, 10).empty());
}

TEST_CASE("cluster_scan twin example") {
  const std::vector<u64> H{0, 2};
  const auto r = cluster_scan(BigInt(5), BigInt(6), H, 10, 100, 2);
  std::vector<u64> ns;
  for (const auto& h : r.hits) {
    ns.push_back(h.n);
    CHECK(h.mask == 3);
    CHECK(h.count == 2);
  }
  CHECK(ns == std::vector<u64>{11, 17, 29, 41, 59, 71});
  CHECK(r.range_lo == 10);
  CHECK(r.range_hi == 100);
}

TEST_CASE("cluster_scan edge cases") {
  const std::vector<u64> H{0, 2};
  // m = 0 reports every progression member.
  const auto all = cluster_scan(BigInt(5), BigInt(6), H, 10, 100, 0);
  CHECK(all.hits.size() == 15);
  CHECK(all.hits.front().n == 11);
  CHECK(all.hits.back().n == 95);

  const std::vector<u64> single{0};
  const auto primes_only = cluster_scan(BigInt(0), BigInt(1), single, 1, 50, 1);
  CHECK(primes_only.hits.size() == 15);

  CHECK(cluster_scan(BigInt(5), BigInt(1000), H, 10, 100, 0).hits.empty());
  CHECK_THROWS_AS(cluster_scan(BigInt(7), BigInt(6), H, 10, 100, 1), ValidationError);
  CHECK_THROWS_AS(cluster_scan(BigInt(1), BigInt(6), H, 100, 100, 1), ValidationError);
  const std::vector<u64> bad{2, 0};
  CHECK_THROWS_AS(cluster_scan(BigInt(1), BigInt(6), bad, 10, 100, 1), ValidationError);
}

TEST_CASE("cluster_scan with a modulus beyond 64 bits") {
  const BigInt W = BigInt("100000000000000000000000");
  const std::vector<u64> H{0, 2};
  const auto r = cluster_scan(BigInt(101), W, H, 50, 1000, 1);
  REQUIRE(r.hits.size() == 1);
  CHECK(r.hits[0].n == 101);
  CHECK(r.hits[0].mask == 3);
  CHECK(cluster_scan(BigInt(2000), W, H, 50, 1000, 0).hits.empty());
}

TEST_CASE("cluster_scan: sieve and primality paths agree") {
  const std::vector<u64> H{0, 2, 6, 8, 12};
  const auto sieved = cluster_scan(BigInt(1), BigInt(30), H, 1'000'000, 1'200'000, 3);
  // W = 90 > 64 forces Miller-Rabin; keep the n ≡ 1 (mod 90) part of the sieved run.
  const auto direct = cluster_scan(BigInt(1), BigInt(90), H, 1'000'000, 1'200'000, 3);
  std::vector<ClusterHit> expected;
  for (const auto& h : sieved.hits) {
    if (h.n % 90 == 1) expected.push_back(h);
  }
  CHECK(direct.hits == expected);
  for (const auto& h : sieved.hits) {
    for (std::size_t i = 0; i < H.size(); ++i) {
      CHECK(((h.mask >> i) & 1) == static_cast<u64>(oracle::trial_is_prime(h.n + H[i])));
    }
  }
}

TEST_CASE("consecutive_gap_cluster") {
  const auto c = consecutive_gap_cluster(2, 200, 2, 4.0, numeric::constant_normalizer(1.0));
  std::vector<u64> starts;
  for (const auto& w : c) {
    starts.push_back(w.first_p);
    CHECK(w.gaps.size() == 2);
    CHECK(w.min_ratio >= 4.0);
  }
  CHECK(starts == std::vector<u64>{19, 31, 43, 47, 61, 73, 79, 83, 89, 109, 113, 127, 151, 157, 163, 167});
  CHECK(c[8].gaps == std::vector<u64>{8, 4});
  CHECK_THROWS_AS(consecutive_gap_cluster(2, 100, 0, 1.0, numeric::log_normalizer()), ValidationError);
}
