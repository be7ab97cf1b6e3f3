#include <doctest.h>

#include <random>

#include "gapforge/error.hpp"
#include "gapforge/primes.hpp"
#include "gapforge/rankin.hpp"
#include "oracles.hpp"

using namespace gapforge;
using namespace gapforge::rankin;
using u64 = std::uint64_t;
using V = std::vector<u64>;

namespace {

RankinConfig desk(u64 U = 50, tuples::AdmissibleTuple H = {}, std::optional<u64> q0 = {}) {
  return make_config(20, 3, 7, U, std::move(H), q0);
}

SurvivorSet set_of(V s) {
  SurvivorSet out;
  out.survivors = std::move(s);
  return out;
}

u64 gcd_big(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return big_to_u64(g);
}

}  // namespace

TEST_CASE("derive_params collapses at desk scale") {
  CHECK_THROWS_AS(derive_params(100, 5), OrderingViolated);
  CHECK_THROWS_AS(derive_params(22026, 0), OrderingViolated);
  CHECK_THROWS_AS(derive_params(1'000'000'000, 3), OrderingViolated);
  CHECK_THROWS_AS(derive_params(10, 1), ValidationError);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(desk());
  CHECK_THROWS_AS(make_config(20, 7, 7, 50), OrderingViolated);
  CHECK_THROWS_AS(make_config(20, 3, 11, 50), OrderingViolated);
  CHECK_THROWS_AS(make_config(20, 3, 7, 19), OrderingViolated);
  CHECK_THROWS_AS(make_config(20, 3, 7, 50, tuples::make_tuple({0, 2, 4})), ValidationError);
  CHECK_THROWS_AS(make_config(20, 3, 7, 50, {}, 15), ValidationError);
}

TEST_CASE("partition_primes") {
  const auto p = partition_primes(desk());
  CHECK(p.P1 == V{2, 3});
  CHECK(p.P2 == V{5, 7});
  CHECK(p.P3.empty());
  CHECK(p.P4 == V{11, 13, 17, 19});

  CHECK(partition_primes(desk(50, {}, 13)).P4 == V{11, 17, 19});
  CHECK(partition_primes(desk(50, tuples::make_tuple({5}))).P2 == V{7});

  const auto wide = partition_primes(make_config(60, 5, 11, 60));
  CHECK(wide.P1 == V{2, 3, 5});
  CHECK(wide.P2 == V{7, 11});
  CHECK(wide.P3 == V{13, 17, 19, 23, 29});
  CHECK(wide.P4 == V{31, 37, 41, 43, 47, 53, 59});
}

TEST_CASE("stage_zero") {
  const auto config = desk();
  const auto zero = stage_zero(config, partition_primes(config));
  CHECK(zero.survivors.survivors ==
        V{5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35, 37, 41, 43, 47, 49});
  CHECK(zero.system.assignments == std::map<u64, u64>{{2, 0}, {3, 0}});
  REQUIRE(zero.survivors.history.size() == 1);
  CHECK(zero.survivors.history[0].remaining == 16);
  CHECK(zero.survivors.history[0].removed == 49 - 16);
}

TEST_CASE("survivor classification") {
  const auto config = make_config(20, 3, 7, 200, tuples::make_tuple({11, 13}), 23);
  CHECK(classify_survivor(17, config) == SurvivorType::TypeA);
  CHECK(classify_survivor(143, config) == SurvivorType::TypeB);
  CHECK(classify_survivor(6, config) == SurvivorType::Sieved);
  CHECK(classify_survivor(35, config) == SurvivorType::TypeB);
  CHECK(classify_survivor(17 * 11, config) == SurvivorType::TypeA);
  CHECK(classify_survivor(23 * 5, config) == SurvivorType::TypeB);
  CHECK_THROWS_AS(classify_survivor(1, config), ValidationError);
  CHECK_THROWS_AS(classify_survivor(17 * 5, config), UnclassifiableForm);

  const auto zero = stage_zero(config, partition_primes(config));
  const auto census = survivor_census(zero.survivors.survivors, config);
  CHECK(census.type_a + census.type_b + census.unclassified == zero.survivors.survivors.size());
}

TEST_CASE("stop_threshold") {
  CHECK(stop_threshold(20) == 1);
  CHECK(stop_threshold(1000) == 28);
}

TEST_CASE("greedy_stage examples") {
  const auto config = desk();
  const auto zero = stage_zero(config, partition_primes(config));
  const V p5{5};
  auto r = greedy_stage(zero.survivors, p5, {}, 0);
  CHECK(r.residues == std::map<u64, u64>{{5, 3}});
  CHECK(r.survivors.history.back().removed == 4);
  CHECK(r.survivors.survivors.size() == 12);

  const V H{2};
  auto f = greedy_stage(zero.survivors, p5, H, 0);
  CHECK(f.residues == std::map<u64, u64>{{5, 0}});
  CHECK(f.survivors.history.back().removed == 3);

  auto stopped = greedy_stage(zero.survivors, V{5, 7}, {}, 16);
  CHECK(stopped.residues.empty());
  CHECK(stopped.unused == V{5, 7});
}

TEST_CASE("greedy_stage against brute force") {
  std::mt19937_64 rng(17);
  const auto ps = primes::small_primes(40);
  for (int trial = 0; trial < 300; ++trial) {
    V s;
    for (u64 x = 2; x < 300; ++x) {
      if (rng() % 3 == 0) s.push_back(x);
    }
    V H;
    if (trial % 2) H = {1 + rng() % 4};
    const V chosen(ps.begin() + 2, ps.end());
    const auto r = greedy_stage(set_of(s), chosen, H, 0);
    V remaining = s;
    for (u64 p : chosen) {
      if (remaining.empty()) break;
      u64 best_z = 0;
      u64 best_c = 0;
      bool found = false;
      for (u64 z = 0; z < p; ++z) {
        bool bad = false;
        for (u64 h : H) bad = bad || (z + h) % p == 0;
        if (bad) continue;
        u64 c = 0;
        for (u64 x : remaining) c += (x + z) % p == 0;
        if (!found || c > best_c) {
          found = true;
          best_z = z;
          best_c = c;
        }
      }
      REQUIRE(r.residues.count(p));
      CHECK(r.residues.at(p) == best_z);
      std::erase_if(remaining, [&](u64 x) { return (x + best_z) % p == 0; });
    }
    CHECK(r.survivors.survivors == remaining);
  }
}

TEST_CASE("cleanup_stage examples") {
  const V p11{11};
  const auto both = cleanup_stage(set_of({19, 41}), p11, {});
  CHECK(both.residues == std::map<u64, u64>{{11, 3}});
  CHECK(both.survivors.survivors.empty());
  CHECK(both.survivors.exceptional == V{19, 41});

  const V H{2};
  const auto none = cleanup_stage(set_of({13}), p11, H);
  CHECK(none.residues.empty());
  CHECK(none.unused == V{11});

  const V H13{13};
  const auto skip = cleanup_stage(set_of({13, 19}), V{11, 17}, H13);
  CHECK(skip.survivors.exceptional_prime == V{19});
  CHECK(skip.residues.count(11) == 1);
  CHECK(skip.unused == V{17});
}

TEST_CASE("assign_remaining") {
  ResidueSystem sys;
  const V H{0, 2};
  assign_remaining(sys, H, V{7});
  CHECK(sys.assignments.at(7) == 1);
  ResidueSystem bad;
  CHECK_THROWS_AS(assign_remaining(bad, V{0, 1, 2}, V{3}), NoAllowedClass);
  ResidueSystem pre;
  pre.assign(5, 2);
  assign_remaining(pre, H, V{5});
  CHECK(pre.assignments.at(5) == 2);
  CHECK_THROWS_AS(pre.assign(5, 1), ValidationError);
  CHECK_THROWS_AS(pre.assign(11, 11), ValidationError);
}

TEST_CASE("forbidden") {
  CHECK(forbidden(5, 3, V{2}));
  CHECK_FALSE(forbidden(5, 3, V{1, 3}));
  CHECK(forbidden(3, 0, V{6}));
}

TEST_CASE("assemble_crt") {
  const auto c = assemble_crt({{2, 0}, {3, 0}, {5, 3}, {7, 0}});
  CHECK(c.z == 168);
  CHECK(c.W == 210);
  const auto d = assemble_crt({{2, 1}, {3, 2}});
  CHECK(d.z == 5);
  CHECK(d.W == 6);
  const auto e = assemble_crt({});
  CHECK(e.z == 0);
  CHECK(e.W == 1);
  CHECK_THROWS_AS(assemble_crt({{5, 5}}), ValidationError);
  CHECK_THROWS_AS(assemble_crt({{4, 1}, {6, 1}}), ValidationError);
}

TEST_CASE("assemble_crt round-trips") {
  std::mt19937_64 rng(23);
  const auto ps = primes::small_primes(5000);
  for (int trial = 0; trial < 100; ++trial) {
    std::map<u64, u64> m;
    for (u64 p : ps) {
      if (rng() % 4 == 0) m.emplace(p, rng() % p);
    }
    const auto c = assemble_crt(m);
    CHECK(c.z >= 0);
    CHECK(c.z < c.W);
    for (const auto& [p, a] : m) CHECK(mod_u64(c.z, p) == a);
  }
}

TEST_CASE("verify_construction") {
  const auto v = verify_construction(BigInt(168), BigInt(210), 20, {});
  CHECK(v.covered_prefix == 4);
  REQUIRE_FALSE(v.violations.empty());
  CHECK(v.violations.front().s == 5);
  CHECK(v.violations.front().kind == "uncovered");
  CHECK(verify_construction(BigInt(0), BigInt(1), 1, {}).covered_prefix == 1);
  CHECK_THROWS_AS(verify_construction(BigInt(168), BigInt(210), 20, V{2}), HViolation);
  CHECK_THROWS_AS(verify_construction(BigInt(300), BigInt(210), 20, {}), ValidationError);
}

TEST_CASE("maynard residues and classes") {
  RankinConfig config;
  config.L = 20;
  config.y = 7;
  config.U = 40;
  config.zbound = 13;
  config.strategy = Strategy::Maynard;
  config.validate();
  const auto m = maynard_residues(config);
  CHECK(m.system.assignments ==
        std::map<u64, u64>{{2, 1}, {3, 2}, {5, 4}, {7, 6}, {11, 0}, {13, 0}});
  CHECK(m.survivors.survivors == V{2, 12, 14, 18, 20, 24, 30, 32, 38});
  CHECK(m.R == V{38});
  CHECK(m.R_prime == V{2, 12, 14, 18, 20, 24, 30, 32});
  CHECK(m.R_tilde.empty());
  CHECK(m.fibers.at(2) == V{38});
  CHECK(classify_maynard(38, config) == MaynardClass::R);
  CHECK(classify_maynard(3, config) == MaynardClass::Sieved);

  config.H = tuples::make_tuple({1});
  CHECK_THROWS_AS(maynard_residues(config), ValidationError);
}

TEST_CASE("maynard fibers partition R") {
  RankinConfig config;
  config.L = 400;
  config.y = 11;
  config.U = 2000;
  config.q0 = 41;
  config.strategy = Strategy::Maynard;
  config.validate();
  const auto m = maynard_residues(config, false);
  std::vector<u64> all;
  for (const auto& [key, fiber] : m.fibers) {
    for (u64 s : fiber) {
      CHECK(s % key == 0);
      all.push_back(s);
    }
  }
  std::sort(all.begin(), all.end());
  CHECK(all == m.R);
  CHECK(m.R.size() + m.R_tilde.size() + m.R_prime.size() + m.R_tilde_prime.size() +
            m.unclassified.size() ==
        m.survivors.survivors.size());
}

TEST_CASE("run_construction verifies what it claims") {
  const std::vector<RankinConfig> configs = {
      desk(20),
      desk(50),
      make_config(100, 5, 17, 150, tuples::make_tuple({29, 31})),
      make_config(300, 7, 43, 400, tuples::make_tuple({101, 211}), 13),
  };
  for (const auto& config : configs) {
    const auto rec = run_construction(config);
    CHECK(rec.claimed_coverage == rec.verification.covered_prefix);
    for (const auto& v : rec.verification.violations) CHECK(v.s > rec.verification.covered_prefix);
    for (u64 h : config.H.h) CHECK(gcd_big(rec.system.z + big_from_u64(h), rec.system.W) == 1);
    CHECK(rec.system.z < rec.system.W);
    for (const auto& [p, a] : rec.system.assignments) CHECK(mod_u64(rec.system.z, p) == a);
    CHECK(rec.survivors.history.back().remaining == rec.survivors.survivors.size());
  }
}

TEST_CASE("run_construction, Maynard strategy") {
  RankinConfig config;
  config.L = 200;
  config.y = 7;
  config.U = 260;
  config.strategy = Strategy::Maynard;
  config.H = tuples::make_tuple({2, 12});
  const auto rec = run_construction(config);
  REQUIRE(rec.maynard.has_value());
  CHECK(rec.claimed_coverage == rec.verification.covered_prefix);
  CHECK(rec.partition.P1 == V{3, 5, 7});
  for (u64 h : config.H.h) CHECK(gcd_big(rec.system.z + big_from_u64(h), rec.system.W) == 1);
}

TEST_CASE("run_construction rejects 0 in H and H divisible by a sieving prime") {
  CHECK_THROWS_AS(run_construction(desk(50, tuples::make_tuple({0}))), ValidationError);
  CHECK_THROWS_AS(run_construction(desk(50, tuples::make_tuple({9}))), ValidationError);
}
