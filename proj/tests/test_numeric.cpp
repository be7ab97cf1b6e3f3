#include <doctest.h>

#include <cmath>

#include "gapforge/error.hpp"
#include "gapforge/numeric.hpp"
#include "oracles.hpp"

using namespace gapforge;
using namespace gapforge::numeric;

// Reference values below were evaluated offline at 30 significant digits
// (mpmath) and frozen.

TEST_CASE("iter_log basics") {
  CHECK(iter_log(std::exp(1.0), 1) == doctest::Approx(1.0));
  CHECK(iter_log(1e10, 2) == doctest::Approx(3.13661753824200148).epsilon(1e-12));
  CHECK_THROWS_AS(iter_log(100.0, 5), UndefinedIterate);
  // log4(100) < 0 is allowed as the final level.
  CHECK(iter_log(100.0, 4) < 0.0);
  CHECK_THROWS_AS(iter_log(0.0, 1), UndefinedIterate);
}

TEST_CASE("iter_log composes") {
  for (double x : {20.0, 1e3, 1e8, 1e30, 1e300}) {
    for (int nu = 1; nu < 3; ++nu) {
      const double inner = iter_log(x, nu);
      if (inner <= 0.0) break;
      CHECK(iter_log(x, nu + 1) == std::log(inner));
    }
  }
  CHECK(iter_log(LogArg{std::log(1e10)}, 2) == doctest::Approx(iter_log(1e10, 2)));
}

TEST_CASE("rankin_g values") {
  CHECK(rankin_g(1e10).value == doctest::Approx(0.321115023791678).epsilon(1e-10));
  CHECK_FALSE(rankin_g(1e10).negative_regime);

  // Tower point e^{e^e}: log4 vanishes.
  const auto tower = rankin_g(LogArg{std::exp(std::exp(1.0))});
  CHECK(tower.value == doctest::Approx(0.0).epsilon(1e-12));

  // x = e^{e^{e^e}}: log2 = e^e, log3 = e, log4 = 1, g = e^{e-2}.
  const double ln_x = std::exp(std::exp(std::exp(1.0)));
  CHECK(rankin_g(LogArg{ln_x}).value == doctest::Approx(2.05090637269250134).epsilon(1e-12));

  // log3 <= 0 below x = e^e.
  CHECK_THROWS_AS(rankin_g(10.0), UndefinedIterate);
  // Between e^e and e^{e^e} log4 < 0.
  CHECK(rankin_g(1e4).negative_regime);
}

TEST_CASE("rankin_g is eventually increasing") {
  const double start = std::exp(std::exp(std::exp(1.0)));  // ln of the tower point above
  double prev = rankin_g(LogArg{start}).value;
  for (int i = 1; i <= 200; ++i) {
    const double g = rankin_g(LogArg{start * std::pow(1.5, i)}).value;
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("rankin_g0 with default omega0 = log2") {
  GrowthConstants c;
  CHECK(rankin_g0(1e10, c).value == doctest::Approx(1.00721501541797571).epsilon(1e-10));
  CHECK(rankin_g0(LogArg{std::exp(std::exp(1.0))}, c).value ==
        doctest::Approx(0.0).epsilon(1e-12));
  for (double x : {1e7, 1e10, 1e50}) {
    CHECK(rankin_g0(x, c).value / rankin_g(x).value == doctest::Approx(iter_log(x, 2)));
  }
  c.omega0 = Omega0::Constant;
  CHECK(rankin_g0(1e10, c).value == doctest::Approx(rankin_g(1e10).value));
}

TEST_CASE("k_for_m") {
  CHECK(k_for_m(2) == 50);
  CHECK(k_for_m(3) == 7421);  // ceil(50 e^5) = ceil(7420.658)
  CHECK(static_cast<double>(k_for_m(5)) / static_cast<double>(k_for_m(4)) ==
        doctest::Approx(std::exp(5.0)).epsilon(1e-3));
  GrowthConstants odd;
  odd.C7 = 1.0;
  CHECK(k_for_m(2, odd) == 50);
  CHECK(k_for_m(3, odd) == static_cast<std::int64_t>(std::ceil(std::exp(15.0))));
  CHECK_THROWS_AS(k_for_m(12), Overflow);
  CHECK_THROWS_AS(k_for_m(1), ValidationError);
  GrowthConstants bad;
  bad.c10 = 0.0;
  CHECK_THROWS_AS(k_for_m(3, bad), ValidationError);
}

TEST_CASE("validate_slow_variation") {
  const auto ln = log_normalizer();
  const auto r = validate_slow_variation(ln, 100000, 0.1);
  CHECK(r.ok);
  CHECK(r.max_deviation == doctest::Approx(0.0602059991327962).epsilon(1e-9));
  CHECK(r.worst_n == 200000);

  CHECK_FALSE(validate_slow_variation(identity_normalizer(), 1000, 0.5).ok);
  const auto c = validate_slow_variation(constant_normalizer(1.0), 12345, 0.01);
  CHECK(c.ok);
  CHECK(c.max_deviation == 0.0);

  NormalizerSpec decreasing{[](double x) { return 1.0 / x; }, "inverse", 0.1};
  CHECK_THROWS_AS(validate_slow_variation(decreasing, 100, 0.5), NonMonotone);
}

TEST_CASE("log passes slow variation once N >= exp(ln 2 / eps)") {
  const auto ln = log_normalizer();
  for (double eps : {0.05, 0.1, 0.2, 0.3}) {
    const auto n0 = static_cast<std::int64_t>(std::ceil(std::exp(std::log(2.0) / eps)));
    for (std::int64_t N : {n0 + 1, 2 * n0 + 7, 10 * n0}) {
      CHECK(validate_slow_variation(ln, N, eps, 64).ok);
    }
  }
}

TEST_CASE("mertens_ratio") {
  CHECK(mertens_ratio(50, 50).exact == 1.0);
  CHECK(mertens_ratio(2, 10).exact == doctest::Approx(2.0 / 3 * 4.0 / 5 * 6.0 / 7));
  const auto r = mertens_ratio(100, 10000);
  CHECK(r.surrogate == doctest::Approx(0.5));
  CHECK(r.exact == doctest::Approx(0.506034437905847669).epsilon(1e-10));
  const double q = r.exact / r.surrogate;
  CHECK(q >= 0.8);
  CHECK(q <= 1.25);
  CHECK_THROWS_AS(mertens_ratio(10, 5), ValidationError);
}

TEST_CASE("mertens_ratio strictly decreases when the range gains a prime") {
  double prev = mertens_ratio(10, 10).exact;
  for (int y = 11; y < 400; ++y) {
    const double cur = mertens_ratio(10, y).exact;
    if (oracle::trial_is_prime(static_cast<std::uint64_t>(y))) {
      CHECK(cur < prev);
    } else {
      CHECK(cur == prev);
    }
    prev = cur;
  }
}

TEST_CASE("power-log normalizer") {
  const auto f = power_log_normalizer(2.0, 1.0, 0.5);
  const double x = 1e6;
  CHECK(f.eval(x) == doctest::Approx(2.0 * std::log(x) * std::sqrt(std::log(std::log(x)))));
}
