#include "gapforge/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gapforge/error.hpp"
#include "gapforge/primes.hpp"

namespace gapforge::numeric {
namespace {

// Applies the remaining nu - 1 logs to an already-logged value.
double iterate_from(double value, int remaining, int level) {
  for (int i = 0; i < remaining; ++i) {
    if (!(value > 0.0)) {
      throw UndefinedIterate("log_" + std::to_string(level + i) + " = " + std::to_string(value) +
                             " <= 0 cannot be logged again");
    }
    value = std::log(value);
  }
  return value;
}

RankinValue g_from_log2(double log2) {
  if (!(log2 > 0.0)) throw UndefinedIterate("log3 undefined: log2 x <= 0");
  const double log3 = std::log(log2);
  if (!(log3 > 0.0)) throw UndefinedIterate("g(x) undefined: log3 x <= 0");
  const double log4 = std::log(log3);
  return {log2 * log4 / (log3 * log3), log4 < 0.0};
}

}  // namespace

double iter_log(double x, int nu) {
  if (nu < 1) throw ValidationError("iter_log requires nu >= 1");
  if (!(x > 0.0)) throw UndefinedIterate("x must be positive");
  return iterate_from(std::log(x), nu - 1, 1);
}

double iter_log(LogArg x, int nu) {
  if (nu < 1) throw ValidationError("iter_log requires nu >= 1");
  return iterate_from(x.ln_x, nu - 1, 1);
}

RankinValue rankin_g(double x) {
  if (!(x > 1.0)) throw UndefinedIterate("g(x) requires x > 1");
  return g_from_log2(iter_log(x, 2));
}

RankinValue rankin_g(LogArg x) { return g_from_log2(iter_log(x, 2)); }

void GrowthConstants::validate() const {
  if (!(C7 > 0 && c0 > 0 && c9 > 0 && c10 > 0)) {
    throw ValidationError("growth constants must be strictly positive");
  }
}

double omega0(LogArg x, const GrowthConstants& constants) {
  switch (constants.omega0) {
    case Omega0::Log2:
      return iter_log(x, 2);
    case Omega0::Log3:
      return iter_log(x, 3);
    case Omega0::Constant:
      return 1.0;
  }
  return 1.0;
}

RankinValue rankin_g0(double x, const GrowthConstants& constants) {
  if (!(x > 1.0)) throw UndefinedIterate("g0(x) requires x > 1");
  return rankin_g0(LogArg{std::log(x)}, constants);
}

RankinValue rankin_g0(LogArg x, const GrowthConstants& constants) {
  RankinValue g = rankin_g(x);
  g.value *= omega0(x, constants);
  return g;
}

std::int64_t k_for_m(int m, const GrowthConstants& constants) {
  if (m < 2) throw ValidationError("k_for_m requires m >= 2");
  if (m == 2) return 50;
  constants.validate();
  const double k = std::ceil(constants.C7 * std::exp(5.0 * m));
  if (!(k < 9.2233720368547758e18)) {
    throw Overflow("k_for_m(" + std::to_string(m) + ") exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(k);
}

NormalizerSpec log_normalizer() {
  return {[](double x) { return std::log(x); }, "log", 0.1};
}

NormalizerSpec constant_normalizer(double value) {
  return {[value](double) { return value; }, "const", 0.1};
}

NormalizerSpec identity_normalizer() {
  return {[](double x) { return x; }, "identity", 0.1};
}

NormalizerSpec rankin_log_normalizer(const GrowthConstants& constants) {
  const double c0 = constants.c0;
  return {[c0](double x) {
            const double lx = std::log(x);
            return c0 * rankin_g(LogArg{lx}).value * lx;
          },
          "g-log", 0.1};
}

NormalizerSpec power_log_normalizer(double scale, double log_power, double loglog_power) {
  return {[=](double x) {
            const double l1 = std::log(x);
            double v = scale * std::pow(l1, log_power);
            if (loglog_power != 0.0) v *= std::pow(std::log(l1), loglog_power);
            return v;
          },
          "power-log", 0.1};
}

SlowVariation validate_slow_variation(const NormalizerSpec& f, std::int64_t N, double eps,
                                      int grid_points) {
  if (N < 2) throw ValidationError("validate_slow_variation requires N >= 2");
  if (grid_points < 2) throw ValidationError("grid needs at least two points");
  const double base = f.eval(static_cast<double>(N));
  if (!(base > 0.0)) throw ValidationError("normalizer must be positive at N");

  SlowVariation out;
  out.worst_n = N;
  const double log_lo = std::log(static_cast<double>(N));
  const double log_span = std::log(2.0);
  std::int64_t last_n = N - 1;
  double last_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid_points; ++i) {
    std::int64_t n =
        i == grid_points
            ? 2 * N
            : std::llround(std::exp(log_lo + log_span * static_cast<double>(i) / grid_points));
    n = std::clamp<std::int64_t>(n, N, 2 * N);
    if (n <= last_n) continue;
    const double value = f.eval(static_cast<double>(n));
    if (value < last_value) {
      throw NonMonotone(f.name + " decreases at n = " + std::to_string(n));
    }
    const double dev = std::abs(value / base - 1.0);
    if (dev > out.max_deviation) {
      out.max_deviation = dev;
      out.worst_n = n;
    }
    last_n = n;
    last_value = value;
  }
  out.ok = out.max_deviation <= eps;
  return out;
}

MertensRatio mertens_ratio(double v, double y) {
  if (!(v >= 2.0 && y >= v)) throw ValidationError("mertens_ratio requires 2 <= v <= y");
  MertensRatio out;
  const auto limit = static_cast<std::uint64_t>(std::floor(y));
  const auto floor_v = static_cast<std::uint64_t>(std::floor(v));
  double log_product = 0.0;
  primes::for_each_prime(floor_v + 1, limit + 1, [&](std::uint64_t p) {
    log_product += std::log1p(-1.0 / static_cast<double>(p));
    return true;
  });
  out.exact = std::exp(log_product);
  out.surrogate = std::log(v) / std::log(y);
  return out;
}

}  // namespace gapforge::numeric
