#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

namespace gapforge::numeric {

// Natural logarithm of an argument, for x too large to hold in a double.
struct LogArg {
  double ln_x;
};

/// ν-fold iterated natural logarithm. Throws UndefinedIterate when an
/// intermediate iterate (one that still has to be logged) is <= 0.
double iter_log(double x, int nu);
double iter_log(LogArg x, int nu);

/// Value of g(x) = log2 x * log4 x / (log3 x)^2 together with the regime flag.
/// `negative_regime` is set when log4 x < 0: the value is then reported but is
/// outside the asymptotic regime.
struct RankinValue {
  double value = 0.0;
  bool negative_regime = false;
};

RankinValue rankin_g(double x);
RankinValue rankin_g(LogArg x);

enum class Omega0 { Log2, Log3, Constant };

struct GrowthConstants {
  double C7 = 50.0 * std::exp(-10.0);  // k_for_m(2) = 50 under the e^{5m} law
  Omega0 omega0 = Omega0::Log2;
  double c0 = 1.0;
  double c9 = 1.0;
  double c10 = 1.0;

  // Throws ValidationError unless every constant is strictly positive.
  void validate() const;
};

double omega0(LogArg x, const GrowthConstants& constants);

/// g0(x) = ω0(x) g(x).
RankinValue rankin_g0(double x, const GrowthConstants& constants = {});
RankinValue rankin_g0(LogArg x, const GrowthConstants& constants = {});

/// Tuple size for m primes: 50 for m = 2, ceil(C7 e^{5m}) otherwise.
std::int64_t k_for_m(int m, const GrowthConstants& constants = {});

struct NormalizerSpec {
  std::function<double(double)> eval;
  std::string name;
  double epsilon = 0.1;
};

NormalizerSpec log_normalizer();
NormalizerSpec constant_normalizer(double value);
NormalizerSpec identity_normalizer();
// f(x) = c0 g(x) log x; only positive once log4 x > 0.
NormalizerSpec rankin_log_normalizer(const GrowthConstants& constants = {});
// f(x) = scale (log x)^a (log2 x)^b.
NormalizerSpec power_log_normalizer(double scale, double log_power, double loglog_power);

struct SlowVariation {
  bool ok = false;
  double max_deviation = 0.0;
  std::int64_t worst_n = 0;
};

/// Samples f on [N, 2N] (log-spaced integer grid plus both endpoints) and
/// reports max |f(n)/f(N) - 1|. Throws NonMonotone if sampled values decrease.
SlowVariation validate_slow_variation(const NormalizerSpec& f, std::int64_t N, double eps,
                                      int grid_points = 1024);

struct MertensRatio {
  double exact = 1.0;      // prod_{v < p <= y} (1 - 1/p)
  double surrogate = 1.0;  // log v / log y
};

MertensRatio mertens_ratio(double v, double y);

}  // namespace gapforge::numeric
