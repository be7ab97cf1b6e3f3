#include "gapforge/smooth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gapforge/error.hpp"
#include "gapforge/numeric.hpp"
#include "gapforge/primes.hpp"

namespace gapforge::smooth {
namespace {

using u64 = std::uint64_t;

class PsiDfs {
 public:
  PsiDfs(u64 x, u64 y, u64 budget)
      : primes_(primes::small_primes(std::min(x, y))), budget_(budget) {}

  u64 count(u64 x) { return visit(0, x); }

  void collect(std::size_t idx, u64 value, u64 x, std::vector<u64>& out) {
    charge(1);
    out.push_back(value);
    for (std::size_t j = idx; j < primes_.size(); ++j) {
      const u64 p = primes_[j];
      if (p > x / value) break;
      for (u64 v = value * p;; v *= p) {
        collect(j + 1, v, x, out);
        if (v > x / p) break;
      }
    }
  }

 private:
  // Smooth m <= rem whose prime factors all have index >= idx.
  u64 visit(std::size_t idx, u64 rem) {
    charge(1);
    u64 total = 1;
    for (std::size_t j = idx; j < primes_.size(); ++j) {
      const u64 p = primes_[j];
      if (p > rem) break;
      if (p > rem / p) {
        // Only p itself (no higher powers or cofactors) fits for p and every
        // later prime up to rem.
        const auto end = std::upper_bound(primes_.begin() + static_cast<std::ptrdiff_t>(j),
                                          primes_.end(), rem);
        const u64 n = static_cast<u64>(end - (primes_.begin() + static_cast<std::ptrdiff_t>(j)));
        charge(n);
        total += n;
        break;
      }
      for (u64 r = rem / p; r >= 1; r /= p) total += visit(j + 1, r);
    }
    return total;
  }

  void charge(u64 n) {
    visits_ += n;
    if (visits_ > budget_) {
      throw BudgetExceeded("psi DFS exceeded " + std::to_string(budget_) + " visits");
    }
  }

  std::vector<u64> primes_;
  u64 budget_;
  u64 visits_ = 0;
};

void check_args(u64 x, u64 y) {
  if (x < 1 || y < 2) throw ValidationError("psi requires x >= 1 and y >= 2");
}

constexpr int kRhoStepsPerUnit = 256;
constexpr int kRhoUnits = 100;

// rho on the grid u = i / 256, 0 <= i <= 256 * kRhoUnits.
class RhoGrid {
 public:
  RhoGrid() : values_(kRhoStepsPerUnit * kRhoUnits + 1, 1.0) {
    constexpr double h = 1.0 / kRhoStepsPerUnit;
    // 8-point Gauss-Legendre nodes/weights on [-1, 1].
    static constexpr std::array<double, 4> nodes = {0.1834346424956498, 0.5255324099163290,
                                                    0.7966664774136267, 0.9602898564975363};
    static constexpr std::array<double, 4> weights = {0.3626837833783620, 0.3137066458778873,
                                                      0.2223810344533745, 0.1012285362903763};
    for (int i = kRhoStepsPerUnit; i < static_cast<int>(values_.size()) - 1; ++i) {
      const double a = i * h;
      const double mid = a + 0.5 * h;
      double integral = 0.0;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        for (double sign : {-1.0, 1.0}) {
          const double t = mid + sign * nodes[q] * 0.5 * h;
          integral += weights[q] * evaluate(t - 1.0) / t;
        }
      }
      values_[i + 1] = values_[i] - 0.5 * h * integral;
    }
  }

  // Valid for any u whose grid cell is already filled.
  double evaluate(double u) const {
    if (u <= 1.0) return 1.0;
    constexpr double h = 1.0 / kRhoStepsPerUnit;
    const double pos = u * kRhoStepsPerUnit;
    auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values_.size()) return 0.0;
    const double t = pos - static_cast<double>(i);
    const double u0 = static_cast<double>(i) * h;
    const double u1 = u0 + h;
    const double y0 = values_[i];
    const double y1 = values_[i + 1];
    if (t == 0.0) return y0;
    // rho'(u) = -rho(u - 1) / u, exact from earlier cells.
    const double d0 = -evaluate(u0 - 1.0) / u0;
    const double d1 = -evaluate(u1 - 1.0) / u1;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * d1;
  }

 private:
  std::vector<double> values_;
};

}  // namespace

u64 psi_exact(u64 x, u64 y, const PsiBudget& budget) {
  check_args(x, y);
  return PsiDfs(x, y, budget.dfs_visits).count(x);
}

std::vector<u64> smooth_numbers(u64 x, u64 y, const PsiBudget& budget) {
  check_args(x, y);
  PsiDfs dfs(x, y, budget.dfs_visits);
  std::vector<u64> out;
  dfs.collect(0, 1, x, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> largest_prime_factors(u64 x, const PsiBudget& budget) {
  if (x > budget.sieve_limit) {
    throw BudgetExceeded("largest-prime-factor sieve limited to x <= " +
                         std::to_string(budget.sieve_limit));
  }
  std::vector<std::uint32_t> gpf(x + 1, 1);
  for (u64 p = 2; p <= x; ++p) {
    if (gpf[p] != 1) continue;
    for (u64 m = p; m <= x; m += p) gpf[m] = static_cast<std::uint32_t>(p);
  }
  return gpf;
}

u64 psi_exact_sieve(u64 x, u64 y, const PsiBudget& budget) {
  check_args(x, y);
  const auto gpf = largest_prime_factors(x, budget);
  return static_cast<u64>(
      std::count_if(gpf.begin() + 1, gpf.end(), [y](std::uint32_t f) { return f <= y; }));
}

double psi_bound(double x, double y, double o1) {
  if (!(x >= 1.0)) throw ValidationError("psi_bound requires x >= 1");
  const double log2y = numeric::iter_log(y, 2);
  const double log3y = numeric::iter_log(y, 3);
  return x * std::exp(-std::log(x) * log3y / std::log(y) + (1.0 + o1) * log2y);
}

double dickman_rho(double u) {
  if (u < 0.0) throw ValidationError("dickman_rho requires u >= 0");
  static const RhoGrid grid;
  return grid.evaluate(u);
}

SmoothCount smooth_count(u64 x, u64 y, double o1, const PsiBudget& budget) {
  SmoothCount out;
  out.x = x;
  out.y = y;
  out.exact = psi_exact(x, y, budget);
  const double dx = static_cast<double>(x);
  const double dy = static_cast<double>(y);
  out.bound = dy > std::exp(1.0) ? psi_bound(dx, dy, o1) : std::nan("");
  out.rho_estimate = x == 1 ? 1.0 : dx * dickman_rho(std::log(dx) / std::log(dy));
  return out;
}

}  // namespace gapforge::smooth
