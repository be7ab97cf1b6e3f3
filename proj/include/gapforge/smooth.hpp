#pragma once

#include <cstdint>
#include <vector>

namespace gapforge::smooth {

struct SmoothCount {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t exact = 0;
  double bound = 0.0;         // de Bruijn-type upper bound, asymptotic
  double rho_estimate = 0.0;  // x * rho(log x / log y)
};

struct PsiBudget {
  // Maximum DFS visits before giving up.
  std::uint64_t dfs_visits = 4'000'000'000ULL;
  // Maximum x for the sieve route.
  std::uint64_t sieve_limit = std::uint64_t{1} << 30;
};

/// Psi(x, y): y-smooth n <= x, counting n = 1. Depth-first enumeration of
/// prime-power products. Throws BudgetExceeded past `budget.dfs_visits`.
std::uint64_t psi_exact(std::uint64_t x, std::uint64_t y, const PsiBudget& budget = {});

/// Same count through a largest-prime-factor sieve over [1, x].
std::uint64_t psi_exact_sieve(std::uint64_t x, std::uint64_t y, const PsiBudget& budget = {});

/// Sorted list of the y-smooth n <= x produced by the DFS route.
std::vector<std::uint64_t> smooth_numbers(std::uint64_t x, std::uint64_t y,
                                          const PsiBudget& budget = {});

/// Largest prime factor of every n in [0, x] (0 and 1 map to 1).
std::vector<std::uint32_t> largest_prime_factors(std::uint64_t x, const PsiBudget& budget = {});

/// x exp(-log x log3 y / log y + (1 + o1) log2 y). Asymptotic: it may fall
/// below the exact count at desk scale, and nothing clamps it.
double psi_bound(double x, double y, double o1 = 0.0);

/// Dickman's rho, from a cached grid with step 1/256 and cubic Hermite
/// interpolation. Absolute error below 1e-8 for u <= 10.
double dickman_rho(double u);

SmoothCount smooth_count(std::uint64_t x, std::uint64_t y, double o1 = 0.0,
                         const PsiBudget& budget = {});

}  // namespace gapforge::smooth
