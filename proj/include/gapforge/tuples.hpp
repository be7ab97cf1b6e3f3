#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gapforge/bigint.hpp"

namespace gapforge::tuples {

// H = {h_1 < ... < h_k} with its difference product and certificate.
struct AdmissibleTuple {
  std::vector<std::uint64_t> h;
  BigInt delta = 1;          // prod_{i<j} (h_j - h_i)
  BigInt delta_radical = 1;  // distinct primes dividing delta
  bool admissible = true;

  std::size_t k() const { return h.size(); }
  bool contains(std::uint64_t value) const;
};

/// Builds the tuple record. Throws ValidationError unless `h` is strictly
/// increasing.
AdmissibleTuple make_tuple(std::vector<std::uint64_t> h);

/// True iff no prime p <= k sees every residue class occupied by h.
bool is_admissible(std::span<const std::uint64_t> h);

BigInt delta(std::span<const std::uint64_t> h);

/// Distinct prime factors of delta(h), computed from the pairwise differences
/// (every prime factor is at most max(h) - min(h)).
std::vector<std::uint64_t> delta_prime_factors(std::span<const std::uint64_t> h);

struct RadicalOptions {
  std::uint64_t trial_bound = 1'000'000;
};

/// Product of the distinct primes dividing n >= 1. Trial division, then
/// Pollard rho on a 64-bit cofactor; a larger composite cofactor throws
/// FactorBudgetExceeded.
BigInt radical(const BigInt& n, const RadicalOptions& options = {});

/// Prime factorization of a 64-bit integer, ascending, with multiplicity.
std::vector<std::uint64_t> factor_u64(std::uint64_t n);

struct PlacementConstraint {
  std::vector<double> targets;  // xi_i, strictly increasing
  double eta = 0.1;             // window [xi, xi (1 + eta)]
  std::optional<std::uint64_t> q0;
  bool require_prime = true;
  std::optional<std::uint64_t> cap;
  std::uint64_t node_budget = 10'000'000;
};

/// One element per window, scanned ascending with backtracking. The result
/// satisfies q0 !| (h_j - h_i), h_t !| (h_j - h_i) for all t and i < j, and is
/// admissible. Throws NoPlacement when no choice exists, BudgetExceeded when
/// the backtracking exceeds `node_budget`.
AdmissibleTuple place_prime_tuple(const PlacementConstraint& c);

/// {i U / (k + 1)}, i = 1..k.
std::vector<double> equal_spaced_targets(double U, int k);

/// {beta_i * scale}: targets proportional to a normalizer value.
std::vector<double> scaled_targets(std::span<const double> betas, double scale);

}  // namespace gapforge::tuples
