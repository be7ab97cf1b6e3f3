#include "gapforge/tuples.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gapforge/error.hpp"
#include "gapforge/primes.hpp"

namespace gapforge::tuples {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

void require_increasing(std::span<const u64> h) {
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (h[i] <= h[i - 1]) throw ValidationError("tuple must be strictly increasing");
  }
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

// Brent's variant of Pollard rho; n odd composite.
u64 pollard_rho(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    constexpr u64 m = 128;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (primes::is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

bool AdmissibleTuple::contains(u64 value) const {
  return std::binary_search(h.begin(), h.end(), value);
}

bool is_admissible(std::span<const u64> h) {
  const u64 k = h.size();
  for (u64 p : primes::small_primes(k)) {
    std::vector<bool> seen(p, false);
    u64 distinct = 0;
    for (u64 v : h) {
      const u64 r = v % p;
      if (!seen[r]) {
        seen[r] = true;
        ++distinct;
      }
    }
    if (distinct == p) return false;
  }
  return true;
}

BigInt delta(std::span<const u64> h) {
  require_increasing(h);
  BigInt out = 1;
  for (std::size_t j = 0; j < h.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) out *= big_from_u64(h[j] - h[i]);
  }
  return out;
}

std::vector<u64> factor_u64(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  for (u64 p = 17; p < 1024 && p * p <= n; p += 2) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  factor_into(n, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<u64> delta_prime_factors(std::span<const u64> h) {
  require_increasing(h);
  std::vector<u64> out;
  for (std::size_t j = 0; j < h.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      for (u64 p : factor_u64(h[j] - h[i])) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

AdmissibleTuple make_tuple(std::vector<u64> h) {
  require_increasing(h);
  AdmissibleTuple t;
  t.delta = delta(h);
  for (u64 p : delta_prime_factors(h)) t.delta_radical *= big_from_u64(p);
  t.admissible = is_admissible(h);
  t.h = std::move(h);
  return t;
}

BigInt radical(const BigInt& n, const RadicalOptions& options) {
  if (n < 1) throw ValidationError("radical requires n >= 1");
  BigInt rest = n;
  BigInt out = 1;
  for (u64 p : primes::small_primes(options.trial_bound)) {
    if (big_from_u64(p) * p > rest) break;
    if (mod_u64(rest, p) != 0) continue;
    out *= big_from_u64(p);
    while (mod_u64(rest, p) == 0) mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
  }
  if (rest == 1) return out;
  const BigInt bound = big_from_u64(options.trial_bound);
  if (rest < bound * bound) return out * rest;  // no factor below the trial bound
  if (fits_u64(rest)) {
    auto fs = factor_u64(big_to_u64(rest));
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    for (u64 p : fs) out *= big_from_u64(p);
    return out;
  }
  if (mpz_probab_prime_p(rest.get_mpz_t(), 40) > 0) return out * rest;
  throw FactorBudgetExceeded("composite cofactor of " +
                             std::to_string(mpz_sizeinbase(rest.get_mpz_t(), 10)) +
                             " digits beyond trial bound");
}

AdmissibleTuple place_prime_tuple(const PlacementConstraint& c) {
  if (!(c.eta > 0.0)) throw ValidationError("eta must be positive");
  const std::size_t k = c.targets.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (!(c.targets[i] > 0.0)) throw ValidationError("targets must be positive");
    if (i > 0 && !(c.targets[i] > c.targets[i - 1])) {
      throw ValidationError("targets must be strictly increasing");
    }
    if (i > 0 && !(c.targets[i - 1] * (1.0 + c.eta) < c.targets[i])) {
      throw ValidationError("placement windows overlap");
    }
  }

  std::vector<std::vector<u64>> candidates(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double lo = std::ceil(c.targets[i]);
    double hi = std::floor(c.targets[i] * (1.0 + c.eta));
    if (c.cap) hi = std::min(hi, static_cast<double>(*c.cap));
    if (hi >= 1.8e19) throw Overflow("placement window beyond 64-bit range");
    if (hi - lo > static_cast<double>(c.node_budget)) {
      throw BudgetExceeded("placement window wider than node budget");
    }
    for (auto n = static_cast<u64>(lo); static_cast<double>(n) <= hi; ++n) {
      if (!c.require_prime || primes::is_prime(n)) candidates[i].push_back(n);
    }
  }

  std::vector<u64> chosen;
  u64 nodes = 0;
  auto divides = [](u64 t, u64 d) { return t != 0 && d % t == 0; };
  auto compatible = [&](u64 cand) {
    for (u64 h : chosen) {
      const u64 d = cand - h;
      if (c.q0 && d % *c.q0 == 0) return false;
      if (divides(cand, d)) return false;
      for (u64 t : chosen) {
        if (divides(t, d)) return false;
      }
    }
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        if (divides(cand, chosen[j] - chosen[i])) return false;
      }
    }
    chosen.push_back(cand);
    const bool ok = is_admissible(chosen);
    chosen.pop_back();
    return ok;
  };

  auto search = [&](auto&& self, std::size_t window) -> bool {
    if (window == k) return true;
    for (u64 cand : candidates[window]) {
      if (++nodes > c.node_budget) throw BudgetExceeded("placement search exceeded node budget");
      if (!compatible(cand)) continue;
      chosen.push_back(cand);
      if (self(self, window + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };

  if (!search(search, 0)) {
    throw NoPlacement("no conforming choice in " + std::to_string(k) + " windows");
  }
  return make_tuple(std::move(chosen));
}

std::vector<double> equal_spaced_targets(double U, int k) {
  if (!(U > 0.0) || k < 1) throw ValidationError("equal_spaced_targets requires U > 0, k >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) out.push_back(i * U / (k + 1));
  return out;
}

std::vector<double> scaled_targets(std::span<const double> betas, double scale) {
  std::vector<double> out;
  out.reserve(betas.size());
  for (double b : betas) out.push_back(b * scale);
  return out;
}

}  // namespace gapforge::tuples
