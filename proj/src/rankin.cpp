#include "gapforge/rankin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gapforge/error.hpp"
#include "gapforge/primes.hpp"

namespace gapforge::rankin {
namespace {

using u64 = std::uint64_t;

std::string num(u64 v) { return std::to_string(v); }

// Extended Euclid inverse of a modulo prime-or-coprime m; 0 if none.
u64 inverse_mod(u64 a, u64 m) {
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) return 0;
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

// Prime factors of s with multiplicity, ascending (s is small: s <= U).
std::vector<u64> factor(u64 s) { return tuples::factor_u64(s); }

u64 first_uncovered(const SurvivorSet& set, std::span<const u64> H, u64 U) {
  for (u64 s : set.survivors) {
    if (!std::binary_search(H.begin(), H.end(), s)) return s - 1;
  }
  return U;
}

}  // namespace

bool RankinConfig::excluded(u64 p) const { return H.contains(p) || (q0 && *q0 == p); }

u64 RankinConfig::effective_zbound() const {
  if (zbound != 0) return zbound;
  const double l = static_cast<double>(L);
  return static_cast<u64>(std::floor(l / numeric::iter_log(l, 2)));
}

void RankinConfig::validate() const {
  if (L < 4) throw OrderingViolated("L must be at least 4");
  if (strategy == Strategy::ErdosRankin) {
    if (!(2 <= v && v < y && 2 * y <= L)) {
      throw OrderingViolated("need 2 <= v < y <= L/2 (v=" + num(v) + ", y=" + num(y) +
                             ", L=" + num(L) + ")");
    }
  } else {
    const u64 zb = effective_zbound();
    if (!(2 <= y && y < zb && zb <= L)) {
      throw OrderingViolated("need 2 <= y < zbound <= L (y=" + num(y) + ", zbound=" + num(zb) +
                             ", L=" + num(L) + ")");
    }
  }
  if (U < L) throw OrderingViolated("need U >= L (U=" + num(U) + ", L=" + num(L) + ")");
  if (!H.admissible) throw ValidationError("tuple H is not admissible");
  if (q0 && !primes::is_prime(*q0)) throw ValidationError("q0 must be prime");
}

RankinConfig derive_params(u64 L, int k, const numeric::GrowthConstants& constants) {
  if (L < 16) throw ValidationError("derive_params requires L >= 16");
  if (k < 0) throw ValidationError("k must be nonnegative");
  constants.validate();
  const double l = static_cast<double>(L);
  const double ln_l = std::log(l);
  const double log2 = numeric::iter_log(l, 2);
  const double log3 = numeric::iter_log(l, 3);
  const double v = ln_l * ln_l * ln_l;
  const double y = std::exp(ln_l * log3 / ((k + 5) * log2));

  RankinConfig config;
  config.L = L;
  config.v = static_cast<u64>(std::floor(v));
  config.y = y >= 1.8e19 ? ~u64{0} : static_cast<u64>(std::floor(y));
  bool g_usable = false;
  double g = 0.0;
  try {
    const auto gv = numeric::rankin_g(numeric::LogArg{l});
    g = gv.value;
    g_usable = !gv.negative_regime && g > 0.0;
  } catch (const UndefinedIterate&) {
  }
  if (g_usable) {
    config.U = static_cast<u64>(std::floor(constants.c10 * g * l));
  } else {
    config.U = L * static_cast<u64>(std::ceil(constants.c10));
    config.u_fallback = true;
  }
  if (!(v < y && 2 * y <= l)) {
    throw OrderingViolated("asymptotic schedule collapses at L=" + num(L) + ": v=" +
                           std::to_string(v) + ", y=" + std::to_string(y) +
                           "; supply explicit v, y, U");
  }
  config.validate();
  return config;
}

RankinConfig make_config(u64 L, u64 v, u64 y, u64 U, tuples::AdmissibleTuple H,
                         std::optional<u64> q0) {
  RankinConfig config;
  config.L = L;
  config.v = v;
  config.y = y;
  config.U = U;
  config.H = std::move(H);
  config.q0 = q0;
  config.validate();
  return config;
}

PrimePartition partition_primes(const RankinConfig& config) {
  PrimePartition out;
  for (u64 p : primes::small_primes(config.L)) {
    if (config.excluded(p)) continue;
    if (p <= config.v) {
      out.P1.push_back(p);
    } else if (p <= config.y) {
      out.P2.push_back(p);
    } else if (2 * p <= config.L) {
      out.P3.push_back(p);
    } else {
      out.P4.push_back(p);
    }
  }
  return out;
}

void ResidueSystem::assign(u64 p, u64 z_p) {
  if (z_p >= p) throw ValidationError("residue out of range for p=" + num(p));
  if (!assignments.emplace(p, z_p).second) {
    throw ValidationError("prime " + num(p) + " assigned twice");
  }
}

std::string stage_name(Stage stage) {
  switch (stage) {
    case Stage::Zero: return "zero";
    case Stage::Maynard: return "maynard";
    case Stage::Greedy: return "greedy";
    case Stage::Cleanup: return "cleanup";
    case Stage::Remaining: return "remaining";
  }
  return "?";
}

u64 SurvivorSet::class_size(u64 p, u64 z_p) const {
  const u64 target = (p - z_p % p) % p;
  return static_cast<u64>(std::count_if(survivors.begin(), survivors.end(),
                                        [&](u64 s) { return s % p == target; }));
}

std::vector<u64> SurvivorSet::census(u64 p) const {
  std::vector<u64> counts(p, 0);
  for (u64 s : survivors) ++counts[s % p];
  return counts;
}

u64 SurvivorSet::remove_class(Stage stage, u64 p, u64 z_p) {
  const u64 target = (p - z_p % p) % p;
  const auto before = survivors.size();
  std::erase_if(survivors, [&](u64 s) { return s % p == target; });
  const u64 removed = before - survivors.size();
  history.push_back({stage, p, z_p, removed, survivors.size()});
  return removed;
}

bool forbidden(u64 p, u64 z_p, std::span<const u64> H) {
  return std::any_of(H.begin(), H.end(), [&](u64 h) { return (z_p + h % p) % p == 0; });
}

StageZero stage_zero(const RankinConfig& config, const PrimePartition& partition) {
  StageZero out;
  std::vector<bool> hit(config.U + 1, false);
  auto sieve = [&](const std::vector<u64>& ps) {
    for (u64 p : ps) {
      out.system.assign(p, 0);
      for (u64 m = p; m <= config.U; m += p) hit[m] = true;
    }
  };
  sieve(partition.P1);
  sieve(partition.P3);
  for (u64 s = 2; s <= config.U; ++s) {
    if (!hit[s]) out.survivors.survivors.push_back(s);
  }
  out.survivors.history.push_back(
      {Stage::Zero, 0, 0, config.U >= 1 ? config.U - 1 - out.survivors.survivors.size() : 0,
       out.survivors.survivors.size()});
  return out;
}

std::string type_name(SurvivorType type) {
  switch (type) {
    case SurvivorType::TypeA: return "A";
    case SurvivorType::TypeB: return "B";
    case SurvivorType::Sieved: return "sieved";
  }
  return "?";
}

SurvivorType classify_survivor(u64 s, const RankinConfig& config) {
  if (s < 2 || s > config.U) throw ValidationError("classify_survivor needs 1 < s <= U");
  const auto fs = factor(s);
  auto in_p1_p3 = [&](u64 p) {
    if (config.excluded(p)) return false;
    return p <= config.v || (p > config.y && 2 * p <= config.L);
  };
  auto in_b = [&](u64 p) {
    return config.excluded(p) || (p > config.v && p <= config.y);
  };
  if (std::any_of(fs.begin(), fs.end(), in_p1_p3)) return SurvivorType::Sieved;
  if (std::all_of(fs.begin(), fs.end(), in_b)) return SurvivorType::TypeB;
  // One large prime, the rest drawn from H ∪ {q0}.
  u64 large = 0;
  int large_count = 0;
  bool others_ok = true;
  for (u64 p : fs) {
    if (config.excluded(p)) continue;
    if (2 * p > config.L) {
      large = p;
      ++large_count;
    } else {
      others_ok = false;
    }
  }
  if (others_ok && large_count == 1 && large != 0) return SurvivorType::TypeA;
  throw UnclassifiableForm("s=" + num(s) + " fits neither survivor form");
}

SurvivorCensus survivor_census(std::span<const u64> survivors, const RankinConfig& config) {
  SurvivorCensus out;
  for (u64 s : survivors) {
    try {
      switch (classify_survivor(s, config)) {
        case SurvivorType::TypeA: ++out.type_a; break;
        case SurvivorType::TypeB: ++out.type_b; break;
        case SurvivorType::Sieved: ++out.unclassified; break;
      }
    } catch (const UnclassifiableForm&) {
      ++out.unclassified;
    }
  }
  return out;
}

u64 stop_threshold(u64 L) {
  const double l = static_cast<double>(L);
  return static_cast<u64>(std::floor(l / (5.0 * std::log(l))));
}

StageResult greedy_stage(SurvivorSet survivors, std::span<const u64> primes,
                         std::span<const u64> H, u64 stop_at) {
  StageResult out;
  for (u64 p : primes) {
    if (survivors.survivors.size() <= stop_at) {
      out.unused.push_back(p);
      continue;
    }
    const auto counts = survivors.census(p);
    std::optional<u64> best;
    u64 best_count = 0;
    for (u64 z = 0; z < p; ++z) {
      if (forbidden(p, z, H)) continue;
      const u64 c = counts[(p - z) % p];
      if (!best || c > best_count) {
        best = z;
        best_count = c;
      }
    }
    if (!best) throw NoAllowedClass("H occupies every class mod " + num(p));
    survivors.remove_class(Stage::Greedy, p, *best);
    out.residues.emplace(p, *best);
  }
  out.survivors = std::move(survivors);
  return out;
}

StageResult cleanup_stage(SurvivorSet survivors, std::span<const u64> primes,
                          std::span<const u64> H) {
  StageResult out;
  survivors.exceptional = survivors.survivors;
  survivors.exceptional_prime.clear();
  for (u64 s : survivors.survivors) {
    if (!std::binary_search(H.begin(), H.end(), s)) survivors.exceptional_prime.push_back(s);
  }
  std::vector<u64> remaining = survivors.exceptional_prime;
  for (u64 p : primes) {
    std::optional<u64> best;
    u64 best_count = 0;
    if (!remaining.empty()) {
      std::map<u64, u64> counts;  // z_p -> elements covered
      for (u64 s : remaining) ++counts[(p - s % p) % p];
      for (const auto& [z, c] : counts) {
        if (forbidden(p, z, H)) continue;
        if (!best || c > best_count) {
          best = z;
          best_count = c;
        }
      }
    }
    if (!best) {
      out.unused.push_back(p);
      continue;
    }
    const u64 target = (p - *best) % p;
    std::erase_if(remaining, [&](u64 s) { return s % p == target; });
    survivors.remove_class(Stage::Cleanup, p, *best);
    out.residues.emplace(p, *best);
  }
  out.survivors = std::move(survivors);
  return out;
}

void assign_remaining(ResidueSystem& system, std::span<const u64> H, std::span<const u64> leftover) {
  for (u64 p : leftover) {
    if (system.has(p)) continue;
    u64 z = 0;
    while (z < p && forbidden(p, z, H)) ++z;
    if (z == p) throw NoAllowedClass("H occupies every class mod " + num(p));
    system.assign(p, z);
  }
}

Crt assemble_crt(const std::map<u64, u64>& assignments) {
  Crt out;
  for (const auto& [p, a] : assignments) {
    if (p < 2) throw ValidationError("modulus must be >= 2");
    if (a >= p) throw ValidationError("residue out of range for modulus " + num(p));
    const u64 w_mod = mod_u64(out.W, p);
    const u64 inv = inverse_mod(w_mod, p);
    if (inv == 0) throw ValidationError("moduli not coprime at " + num(p));
    const u64 z_mod = mod_u64(out.z, p);
    const u64 diff = (a + p - z_mod) % p;
    const auto t = static_cast<u64>(static_cast<unsigned __int128>(diff) * inv % p);
    // z + W t ≡ a (mod p), and stays below W p.
    out.z += out.W * big_from_u64(t);
    out.W *= big_from_u64(p);
  }
  return out;
}

Verification verify_construction(const BigInt& z, const BigInt& W, u64 U, std::span<const u64> H) {
  if (sgn(z) < 0 || z >= W) throw ValidationError("need 0 <= z < W");
  BigInt g;
  BigInt shifted;
  for (u64 h : H) {
    shifted = z + big_from_u64(h);
    mpz_gcd(g.get_mpz_t(), shifted.get_mpz_t(), W.get_mpz_t());
    if (g != 1) throw HViolation("gcd(z + " + num(h) + ", W) = " + to_decimal(g));
  }
  Verification out;
  out.covered_prefix = U;
  bool clean = true;
  for (u64 s = 2; s <= U; ++s) {
    if (std::binary_search(H.begin(), H.end(), s)) continue;
    shifted = z + big_from_u64(s);
    mpz_gcd(g.get_mpz_t(), shifted.get_mpz_t(), W.get_mpz_t());
    if (g == 1) {
      if (clean) out.covered_prefix = s - 1;
      clean = false;
      out.violations.push_back({s, "uncovered"});
    }
  }
  if (U <= 1) out.covered_prefix = U;
  return out;
}

std::string maynard_class_name(MaynardClass c) {
  switch (c) {
    case MaynardClass::R: return "R";
    case MaynardClass::RTilde: return "R~";
    case MaynardClass::RPrime: return "R'";
    case MaynardClass::RTildePrime: return "R~'";
    case MaynardClass::Sieved: return "sieved";
  }
  return "?";
}

namespace {

// Shape of s after the Maynard fixed classes: y-smooth part, q0 count and
// primes above zbound. Sets `smooth_part`.
MaynardClass maynard_shape(u64 s, const RankinConfig& config, u64 zb,
                           std::span<const u64> fixed_primes, u64& smooth_part) {
  for (u64 p : fixed_primes) {
    if (config.excluded(p)) continue;
    const bool hit = p <= config.y ? s % p == 1 : s % p == 0;
    if (hit) return MaynardClass::Sieved;
  }
  smooth_part = 1;
  int q0_count = 0;
  std::vector<u64> large;
  for (u64 p : factor(s)) {
    if (p <= config.y) {
      smooth_part *= p;
    } else if (config.q0 && p == *config.q0) {
      ++q0_count;
    } else if (p > zb) {
      large.push_back(p);
    } else {
      throw UnclassifiableForm("s=" + num(s) + " has unsieved factor " + num(p) +
                               " in (y, zbound]");
    }
  }
  if (q0_count > 1 || large.size() > 1) {
    throw UnclassifiableForm("s=" + num(s) + " has more than one large or q0 factor");
  }
  if (large.empty()) return q0_count ? MaynardClass::RTildePrime : MaynardClass::RPrime;
  return q0_count ? MaynardClass::RTilde : MaynardClass::R;
}

}  // namespace

MaynardClass classify_maynard(u64 s, const RankinConfig& config) {
  if (s < 2 || s > config.U) throw ValidationError("classify_maynard needs 1 < s <= U");
  u64 m = 1;
  const u64 zb = config.effective_zbound();
  return maynard_shape(s, config, zb, primes::small_primes(zb), m);
}

MaynardResult maynard_residues(const RankinConfig& config, bool strict) {
  const u64 zb = config.effective_zbound();
  if (!(config.y < zb)) throw OrderingViolated("need y < zbound");
  MaynardResult out;
  std::vector<bool> hit(config.U + 1, false);
  for (u64 p : primes::small_primes(zb)) {
    if (config.excluded(p)) continue;
    const u64 z_p = p <= config.y ? p - 1 : 0;
    if (forbidden(p, z_p, config.H.h)) {
      throw ValidationError("tuple element lies in the fixed class " + num((p - z_p) % p) +
                            " mod " + num(p));
    }
    out.system.assign(p, z_p);
    const u64 first = (p - z_p) % p == 0 ? p : (p - z_p) % p;
    for (u64 m = first; m <= config.U; m += p) hit[m] = true;
  }
  for (u64 s = 2; s <= config.U; ++s) {
    if (!hit[s]) out.survivors.survivors.push_back(s);
  }
  out.survivors.history.push_back({Stage::Maynard, 0, 0,
                                   config.U - 1 - out.survivors.survivors.size(),
                                   out.survivors.survivors.size()});
  for (u64 s : out.survivors.survivors) {
    u64 m = 1;
    try {
      switch (maynard_shape(s, config, zb, {}, m)) {
        case MaynardClass::R:
          out.R.push_back(s);
          out.fibers[m].push_back(s);
          break;
        case MaynardClass::RTilde:
          out.R_tilde.push_back(s);
          out.fibers_tilde[m].push_back(s);
          break;
        case MaynardClass::RPrime: out.R_prime.push_back(s); break;
        case MaynardClass::RTildePrime: out.R_tilde_prime.push_back(s); break;
        case MaynardClass::Sieved: break;
      }
    } catch (const UnclassifiableForm&) {
      if (strict) throw;
      out.unclassified.push_back(s);
    }
  }
  return out;
}

ConstructionRecord run_construction(const RankinConfig& config) {
  config.validate();
  ConstructionRecord rec;
  rec.config = config;
  rec.stop_at = stop_threshold(config.L);
  const auto& H = config.H.h;

  for (u64 h : H) {
    if (h == 0) throw ValidationError("tuple element 0 is never coprime to W");
  }

  std::vector<u64> greedy_primes;
  std::vector<u64> cleanup_primes;
  SurvivorSet survivors;
  if (config.strategy == Strategy::ErdosRankin) {
    rec.partition = partition_primes(config);
    for (u64 h : H) {
      for (const auto* part : {&rec.partition.P1, &rec.partition.P3}) {
        for (u64 p : *part) {
          if (h % p == 0) {
            throw ValidationError("tuple element " + num(h) + " divisible by sieving prime " +
                                  num(p));
          }
        }
      }
    }
    auto zero = stage_zero(config, rec.partition);
    rec.system = std::move(zero.system);
    survivors = std::move(zero.survivors);
    rec.census = survivor_census(survivors.survivors, config);
    greedy_primes = rec.partition.P2;
    cleanup_primes = rec.partition.P4;
  } else {
    auto mr = maynard_residues(config, false);
    rec.system = mr.system;
    survivors = mr.survivors;
    rec.census.type_a = mr.R.size() + mr.R_tilde.size();
    rec.census.type_b = mr.R_prime.size() + mr.R_tilde_prime.size();
    rec.census.unclassified = mr.unclassified.size();
    const u64 zb = config.effective_zbound();
    // Reported ranges: P1 <= y, P3 in (y, zbound], P2 in (zbound, L/2], P4 above.
    for (u64 p : primes::small_primes(config.L)) {
      if (config.excluded(p)) continue;
      if (p <= config.y) {
        rec.partition.P1.push_back(p);
      } else if (p <= zb) {
        rec.partition.P3.push_back(p);
      } else if (2 * p <= config.L) {
        rec.partition.P2.push_back(p);
      } else {
        rec.partition.P4.push_back(p);
      }
    }
    greedy_primes = rec.partition.P2;
    cleanup_primes = rec.partition.P4;
    rec.maynard = std::move(mr);
  }

  auto greedy = greedy_stage(std::move(survivors), greedy_primes, H, rec.stop_at);
  for (const auto& [p, z] : greedy.residues) rec.system.assign(p, z);
  auto cleanup = cleanup_stage(std::move(greedy.survivors), cleanup_primes, H);
  for (const auto& [p, z] : cleanup.residues) rec.system.assign(p, z);
  survivors = std::move(cleanup.survivors);

  std::vector<u64> leftover = greedy.unused;
  leftover.insert(leftover.end(), cleanup.unused.begin(), cleanup.unused.end());
  for (u64 p : tuples::delta_prime_factors(H)) leftover.push_back(p);
  std::sort(leftover.begin(), leftover.end());
  leftover.erase(std::unique(leftover.begin(), leftover.end()), leftover.end());
  const auto before = rec.system.assignments;
  assign_remaining(rec.system, H, leftover);
  for (const auto& [p, z] : rec.system.assignments) {
    if (!before.count(p)) survivors.remove_class(Stage::Remaining, p, z);
  }

  const Crt crt = assemble_crt(rec.system.assignments);
  rec.system.z = crt.z;
  rec.system.W = crt.W;
  rec.claimed_coverage = first_uncovered(survivors, H, config.U);
  rec.survivors = std::move(survivors);
  rec.verification = verify_construction(rec.system.z, rec.system.W, config.U, H);
  return rec;
}

}  // namespace gapforge::rankin
