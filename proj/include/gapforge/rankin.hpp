#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gapforge/bigint.hpp"
#include "gapforge/numeric.hpp"
#include "gapforge/tuples.hpp"

// Erdős-Rankin covering construction: choose z mod W so that z + s shares a
// factor with W for every s in (1, U] outside the tuple H, while z + h stays
// coprime to W for every h in H.
namespace gapforge::rankin {

enum class Strategy { ErdosRankin, Maynard };

struct RankinConfig {
  std::uint64_t L = 0;
  std::uint64_t v = 0;
  std::uint64_t y = 0;
  std::uint64_t U = 0;
  std::optional<std::uint64_t> q0;
  tuples::AdmissibleTuple H;
  Strategy strategy = Strategy::ErdosRankin;
  // Maynard-variant threshold; 0 means floor(L / log2 L).
  std::uint64_t zbound = 0;
  double o1 = 0.0;
  // U came from the L * ceil(c10) fallback because g(e^L) was unusable.
  bool u_fallback = false;

  std::size_t k() const { return H.k(); }
  // H ∪ {q0}: never part of the partition.
  bool excluded(std::uint64_t p) const;
  std::uint64_t effective_zbound() const;
  // Ordering 2 <= v < y <= L/2 < L and U >= L. Throws OrderingViolated, or
  // ValidationError for an inadmissible H.
  void validate() const;
};

/// Asymptotic schedule: v = (ln L)^3, y = exp(ln L log3 L / ((k + 5) log2 L)),
/// U = c10 g(e^L) L. Throws OrderingViolated when the thresholds collapse,
/// which is the normal outcome at desk scale.
RankinConfig derive_params(std::uint64_t L, int k, const numeric::GrowthConstants& constants = {});

/// Explicit (v, y, U) overrides; validated.
RankinConfig make_config(std::uint64_t L, std::uint64_t v, std::uint64_t y, std::uint64_t U,
                         tuples::AdmissibleTuple H = {}, std::optional<std::uint64_t> q0 = {});

struct PrimePartition {
  std::vector<std::uint64_t> P1;  // p <= v
  std::vector<std::uint64_t> P2;  // v < p <= y
  std::vector<std::uint64_t> P3;  // y < p <= L/2
  std::vector<std::uint64_t> P4;  // L/2 < p <= L
};

PrimePartition partition_primes(const RankinConfig& config);

struct ResidueSystem {
  std::map<std::uint64_t, std::uint64_t> assignments;  // p -> z_p in [0, p)
  BigInt z = 0;
  BigInt W = 1;

  void assign(std::uint64_t p, std::uint64_t z_p);
  bool has(std::uint64_t p) const { return assignments.count(p) != 0; }
};

enum class Stage { Zero, Maynard, Greedy, Cleanup, Remaining };

std::string stage_name(Stage stage);

struct HistoryStep {
  Stage stage = Stage::Zero;
  std::uint64_t p = 0;
  std::uint64_t z_p = 0;
  std::uint64_t removed = 0;
  std::uint64_t remaining = 0;  // A'_j after this step
};

struct SurvivorSet {
  std::vector<std::uint64_t> survivors;  // sorted, subset of (1, U]
  std::vector<HistoryStep> history;
  std::vector<std::uint64_t> exceptional;  // S: survivors entering cleanup
  std::vector<std::uint64_t> exceptional_prime;  // S' = S \ H

  /// Survivors in the class s ≡ -z_p (mod p).
  std::uint64_t class_size(std::uint64_t p, std::uint64_t z_p) const;
  /// Counts per residue r = s mod p.
  std::vector<std::uint64_t> census(std::uint64_t p) const;
  /// Removes the class s ≡ -z_p (mod p) and records the step.
  std::uint64_t remove_class(Stage stage, std::uint64_t p, std::uint64_t z_p);
};

/// True iff z_p + h ≡ 0 (mod p) for some h in H.
bool forbidden(std::uint64_t p, std::uint64_t z_p, std::span<const std::uint64_t> H);

struct StageZero {
  ResidueSystem system;
  SurvivorSet survivors;
};

/// z_p = 0 on P1 ∪ P3; survivors are the s in (1, U] coprime to P1 P3.
StageZero stage_zero(const RankinConfig& config, const PrimePartition& partition);

enum class SurvivorType { TypeA, TypeB, Sieved };

std::string type_name(SurvivorType type);

/// Sieved when s meets P1 ∪ P3; TypeB when s factors over P2 ∪ {q0} ∪ H;
/// TypeA when s = p q0^a prod h_i^{a_i} with a prime p > L/2. Anything else
/// throws UnclassifiableForm.
SurvivorType classify_survivor(std::uint64_t s, const RankinConfig& config);

struct SurvivorCensus {
  std::uint64_t type_a = 0;
  std::uint64_t type_b = 0;
  std::uint64_t unclassified = 0;
};

SurvivorCensus survivor_census(std::span<const std::uint64_t> survivors, const RankinConfig& config);

/// floor(L / (5 ln L)).
std::uint64_t stop_threshold(std::uint64_t L);

struct StageResult {
  std::map<std::uint64_t, std::uint64_t> residues;
  std::vector<std::uint64_t> unused;
  SurvivorSet survivors;
};

/// For each prime ascending: stop once |survivors| <= stop_at; otherwise take
/// the allowed class that removes the most survivors (smallest z_p on ties).
StageResult greedy_stage(SurvivorSet survivors, std::span<const std::uint64_t> primes,
                         std::span<const std::uint64_t> H, std::uint64_t stop_at);

/// Covers S' = survivors \ H with one class per prime, most elements first.
/// Primes with nothing left to cover (or only forbidden classes) are unused.
StageResult cleanup_stage(SurvivorSet survivors, std::span<const std::uint64_t> primes,
                          std::span<const std::uint64_t> H);

/// Smallest allowed z_p for each leftover prime. Throws NoAllowedClass when H
/// occupies every class mod p.
void assign_remaining(ResidueSystem& system, std::span<const std::uint64_t> H,
                      std::span<const std::uint64_t> leftover);

/// CRT over distinct prime moduli: W = prod p, z in [0, W).
struct Crt {
  BigInt z = 0;
  BigInt W = 1;
};

Crt assemble_crt(const std::map<std::uint64_t, std::uint64_t>& assignments);

struct Violation {
  std::uint64_t s = 0;
  std::string kind;  // "uncovered"
};

struct Verification {
  std::uint64_t covered_prefix = 0;
  std::vector<Violation> violations;
};

/// Scans s in (1, U]: s outside H needs gcd(z + s, W) > 1. Throws HViolation
/// if gcd(z + h, W) > 1 for some h in H.
Verification verify_construction(const BigInt& z, const BigInt& W, std::uint64_t U,
                                 std::span<const std::uint64_t> H);

enum class MaynardClass { R, RTilde, RPrime, RTildePrime, Sieved };

std::string maynard_class_name(MaynardClass c);

struct MaynardResult {
  ResidueSystem system;
  SurvivorSet survivors;
  std::vector<std::uint64_t> R, R_tilde, R_prime, R_tilde_prime, unclassified;
  // Fibers keyed by the y-smooth part m.
  std::map<std::uint64_t, std::vector<std::uint64_t>> fibers;
  std::map<std::uint64_t, std::vector<std::uint64_t>> fibers_tilde;
};

/// z_p = p - 1 (sieving s ≡ 1) for p <= y and z_p = 0 for y < p <= zbound,
/// skipping H ∪ {q0}. Throws ValidationError if a tuple element falls in one
/// of those classes.
MaynardResult maynard_residues(const RankinConfig& config, bool strict = true);

MaynardClass classify_maynard(std::uint64_t s, const RankinConfig& config);

struct ConstructionRecord {
  RankinConfig config;
  PrimePartition partition;
  ResidueSystem system;
  SurvivorSet survivors;  // after every stage
  SurvivorCensus census;  // of the stage-zero (or Maynard) survivors
  std::uint64_t stop_at = 0;
  std::uint64_t claimed_coverage = 0;
  Verification verification;
  std::optional<MaynardResult> maynard;
};

/// Full pipeline for the configured strategy, verified against (z, W).
ConstructionRecord run_construction(const RankinConfig& config);

}  // namespace gapforge::rankin
