#include "gapforge/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "gapforge/bigint.hpp"
#include "gapforge/error.hpp"

namespace gapforge {

BigInt parse_decimal(const std::string& text) {
  BigInt out;
  if (text.empty() || out.set_str(text, 10) != 0) {
    throw ValidationError("not a decimal integer: '" + text + "'");
  }
  return out;
}

namespace report {
namespace {

using u64 = std::uint64_t;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(u64 v) { return std::to_string(v); }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string quote_csv(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json tuple_json(const tuples::AdmissibleTuple& t) {
  return Json{{"h", t.h},
              {"k", t.k()},
              {"delta", to_decimal(t.delta)},
              {"delta_radical", to_decimal(t.delta_radical)},
              {"admissible", t.admissible}};
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw ValidationError("unknown format '" + name + "' (json or csv)");
}

Report gaps_report(std::span<const explorer::NormalizedGap> gaps, const std::string& normalizer,
                   u64 lo, u64 hi) {
  Report r;
  r.csv.push_back({"p", "d", "ratio"});
  Json rows = Json::array();
  for (const auto& g : gaps) {
    rows.push_back({{"p", g.p}, {"d", g.d}, {"ratio", g.ratio}});
    r.csv.push_back({fmt(g.p), fmt(g.d), fmt(g.ratio)});
  }
  r.json = {{"normalizer", normalizer},
            {"normalization", explorer::kNormalizationNote},
            {"range", {lo, hi}},
            {"sample_count", gaps.size()},
            {"gaps", std::move(rows)}};
  return r;
}

Report records_report(std::span<const primes::GapSample> records, u64 limit) {
  Report r;
  r.csv.push_back({"n", "p", "d"});
  Json rows = Json::array();
  for (const auto& g : records) {
    const u64 n = g.index_hint.value_or(0);
    rows.push_back({{"n", n}, {"p", g.p}, {"d", g.d}});
    r.csv.push_back({fmt(n), fmt(g.p), fmt(g.d)});
  }
  r.json = {{"limit", limit}, {"records", std::move(rows)}};
  return r;
}

Report smooth_report(std::span<const smooth::SmoothCount> counts) {
  Report r;
  r.csv.push_back({"x", "y", "exact", "bound", "rho_estimate"});
  Json rows = Json::array();
  for (const auto& c : counts) {
    rows.push_back({{"x", c.x},
                    {"y", c.y},
                    {"exact", c.exact},
                    {"bound", number_or_null(c.bound)},
                    {"rho_estimate", number_or_null(c.rho_estimate)}});
    r.csv.push_back({fmt(c.x), fmt(c.y), fmt(c.exact), fmt(c.bound), fmt(c.rho_estimate)});
  }
  r.json = {{"note", "bound is asymptotic and may fall below the exact count"},
            {"counts", std::move(rows)}};
  return r;
}

Report tuple_report(const tuples::AdmissibleTuple& tuple, const tuples::PlacementConstraint& c) {
  Report r;
  bool q0_ok = true;
  bool divisor_ok = true;
  for (std::size_t j = 0; j < tuple.h.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const u64 d = tuple.h[j] - tuple.h[i];
      if (c.q0 && d % *c.q0 == 0) q0_ok = false;
      for (u64 t : tuple.h) {
        if (t != 0 && d % t == 0) divisor_ok = false;
      }
    }
  }
  Json windows = Json::array();
  r.csv.push_back({"i", "target", "window_hi", "h"});
  for (std::size_t i = 0; i < c.targets.size(); ++i) {
    const double hi = c.targets[i] * (1.0 + c.eta);
    windows.push_back({c.targets[i], hi});
    r.csv.push_back({fmt(static_cast<u64>(i + 1)), fmt(c.targets[i]), fmt(hi),
                     i < tuple.h.size() ? fmt(tuple.h[i]) : ""});
  }
  r.json = tuple_json(tuple);
  r.json["windows"] = std::move(windows);
  r.json["eta"] = c.eta;
  r.json["q0"] = c.q0 ? Json(*c.q0) : Json(nullptr);
  r.json["certificates"] = {{"q0_coprime_to_differences", q0_ok},
                            {"no_element_divides_a_difference", divisor_ok},
                            {"admissible", tuple.admissible}};
  return r;
}

Report rankin_report(const rankin::ConstructionRecord& rec) {
  using rankin::Strategy;
  const auto& cfg = rec.config;
  Report r;
  Json params = {{"strategy", cfg.strategy == Strategy::ErdosRankin ? "erdos-rankin" : "maynard"},
                 {"L", cfg.L},
                 {"k", cfg.k()},
                 {"v", cfg.v},
                 {"y", cfg.y},
                 {"U", cfg.U},
                 {"q0", cfg.q0 ? Json(*cfg.q0) : Json(nullptr)},
                 {"stop_threshold", rec.stop_at},
                 {"u_fallback", cfg.u_fallback},
                 {"H", tuple_json(cfg.H)}};
  if (cfg.strategy == Strategy::Maynard) params["zbound"] = cfg.effective_zbound();

  Json history = Json::array();
  r.csv.push_back({"step", "stage", "p", "z_p", "removed", "remaining"});
  for (std::size_t j = 0; j < rec.survivors.history.size(); ++j) {
    const auto& h = rec.survivors.history[j];
    history.push_back({{"stage", rankin::stage_name(h.stage)},
                       {"p", h.p},
                       {"z_p", h.z_p},
                       {"removed", h.removed},
                       {"remaining", h.remaining}});
    r.csv.push_back({fmt(static_cast<u64>(j)), rankin::stage_name(h.stage), fmt(h.p), fmt(h.z_p),
                     fmt(h.removed), fmt(h.remaining)});
  }

  Json violations = Json::array();
  for (const auto& v : rec.verification.violations) {
    violations.push_back({{"s", v.s}, {"kind", v.kind}});
  }

  r.json = {{"params", std::move(params)},
            {"partition_sizes",
             {{"P1", rec.partition.P1.size()},
              {"P2", rec.partition.P2.size()},
              {"P3", rec.partition.P3.size()},
              {"P4", rec.partition.P4.size()}}},
            {"survivor_census",
             {{"type_a", rec.census.type_a},
              {"type_b", rec.census.type_b},
              {"unclassified", rec.census.unclassified}}},
            {"history", std::move(history)},
            {"exceptional",
             {{"S", rec.survivors.exceptional.size()},
              {"S_prime", rec.survivors.exceptional_prime.size()},
              {"P4", rec.partition.P4.size()},
              {"uncovered", rec.survivors.survivors}}},
            {"moduli", rec.system.assignments.size()},
            {"z", to_decimal(rec.system.z)},
            {"W", to_decimal(rec.system.W)},
            {"claimed_coverage", rec.claimed_coverage},
            {"covered_prefix", rec.verification.covered_prefix},
            {"violations", std::move(violations)}};
  if (rec.maynard) {
    const auto& m = *rec.maynard;
    r.json["maynard"] = {{"R", m.R.size()},
                         {"R_tilde", m.R_tilde.size()},
                         {"R_prime", m.R_prime.size()},
                         {"R_tilde_prime", m.R_tilde_prime.size()},
                         {"unclassified", m.unclassified.size()},
                         {"fibers", m.fibers.size()}};
  }
  return r;
}

Json to_json(const explorer::ClusterScanResult& result) {
  Json hits = Json::array();
  for (const auto& h : result.hits) {
    hits.push_back({{"n", h.n}, {"mask", h.mask}, {"count", h.count}});
  }
  return {{"z", to_decimal(result.z)},
          {"W", to_decimal(result.W)},
          {"H", result.H},
          {"range", {result.range_lo, result.range_hi}},
          {"m", result.m},
          {"hits", std::move(hits)}};
}

explorer::ClusterScanResult cluster_scan_from_json(const Json& j) {
  explorer::ClusterScanResult out;
  try {
    out.z = parse_decimal(j.at("z").get<std::string>());
    out.W = parse_decimal(j.at("W").get<std::string>());
    out.H = j.at("H").get<std::vector<u64>>();
    out.range_lo = j.at("range").at(0).get<u64>();
    out.range_hi = j.at("range").at(1).get<u64>();
    out.m = j.at("m").get<std::uint32_t>();
    for (const auto& h : j.at("hits")) {
      out.hits.push_back(
          {h.at("n").get<u64>(), h.at("mask").get<u64>(), h.at("count").get<std::uint32_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed scan record: ") + e.what());
  }
  return out;
}

Report scan_report(const explorer::ClusterScanResult& result) {
  Report r;
  r.json = to_json(result);
  r.csv.push_back({"n", "mask", "count"});
  for (const auto& h : result.hits) r.csv.push_back({fmt(h.n), fmt(h.mask), fmt(u64{h.count})});
  return r;
}

Json to_json(const explorer::LimitSetEstimate& e) {
  Json cells = Json::array();
  for (const auto& [j, count] : e.cells) cells.push_back({j, count});
  return {{"normalizer", e.normalizer},
          {"normalization", explorer::kNormalizationNote},
          {"grid_step", e.grid_step},
          {"hit_threshold", e.hit_threshold},
          {"range", {e.range_lo, e.range_hi}},
          {"sample_count", e.sample_count},
          {"cells", std::move(cells)},
          {"hit_measure", e.hit_measure()},
          {"note", "finite-range histogram: witnesses attained values, not limit points"}};
}

explorer::LimitSetEstimate limit_set_from_json(const Json& j) {
  explorer::LimitSetEstimate e;
  try {
    e.normalizer = j.at("normalizer").get<std::string>();
    e.grid_step = j.at("grid_step").get<double>();
    e.hit_threshold = j.at("hit_threshold").get<u64>();
    e.range_lo = j.at("range").at(0).get<u64>();
    e.range_hi = j.at("range").at(1).get<u64>();
    e.sample_count = j.at("sample_count").get<u64>();
    for (const auto& c : j.at("cells")) e.cells[c.at(0).get<std::int64_t>()] = c.at(1).get<u64>();
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed limit-set record: ") + ex.what());
  }
  return e;
}

Report limit_set_report(const explorer::LimitSetEstimate& estimate,
                        std::span<const explorer::DyadicMinimum> minima) {
  Report r;
  r.json = to_json(estimate);
  Json blocks = Json::array();
  for (const auto& m : minima) {
    blocks.push_back({{"N", m.N},
                      {"block_min", m.block_min},
                      {"running_min", m.running_min},
                      {"witness_p", m.witness_p}});
  }
  r.json["dyadic_minima"] = std::move(blocks);
  r.csv.push_back({"cell", "lo", "hi", "count", "hit"});
  for (const auto& [j, count] : estimate.cells) {
    const double lo = static_cast<double>(j) * estimate.grid_step;
    r.csv.push_back({std::to_string(j), fmt(lo), fmt(lo + estimate.grid_step), fmt(count),
                     count >= estimate.hit_threshold ? "1" : "0"});
  }
  return r;
}

Report clusters_report(std::span<const explorer::GapWindow> windows, std::uint32_t m,
                       double threshold, const std::string& normalizer) {
  Report r;
  r.csv.push_back({"first_p", "gaps", "min_ratio"});
  Json rows = Json::array();
  for (const auto& w : windows) {
    rows.push_back({{"first_p", w.first_p}, {"gaps", w.gaps}, {"min_ratio", w.min_ratio}});
    std::string gaps;
    for (std::size_t i = 0; i < w.gaps.size(); ++i) gaps += (i ? " " : "") + fmt(w.gaps[i]);
    r.csv.push_back({fmt(w.first_p), gaps, fmt(w.min_ratio)});
  }
  r.json = {{"m", m},
            {"threshold", threshold},
            {"normalizer", normalizer},
            {"normalization", explorer::kNormalizationNote},
            {"windows", std::move(rows)}};
  return r;
}

void write_csv(std::ostream& os, const std::vector<std::vector<std::string>>& rows) {
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << quote_csv(row[i]);
    os << '\n';
  }
}

void emit_report(const Report& report, Format format, const std::string& path) {
  auto write = [&](std::ostream& os) {
    if (format == Format::Json) {
      os << report.json.dump(2) << '\n';
    } else {
      write_csv(os, report.csv);
    }
  };
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out) throw IoFailure("write to '" + path + "' failed");
}

}  // namespace report
}  // namespace gapforge
