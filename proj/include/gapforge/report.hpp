#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapforge/explorer.hpp"
#include "gapforge/numeric.hpp"
#include "gapforge/primes.hpp"
#include "gapforge/rankin.hpp"
#include "gapforge/smooth.hpp"
#include "gapforge/tuples.hpp"

// JSON and CSV serialization of every result type. Big integers are written as
// decimal strings.
namespace gapforge::report {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv };

Format parse_format(const std::string& name);

// A serialized record: JSON form and CSV rows (header first).
struct Report {
  Json json;
  std::vector<std::vector<std::string>> csv;
};

Report gaps_report(std::span<const explorer::NormalizedGap> gaps, const std::string& normalizer,
                   std::uint64_t lo, std::uint64_t hi);
Report records_report(std::span<const primes::GapSample> records, std::uint64_t limit);
Report smooth_report(std::span<const smooth::SmoothCount> counts);
Report tuple_report(const tuples::AdmissibleTuple& tuple, const tuples::PlacementConstraint& c);
Report rankin_report(const rankin::ConstructionRecord& record);
Report scan_report(const explorer::ClusterScanResult& result);
Report limit_set_report(const explorer::LimitSetEstimate& estimate,
                        std::span<const explorer::DyadicMinimum> minima);
Report clusters_report(std::span<const explorer::GapWindow> windows, std::uint32_t m,
                       double threshold, const std::string& normalizer);

Json to_json(const explorer::ClusterScanResult& result);
explorer::ClusterScanResult cluster_scan_from_json(const Json& j);
Json to_json(const explorer::LimitSetEstimate& estimate);
explorer::LimitSetEstimate limit_set_from_json(const Json& j);

void write_csv(std::ostream& os, const std::vector<std::vector<std::string>>& rows);

/// Writes the report to `path` ("-" is stdout). Throws IoFailure.
void emit_report(const Report& report, Format format, const std::string& path);

}  // namespace gapforge::report
