// gapforge: command-line front end for the prime-gap toolkit.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gapforge/error.hpp"
#include "gapforge/explorer.hpp"
#include "gapforge/numeric.hpp"
#include "gapforge/primes.hpp"
#include "gapforge/rankin.hpp"
#include "gapforge/report.hpp"
#include "gapforge/smooth.hpp"
#include "gapforge/tuples.hpp"

namespace {

using namespace gapforge;
using u64 = std::uint64_t;

struct Output {
  std::string path = "-";
  std::string format = "json";

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", path, "Output path ('-' for stdout)");
    cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }
  void emit(const report::Report& r) const {
    report::emit_report(r, report::parse_format(format), path);
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "log", "g-log", "const", "const:<c>", "file:<json>".
numeric::NormalizerSpec parse_normalizer(const std::string& spec) {
  if (spec == "log") return numeric::log_normalizer();
  if (spec == "g-log") return numeric::rankin_log_normalizer();
  if (spec == "const") return numeric::constant_normalizer(1.0);
  if (spec.rfind("const:", 0) == 0) {
    double c = 0.0;
    try {
      c = std::stod(spec.substr(6));
    } catch (const std::exception&) {
      throw ValidationError("bad constant in '" + spec + "'");
    }
    if (!(c > 0.0)) throw ValidationError("constant normalizer must be positive");
    return numeric::constant_normalizer(c);
  }
  if (spec.rfind("file:", 0) == 0) {
    report::Json j;
    try {
      j = report::Json::parse(read_file(spec.substr(5)));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("normalizer file: ") + e.what());
    }
    try {
      auto f = numeric::power_log_normalizer(j.value("scale", 1.0), j.value("log_power", 1.0),
                                             j.value("loglog_power", 0.0));
      if (j.contains("epsilon")) f.epsilon = j.at("epsilon").get<double>();
      if (j.contains("name")) f.name = j.at("name").get<std::string>();
      return f;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("normalizer file: ") + e.what());
    }
  }
  throw ValidationError("unknown normalizer '" + spec + "' (log, g-log, const, file:<path>)");
}

// JSON array, or integers separated by commas or whitespace.
std::vector<u64> parse_integer_list(const std::string& text) {
  std::vector<u64> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return report::Json::parse(text).get<std::vector<u64>>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("tuple list: ") + e.what());
    }
  }
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ValidationError("not an integer: '" + token + "'");
    }
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return out;
}

std::vector<u64> load_tuple(const std::string& arg) {
  std::ifstream probe(arg);
  return parse_integer_list(probe ? read_file(arg) : arg);
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ValidationError("not a number: '" + token + "'");
    }
  }
  return out;
}

int exit_code(const Error& e) {
  switch (e.category()) {
    case Error::Category::Validation: return 2;
    case Error::Category::Budget: return 3;
    case Error::Category::Internal: return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prime gap toolkit: gaps, records, smooth counts, tuples, covering constructions"};
  app.require_subcommand(1);

  // gaps
  Output gaps_out;
  u64 gaps_lo = 2, gaps_hi = 0;
  std::string gaps_f = "log";
  auto* gaps = app.add_subcommand("gaps", "Normalized gaps d/f(p) for primes in [lo, hi]");
  gaps->add_option("--lo", gaps_lo)->required();
  gaps->add_option("--hi", gaps_hi)->required();
  gaps->add_option("--f", gaps_f, "log, g-log, const[:c], file:<json>");
  gaps_out.attach(gaps);

  // records
  Output rec_out;
  u64 rec_limit = 0;
  auto* records = app.add_subcommand("records", "Maximal prime gaps starting at p <= limit");
  records->add_option("--limit", rec_limit)->required();
  rec_out.attach(records);

  // smooth
  Output smooth_out;
  u64 smooth_x = 0;
  std::string smooth_y;
  double smooth_o1 = 0.0;
  auto* smooth_cmd = app.add_subcommand("smooth", "Exact, asymptotic and Dickman smooth counts");
  smooth_cmd->add_option("--x", smooth_x)->required();
  smooth_cmd->add_option("--y", smooth_y, "y or comma list")->required();
  smooth_cmd->add_option("--o1", smooth_o1, "o(1) term in the asymptotic bound");
  smooth_out.attach(smooth_cmd);

  // tuple
  Output tuple_out;
  std::string tuple_targets;
  double tuple_eta = 0.1;
  std::optional<u64> tuple_q0;
  auto* tuple_cmd = app.add_subcommand("tuple", "Place a prime tuple in target windows");
  tuple_cmd->add_option("--targets", tuple_targets, "comma list of targets")->required();
  tuple_cmd->add_option("--eta", tuple_eta);
  tuple_cmd->add_option("--q0", tuple_q0);
  tuple_out.attach(tuple_cmd);

  // rankin
  Output rk_out;
  u64 rk_L = 0;
  std::optional<int> rk_k;
  std::optional<u64> rk_v, rk_y, rk_U, rk_q0;
  u64 rk_zbound = 0;
  std::string rk_tuple, rk_strategy = "erdos-rankin", rk_trace;
  auto* rk = app.add_subcommand("rankin", "Covering construction z mod W");
  rk->add_option("--L", rk_L)->required();
  rk->add_option("--k", rk_k, "tuple size when no --tuple is given");
  rk->add_option("--v", rk_v);
  rk->add_option("--y", rk_y);
  rk->add_option("--U", rk_U);
  rk->add_option("--q0", rk_q0);
  rk->add_option("--tuple", rk_tuple, "file or comma list of tuple elements");
  rk->add_option("--strategy", rk_strategy)
      ->check(CLI::IsMember({"erdos-rankin", "maynard"}));
  rk->add_option("--zbound", rk_zbound, "Maynard threshold (default L / log2 L)");
  rk->add_option("--trace", rk_trace, "also write the survivor trace as CSV");
  rk_out.attach(rk);

  // scan
  Output scan_out;
  std::string scan_z, scan_w, scan_tuple;
  u64 scan_lo = 0, scan_hi = 0;
  std::uint32_t scan_m = 1;
  auto* scan = app.add_subcommand("scan", "n ≡ z (mod W) in (lo, hi] with >= m primes in n + H");
  scan->add_option("--z", scan_z)->required();
  scan->add_option("--w", scan_w)->required();
  scan->add_option("--tuple", scan_tuple, "file or comma list")->required();
  scan->add_option("--lo", scan_lo)->required();
  scan->add_option("--hi", scan_hi)->required();
  scan->add_option("--m", scan_m);
  scan_out.attach(scan);

  // explore
  Output ex_out;
  u64 ex_lo = 2, ex_hi = 0;
  std::string ex_f = "log";
  double ex_grid = 0.05;
  u64 ex_threshold = 1;
  auto* explore = app.add_subcommand("explore", "Histogram of normalized gaps and dyadic minima");
  explore->add_option("--lo", ex_lo)->required();
  explore->add_option("--hi", ex_hi)->required();
  explore->add_option("--f", ex_f);
  explore->add_option("--grid", ex_grid, "cell width");
  explore->add_option("--threshold", ex_threshold, "samples needed to mark a cell as hit");
  ex_out.attach(explore);

  // clusters
  Output cl_out;
  u64 cl_lo = 2, cl_hi = 0;
  std::uint32_t cl_m = 2;
  double cl_threshold = 1.0;
  std::string cl_f = "log";
  auto* clusters = app.add_subcommand("clusters", "Runs of m consecutive large normalized gaps");
  clusters->add_option("--lo", cl_lo)->required();
  clusters->add_option("--hi", cl_hi)->required();
  clusters->add_option("--m", cl_m);
  clusters->add_option("--threshold", cl_threshold);
  clusters->add_option("--f", cl_f);
  cl_out.attach(clusters);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gaps) {
      const auto f = parse_normalizer(gaps_f);
      gaps_out.emit(report::gaps_report(explorer::normalized_gaps(gaps_lo, gaps_hi, f), f.name,
                                        gaps_lo, gaps_hi));
    } else if (*records) {
      rec_out.emit(report::records_report(primes::max_gap_records(rec_limit), rec_limit));
    } else if (*smooth_cmd) {
      std::vector<smooth::SmoothCount> rows;
      for (u64 y : parse_integer_list(smooth_y)) {
        rows.push_back(smooth::smooth_count(smooth_x, y, smooth_o1));
      }
      smooth_out.emit(report::smooth_report(rows));
    } else if (*tuple_cmd) {
      tuples::PlacementConstraint c;
      c.targets = parse_doubles(tuple_targets);
      c.eta = tuple_eta;
      c.q0 = tuple_q0;
      tuple_out.emit(report::tuple_report(tuples::place_prime_tuple(c), c));
    } else if (*rk) {
      rankin::RankinConfig config;
      const int k = rk_k.value_or(0);
      if (!rk_v || !rk_y || !rk_U) {
        config = rankin::derive_params(rk_L, k);
      }
      config.L = rk_L;
      if (rk_v) config.v = *rk_v;
      if (rk_y) config.y = *rk_y;
      if (rk_U) config.U = *rk_U;
      config.q0 = rk_q0;
      config.zbound = rk_zbound;
      config.strategy =
          rk_strategy == "maynard" ? rankin::Strategy::Maynard : rankin::Strategy::ErdosRankin;
      if (!rk_tuple.empty()) {
        config.H = tuples::make_tuple(load_tuple(rk_tuple));
        if (rk_k && static_cast<std::size_t>(*rk_k) != config.H.k()) {
          throw ValidationError("--k does not match the tuple size");
        }
      } else if (k > 0) {
        tuples::PlacementConstraint c;
        c.targets = tuples::equal_spaced_targets(static_cast<double>(config.U), k);
        c.eta = 0.5 / (k + 1);
        c.q0 = rk_q0;
        c.cap = config.U;
        config.H = tuples::place_prime_tuple(c);
      }
      const auto record = rankin::run_construction(config);
      const auto rep = report::rankin_report(record);
      rk_out.emit(rep);
      if (!rk_trace.empty()) report::emit_report(rep, report::Format::Csv, rk_trace);
    } else if (*scan) {
      const auto H = load_tuple(scan_tuple);
      scan_out.emit(report::scan_report(explorer::cluster_scan(
          parse_decimal(scan_z), parse_decimal(scan_w), H, scan_lo, scan_hi, scan_m)));
    } else if (*explore) {
      const auto f = parse_normalizer(ex_f);
      const auto gaps_v = explorer::normalized_gaps(ex_lo, ex_hi, f);
      std::vector<double> ratios;
      ratios.reserve(gaps_v.size());
      for (const auto& g : gaps_v) ratios.push_back(g.ratio);
      auto estimate = explorer::empirical_limit_set(ratios, ex_grid, ex_threshold);
      estimate.normalizer = f.name;
      estimate.range_lo = ex_lo;
      estimate.range_hi = ex_hi;
      ex_out.emit(report::limit_set_report(estimate, explorer::dyadic_minima(gaps_v, ex_lo)));
    } else if (*clusters) {
      const auto f = parse_normalizer(cl_f);
      cl_out.emit(report::clusters_report(
          explorer::consecutive_gap_cluster(cl_lo, cl_hi, cl_m, cl_threshold, f), cl_m,
          cl_threshold, f.name));
    }
  } catch (const Error& e) {
    std::cerr << "gapforge: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::bad_alloc&) {
    std::cerr << "gapforge: out of memory\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "gapforge: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
