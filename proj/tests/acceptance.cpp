// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
// Usage: mcc_acceptance [source_dir] [mcc_binary]

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mcc/experiment.hpp"
#include "mcc/verification.hpp"

namespace {

using namespace mcc;

struct Outcome {
  bool passed = false;
  std::string detail;
};

Outcome from_suite(const verify::SuiteResult& r) {
  std::ostringstream os;
  os << r.checks << " checks, " << r.violations << " violations";
  if (!r.detail.empty()) os << "; " << r.detail;
  return {r.passed, os.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// CSV text with the wall_ms column blanked.
std::string without_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  int wall_col = -1;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (wall_col < 0) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "wall_ms") wall_col = static_cast<int>(i);
      }
    } else if (wall_col < static_cast<int>(cells.size())) {
      cells[static_cast<std::size_t>(wall_col)].clear();
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  }
  return out.str();
}

Outcome trace_check() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = verify::example_trace();
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  auto out = from_suite(r);
  out.passed = out.passed && ms < 1.0;
  out.detail += "; " + std::to_string(ms) + " ms";
  return out;
}

Outcome desk_scale(const std::string& source_dir) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = load_config(source_dir + "/configs/desk_scale.json");
  const auto report = run_experiment(cfg);
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60.0;
  const double n = report.metadata.at("node_count").get<double>();

  std::map<std::pair<std::string, int>, const ReportRow*> rows;
  for (const auto& r : report.rows) rows[{r.method, r.budget}] = &r;

  int failures = 0;
  std::ostringstream why;
  double min_ratio = 2.0, max_ratio = -1.0, tightest = 1e300;
  for (const auto& r : report.rows) {
    if (std::abs(r.f_m_mean + r.f_notm_mean - n) > 1e-9) {
      ++failures;
      why << " sum mismatch " << r.method << "@" << r.budget << ";";
    }
  }
  for (int k : cfg.budgets) {
    const auto* s = rows.at({"sandwich", k});
    if (!s->bound_ratio || !(*s->bound_ratio > 0.0 && *s->bound_ratio <= 1.0)) {
      ++failures;
      why << " ratio outside (0,1] at k=" << k << ";";
    } else {
      min_ratio = std::min(min_ratio, *s->bound_ratio);
      max_ratio = std::max(max_ratio, *s->bound_ratio);
    }
    for (const char* base : {"high_weight", "proximity", "random"}) {
      const auto* b = rows.at({base, k});
      const double se = std::hypot(s->f_notm_stderr, b->f_notm_stderr);
      const double margin = s->f_notm_mean - b->f_notm_mean;
      tightest = std::min(tightest, se > 0 ? margin / se : margin);
      if (margin < -2.0 * se) {
        ++failures;
        why << " " << base << " beats sandwich at k=" << k << ";";
      }
    }
  }
  if (minutes > 30.0) {
    ++failures;
    why << " runtime over 30 min;";
  }
  std::ostringstream os;
  os << report.rows.size() << " rows, n=" << n << ", bound_ratio in [" << min_ratio << ", " << max_ratio
     << "], smallest sandwich-minus-baseline margin " << tightest << " SE, " << minutes << " min"
     << why.str();
  return {failures == 0, os.str()};
}

Outcome determinism(const std::string& source_dir, const std::string& binary) {
  const auto dir = std::filesystem::temp_directory_path() / ("mcc_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string config = source_dir + "/configs/determinism.json";
  std::vector<std::string> outputs;
  for (int i = 0; i < 2; ++i) {
    const auto csv = (dir / ("run" + std::to_string(i) + ".csv")).string();
    const std::string cmd = "\"" + binary + "\" experiment -c \"" + config + "\" --csv \"" + csv + "\"";
    if (std::system(cmd.c_str()) != 0) {
      std::filesystem::remove_all(dir);
      return {false, "experiment command failed: " + cmd};
    }
    outputs.push_back(slurp(csv));
  }
  std::filesystem::remove_all(dir);
  const auto a = without_wall_time(outputs[0]);
  const auto b = without_wall_time(outputs[1]);
  const auto lines = std::count(a.begin(), a.end(), '\n');
  std::ostringstream os;
  os << lines << " CSV lines, " << (a == b ? "identical" : "different") << " after dropping wall_ms";
  return {a == b && lines > 1, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string source_dir = argc > 1 ? argv[1] : MCC_SOURCE_DIR;
  const std::string binary = argc > 2 ? argv[2] : MCC_CLI_BINARY;
  const std::uint64_t seed = 20240601;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"example trace and priority flip", [] { return trace_check(); }},
      {"fast evaluator equals step simulator on all live graphs",
       [&] { return from_suite(verify::oracle_equivalence(200, seed)); }},
      {"monotone and submodular under special priority classes",
       [&] { return from_suite(verify::monotone_submodular(200, seed + 1)); }},
      {"upper >= f >= lower under random priorities",
       [&] { return from_suite(verify::sandwich_bounds(200, seed + 2)); }},
      {"non-submodularity witness", [] { return from_suite(verify::non_submodular_witness()); }},
      {"set-cover reduction identity", [] { return from_suite(verify::reduction_identity()); }},
      {"greedy guarantee and sandwich certificate",
       [&] { return from_suite(verify::greedy_guarantee(100, seed + 3)); }},
      {"Monte Carlo convergence", [&] { return from_suite(verify::estimator_convergence(100, 10000, seed + 4)); }},
      {"desk-scale experiment", [&] { return desk_scale(source_dir); }},
      {"experiment determinism", [&] { return determinism(source_dir, binary); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += !out.passed;
    std::cout << (out.passed ? "PASS" : "FAIL") << " [" << i + 1 << "/" << criteria.size() << "] "
              << criteria[i].first << " -- " << out.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
