#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsp/pipeline.hpp"

namespace gsp {

inline constexpr const char* kReportFormat = "gsp-report/1";

/// Everything needed to replay one CLI invocation.
struct RunConfig {
  std::string command;  // gen | gammamax | solve | sweep | polish
  std::string plant_path;
  std::string candidates_path;  // empty: complement of the plant
  std::string support_path;     // polish only
  std::string method = "proxn";
  bool resistive = false;
  std::string gamma_spec = "0";
  std::string weights_spec = "q=1,r=1";
  std::uint64_t seed = 0;
  std::string output_path;
  std::string csv_path;
  // gen
  std::string graph_kind;
  int nodes = 0;
  double probability = -1.0;  // negative: 1.05 log(n)/n
  double radius = 2.0;
  double side = 10.0;
  // sweep
  bool reweighting = false;
  double epsilon = 1e-3;
  int reweight_passes = 1;
  bool warm_start = true;
  int jobs = 1;
  double zero_tol = 1e-6;
  bool record_timing = false;
  SolverOptions solver;
};

/// Parsed `q=<s>,r=<s>` multipliers of the default weights.
struct WeightSpec {
  double q = 1.0;
  double r = 1.0;
};
WeightSpec parse_weight_spec(const std::string& spec);

/// Resolves `<float>`, `<float>gmax`, `log:<lo>:<hi>:<count>` (bounds may
/// carry a `gmax` suffix) and comma-separated combinations into an ascending
/// list of absolute gammas.
std::vector<double> parse_gamma_spec(const std::string& spec, const Problem& problem);

struct SolutionEdge {
  int i = 0;
  int j = 0;
  double w = 0.0;
  friend bool operator==(const SolutionEdge&, const SolutionEdge&) = default;
};

struct RunReport {
  std::string format = kReportFormat;
  std::string prng = kPrngId;
  RunConfig config;
  int n = 0;
  int m = 0;
  int plant_edges = 0;
  bool connected = false;
  double gamma = 0.0;
  std::vector<SolutionEdge> solution;
  std::vector<SolutionEdge> polished;
  double J = 0.0;
  double J_polished = 0.0;
  double J_c = 0.0;
  double rel_loss = 0.0;
  double rel_card = 0.0;
  bool certificate_available = false;
  double gap = 0.0;
  double rd_norm = 0.0;
  double beta = 1.0;
  SolveReport solve;
  std::vector<TradeoffPoint> tradeoff;  // sweep only (scalar fields)
};

std::string to_json_string(const RunReport& report);
RunReport report_from_json_string(const std::string& text);
RunConfig config_from_json_string(const std::string& text);
std::string config_to_json_string(const RunConfig& config);

void write_report_file(const std::string& path, const RunReport& report);
RunReport read_report_file(const std::string& path);

/// Header `gamma,cardinality,J_sparse,J_polished,rel_loss,rel_card,
/// iterations,wall_time_s`, rows ordered by gamma, 12 significant digits.
/// Timing is written as 0 unless `with_timing`, which keeps repeated runs
/// byte-identical by default.
void write_tradeoff_csv(const std::vector<TradeoffPoint>& points,
                        const std::string& path, bool with_timing = false);
std::string tradeoff_csv(const std::vector<TradeoffPoint>& points,
                         bool with_timing = false);

}  // namespace gsp
