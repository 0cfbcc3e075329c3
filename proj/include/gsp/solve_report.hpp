#pragma once

#include <string>
#include <vector>

namespace gsp {

enum class SolveStatus { Converged, MaxIters, InfeasibleStart, Stalled };

std::string to_string(SolveStatus status);
SolveStatus parse_solve_status(const std::string& name);

/// Per-run diagnostics shared by all solvers.
struct SolveReport {
  std::string method;
  SolveStatus status = SolveStatus::MaxIters;
  int iterations = 0;
  /// Composite objective (J + gamma ||w o x||_1, or J + gamma w^T x for
  /// resistive problems) at x0 and after every accepted step.
  std::vector<double> objective_trace;
  /// Accepted step size per iteration.
  std::vector<double> step_trace;
  /// Duality gap at every certification point.
  std::vector<double> gap_trace;
  double wall_time = 0.0;
  double final_J = 0.0;
  double final_objective = 0.0;
  double final_gap = 0.0;
  double final_rd_norm = 0.0;
  double final_beta = 1.0;
  bool certificate_available = false;
  double primal_value = 0.0;
  double dual_value = 0.0;
};

}  // namespace gsp
