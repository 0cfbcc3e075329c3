#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gsp/prox_grad.hpp"
#include "gsp/prox_newton.hpp"

namespace gsp {

enum class Method { ProxBB, ProxNewton, ProjGrad };

Method parse_method(const std::string& name);
std::string to_string(Method method);

struct SolverOptions {
  Method method = Method::ProxNewton;
  ProxGradOptions grad;
  NewtonOptions newton;
};

/// Dispatches to solve_ista / solve_projected / solve_newton. proxbb on a
/// resistive problem runs the projected variant.
std::pair<VectorXd, SolveReport> solve(const Problem& problem, const VectorXd& x0,
                                       const SolverOptions& opts);

/// All-ones for signed problems (throws Infeasible if that closed loop is
/// not connected), zero for resistive problems.
VectorXd default_start(const Problem& problem);

/// || diag(E^T G_p^{-1} Q G_p^{-1} E) ||_inf; the smallest gamma at which the
/// resistive solution is x = 0. Requires a connected plant.
double gamma_max(const Problem& problem);

/// count(|x_l| > zero_tol) and the corresponding indices.
std::vector<int> support_of(const VectorXd& x, double zero_tol);

/// w_l = 1 / (|x_l| + epsilon).
VectorXd reweight(const VectorXd& x, double epsilon);

struct PathPoint {
  double gamma = 0.0;
  VectorXd x;
  VectorXd weights;  // weights used for this gamma
  SolveReport report;
};

/// Path-following reweighted l1: solve gamma = 0 once for x_c, set
/// w = 1/(|x_c| + epsilon), then for each ascending gamma solve with penalty
/// gamma w^T |x| warm-started from the previous solution and update w.
/// `passes` > 1 repeats the reweighting at a fixed gamma until the weights
/// settle (relative change 1e-6) or the pass budget is spent.
std::vector<PathPoint> reweighted_path(const Problem& problem,
                                       const std::vector<double>& gammas,
                                       double epsilon, const SolverOptions& opts,
                                       const std::optional<VectorXd>& x_c = {},
                                       int passes = 1);

struct Polished {
  VectorXd x;  // length m, zero off the support
  double J = 0.0;
  SolveReport report;
};

/// Re-optimizes the weights on `support` with gamma = 0. `warm` (length m) is
/// used on the support when it yields a connected closed loop. Throws
/// Infeasible when no connected closed loop exists on the support.
Polished polish(const Problem& problem, const std::vector<int>& support,
                const SolverOptions& opts, const std::optional<VectorXd>& warm = {});

struct TradeoffPoint {
  double gamma = 0.0;
  int cardinality = 0;
  double J_sparse = 0.0;    // J at the regularized solution
  double J_polished = 0.0;  // J after polishing on its support
  double rel_performance_loss = 0.0;  // (J_polished - J_c) / J_c
  double rel_cardinality = 0.0;       // card(x) / card(x_c)
  int iterations = 0;
  double wall_time = 0.0;
  bool closed_loop_connected = false;
  VectorXd x;
  VectorXd x_polished;
};

struct SweepOptions {
  SolverOptions solver;
  bool reweighting = false;
  double epsilon = 1e-3;
  int reweight_passes = 1;
  double zero_tol = 1e-6;
  bool warm_start = true;
  /// Worker threads; honoured only when warm starts and reweighting are off.
  int jobs = 1;
};

struct SweepResult {
  VectorXd x_c;
  double J_c = 0.0;
  int cardinality_c = 0;
  bool parallel = false;
  std::vector<TradeoffPoint> points;
};

SweepResult sweep(const Problem& problem, const std::vector<double>& gammas,
                  const SweepOptions& opts);

/// `count` log-spaced values on [1e-3 gamma_max, gamma_max].
std::vector<double> default_gamma_grid(const Problem& problem, int count = 50);

/// `count` log-spaced values on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace gsp
