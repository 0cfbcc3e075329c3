#pragma once

#include <utility>
#include <vector>

#include "gsp/duality.hpp"
#include "gsp/solve_report.hpp"

namespace gsp {

struct NewtonOptions {
  int max_outer = 100;
  int cd_sweeps_max = 100;
  /// Largest |delta_i| in a sweep below which coordinate descent stops.
  /// Non-positive means 1e-6 * ||x_tilde||_inf, relative to the direction.
  double cd_tol = 0.0;
  /// Armijo constant.
  double sigma = 0.01;
  double backtrack_shrink = 0.5;
  /// epsilon = active_eps_factor * gamma in the signed active-set rule.
  double active_eps_factor = 1e-4;
  double tol_gap = 1e-4;
  double tol_rd = 1e-3;
  int max_backtracks = 60;

  void validate() const;
};

/// Second-order data at the outer iterate x_bar. `grad` is the gradient of
/// the smooth part: grad J for signed problems, grad J + gamma w for
/// resistive ones. `hv` holds (Hessian * x_tilde) on the active coordinates;
/// it is maintained by rank-one corrections during coordinate descent and is
/// zero elsewhere.
struct NewtonWorkspace {
  MatrixXd G_inv;
  MatrixXd Y;
  VectorXd grad;
  VectorXd hv;
  std::vector<int> active;
  int sweeps = 0;
  int skipped = 0;
};

NewtonWorkspace make_workspace(const Objective& objective,
                               const ObjectiveState& state);

/// Coordinates allowed to move. Signed: inactive when x_i = 0 and
/// |grad_i| < gamma_i - eps_i. Resistive: inactive when x_i = 0 and
/// grad_i >= 0 (grad of f = J + gamma w^T x).
std::vector<int> active_set(const VectorXd& x_bar, const VectorXd& grad,
                            const VectorXd& gamma, const VectorXd& eps,
                            bool resistive);
std::vector<int> active_set(const VectorXd& x_bar, const VectorXd& grad,
                            double gamma, double eps, bool resistive);

/// Approximate Newton direction by cyclic coordinate descent over
/// `ws.active` in ascending index order, using the closed-form scalar
/// updates. Never forms the m x m Hessian.
VectorXd cd_direction(const Problem& problem, const VectorXd& x_bar,
                      NewtonWorkspace& ws, const NewtonOptions& opts);

/// Backtracking (generalized Armijo) step along x_tilde. Once the predicted
/// decrease falls below the floating-point resolution of the objective, any
/// non-increasing step is accepted. Throws
/// NumericalError after `max_backtracks` reductions.
double line_search(const Objective& objective, const ObjectiveState& state,
                   const VectorXd& x_tilde, const NewtonOptions& opts);

/// Proximal Newton method for signed and resistive problems.
std::pair<VectorXd, SolveReport> solve_newton(const Problem& problem,
                                              const VectorXd& x0,
                                              const NewtonOptions& opts = {});

}  // namespace gsp
