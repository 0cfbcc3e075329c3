#pragma once

#include <utility>

#include "gsp/duality.hpp"
#include "gsp/solve_report.hpp"

namespace gsp {

struct ProxGradOptions {
  int max_iters = 10000;
  /// Step used when no BB estimate is available or it is degenerate.
  double alpha_fallback = 1.0;
  double backtrack_shrink = 0.5;
  double alpha_min = 1e-12;
  double alpha_max = 1e12;
  double tol_gap = 1e-4;
  double tol_rd = 1e-3;
  /// Window of the max-of-last-M acceptance rule (resistive only).
  int nonmonotone_memory = 10;
  /// Sufficient-decrease constant of the non-monotone rule.
  double nonmonotone_sigma = 1e-4;
  /// Iterations between dual certificates.
  int report_every = 10;

  void validate() const;
};

/// S_kappa(v) = sign(v) max(|v| - kappa, 0), elementwise.
VectorXd soft_threshold(const VectorXd& v, double kappa);
/// Elementwise thresholds.
VectorXd soft_threshold(const VectorXd& v, const VectorXd& kappa);

/// Barzilai-Borwein step ||x_k - x_prev||^2 / ((x_prev - x_k)^T (g_prev - g_k))
/// clamped to [alpha_min, alpha_max]; alpha_fallback when the denominator is
/// not positive or not finite.
double bb_step(const VectorXd& x_k, const VectorXd& x_prev, const VectorXd& g_k,
               const VectorXd& g_prev, const ProxGradOptions& opts);

/// Proximal gradient with BB initialization and backtracking for the signed
/// problem. Every accepted iterate keeps G positive definite and satisfies
/// the quadratic majorization, so the composite objective never increases.
std::pair<VectorXd, SolveReport> solve_ista(const Problem& problem,
                                            const VectorXd& x0,
                                            const ProxGradOptions& opts = {});

/// Projected gradient on x >= 0 with BB steps accepted by a non-monotone
/// max-of-last-M rule, for connected resistive networks.
std::pair<VectorXd, SolveReport> solve_projected(
    const Problem& problem, const VectorXd& x0,
    const ProxGradOptions& opts = {});

}  // namespace gsp
