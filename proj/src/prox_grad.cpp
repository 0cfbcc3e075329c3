#include "gsp/prox_grad.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>

namespace gsp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Objective-change stopping rule used when no certificate exists.
class StallDetector {
 public:
  bool update(double previous, double current) {
    const double rel = std::abs(current - previous) / std::max(1.0, std::abs(current));
    streak_ = rel <= 1e-10 ? streak_ + 1 : 0;
    return streak_ >= 5;
  }

 private:
  int streak_ = 0;
};

void record_certificate(SolveReport& report, const DualCertificate& cert) {
  report.certificate_available = cert.available;
  if (!cert.available) return;
  report.final_gap = cert.gap;
  report.final_rd_norm = cert.rd_norm;
  report.final_beta = cert.beta;
  report.primal_value = cert.primal_value;
  report.dual_value = cert.dual_value;
}

}  // namespace

void ProxGradOptions::validate() const {
  if (max_iters < 0) throw InvalidInput("max_iters must be non-negative");
  if (!(alpha_min > 0.0) || !(alpha_min <= alpha_max)) {
    throw InvalidInput("need 0 < alpha_min <= alpha_max");
  }
  if (!(alpha_fallback > 0.0)) throw InvalidInput("alpha_fallback must be positive");
  if (!(backtrack_shrink > 0.0 && backtrack_shrink < 1.0)) {
    throw InvalidInput("backtrack_shrink must lie in (0, 1)");
  }
  if (!(tol_gap > 0.0) || !(tol_rd > 0.0)) {
    throw InvalidInput("tolerances must be positive");
  }
  if (nonmonotone_memory < 1) throw InvalidInput("nonmonotone_memory must be >= 1");
  if (report_every < 1) throw InvalidInput("report_every must be >= 1");
}

VectorXd soft_threshold(const VectorXd& v, double kappa) {
  if (kappa < 0.0) throw InvalidInput("soft_threshold: negative threshold");
  return v.unaryExpr([kappa](double t) {
    const double mag = std::abs(t) - kappa;
    return mag > 0.0 ? std::copysign(mag, t) : 0.0;
  });
}

VectorXd soft_threshold(const VectorXd& v, const VectorXd& kappa) {
  VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i)) - kappa(i);
    out(i) = mag > 0.0 ? std::copysign(mag, v(i)) : 0.0;
  }
  return out;
}

double bb_step(const VectorXd& x_k, const VectorXd& x_prev, const VectorXd& g_k,
               const VectorXd& g_prev, const ProxGradOptions& opts) {
  const VectorXd dx = x_k - x_prev;
  const double num = dx.squaredNorm();
  const double den = (x_prev - x_k).dot(g_prev - g_k);
  if (!(den > 0.0) || !std::isfinite(den) || !std::isfinite(num)) {
    return opts.alpha_fallback;
  }
  return std::clamp(num / den, opts.alpha_min, opts.alpha_max);
}

std::pair<VectorXd, SolveReport> solve_ista(const Problem& problem,
                                            const VectorXd& x0,
                                            const ProxGradOptions& opts) {
  opts.validate();
  if (problem.resistive) {
    throw InvalidInput("solve_ista handles signed problems; use solve_projected");
  }
  if (x0.size() != problem.m()) throw InvalidInput("x0 has the wrong length");
  const auto start = Clock::now();
  SolveReport report;
  report.method = "proxbb";

  const Objective objective(problem);
  const VectorXd penalty = problem.penalty();
  auto composite = [&](double J, const VectorXd& x) {
    return J + penalty.dot(x.cwiseAbs());
  };

  ObjectiveState state;
  try {
    state = objective.evaluate(x0);
  } catch (const Infeasible&) {
    report.status = SolveStatus::InfeasibleStart;
    report.wall_time = seconds_since(start);
    return {x0, report};
  }
  double F = composite(state.J, state.x);
  report.objective_trace.push_back(F);

  VectorXd x_prev, g_prev;
  StallDetector stall;
  DualCertificate cert;
  bool certified_here = false;

  int k = 0;
  for (;; ++k) {
    certified_here = false;
    if (k % opts.report_every == 0) {
      cert = certify(objective, state);
      certified_here = true;
      if (cert.available) report.gap_trace.push_back(cert.gap);
      if (cert.meets(opts.tol_gap, opts.tol_rd)) {
        report.status = SolveStatus::Converged;
        break;
      }
    }
    if (k >= opts.max_iters) {
      report.status = SolveStatus::MaxIters;
      break;
    }

    double alpha = x_prev.size() == 0
                       ? opts.alpha_fallback
                       : bb_step(state.x, x_prev, state.grad, g_prev, opts);
    const VectorXd& x = state.x;
    const VectorXd& g = state.grad;
    VectorXd z;
    std::optional<double> Jz;
    for (int t = 0;; ++t) {
      z = soft_threshold(x - alpha * g, alpha * penalty);
      Jz = objective.try_value(z);
      if (Jz) {
        const VectorXd dz = z - x;
        const double model = state.J + g.dot(dz) + dz.squaredNorm() / (2.0 * alpha);
        if (*Jz <= model) break;
      }
      if (t > 200) {
        throw NumericalError("solve_ista: backtracking did not find a step");
      }
      alpha *= opts.backtrack_shrink;
    }

    const bool moved = z != x;
    x_prev = x;
    g_prev = g;
    state = objective.evaluate(z);
    const double F_new = composite(state.J, state.x);
    report.objective_trace.push_back(F_new);
    report.step_trace.push_back(alpha);
    const double F_old = F;
    F = F_new;

    if (!moved) {
      // Fixed point of the proximal map: optimal up to round-off.
      cert = certify(objective, state);
      certified_here = true;
      if (cert.available) report.gap_trace.push_back(cert.gap);
      report.status = cert.meets(opts.tol_gap, opts.tol_rd) || !cert.available
                          ? SolveStatus::Converged
                          : SolveStatus::Stalled;
      ++k;
      break;
    }
    if (!problem.r_scalar && stall.update(F_old, F_new)) {
      report.status = SolveStatus::Converged;
      ++k;
      break;
    }
  }

  if (!certified_here) cert = certify(objective, state);
  record_certificate(report, cert);
  report.iterations = k;
  report.final_J = state.J;
  report.final_objective = F;
  report.wall_time = seconds_since(start);
  return {state.x, report};
}

std::pair<VectorXd, SolveReport> solve_projected(const Problem& problem,
                                                 const VectorXd& x0,
                                                 const ProxGradOptions& opts) {
  opts.validate();
  if (!problem.resistive) {
    throw InvalidInput("solve_projected requires a resistive problem");
  }
  if (x0.size() != problem.m()) throw InvalidInput("x0 has the wrong length");
  if (x0.size() > 0 && x0.minCoeff() < 0.0) {
    throw InvalidInput("solve_projected: x0 must be non-negative");
  }
  const auto start = Clock::now();
  SolveReport report;
  report.method = "projgrad";

  const Objective objective(problem);
  const VectorXd penalty = problem.penalty();

  ObjectiveState state;
  try {
    state = objective.evaluate(x0);
  } catch (const Infeasible&) {
    report.status = SolveStatus::InfeasibleStart;
    report.wall_time = seconds_since(start);
    return {x0, report};
  }
  double f = state.J + penalty.dot(state.x);
  VectorXd grad_f = state.grad + penalty;
  report.objective_trace.push_back(f);
  std::deque<double> memory{f};

  VectorXd x_prev, g_prev;
  StallDetector stall;
  DualCertificate cert;
  bool certified_here = false;

  int k = 0;
  for (;; ++k) {
    certified_here = false;
    if (k % opts.report_every == 0) {
      cert = certify(objective, state);
      certified_here = true;
      if (cert.available) report.gap_trace.push_back(cert.gap);
      if (cert.meets(opts.tol_gap, opts.tol_rd)) {
        report.status = SolveStatus::Converged;
        break;
      }
    }
    if (k >= opts.max_iters) {
      report.status = SolveStatus::MaxIters;
      break;
    }

    double alpha = x_prev.size() == 0
                       ? opts.alpha_fallback
                       : bb_step(state.x, x_prev, grad_f, g_prev, opts);
    const double reference = *std::max_element(memory.begin(), memory.end());
    const VectorXd& x = state.x;
    VectorXd z;
    for (int t = 0;; ++t) {
      z = (x - alpha * grad_f).cwiseMax(0.0);
      const auto Jz = objective.try_value(z);
      if (Jz) {
        const double fz = *Jz + penalty.dot(z);
        const double decrease =
            opts.nonmonotone_sigma / (2.0 * alpha) * (z - x).squaredNorm();
        if (fz <= reference - decrease) break;
      }
      if (t > 200) {
        throw NumericalError("solve_projected: backtracking did not find a step");
      }
      alpha *= opts.backtrack_shrink;
    }

    const bool moved = z != x;
    x_prev = x;
    g_prev = grad_f;
    state = objective.evaluate(z);
    const double f_old = f;
    f = state.J + penalty.dot(state.x);
    grad_f = state.grad + penalty;
    report.objective_trace.push_back(f);
    report.step_trace.push_back(alpha);
    memory.push_back(f);
    while (static_cast<int>(memory.size()) > opts.nonmonotone_memory) {
      memory.pop_front();
    }

    if (!moved) {
      cert = certify(objective, state);
      certified_here = true;
      if (cert.available) report.gap_trace.push_back(cert.gap);
      report.status = cert.meets(opts.tol_gap, opts.tol_rd) || !cert.available
                          ? SolveStatus::Converged
                          : SolveStatus::Stalled;
      ++k;
      break;
    }
    if (!problem.r_scalar && stall.update(f_old, f)) {
      report.status = SolveStatus::Converged;
      ++k;
      break;
    }
  }

  if (!certified_here) cert = certify(objective, state);
  record_certificate(report, cert);
  report.iterations = k;
  report.final_J = state.J;
  report.final_objective = f;
  report.wall_time = seconds_since(start);
  return {state.x, report};
}

}  // namespace gsp
