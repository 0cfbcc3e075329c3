#include "gsp/prox_newton.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace gsp {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kRoundoffUlps = 64.0;
constexpr double kCdRelTol = 1e-6;

double composite(const Problem& problem, const VectorXd& penalty, double J,
                 const VectorXd& x) {
  return problem.resistive ? J + penalty.dot(x) : J + penalty.dot(x.cwiseAbs());
}

}  // namespace

void NewtonOptions::validate() const {
  if (max_outer < 0 || cd_sweeps_max < 1) {
    throw InvalidInput("max_outer must be >= 0 and cd_sweeps_max >= 1");
  }
  if (!(sigma > 0.0 && sigma < 0.5)) throw InvalidInput("sigma must lie in (0, 0.5)");
  if (!(backtrack_shrink > 0.0 && backtrack_shrink < 1.0)) {
    throw InvalidInput("backtrack_shrink must lie in (0, 1)");
  }
  if (!(active_eps_factor >= 0.0)) {
    throw InvalidInput("active_eps_factor must be non-negative");
  }
  if (!(tol_gap > 0.0) || !(tol_rd > 0.0)) {
    throw InvalidInput("tolerances must be positive");
  }
  if (max_backtracks < 1) throw InvalidInput("max_backtracks must be >= 1");
}

NewtonWorkspace make_workspace(const Objective& objective,
                               const ObjectiveState& state) {
  const Problem& problem = objective.problem();
  const int n = problem.n();
  NewtonWorkspace ws;
  ws.G_inv = state.closed.llt.solve(MatrixXd::Identity(n, n));
  ws.G_inv = 0.5 * (ws.G_inv + ws.G_inv.transpose()).eval();
  ws.Y = state.Y;
  ws.grad = problem.resistive ? VectorXd(state.grad + problem.penalty())
                              : state.grad;
  ws.hv = VectorXd::Zero(problem.m());
  return ws;
}

std::vector<int> active_set(const VectorXd& x_bar, const VectorXd& grad,
                            const VectorXd& gamma, const VectorXd& eps,
                            bool resistive) {
  std::vector<int> active;
  for (int i = 0; i < x_bar.size(); ++i) {
    const bool at_zero = x_bar(i) == 0.0;
    const bool inactive = resistive
                              ? at_zero && grad(i) >= 0.0
                              : at_zero && std::abs(grad(i)) < gamma(i) - eps(i);
    if (!inactive) active.push_back(i);
  }
  return active;
}

std::vector<int> active_set(const VectorXd& x_bar, const VectorXd& grad,
                            double gamma, double eps, bool resistive) {
  const auto m = x_bar.size();
  return active_set(x_bar, grad, VectorXd::Constant(m, gamma),
                    VectorXd::Constant(m, eps), resistive);
}

VectorXd cd_direction(const Problem& problem, const VectorXd& x_bar,
                      NewtonWorkspace& ws, const NewtonOptions& opts) {
  const IncidenceMatrix& E = problem.candidates;
  const VectorXd penalty = problem.penalty();
  const auto& active = ws.active;
  const std::size_t na = active.size();

  // Hessian diagonal on the active set.
  std::vector<double> a(na);
  for (std::size_t p = 0; p < na; ++p) {
    const int i = active[p];
    a[p] = kHessianScale * E.quad(ws.Y, i) * E.quad(ws.G_inv, i);
  }

  VectorXd x_tilde = VectorXd::Zero(problem.m());
  ws.hv.setZero(problem.m());
  ws.sweeps = 0;
  ws.skipped = 0;
  if (na == 0) return x_tilde;

  for (int sweep = 0; sweep < opts.cd_sweeps_max; ++sweep) {
    ++ws.sweeps;
    double largest = 0.0;
    std::size_t skipped = 0;
    for (std::size_t p = 0; p < na; ++p) {
      const int i = active[p];
      if (!(a[p] > 0.0) || !std::isfinite(a[p])) {
        ++skipped;
        continue;
      }
      const double b = ws.hv(i) + ws.grad(i);
      const double c = x_bar(i) + x_tilde(i);
      double next;  // new value of x_bar_i + x_tilde_i
      if (problem.resistive) {
        const double trial = c - b / a[p];
        next = trial >= 0.0 ? trial : 0.0;
      } else {
        const double v = c - b / a[p];
        const double mag = std::abs(v) - penalty(i) / a[p];
        next = mag > 0.0 ? std::copysign(mag, v) : 0.0;
      }
      const double delta = next - c;
      if (delta == 0.0) continue;
      // Land exactly on zero so that sparsity is preserved bit-for-bit.
      x_tilde(i) = next == 0.0 ? -x_bar(i) : x_tilde(i) + delta;
      largest = std::max(largest, std::abs(delta));

      const int hi = E.head(i), ti = E.tail(i);
      for (std::size_t q = 0; q < na; ++q) {
        const int k = active[q];
        const int hk = E.head(k), tk = E.tail(k);
        const double yk = ws.Y(hk, hi) - ws.Y(hk, ti) - ws.Y(tk, hi) + ws.Y(tk, ti);
        const double gk = ws.G_inv(hk, hi) - ws.G_inv(hk, ti) - ws.G_inv(tk, hi) +
                          ws.G_inv(tk, ti);
        ws.hv(k) += delta * kHessianScale * yk * gk;
      }
    }
    ws.skipped = static_cast<int>(skipped);
    if (skipped == na) {
      throw NumericalError("cd_direction: no active coordinate has positive curvature");
    }
    const double scale = x_tilde.size() ? x_tilde.lpNorm<Eigen::Infinity>() : 0.0;
    const double tol = opts.cd_tol > 0.0 ? opts.cd_tol : kCdRelTol * scale;
    if (largest <= tol) break;
  }
  return x_tilde;
}

double line_search(const Objective& objective, const ObjectiveState& state,
                   const VectorXd& x_tilde, const NewtonOptions& opts) {
  const Problem& problem = objective.problem();
  const VectorXd penalty = problem.penalty();
  const VectorXd& x_bar = state.x;
  const double F_bar = composite(problem, penalty, state.J, x_bar);

  double model;
  if (problem.resistive) {
    model = (state.grad + penalty).dot(x_tilde);
  } else {
    model = state.grad.dot(x_tilde) + penalty.dot((x_bar + x_tilde).cwiseAbs()) -
            penalty.dot(x_bar.cwiseAbs());
  }

  if (!(model < 0.0)) {
    throw NumericalError("line_search: direction is not a descent direction");
  }
  // When the predicted decrease is below the resolution of F the sufficient
  // decrease test only sees round-off; plain non-increase is required instead.
  const double resolution =
      kRoundoffUlps * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(F_bar));
  const bool roundoff = -opts.sigma * model <= resolution;
  double alpha = 1.0;
  for (int t = 0; t <= opts.max_backtracks; ++t) {
    const VectorXd x = x_bar + alpha * x_tilde;
    const bool in_cone = !problem.resistive || x.size() == 0 || x.minCoeff() >= 0.0;
    if (in_cone) {
      const auto J = objective.try_value(x);
      if (J) {
        const double F = composite(problem, penalty, *J, x);
        if (F <= F_bar + (roundoff ? 0.0 : alpha * opts.sigma * model)) return alpha;
      }
    }
    alpha *= opts.backtrack_shrink;
  }
  throw NumericalError("line_search: no acceptable step after " +
                       std::to_string(opts.max_backtracks) + " reductions");
}

std::pair<VectorXd, SolveReport> solve_newton(const Problem& problem,
                                              const VectorXd& x0,
                                              const NewtonOptions& opts) {
  opts.validate();
  if (x0.size() != problem.m()) throw InvalidInput("x0 has the wrong length");
  if (problem.resistive && x0.size() > 0 && x0.minCoeff() < 0.0) {
    throw InvalidInput("solve_newton: resistive x0 must be non-negative");
  }
  const auto start = Clock::now();
  SolveReport report;
  report.method = "proxn";

  const Objective objective(problem);
  const VectorXd penalty = problem.penalty();
  const VectorXd eps = opts.active_eps_factor * penalty;

  ObjectiveState state;
  try {
    state = objective.evaluate(x0);
  } catch (const Infeasible&) {
    report.status = SolveStatus::InfeasibleStart;
    report.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return {x0, report};
  }
  double F = composite(problem, penalty, state.J, state.x);
  report.objective_trace.push_back(F);

  DualCertificate cert;
  int stall_streak = 0;
  int k = 0;
  for (;; ++k) {
    cert = certify(objective, state);
    if (cert.available) report.gap_trace.push_back(cert.gap);
    if (cert.meets(opts.tol_gap, opts.tol_rd)) {
      report.status = SolveStatus::Converged;
      break;
    }
    if (k >= opts.max_outer) {
      report.status = SolveStatus::MaxIters;
      break;
    }

    NewtonWorkspace ws = make_workspace(objective, state);
    ws.active = active_set(state.x, ws.grad, penalty, eps, problem.resistive);
    const VectorXd x_tilde = cd_direction(problem, state.x, ws, opts);
    if (x_tilde.size() == 0 || x_tilde.cwiseAbs().maxCoeff() == 0.0) {
      report.status = cert.available ? SolveStatus::Stalled : SolveStatus::Converged;
      break;
    }
    double alpha;
    try {
      alpha = line_search(objective, state, x_tilde, opts);
    } catch (const NumericalError&) {
      // No decrease is available along the model direction: round-off floor.
      report.status = SolveStatus::Stalled;
      break;
    }
    VectorXd x = state.x + alpha * x_tilde;
    if (problem.resistive) x = x.cwiseMax(0.0);
    state = objective.evaluate(x);
    const double F_new = composite(problem, penalty, state.J, state.x);
    report.objective_trace.push_back(F_new);
    report.step_trace.push_back(alpha);
    if (!problem.r_scalar) {
      const double rel = std::abs(F_new - F) / std::max(1.0, std::abs(F_new));
      stall_streak = rel <= 1e-10 ? stall_streak + 1 : 0;
      if (stall_streak >= 5) {
        F = F_new;
        ++k;
        report.status = SolveStatus::Converged;
        break;
      }
    }
    F = F_new;
  }

  report.iterations = k;
  report.certificate_available = cert.available;
  if (cert.available) {
    report.final_gap = cert.gap;
    report.final_rd_norm = cert.rd_norm;
    report.final_beta = cert.beta;
    report.primal_value = cert.primal_value;
    report.dual_value = cert.dual_value;
  }
  report.final_J = state.J;
  report.final_objective = F;
  report.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  return {state.x, report};
}

}  // namespace gsp
