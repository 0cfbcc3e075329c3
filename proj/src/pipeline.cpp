#include "gsp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>

namespace gsp {

Method parse_method(const std::string& name) {
  if (name == "proxbb") return Method::ProxBB;
  if (name == "proxn") return Method::ProxNewton;
  if (name == "projgrad") return Method::ProjGrad;
  throw InvalidInput("unknown method '" + name + "' (expected proxbb, proxn or projgrad)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::ProxBB: return "proxbb";
    case Method::ProxNewton: return "proxn";
    case Method::ProjGrad: return "projgrad";
  }
  return "unknown";
}

std::pair<VectorXd, SolveReport> solve(const Problem& problem, const VectorXd& x0,
                                       const SolverOptions& opts) {
  switch (opts.method) {
    case Method::ProxNewton:
      return solve_newton(problem, x0, opts.newton);
    case Method::ProjGrad:
      if (!problem.resistive) {
        throw InvalidInput("projgrad requires a resistive problem");
      }
      return solve_projected(problem, x0, opts.grad);
    case Method::ProxBB:
      return problem.resistive ? solve_projected(problem, x0, opts.grad)
                               : solve_ista(problem, x0, opts.grad);
  }
  throw InvalidInput("unknown method");
}

VectorXd default_start(const Problem& problem) {
  if (problem.resistive) return VectorXd::Zero(problem.m());
  VectorXd x = VectorXd::Ones(problem.m());
  if (!closed_loop(problem.plant.strengthened, problem.candidates, x).positive_definite) {
    throw Infeasible(
        "all-ones start does not connect the closed loop; supply a feasible x0");
  }
  return x;
}

double gamma_max(const Problem& problem) {
  if (!problem.plant.connected) {
    throw InvalidInput("gamma_max is defined for connected plants only");
  }
  Eigen::LLT<MatrixXd> llt(problem.plant.strengthened);
  const MatrixXd W = llt.solve(problem.Q);
  MatrixXd Y0 = llt.solve(W.transpose());
  Y0 = 0.5 * (Y0 + Y0.transpose()).eval();
  double best = 0.0;
  for (int l = 0; l < problem.m(); ++l) {
    best = std::max(best, std::abs(problem.candidates.quad(Y0, l)));
  }
  return best;
}

std::vector<int> support_of(const VectorXd& x, double zero_tol) {
  std::vector<int> s;
  for (int l = 0; l < x.size(); ++l) {
    if (std::abs(x(l)) > zero_tol) s.push_back(l);
  }
  return s;
}

VectorXd reweight(const VectorXd& x, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInput("reweighting epsilon must be positive");
  return (x.cwiseAbs().array() + epsilon).inverse().matrix();
}

std::vector<PathPoint> reweighted_path(const Problem& problem,
                                       const std::vector<double>& gammas,
                                       double epsilon, const SolverOptions& opts,
                                       const std::optional<VectorXd>& x_c,
                                       int passes) {
  if (!std::is_sorted(gammas.begin(), gammas.end())) {
    throw InvalidInput("reweighted_path: gammas must be ascending");
  }
  if (passes < 1) throw InvalidInput("reweighted_path: passes must be >= 1");
  VectorXd x;
  if (x_c) {
    x = *x_c;
  } else {
    x = solve(problem.with_gamma(0.0), default_start(problem), opts).first;
  }
  VectorXd w = reweight(x, epsilon);

  std::vector<PathPoint> path;
  path.reserve(gammas.size());
  for (double g : gammas) {
    PathPoint pt;
    pt.gamma = g;
    for (int pass = 0; pass < passes; ++pass) {
      const Problem weighted = problem.with_gamma(g, w);
      VectorXd start = x;
      if (!problem.resistive &&
          !closed_loop(problem.plant.strengthened, problem.candidates, start)
               .positive_definite) {
        start = default_start(problem);
      }
      auto [xs, rep] = solve(weighted, start, opts);
      pt.weights = w;
      pt.report = std::move(rep);
      x = std::move(xs);
      const VectorXd w_next = reweight(x, epsilon);
      const double change = (w_next - w).norm() / std::max(1.0, w.norm());
      w = w_next;
      if (change <= 1e-6) break;
    }
    pt.x = x;
    path.push_back(std::move(pt));
  }
  return path;
}

Polished polish(const Problem& problem, const std::vector<int>& support,
                const SolverOptions& opts, const std::optional<VectorXd>& warm) {
  const Problem reduced = problem.restricted(support);
  const int k = static_cast<int>(support.size());
  Polished out;
  out.x = VectorXd::Zero(problem.m());

  if (k == 0) {
    const Objective objective(reduced);
    const auto J = objective.try_value(VectorXd());
    if (!J) throw Infeasible("polish: empty support leaves the closed loop disconnected");
    out.J = *J;
    out.report.method = to_string(opts.method);
    out.report.status = SolveStatus::Converged;
    out.report.final_J = *J;
    out.report.final_objective = *J;
    return out;
  }

  VectorXd start;
  if (warm) {
    start.resize(k);
    for (int p = 0; p < k; ++p) start(p) = (*warm)(support[p]);
    if (problem.resistive) start = start.cwiseMax(0.0);
    if (!closed_loop(reduced.plant.strengthened, reduced.candidates, start)
             .positive_definite) {
      start.resize(0);
    }
  }
  if (start.size() == 0) {
    start = problem.resistive ? VectorXd::Zero(k) : VectorXd::Ones(k);
    if (!closed_loop(reduced.plant.strengthened, reduced.candidates, start)
             .positive_definite) {
      throw Infeasible("polish: the support cannot connect the closed loop");
    }
  }

  auto [xr, rep] = solve(reduced, start, opts);
  for (int p = 0; p < k; ++p) out.x(support[p]) = xr(p);
  out.J = rep.final_J;
  out.report = std::move(rep);
  return out;
}

namespace {

TradeoffPoint make_point(const Problem& problem, double gamma, const VectorXd& x,
                         const SolveReport& rep, const SweepOptions& opts,
                         const SweepResult& base) {
  const auto start = std::chrono::steady_clock::now();
  TradeoffPoint pt;
  pt.gamma = gamma;
  pt.x = x;
  const auto support = support_of(x, opts.zero_tol);
  pt.cardinality = static_cast<int>(support.size());
  const Objective objective(problem);
  const auto J = objective.try_value(x);
  pt.closed_loop_connected = J.has_value();
  pt.J_sparse = J.value_or(std::numeric_limits<double>::quiet_NaN());
  const Polished pol = polish(problem, support, opts.solver, x);
  pt.x_polished = pol.x;
  pt.J_polished = pol.J;
  pt.rel_performance_loss = (pol.J - base.J_c) / base.J_c;
  pt.rel_cardinality = base.cardinality_c > 0
                           ? static_cast<double>(pt.cardinality) / base.cardinality_c
                           : 0.0;
  pt.iterations = rep.iterations;
  pt.wall_time = rep.wall_time +
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                     .count();
  return pt;
}

}  // namespace

SweepResult sweep(const Problem& problem, const std::vector<double>& gammas,
                  const SweepOptions& opts) {
  if (gammas.empty()) throw InvalidInput("sweep: empty gamma list");
  for (double g : gammas) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw InvalidInput("sweep: invalid gamma");
  }
  SweepResult result;
  {
    const Problem centralized = problem.with_gamma(0.0);
    auto [xc, rep] = solve(centralized, default_start(problem), opts.solver);
    result.x_c = xc;
    result.J_c = rep.final_J;
    result.cardinality_c = static_cast<int>(support_of(xc, opts.zero_tol).size());
  }

  std::vector<double> sorted = gammas;
  std::sort(sorted.begin(), sorted.end());

  if (opts.reweighting) {
    const auto path = reweighted_path(problem, sorted, opts.epsilon, opts.solver,
                                      result.x_c, opts.reweight_passes);
    for (const auto& p : path) {
      result.points.push_back(
          make_point(problem, p.gamma, p.x, p.report, opts, result));
    }
    return result;
  }

  auto solve_at = [&](double g, const VectorXd& x0) {
    return solve(problem.with_gamma(g), x0, opts.solver);
  };

  if (opts.jobs > 1 && !opts.warm_start) {
    result.parallel = true;
    const VectorXd x0 = default_start(problem);
    result.points.resize(sorted.size());
    for (std::size_t begin = 0; begin < sorted.size();
         begin += static_cast<std::size_t>(opts.jobs)) {
      const std::size_t end =
          std::min(sorted.size(), begin + static_cast<std::size_t>(opts.jobs));
      std::vector<std::future<TradeoffPoint>> batch;
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back(std::async(std::launch::async, [&, i] {
          auto [x, rep] = solve_at(sorted[i], x0);
          return make_point(problem, sorted[i], x, rep, opts, result);
        }));
      }
      for (std::size_t i = begin; i < end; ++i) {
        result.points[i] = batch[i - begin].get();
      }
    }
    return result;
  }

  VectorXd x = result.x_c;
  for (double g : sorted) {
    const VectorXd x0 = opts.warm_start ? x : default_start(problem);
    auto [xs, rep] = solve_at(g, x0);
    result.points.push_back(make_point(problem, g, xs, rep, opts, result));
    x = xs;
  }
  return result;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    throw InvalidInput("log grid needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * i / (count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> default_gamma_grid(const Problem& problem, int count) {
  const double gmax = gamma_max(problem);
  return log_grid(1e-3 * gmax, gmax, count);
}

}  // namespace gsp
