#include "gsp/duality.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace gsp {

namespace {

constexpr double kMultiplierFloor = -1e-12;

double require_scalar_r(const Problem& problem) {
  if (!problem.r_scalar) {
    throw UnsupportedCertificate(
        "dual certificates require a control weight of the form R = r I");
  }
  return *problem.r_scalar;
}

}  // namespace

MatrixXd primal_to_Y(const Eigen::LLT<MatrixXd>& G, const QpMatrix& qp) {
  const MatrixXd W = G.solve(qp.Qp);
  MatrixXd Y = G.solve(W.transpose());
  return 0.5 * (Y + Y.transpose());
}

MatrixXd primal_to_Y(const MatrixXd& G, const QpMatrix& qp) {
  Eigen::LLT<MatrixXd> llt(G);
  if (!is_positive_definite(llt, G)) {
    throw Infeasible("primal_to_Y: G is not positive definite");
  }
  return primal_to_Y(llt, qp);
}

VectorXd edge_slack(const MatrixXd& Y, const Problem& problem) {
  return problem.candidates.quad_diag(Y - problem.R);
}

ScaledDual make_dual_feasible(const MatrixXd& Y, const Problem& problem) {
  const double r = require_scalar_r(problem);
  const VectorXd d = edge_slack(Y, problem);
  const VectorXd bound = problem.penalty();
  double beta = 1.0;
  for (int l = 0; l < d.size(); ++l) {
    const double denom = (problem.resistive ? d(l) : std::abs(d(l))) + 2.0 * r;
    if (denom > 0.0) beta = std::min(beta, (bound(l) + 2.0 * r) / denom);
  }
  const int n = problem.n();
  ScaledDual out;
  out.beta = beta;
  out.Y_hat = beta * Y +
              MatrixXd::Constant(n, n, (1.0 - beta) / static_cast<double>(n));
  return out;
}

double dual_objective(const MatrixXd& Y, const QpMatrix& qp,
                      const MatrixXd& Gp) {
  const MatrixXd M = qp.sqrt * Y * qp.sqrt;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (M + M.transpose()),
                                              Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("dual_objective: eigendecomposition failed");
  }
  const double root_trace = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return 2.0 * root_trace - Y.cwiseProduct(Gp).sum();
}

SignedMultipliers multipliers_signed(const MatrixXd& Y_hat,
                                     const Problem& problem) {
  const VectorXd d = edge_slack(Y_hat, problem);
  const VectorXd g = problem.penalty();
  SignedMultipliers y{g - d, g + d};
  if (y.plus.size() > 0 &&
      std::min(y.plus.minCoeff(), y.minus.minCoeff()) < kMultiplierFloor) {
    throw InvalidCertificate("negative multiplier: Y_hat is not dual feasible");
  }
  return y;
}

VectorXd multipliers_resistive(const MatrixXd& Y_hat, const Problem& problem) {
  VectorXd y = problem.penalty() - edge_slack(Y_hat, problem);
  if (y.size() > 0 && y.minCoeff() < kMultiplierFloor) {
    throw InvalidCertificate("negative multiplier: Y_hat is not dual feasible");
  }
  return y;
}

double duality_gap(const VectorXd& x, const VectorXd& y_plus,
                   const VectorXd& y_minus) {
  return y_plus.dot(x.cwiseMax(0.0)) + y_minus.dot((-x).cwiseMax(0.0));
}

double duality_gap(const VectorXd& x, const VectorXd& y) { return y.dot(x); }

SignedResiduals residuals(const VectorXd& x, const VectorXd& x_plus,
                          const VectorXd& x_minus, const MatrixXd& Y,
                          const VectorXd& y_plus, const VectorXd& y_minus,
                          const Problem& problem) {
  const VectorXd d = edge_slack(Y, problem);
  const VectorXd g = problem.penalty();
  return {x - x_plus + x_minus, g - d - y_plus, g + d - y_minus};
}

VectorXd residuals(const MatrixXd& Y, const VectorXd& y,
                   const Problem& problem) {
  return problem.penalty() - edge_slack(Y, problem) - y;
}

DualCertificate certify(const Objective& objective,
                        const ObjectiveState& state) {
  const Problem& problem = objective.problem();
  DualCertificate cert;
  cert.Y = state.Y;
  if (!problem.r_scalar) return cert;
  cert.available = true;

  const VectorXd& x = state.x;
  const VectorXd g = problem.penalty();
  const VectorXd& c = objective.edge_cost();
  const VectorXd x_plus = x.cwiseMax(0.0);
  const VectorXd x_minus = (-x).cwiseMax(0.0);
  cert.primal_value = state.trace + (g + c).dot(x_plus) + (g - c).dot(x_minus);

  const ScaledDual scaled = make_dual_feasible(state.Y, problem);
  cert.Y_hat = scaled.Y_hat;
  cert.beta = scaled.beta;
  cert.dual_value =
      dual_objective(cert.Y_hat, objective.qp(), problem.plant.strengthened);

  const VectorXd d_hat = edge_slack(cert.Y_hat, problem);
  if (problem.resistive) {
    cert.y = g - d_hat;
    cert.multipliers_valid = cert.y.size() == 0 || cert.y.minCoeff() >= kMultiplierFloor;
    cert.gap = duality_gap(x, cert.y);
    cert.r_d = residuals(state.Y, cert.y, problem);
    cert.rd_norm = cert.r_d.size() ? cert.r_d.lpNorm<Eigen::Infinity>() : 0.0;
  } else {
    const VectorXd raw_plus = g - d_hat;
    const VectorXd raw_minus = g + d_hat;
    cert.multipliers_valid =
        raw_plus.size() == 0 ||
        std::min(raw_plus.minCoeff(), raw_minus.minCoeff()) >= kMultiplierFloor;
    cert.y_plus = raw_plus.cwiseMax(0.0);
    cert.y_minus = raw_minus.cwiseMax(0.0);
    cert.gap = duality_gap(x, cert.y_plus, cert.y_minus);
    const SignedResiduals res = residuals(x, x_plus, x_minus, state.Y,
                                          cert.y_plus, cert.y_minus, problem);
    cert.r_p = res.r_p;
    cert.r_d_plus = res.r_d_plus;
    cert.r_d_minus = res.r_d_minus;
    cert.rd_norm = res.r_d_plus.size()
                       ? std::max(res.r_d_plus.lpNorm<Eigen::Infinity>(),
                                  res.r_d_minus.lpNorm<Eigen::Infinity>())
                       : 0.0;
  }
  return cert;
}

}  // namespace gsp
