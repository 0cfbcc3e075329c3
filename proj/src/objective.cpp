#include "gsp/objective.hpp"

#include <Eigen/Eigenvalues>

namespace gsp {

QpMatrix build_qp(const Problem& problem) {
  const int n = problem.n();
  const MatrixXd& Lp = problem.plant.laplacian;
  QpMatrix out;
  out.Qp = strengthened(problem.Q) + Lp * problem.R * Lp;
  out.Qp = 0.5 * (out.Qp + out.Qp.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(out.Qp);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("build_qp: eigendecomposition of Q_p failed");
  }
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw InvalidInput("build_qp: Q_p is not positive definite");
  }
  out.sqrt = eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() *
             eig.eigenvectors().transpose();
  const double drift =
      (out.Qp * VectorXd::Ones(n) - VectorXd::Ones(n)).cwiseAbs().maxCoeff();
  if (drift > 1e-10 * (1.0 + out.Qp.cwiseAbs().maxCoeff())) {
    throw InvalidInput("build_qp: Q_p does not fix the all-ones vector");
  }
  return out;
}

Objective::Objective(Problem problem)
    : problem_(std::move(problem)), qp_(build_qp(problem_)) {
  c_ = problem_.candidates.quad_diag(problem_.R);
  offset_ = -(problem_.R.cwiseProduct(problem_.plant.laplacian)).sum() - 1.0;
}

ClosedLoop Objective::factor(const VectorXd& x) const {
  return closed_loop(problem_.plant.strengthened, problem_.candidates, x);
}

std::optional<double> Objective::try_value(const VectorXd& x) const {
  const ClosedLoop cl = factor(x);
  if (!cl.positive_definite) return std::nullopt;
  const double trace = cl.llt.solve(qp_.Qp).trace();
  return trace + c_.dot(x) + offset_;
}

double Objective::value(const VectorXd& x) const {
  auto J = try_value(x);
  if (!J) {
    throw Infeasible(
        "closed-loop strengthened Laplacian is not positive definite "
        "(Cholesky factorization failed)");
  }
  return *J;
}

VectorXd Objective::gradient_from_Y(const MatrixXd& Y) const {
  return c_ - problem_.candidates.quad_diag(Y);
}

ObjectiveState Objective::evaluate(const VectorXd& x) const {
  ObjectiveState s;
  s.x = x;
  s.closed = factor(x);
  if (!s.closed.positive_definite) {
    throw Infeasible(
        "closed-loop strengthened Laplacian is not positive definite "
        "(Cholesky factorization failed)");
  }
  const MatrixXd W = s.closed.llt.solve(qp_.Qp);  // G^{-1} Q_p
  s.trace = W.trace();
  s.Y = s.closed.llt.solve(W.transpose());
  s.Y = 0.5 * (s.Y + s.Y.transpose()).eval();
  s.J = s.trace + c_.dot(x) + offset_;
  s.grad = gradient_from_Y(s.Y);
  return s;
}

VectorXd Objective::gradient(const VectorXd& x) const {
  return evaluate(x).grad;
}

MatrixXd Objective::hessian(const VectorXd& x, int cap) const {
  const int m = problem_.m();
  if (m > cap) {
    throw InvalidInput("hessian: m = " + std::to_string(m) +
                       " exceeds the dense cap of " + std::to_string(cap) +
                       "; use hessian_diag / hessian_column");
  }
  const ObjectiveState s = evaluate(x);
  const int n = problem_.n();
  const MatrixXd Ginv = s.closed.llt.solve(MatrixXd::Identity(n, n));
  const IncidenceMatrix& E = problem_.candidates;
  MatrixXd H(m, m);
  for (int l = 0; l < m; ++l) {
    for (int k = l; k < m; ++k) {
      H(k, l) = H(l, k) = kHessianScale * E.quad(s.Y, k, l) * E.quad(Ginv, k, l);
    }
  }
  return H;
}

VectorXd Objective::hessian_diag(const VectorXd& x) const {
  const ObjectiveState s = evaluate(x);
  const int n = problem_.n();
  const MatrixXd Ginv = s.closed.llt.solve(MatrixXd::Identity(n, n));
  const IncidenceMatrix& E = problem_.candidates;
  VectorXd d(problem_.m());
  for (int l = 0; l < problem_.m(); ++l) {
    d(l) = kHessianScale * E.quad(s.Y, l) * E.quad(Ginv, l);
  }
  return d;
}

VectorXd Objective::hessian_column(const VectorXd& x, int l) const {
  const IncidenceMatrix& E = problem_.candidates;
  if (l < 0 || l >= E.m()) throw InvalidInput("hessian_column: bad index");
  const ObjectiveState s = evaluate(x);
  const VectorXd g = s.closed.llt.solve(E.column(l));  // G^{-1} xi_l
  const VectorXd y = s.Y.col(E.head(l)) - s.Y.col(E.tail(l));  // Y xi_l
  VectorXd col(E.m());
  for (int k = 0; k < E.m(); ++k) {
    const int a = E.head(k), b = E.tail(k);
    col(k) = kHessianScale * (y(a) - y(b)) * (g(a) - g(b));
  }
  return col;
}

double eval_J(const Problem& problem, const VectorXd& x) {
  return Objective(problem).value(x);
}

VectorXd grad_J(const Problem& problem, const VectorXd& x) {
  return Objective(problem).gradient(x);
}

MatrixXd hessian(const Problem& problem, const VectorXd& x, int cap) {
  return Objective(problem).hessian(x, cap);
}

VectorXd hessian_diag(const Problem& problem, const VectorXd& x) {
  return Objective(problem).hessian_diag(x);
}

VectorXd hessian_column(const Problem& problem, const VectorXd& x, int l) {
  return Objective(problem).hessian_column(x, l);
}

double lyapunov_h2_oracle(const Problem& problem, const VectorXd& x) {
  const ClosedLoop cl =
      closed_loop(problem.plant.strengthened, problem.candidates, x);
  if (!cl.positive_definite) {
    throw Infeasible("lyapunov_h2_oracle: closed loop is not connected");
  }
  const int n = problem.n();
  const MatrixXd Lx = controller_laplacian(problem.candidates, x);
  const MatrixXd L = problem.plant.laplacian + Lx;

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(L);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("lyapunov_h2_oracle: eigendecomposition failed");
  }
  const MatrixXd& V = eig.eigenvectors();
  const VectorXd& lambda = eig.eigenvalues();
  // The consensus mode is the eigenvector aligned with 1; it is unobservable
  // and carries no variance.
  Eigen::Index consensus = 0;
  (V.transpose() * VectorXd::Ones(n)).cwiseAbs().maxCoeff(&consensus);

  const MatrixXd Pi_t = V.transpose() * deviation_weight(n) * V;
  MatrixXd P_t = MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    if (a == consensus) continue;
    for (int b = 0; b < n; ++b) {
      if (b == consensus) continue;
      P_t(a, b) = Pi_t(a, b) / (lambda(a) + lambda(b));
    }
  }
  const MatrixXd P = V * P_t * V.transpose();
  const MatrixXd W = problem.Q + Lx * problem.R * Lx;
  return P.cwiseProduct(W).sum();
}

}  // namespace gsp
