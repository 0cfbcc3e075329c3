#pragma once

#include <optional>

#include "gsp/problem.hpp"

namespace gsp {

/// Q_p = Q + (1/n) 1 1^T + L_p R L_p and its symmetric square root.
struct QpMatrix {
  MatrixXd Qp;
  MatrixXd sqrt;
};

QpMatrix build_qp(const Problem& problem);

/// Scale between the Hessian of J and the Hadamard product
/// (E^T Y E) o (E^T G^{-1} E). Fixed by finite differences on the two-node
/// instance, where d^2J/dx^2 = 1/x^3 and the product equals 1/(2 x^3).
inline constexpr double kHessianScale = 2.0;

/// Everything the solvers reuse at one point x.
struct ObjectiveState {
  VectorXd x;
  ClosedLoop closed;
  MatrixXd Y;      // G^{-1} Q_p G^{-1}
  double trace = 0.0;  // <G^{-1}, Q_p>
  double J = 0.0;
  VectorXd grad;
};

/// H2 objective J(x) = <G^{-1}, Q_p> + c^T x - <R, L_p> - 1 with
/// c = diag(E^T R E). Holds the x-independent data of one problem.
class Objective {
 public:
  explicit Objective(Problem problem);

  const Problem& problem() const { return problem_; }
  const QpMatrix& qp() const { return qp_; }
  /// c = diag(E^T R E).
  const VectorXd& edge_cost() const { return c_; }
  /// -<R, L_p> - 1.
  double offset() const { return offset_; }

  /// J(x), or nothing when the closed loop is not positive definite.
  std::optional<double> try_value(const VectorXd& x) const;
  /// J(x); throws Infeasible when G is not positive definite.
  double value(const VectorXd& x) const;
  /// J, Y, gradient and the factorization at x; throws Infeasible.
  ObjectiveState evaluate(const VectorXd& x) const;
  VectorXd gradient(const VectorXd& x) const;

  /// Dense m x m Hessian; refuses when m exceeds `cap`.
  MatrixXd hessian(const VectorXd& x, int cap = 2000) const;
  VectorXd hessian_diag(const VectorXd& x) const;
  VectorXd hessian_column(const VectorXd& x, int l) const;

  /// Gradient from an already factorized state: -(diag(E^T Y E) - c).
  VectorXd gradient_from_Y(const MatrixXd& Y) const;

 private:
  ClosedLoop factor(const VectorXd& x) const;

  Problem problem_;
  QpMatrix qp_;
  VectorXd c_;
  double offset_ = 0.0;
};

double eval_J(const Problem& problem, const VectorXd& x);
VectorXd grad_J(const Problem& problem, const VectorXd& x);
MatrixXd hessian(const Problem& problem, const VectorXd& x, int cap = 2000);
VectorXd hessian_diag(const Problem& problem, const VectorXd& x);
VectorXd hessian_column(const Problem& problem, const VectorXd& x, int l);

/// Steady-state variance <P, Q + L_x R L_x> where P solves
/// L P + P L = I - (1/n) 1 1^T on the complement of the consensus direction,
/// with L = L_p + L_x. Independent of the G^{-1} route; equals J(x)/2.
double lyapunov_h2_oracle(const Problem& problem, const VectorXd& x);

}  // namespace gsp
