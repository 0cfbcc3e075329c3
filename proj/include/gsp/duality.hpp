#pragma once

#include "gsp/objective.hpp"

namespace gsp {

/// Certificates need R = r I; other control weights raise this.
class UnsupportedCertificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Multipliers that came out negative: the supplied matrix is not dual
/// feasible.
class InvalidCertificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Y = G^{-1} Q_p G^{-1} via two Cholesky solves, symmetrized.
MatrixXd primal_to_Y(const Eigen::LLT<MatrixXd>& G, const QpMatrix& qp);
MatrixXd primal_to_Y(const MatrixXd& G, const QpMatrix& qp);

struct ScaledDual {
  MatrixXd Y_hat;
  double beta = 1.0;
};

/// Y_hat = beta Y + ((1 - beta)/n) 1 1^T with the largest admissible
/// beta <= 1. Signed problems bound beta by
///   (gamma w_l + 2r) / (|diag(E^T (Y - R) E)_l| + 2r),
/// resistive problems by
///   (gamma w_l + 2r) / (diag(E^T (Y - R) E)_l + 2r),
/// minimized over l (w = 1 for the plain l1 penalty).
ScaledDual make_dual_feasible(const MatrixXd& Y, const Problem& problem);

/// 2 tr((Q_p^{1/2} Y Q_p^{1/2})^{1/2}) - <Y, G_p>. Negative eigenvalues from
/// round-off are clamped at zero before the square root.
double dual_objective(const MatrixXd& Y, const QpMatrix& qp,
                      const MatrixXd& Gp);

/// diag(E^T (Y - R) E).
VectorXd edge_slack(const MatrixXd& Y, const Problem& problem);

struct SignedMultipliers {
  VectorXd plus;
  VectorXd minus;
};

/// y_pm = gamma w -/+ diag(E^T (Y_hat - R) E); throws InvalidCertificate if
/// any entry is below -1e-12.
SignedMultipliers multipliers_signed(const MatrixXd& Y_hat,
                                     const Problem& problem);
/// y = gamma w - diag(E^T (Y_hat - R) E); same validity rule.
VectorXd multipliers_resistive(const MatrixXd& Y_hat, const Problem& problem);

/// y_+^T x_+ + y_-^T x_- with x_pm = max(+-x, 0).
double duality_gap(const VectorXd& x, const VectorXd& y_plus,
                   const VectorXd& y_minus);
/// y^T x.
double duality_gap(const VectorXd& x, const VectorXd& y);

struct SignedResiduals {
  VectorXd r_p;
  VectorXd r_d_plus;
  VectorXd r_d_minus;
};

/// r_p = x - x_+ + x_-, r_d_pm = gamma w -/+ diag(E^T (Y - R) E) - y_pm with
/// Y the matrix the residual is measured at.
SignedResiduals residuals(const VectorXd& x, const VectorXd& x_plus,
                          const VectorXd& x_minus, const MatrixXd& Y,
                          const VectorXd& y_plus, const VectorXd& y_minus,
                          const Problem& problem);
/// r_d = gamma w - diag(E^T (Y - R) E) - y.
VectorXd residuals(const MatrixXd& Y, const VectorXd& y,
                   const Problem& problem);

/// Optimality certificate for a primal feasible point.
///
/// The dual matrix is Y_hat built from Y(x); multipliers come from Y_hat and
/// the dual residual is measured at Y(x), so both the gap and the residual
/// vanish exactly at a solution. Signed multipliers are projected onto
/// y >= 0 (Y_hat only enforces the upper half of the box constraint), so a
/// violated lower bound surfaces in r_d; `multipliers_valid` records whether
/// the projection was a no-op, i.e. whether Y_hat is exactly dual feasible.
struct DualCertificate {
  bool available = false;
  MatrixXd Y;
  MatrixXd Y_hat;
  double beta = 1.0;
  VectorXd y_plus, y_minus;  // signed
  VectorXd y;                // resistive
  VectorXd r_p;
  VectorXd r_d_plus, r_d_minus;  // signed
  VectorXd r_d;                  // resistive
  double gap = 0.0;
  double rd_norm = 0.0;
  bool multipliers_valid = true;
  /// <G^{-1}, Q_p> + (gamma w + c)^T x_+ + (gamma w - c)^T x_-.
  double primal_value = 0.0;
  double dual_value = 0.0;

  bool meets(double tol_gap, double tol_rd) const {
    return available && gap <= tol_gap && rd_norm <= tol_rd;
  }
};

/// Builds the certificate for `state`; returns `available = false` when R is
/// not a multiple of the identity.
DualCertificate certify(const Objective& objective, const ObjectiveState& state);

}  // namespace gsp
