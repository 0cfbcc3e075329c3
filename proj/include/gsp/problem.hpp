#pragma once

#include <optional>

#include "gsp/graph.hpp"

namespace gsp {

/// Immutable problem data: plant, candidate edges, performance weights and
/// the sparsity penalty. The control weight R acts on node space (n x n);
/// `r_scalar` is set when R = r I, which is what dual certificates need.
struct Problem {
  PlantGraph plant;
  IncidenceMatrix candidates;
  MatrixXd Q;
  MatrixXd R;
  std::optional<double> r_scalar;
  double gamma = 0.0;
  bool resistive = false;
  /// Per-edge penalty weights w (gamma * w replaces gamma * 1). Empty means
  /// all ones.
  VectorXd penalty_weights;

  int n() const { return plant.n; }
  int m() const { return candidates.m(); }
  /// gamma * w as an explicit vector.
  VectorXd penalty() const;

  /// Same data with a different regularization parameter and weights.
  Problem with_gamma(double gamma, VectorXd weights = {}) const;
  /// Same data restricted to a subset of candidate columns, gamma = 0.
  Problem restricted(const std::vector<int>& columns) const;
};

/// Q = I - (1/n) 1 1^T.
MatrixXd deviation_weight(int n);

/// Validates and assembles a problem. Throws InvalidInput on any violated
/// invariant (Q symmetric with Q 1 = 0 and Q + (1/n) 1 1^T > 0, R symmetric
/// positive definite, and for resistive problems a connected plant with no
/// candidate edge coinciding with a plant edge).
Problem make_problem(const EdgeList& plant, const EdgeList& candidates,
                     const MatrixXd& Q, const MatrixXd& R, double gamma,
                     bool resistive);

/// Convenience form with Q = q (I - (1/n) 1 1^T) and R = r I.
Problem make_problem(const EdgeList& plant, const EdgeList& candidates,
                     double gamma, bool resistive, double q = 1.0,
                     double r = 1.0);

}  // namespace gsp
