#include "gsp/problem.hpp"

#include <cmath>
#include <set>

namespace gsp {

namespace {

bool is_symmetric(const MatrixXd& A, double tol) {
  return (A - A.transpose()).cwiseAbs().maxCoeff() <= tol * (1.0 + A.cwiseAbs().maxCoeff());
}

}  // namespace

VectorXd Problem::penalty() const {
  if (penalty_weights.size() == 0) return VectorXd::Constant(m(), gamma);
  return gamma * penalty_weights;
}

Problem Problem::with_gamma(double g, VectorXd weights) const {
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw InvalidInput("gamma must be finite and non-negative");
  }
  if (weights.size() != 0 && weights.size() != m()) {
    throw InvalidInput("penalty weights must have one entry per candidate");
  }
  if (weights.size() != 0 && !(weights.array() >= 0.0).all()) {
    throw InvalidInput("penalty weights must be non-negative");
  }
  Problem p = *this;
  p.gamma = g;
  p.penalty_weights = std::move(weights);
  return p;
}

Problem Problem::restricted(const std::vector<int>& columns) const {
  Problem p = *this;
  p.candidates = candidates.select(columns);
  p.gamma = 0.0;
  p.penalty_weights.resize(0);
  return p;
}

MatrixXd deviation_weight(int n) {
  return MatrixXd::Identity(n, n) -
         MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

Problem make_problem(const EdgeList& plant, const EdgeList& candidates,
                     const MatrixXd& Q, const MatrixXd& R, double gamma,
                     bool resistive) {
  plant.validate();
  candidates.validate();
  if (plant.n < 2) throw InvalidInput("plant needs at least 2 nodes");
  if (candidates.n != plant.n) {
    throw InvalidInput("candidate edge list node count (" +
                       std::to_string(candidates.n) +
                       ") differs from plant (" + std::to_string(plant.n) + ")");
  }
  const int n = plant.n;
  if (Q.rows() != n || Q.cols() != n || R.rows() != n || R.cols() != n) {
    throw InvalidInput("Q and R must be n x n");
  }
  if (!is_symmetric(Q, 1e-12)) throw InvalidInput("Q is not symmetric");
  if ((Q * VectorXd::Ones(n)).cwiseAbs().maxCoeff() >
      1e-10 * (1.0 + Q.cwiseAbs().maxCoeff())) {
    throw InvalidInput("Q must annihilate the all-ones vector");
  }
  const MatrixXd Qs = strengthened(Q);
  if (!is_positive_definite(Eigen::LLT<MatrixXd>(Qs), Qs)) {
    throw InvalidInput("Q + (1/n) 1 1^T is not positive definite");
  }
  if (!is_symmetric(R, 1e-12)) throw InvalidInput("R is not symmetric");
  if (!is_positive_definite(Eigen::LLT<MatrixXd>(R), R)) {
    throw InvalidInput("R is not positive definite");
  }

  Problem p;
  p.plant = PlantGraph::from_edges(plant);
  p.candidates = incidence_from_edges(candidates);
  p.Q = 0.5 * (Q + Q.transpose());
  p.R = 0.5 * (R + R.transpose());
  const double r0 = R(0, 0);
  if ((R - r0 * MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0) {
    p.r_scalar = r0;
  }
  p.resistive = resistive;
  p = p.with_gamma(gamma);

  if (resistive) {
    if (!p.plant.connected) {
      throw InvalidInput("resistive problems require a connected plant");
    }
    std::set<std::pair<int, int>> plant_edges;
    for (const auto& e : plant.edges) {
      if (e.w != 0.0) plant_edges.emplace(e.i, e.j);
    }
    for (const auto& e : candidates.edges) {
      if (plant_edges.count({e.i, e.j})) {
        throw InvalidInput("resistive problems forbid candidate edge (" +
                           std::to_string(e.i) + ", " + std::to_string(e.j) +
                           ") that is also a plant edge");
      }
    }
  }
  return p;
}

Problem make_problem(const EdgeList& plant, const EdgeList& candidates,
                     double gamma, bool resistive, double q, double r) {
  if (!(q > 0.0) || !(r > 0.0)) {
    throw InvalidInput("weight multipliers q and r must be positive");
  }
  const int n = plant.n;
  return make_problem(plant, candidates, q * deviation_weight(n),
                      r * MatrixXd::Identity(n, n), gamma, resistive);
}

}  // namespace gsp
