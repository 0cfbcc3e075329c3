#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "gsp/errors.hpp"

namespace gsp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Edge {
  int i = 0;
  int j = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected edge list with 0-based node indices. Canonical edges have
/// i < j; `validate` enforces that along with the absence of duplicates.
struct EdgeList {
  int n = 0;
  std::vector<Edge> edges;

  std::size_t size() const { return edges.size(); }
  void validate() const;

  friend bool operator==(const EdgeList&, const EdgeList&) = default;
};

/// Incidence structure of a set of candidate edges. Column l carries +1 at
/// `head(l)` and -1 at `tail(l)`; only the index pairs are stored.
class IncidenceMatrix {
 public:
  IncidenceMatrix() = default;
  IncidenceMatrix(int n, std::vector<std::pair<int, int>> ends);

  int n() const { return n_; }
  int m() const { return static_cast<int>(ends_.size()); }
  int head(int l) const { return ends_[l].first; }
  int tail(int l) const { return ends_[l].second; }
  const std::vector<std::pair<int, int>>& ends() const { return ends_; }

  /// Dense column xi_l. Intended for tests and small reference computations.
  VectorXd column(int l) const;
  /// Dense n x m form. Intended for tests only.
  MatrixXd dense() const;

  /// Sub-incidence restricted to the given column indices, in the given order.
  IncidenceMatrix select(const std::vector<int>& columns) const;
  /// Index of the column joining {a, b}, or -1.
  int find(int a, int b) const;

  /// xi_k^T A xi_l for symmetric A; four entries of A.
  template <typename Derived>
  double quad(const Eigen::MatrixBase<Derived>& A, int k, int l) const {
    const int a = head(k), b = tail(k), c = head(l), d = tail(l);
    return A(a, c) - A(a, d) - A(b, c) + A(b, d);
  }
  /// xi_l^T A xi_l for symmetric A.
  template <typename Derived>
  double quad(const Eigen::MatrixBase<Derived>& A, int l) const {
    const int a = head(l), b = tail(l);
    return A(a, a) + A(b, b) - 2.0 * A(a, b);
  }
  /// diag(E^T A E) for symmetric A, O(m).
  template <typename Derived>
  VectorXd quad_diag(const Eigen::MatrixBase<Derived>& A) const {
    VectorXd out(m());
    for (int l = 0; l < m(); ++l) out(l) = quad(A, l);
    return out;
  }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> ends_;
};

/// Open-loop network: its Laplacian and the strengthened Laplacian
/// G_p = L_p + (1/n) 1 1^T.
struct PlantGraph {
  int n = 0;
  MatrixXd laplacian;
  MatrixXd strengthened;
  bool connected = false;

  static PlantGraph from_edges(const EdgeList& edges);
};

/// Closed-loop strengthened Laplacian G = G_p + E diag(x) E^T together with
/// the outcome of its Cholesky factorization.
struct ClosedLoop {
  MatrixXd G;
  bool positive_definite = false;
  Eigen::LLT<MatrixXd> llt;
};

/// Smallest accepted squared Cholesky pivot relative to the largest diagonal
/// entry. Singular positive semidefinite matrices often factor with pivots at
/// round-off level; those are treated as not positive definite.
inline constexpr double kPivotRelTol = 1e-12;

/// Cholesky succeeded and every pivot clears kPivotRelTol.
bool is_positive_definite(const Eigen::LLT<MatrixXd>& llt, const MatrixXd& A);

MatrixXd laplacian(const EdgeList& edges);
IncidenceMatrix incidence_from_edges(const EdgeList& edges);
MatrixXd controller_laplacian(const IncidenceMatrix& E, const VectorXd& x);
MatrixXd strengthened(const MatrixXd& L);
ClosedLoop closed_loop(const MatrixXd& Gp, const IncidenceMatrix& E,
                       const VectorXd& x);

/// All node pairs i < j absent from `plant`, in lexicographic order.
EdgeList complement_candidates(const EdgeList& plant);

/// Number of connected components (isolated nodes count as components).
int count_components(const EdgeList& edges);

enum class GraphKind { ErdosRenyi, Path, Ring, RandomGeometric };

GraphKind parse_graph_kind(const std::string& name);
std::string to_string(GraphKind kind);

/// Identifier of the random stream used by `generate`; recorded in reports.
inline constexpr const char* kPrngId = "mt19937_64+u53";

/// Benchmark graphs. For ErdosRenyi `param` is the edge probability; every
/// pair (i, j) in lexicographic order consumes one uniform variate. For
/// RandomGeometric `param` is the connection radius and nodes are placed
/// uniformly in a `side` x `side` square (x then y per node).
EdgeList generate(GraphKind kind, int n, double param, std::uint64_t seed,
                  double side = 10.0);

/// Default Erdos-Renyi probability 1.05 log(n) / n.
double default_er_probability(int n);

/// Uniform double in [0, 1) built from the top 53 bits of one 64-bit draw.
double uniform53(std::uint64_t bits);

}  // namespace gsp
