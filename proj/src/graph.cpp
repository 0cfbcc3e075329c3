#include "gsp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace gsp {

void EdgeList::validate() const {
  if (n < 0) throw InvalidInput("edge list: negative node count");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
      throw InvalidInput("edge list: node index out of range in edge (" +
                         std::to_string(e.i) + ", " + std::to_string(e.j) +
                         ")");
    }
    if (e.i == e.j) {
      throw InvalidInput("edge list: self-loop at node " +
                         std::to_string(e.i));
    }
    if (e.i > e.j) {
      throw InvalidInput("edge list: edge (" + std::to_string(e.i) + ", " +
                         std::to_string(e.j) + ") is not in i < j orientation");
    }
    if (!std::isfinite(e.w)) throw InvalidInput("edge list: non-finite weight");
    if (!seen.emplace(e.i, e.j).second) {
      throw InvalidInput("edge list: duplicate edge (" + std::to_string(e.i) +
                         ", " + std::to_string(e.j) + ")");
    }
  }
}

IncidenceMatrix::IncidenceMatrix(int n, std::vector<std::pair<int, int>> ends)
    : n_(n), ends_(std::move(ends)) {
  for (const auto& [a, b] : ends_) {
    if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) {
      throw InvalidInput("incidence: invalid column endpoints");
    }
  }
}

VectorXd IncidenceMatrix::column(int l) const {
  VectorXd xi = VectorXd::Zero(n_);
  xi(head(l)) = 1.0;
  xi(tail(l)) = -1.0;
  return xi;
}

MatrixXd IncidenceMatrix::dense() const {
  MatrixXd E = MatrixXd::Zero(n_, m());
  for (int l = 0; l < m(); ++l) {
    E(head(l), l) = 1.0;
    E(tail(l), l) = -1.0;
  }
  return E;
}

IncidenceMatrix IncidenceMatrix::select(const std::vector<int>& columns) const {
  std::vector<std::pair<int, int>> ends;
  ends.reserve(columns.size());
  for (int l : columns) {
    if (l < 0 || l >= m()) throw InvalidInput("incidence: column out of range");
    ends.push_back(ends_[l]);
  }
  return IncidenceMatrix(n_, std::move(ends));
}

int IncidenceMatrix::find(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (int l = 0; l < m(); ++l) {
    if (ends_[l].first == a && ends_[l].second == b) return l;
  }
  return -1;
}

PlantGraph PlantGraph::from_edges(const EdgeList& edges) {
  PlantGraph p;
  p.n = edges.n;
  p.laplacian = gsp::laplacian(edges);
  p.strengthened = gsp::strengthened(p.laplacian);
  p.connected = is_positive_definite(Eigen::LLT<MatrixXd>(p.strengthened), p.strengthened);
  return p;
}

bool is_positive_definite(const Eigen::LLT<MatrixXd>& llt, const MatrixXd& A) {
  if (llt.info() != Eigen::Success) return false;
  if (A.rows() == 0) return true;
  const double scale = A.diagonal().cwiseAbs().maxCoeff();
  const auto& L = llt.matrixLLT();
  return L.diagonal().cwiseAbs2().minCoeff() > kPivotRelTol * scale;
}

MatrixXd laplacian(const EdgeList& edges) {
  edges.validate();
  MatrixXd L = MatrixXd::Zero(edges.n, edges.n);
  for (const auto& e : edges.edges) {
    L(e.i, e.i) += e.w;
    L(e.j, e.j) += e.w;
    L(e.i, e.j) -= e.w;
    L(e.j, e.i) -= e.w;
  }
  return L;
}

IncidenceMatrix incidence_from_edges(const EdgeList& edges) {
  edges.validate();
  std::vector<std::pair<int, int>> ends;
  ends.reserve(edges.size());
  for (const auto& e : edges.edges) ends.emplace_back(e.i, e.j);
  return IncidenceMatrix(edges.n, std::move(ends));
}

MatrixXd controller_laplacian(const IncidenceMatrix& E, const VectorXd& x) {
  if (x.size() != E.m()) {
    throw InvalidInput("controller_laplacian: weight vector has length " +
                       std::to_string(x.size()) + ", expected " +
                       std::to_string(E.m()));
  }
  MatrixXd L = MatrixXd::Zero(E.n(), E.n());
  for (int l = 0; l < E.m(); ++l) {
    const int a = E.head(l), b = E.tail(l);
    L(a, a) += x(l);
    L(b, b) += x(l);
    L(a, b) -= x(l);
    L(b, a) -= x(l);
  }
  return L;
}

MatrixXd strengthened(const MatrixXd& L) {
  const auto n = L.rows();
  return L + MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

ClosedLoop closed_loop(const MatrixXd& Gp, const IncidenceMatrix& E,
                       const VectorXd& x) {
  if (Gp.rows() != E.n() || Gp.cols() != E.n()) {
    throw InvalidInput("closed_loop: G_p size does not match incidence");
  }
  ClosedLoop out;
  out.G = Gp + controller_laplacian(E, x);
  out.llt.compute(out.G);
  out.positive_definite = is_positive_definite(out.llt, out.G);
  return out;
}

EdgeList complement_candidates(const EdgeList& plant) {
  plant.validate();
  std::set<std::pair<int, int>> present;
  for (const auto& e : plant.edges) present.emplace(e.i, e.j);
  EdgeList out;
  out.n = plant.n;
  for (int i = 0; i < plant.n; ++i) {
    for (int j = i + 1; j < plant.n; ++j) {
      if (!present.count({i, j})) out.edges.push_back({i, j, 1.0});
    }
  }
  return out;
}

int count_components(const EdgeList& edges) {
  std::vector<int> parent(edges.n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int components = edges.n;
  for (const auto& e : edges.edges) {
    const int a = root(e.i), b = root(e.j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

GraphKind parse_graph_kind(const std::string& name) {
  if (name == "erdos_renyi" || name == "er") return GraphKind::ErdosRenyi;
  if (name == "path") return GraphKind::Path;
  if (name == "ring") return GraphKind::Ring;
  if (name == "geometric" || name == "random_geometric") {
    return GraphKind::RandomGeometric;
  }
  throw InvalidInput("unknown graph kind '" + name + "'");
}

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::ErdosRenyi: return "erdos_renyi";
    case GraphKind::Path: return "path";
    case GraphKind::Ring: return "ring";
    case GraphKind::RandomGeometric: return "geometric";
  }
  return "unknown";
}

double uniform53(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double default_er_probability(int n) {
  return 1.05 * std::log(static_cast<double>(n)) / static_cast<double>(n);
}

EdgeList generate(GraphKind kind, int n, double param, std::uint64_t seed,
                  double side) {
  if (n < 2) throw InvalidInput("generate: need at least 2 nodes");
  EdgeList out;
  out.n = n;
  switch (kind) {
    case GraphKind::Path:
      for (int i = 0; i + 1 < n; ++i) out.edges.push_back({i, i + 1, 1.0});
      break;
    case GraphKind::Ring:
      for (int i = 0; i + 1 < n; ++i) out.edges.push_back({i, i + 1, 1.0});
      if (n > 2) out.edges.push_back({0, n - 1, 1.0});
      break;
    case GraphKind::ErdosRenyi: {
      if (!(param >= 0.0 && param <= 1.0)) {
        throw InvalidInput("generate: edge probability must lie in [0, 1]");
      }
      std::mt19937_64 rng(seed);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (uniform53(rng()) < param) out.edges.push_back({i, j, 1.0});
        }
      }
      break;
    }
    case GraphKind::RandomGeometric: {
      if (!(param > 0.0) || !(side > 0.0)) {
        throw InvalidInput("generate: radius and side must be positive");
      }
      std::mt19937_64 rng(seed);
      std::vector<double> px(n), py(n);
      for (int v = 0; v < n; ++v) {
        px[v] = side * uniform53(rng());
        py[v] = side * uniform53(rng());
      }
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const double dx = px[i] - px[j], dy = py[i] - py[j];
          if (dx * dx + dy * dy <= param * param) {
            out.edges.push_back({i, j, 1.0});
          }
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace gsp
