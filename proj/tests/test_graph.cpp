#include <sstream>

#include "doctest.h"
#include "gsp/edge_io.hpp"
#include "instances.hpp"

namespace gsp {
namespace {

TEST_CASE("laplacian of a path") {
  const EdgeList path = generate(GraphKind::Path, 3, 0.0, 0);
  MatrixXd expected(3, 3);
  expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK((laplacian(path) - expected).norm() == 0.0);
  const PlantGraph p = PlantGraph::from_edges(path);
  CHECK(p.connected);
  CHECK((p.strengthened - expected - MatrixXd::Constant(3, 3, 1.0 / 3)).norm() < 1e-15);
}

TEST_CASE("weighted edges scale the laplacian") {
  const EdgeList e{2, {{0, 1, 2.5}}};
  CHECK(laplacian(e)(0, 1) == -2.5);
  CHECK(laplacian(e)(1, 1) == 2.5);
}

TEST_CASE("validation rejects malformed lists") {
  CHECK_THROWS_AS((EdgeList{3, {{0, 0, 1.0}}}.validate()), InvalidInput);
  CHECK_THROWS_AS((EdgeList{3, {{0, 3, 1.0}}}.validate()), InvalidInput);
  CHECK_THROWS_AS((EdgeList{3, {{0, 1, 1.0}, {0, 1, 2.0}}}.validate()), InvalidInput);
  CHECK_THROWS_AS((EdgeList{3, {{1, 0, 1.0}}}.validate()), InvalidInput);
}

TEST_CASE("disconnected plant") {
  const PlantGraph p = PlantGraph::from_edges(EdgeList{4, {{0, 1, 1.0}}});
  CHECK_FALSE(p.connected);
  CHECK(count_components(EdgeList{4, {{0, 1, 1.0}}}) == 3);
}

TEST_CASE("incidence quadratic forms match dense products") {
  const EdgeList plant = generate(GraphKind::Ring, 6, 0.0, 0);
  const IncidenceMatrix E = incidence_from_edges(complement_candidates(plant));
  CHECK(E.m() == 15 - 6);
  MatrixXd A = MatrixXd::Random(6, 6);
  A = (A + A.transpose()).eval();
  const MatrixXd D = E.dense();
  const MatrixXd full = D.transpose() * A * D;
  for (int k = 0; k < E.m(); ++k) {
    CHECK(E.quad(A, k) == doctest::Approx(full(k, k)).epsilon(1e-12));
    for (int l = 0; l < E.m(); ++l) {
      CHECK(E.quad(A, k, l) == doctest::Approx(full(k, l)).epsilon(1e-12));
    }
  }
  CHECK((E.quad_diag(A) - full.diagonal()).norm() < 1e-12);
  VectorXd x = VectorXd::LinSpaced(E.m(), 0.1, 1.0);
  CHECK((controller_laplacian(E, x) - D * x.asDiagonal() * D.transpose()).norm() < 1e-12);
  CHECK(E.find(0, 2) >= 0);
  CHECK(E.find(2, 0) == E.find(0, 2));
  CHECK(E.find(0, 1) == -1);
}

TEST_CASE("closed loop connects through controller edges") {
  const Problem p = test::two_node();
  CHECK(closed_loop(p.plant.strengthened, p.candidates, VectorXd::Ones(1)).positive_definite);
  CHECK_FALSE(
      closed_loop(p.plant.strengthened, p.candidates, VectorXd::Zero(1)).positive_definite);
}

TEST_CASE("complement candidates are lexicographic") {
  const EdgeList c = complement_candidates(EdgeList{4, {{0, 1, 1.0}, {2, 3, 1.0}}});
  REQUIRE(c.size() == 4);
  CHECK(c.edges[0] == Edge{0, 2, 1.0});
  CHECK(c.edges[3] == Edge{1, 3, 1.0});
}

TEST_CASE("generators are deterministic in the seed") {
  const EdgeList a = generate(GraphKind::ErdosRenyi, 40, 0.1, 7);
  const EdgeList b = generate(GraphKind::ErdosRenyi, 40, 0.1, 7);
  const EdgeList c = generate(GraphKind::ErdosRenyi, 40, 0.1, 8);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(generate(GraphKind::ErdosRenyi, 10, 1.0, 1).size() == 45);
  CHECK(generate(GraphKind::ErdosRenyi, 10, 0.0, 1).size() == 0);
  CHECK(generate(GraphKind::Ring, 10, 0.0, 0).size() == 10);
  const EdgeList g = generate(GraphKind::RandomGeometric, 30, 2.0, 3);
  CHECK(g == generate(GraphKind::RandomGeometric, 30, 2.0, 3));
  CHECK(default_er_probability(300) == doctest::Approx(1.05 * std::log(300.0) / 300.0));
  CHECK_THROWS_AS(parse_graph_kind("star"), InvalidInput);
}

TEST_CASE("uniform53 spans [0, 1)") {
  CHECK(uniform53(0) == 0.0);
  CHECK(uniform53(~0ull) < 1.0);
  CHECK(uniform53(~0ull) > 1.0 - 1e-15);
}

TEST_CASE("edge file round trip") {
  const EdgeList path = generate(GraphKind::Path, 10, 0.0, 0);
  std::stringstream ss;
  write_edge_list(ss, path);
  int lines = 0;
  for (std::string line; std::getline(ss, line);) ++lines;
  CHECK(lines == 9);
  ss.clear();
  ss.seekg(0);
  CHECK(read_edge_list(ss) == path);

  const EdgeList er = generate(GraphKind::ErdosRenyi, 25, 0.2, 11);
  std::stringstream s2;
  write_edge_list(s2, er);
  CHECK(read_edge_list(s2) == er);

  EdgeList iso{6, {{0, 1, 0.5}, {1, 2, 1.0}}};
  std::stringstream s3;
  write_edge_list(s3, iso);
  CHECK(read_edge_list(s3) == iso);
}

TEST_CASE("edge reader canonicalizes and rejects garbage") {
  std::stringstream ok("# comment\n2 0\n1 2 0.5\n");
  const EdgeList e = read_edge_list(ok);
  CHECK(e.n == 3);
  CHECK(e.edges[0] == Edge{0, 2, 1.0});
  std::stringstream bad("0 x\n");
  CHECK_THROWS_AS(read_edge_list(bad), InvalidInput);
  CHECK_THROWS_AS(read_edge_list_file("/nonexistent/plant.edges"), IoError);
}

}  // namespace
}  // namespace gsp
