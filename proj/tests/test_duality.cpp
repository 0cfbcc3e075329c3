#include "doctest.h"
#include "gsp/duality.hpp"
#include "instances.hpp"

namespace gsp {
namespace {

TEST_CASE("Y from two solves matches the dense product") {
  const Problem p = test::er(8, 2, false);
  const Objective obj(p);
  const VectorXd x = test::feasible_point(p, 3);
  const ClosedLoop cl = closed_loop(p.plant.strengthened, p.candidates, x);
  const MatrixXd Ginv = cl.G.inverse();
  const MatrixXd dense = Ginv * obj.qp().Qp * Ginv;
  CHECK((primal_to_Y(cl.llt, obj.qp()) - dense).norm() < 1e-12 * dense.norm());
  CHECK((primal_to_Y(cl.G, obj.qp()) - dense).norm() < 1e-12 * dense.norm());
}

TEST_CASE("qp square root") {
  const Problem p = test::er(8, 2, false);
  const QpMatrix qp = build_qp(p);
  CHECK((qp.sqrt * qp.sqrt - qp.Qp).norm() < 1e-12 * qp.Qp.norm());
}

TEST_CASE("scaling of a two-node dual point") {
  const Problem p = test::two_node(0.0);
  const Objective obj(p);
  const ObjectiveState s = obj.evaluate(VectorXd::Constant(1, 1.0));
  CHECK(edge_slack(s.Y, p)(0) == doctest::Approx(-1.5).epsilon(1e-13));
  const ScaledDual d = make_dual_feasible(s.Y, p);
  CHECK(d.beta == doctest::Approx(4.0 / 7.0).epsilon(1e-13));
  // Scaling enforces the upper side of the box constraint only.
  CHECK(edge_slack(d.Y_hat, p)(0) == doctest::Approx(4.0 / 7.0 * 0.5 - 2.0).epsilon(1e-13));

  // At the optimum the gradient vanishes and no scaling is needed.
  const ObjectiveState opt = obj.evaluate(VectorXd::Constant(1, 0.5));
  CHECK(make_dual_feasible(opt.Y, p).beta == 1.0);
}

TEST_CASE("resistive scaling only bounds positive slack") {
  const Problem p = test::p3(0.0);
  const Objective obj(p);
  // At x = 0 the slack is positive (the edge is attractive).
  const ObjectiveState s = obj.evaluate(VectorXd::Zero(1));
  const double d = edge_slack(s.Y, p)(0);
  CHECK(d > 0.0);
  CHECK(make_dual_feasible(s.Y, p).beta == doctest::Approx(2.0 / (d + 2.0)).epsilon(1e-13));
  // Far above the optimum the slack is negative and beta stays at one.
  const ObjectiveState far = obj.evaluate(VectorXd::Constant(1, 2.0));
  CHECK(edge_slack(far.Y, p)(0) < 0.0);
  CHECK(make_dual_feasible(far.Y, p).beta == 1.0);
}

TEST_CASE("strong duality at the two-node optimum") {
  const Problem p = test::two_node(0.0);
  const Objective obj(p);
  const ObjectiveState s = obj.evaluate(VectorXd::Constant(1, 0.5));
  const DualCertificate c = certify(obj, s);
  REQUIRE(c.available);
  CHECK(c.primal_value == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(c.dual_value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(c.gap == doctest::Approx(0.0));
  CHECK(c.rd_norm < 1e-12);
  CHECK(c.multipliers_valid);
  CHECK(c.meets(1e-10, 1e-10));
}

TEST_CASE("weak duality on random points") {
  for (bool resistive : {false, true}) {
    const Problem p = test::er(10, 4, resistive, 0.3);
    const Objective obj(p);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const VectorXd x = test::feasible_point(p, seed, 0.0, 0.8);
      const DualCertificate c = certify(obj, obj.evaluate(x));
      REQUIRE(c.available);
      CHECK(c.beta <= 1.0);
      CHECK(c.beta > 0.0);
      for (std::uint64_t other = 5; other <= 7; ++other) {
        const VectorXd z = test::feasible_point(p, other, 0.0, 0.8);
        const DualCertificate cz = certify(obj, obj.evaluate(z));
        CHECK(c.dual_value <= cz.primal_value + 1e-10);
      }
      CHECK(c.gap >= 0.0);
    }
  }
}

TEST_CASE("multipliers and gaps") {
  const Problem p = test::p3(1.0);
  const Objective obj(p);
  const ObjectiveState s = obj.evaluate(VectorXd::Constant(1, 0.3));
  const ScaledDual d = make_dual_feasible(s.Y, p);
  const VectorXd y = multipliers_resistive(d.Y_hat, p);
  CHECK(y(0) >= 0.0);
  CHECK(duality_gap(VectorXd::Constant(1, 0.3), y) == doctest::Approx(0.3 * y(0)));
  CHECK((residuals(d.Y_hat, y, p)).norm() < 1e-14);

  VectorXd x(2);
  x << 1.0, -2.0;
  VectorXd yp(2), ym(2);
  yp << 0.5, 7.0;
  ym << 9.0, 0.25;
  CHECK(duality_gap(x, yp, ym) == doctest::Approx(1.0));

  // Far below the optimum of the two-node problem the unscaled slack is
  // negative enough to make y_- negative.
  const Problem q = test::two_node(0.0);
  const ObjectiveState lo = Objective(q).evaluate(VectorXd::Constant(1, 0.05));
  CHECK_THROWS_AS(multipliers_signed(lo.Y, q), InvalidCertificate);
  CHECK_NOTHROW(multipliers_signed(make_dual_feasible(lo.Y, q).Y_hat, q));
}

TEST_CASE("certificate needs a scalar control weight") {
  const EdgeList plant = generate(GraphKind::Path, 4, 0.0, 0);
  MatrixXd R = MatrixXd::Identity(4, 4);
  R(1, 1) = 2.0;
  const Problem p =
      make_problem(plant, complement_candidates(plant), deviation_weight(4), R, 0.1, false);
  const Objective obj(p);
  CHECK_FALSE(certify(obj, obj.evaluate(test::feasible_point(p, 1))).available);
  CHECK_THROWS_AS(make_dual_feasible(MatrixXd::Identity(4, 4), p), UnsupportedCertificate);
}

}  // namespace
}  // namespace gsp
