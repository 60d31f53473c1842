#include <doctest.h>

#include "grushin/grid.hpp"
#include "support.hpp"

using namespace grushin;
using test::plane;
using test::pt;

TEST_SUITE("grid") {

TEST_CASE("homogeneous dimension") {
  CHECK(hom_dimension(GridSpec::uniform(1, 1, 1.0, 1.0, 8)) == doctest::Approx(3.0));
  CHECK(hom_dimension(GridSpec::uniform(2, 3, 0.0, 1.0, 4)) == doctest::Approx(5.0));
  CHECK(hom_dimension(GridSpec::uniform(1, 2, 0.5, 1.0, 4)) == doctest::Approx(4.0));
}

TEST_CASE("spec validation names the problem") {
  GridSpec s = plane(8);
  s.alpha = -1.0;
  CHECK_THROWS_AS(s.validate(), ConfigurationError);
  s = plane(8);
  s.points[0] = 1;
  CHECK_THROWS_AS(Grid{s}, ConfigurationError);
}

TEST_CASE("node indexing round trip") {
  const Grid g(GridSpec::uniform(1, 1, 1.0, 2.0, 7));
  CHECK(g.size() == 49);
  for (Index n = 0; n < g.size(); ++n) {
    const auto mi = g.multi_index(n);
    CHECK(g.node(mi) == n);
    CHECK(g.nearest_node(g.point(n)) == n);
  }
  const Index c = g.nearest_node(pt(0, 0));
  CHECK(g.point(c).norm() < 1e-12);
}

TEST_CASE("integral of a constant") {
  // interior nodes only: the quadrature covers the cells around the N interior nodes
  const Grid g(plane(64));
  const double h = g.spacing(0);
  CHECK(h == doctest::Approx(4.0 / 65.0));
  CHECK(integrate(g, g.ones()) == doctest::Approx(64.0 * 64.0 * h * h).epsilon(1e-12));
  // the missing boundary layer is one cell wide
  CHECK(std::abs(integrate(g, g.ones()) - 16.0) <= 4.0 * 4.0 * h + 1e-12);
}

TEST_CASE("lp norm of an indicator is the measure") {
  const Grid g(plane(40));
  const SetMask m = rasterize(box_set(pt(0.1, -0.2), pt(0.6, 0.3)), g);
  CHECK(m.count() > 0);
  CHECK(lp_norm(g, m.indicator(), 1.0) == doctest::Approx(m.measure).epsilon(1e-14));
  CHECK(lp_norm(g, m.indicator(), 2.0) == doctest::Approx(std::sqrt(m.measure)).epsilon(1e-14));
  CHECK(lp_norm(g, m.indicator(), std::numeric_limits<double>::infinity()) == 1.0);
}

TEST_CASE("lp norm of a gaussian under refinement") {
  const Grid a(plane(63)), b(plane(255));
  const auto ua = test::bump(a, 0.2, -0.1, 0.5), ub = test::bump(b, 0.2, -0.1, 0.5);
  for (double p : {1.0, 2.0, 3.0})
    CHECK(lp_norm(a, ua, p) == doctest::Approx(lp_norm(b, ub, p)).epsilon(1e-3));
}

TEST_CASE("compensated l1 adds the net mass") {
  const Grid g(plane(32));
  const auto u = test::bump(g, 0.0, 0.0, 0.4);
  CHECK(compensated_l1_norm(g, u) == doctest::Approx(2.0 * lp_norm(g, u, 1.0)).epsilon(1e-13));
  const Eigen::VectorXd v = u - test::bump(g, 0.0, 0.0, 0.4, 1.0).reverse();  // symmetric grid: zero net mass
  CHECK(compensated_l1_norm(g, v) == doctest::Approx(lp_norm(g, v, 1.0)).epsilon(1e-12));
}

TEST_CASE("box measure is close to its volume") {
  const Grid g(plane(64));
  const SetMask m = rasterize(box_set(pt(0, 0), pt(0.5, 0.5)), g);
  const double h = g.spacing(0);
  CHECK(std::abs(m.measure - 1.0) <= 4.0 * h);
}

TEST_CASE("dilated set on the dilated grid scales by lambda^Q") {
  const Grid g(plane(48));
  const Grid d = g.dilated(2.0);
  const SetSpec box = box_set(pt(0, 0), pt(0.5, 0.5));
  const SetMask a = rasterize(box, g);
  const SetMask b = rasterize(dilate_set(2.0, box), d);
  CHECK(a.count() == b.count());
  CHECK(b.measure == doctest::Approx(8.0 * a.measure).epsilon(1e-12));
}

TEST_CASE("unit dilation is the identity") {
  const Grid g(plane(33));
  for (const SetSpec& s : {box_set(pt(0.2, 0), pt(0.4, 0.7)), ball_set(pt(-0.3, 0.1), 0.8)}) {
    const SetMask a = rasterize(s, g), b = rasterize(dilate_set(1.0, s), g);
    CHECK((a.inside == b.inside).all());
  }
}

TEST_CASE("superlevel sets use registered functions") {
  const Grid g(plane(32));
  RasterContext ctx;
  ctx.functions["r2"] = [](const Point& p) { return 1.0 - p.squaredNorm(); };
  const SetMask a = rasterize(superlevel_set("r2", 0.75), g, ctx);
  const SetMask b = rasterize(ball_set(pt(0, 0), 0.5), g);
  CHECK(a.count() == b.count());
  CHECK_THROWS_AS(rasterize(superlevel_set("nope", 0.0), g, ctx), ConfigurationError);
}

TEST_CASE("dilate_point scales x and y anisotropically") {
  const Point q = dilate_point(pt(1.0, 1.0), 1, 1.0, 2.0);
  CHECK(q[0] == doctest::Approx(2.0));
  CHECK(q[1] == doctest::Approx(4.0));
}

}
