#include <doctest.h>

#include "grushin/metric.hpp"
#include "grushin/quadrature.hpp"
#include "support.hpp"

using namespace grushin;
using test::plane;
using test::pt;

namespace {

double max_spacing(const Grid& g) {
  double h = 0.0;
  for (int a = 0; a < g.dimension(); ++a) h = std::max(h, g.spacing(a));
  return h;
}

}  // namespace

TEST_SUITE("metric") {

TEST_CASE("alpha=0 eikonal is Euclidean up to O(h)") {
  const Grid g(plane(41, 2.0, 0.0));
  const Index s = g.nearest_node(pt(0.3, -0.4));
  const DistanceField f = cc_distance(g, s);
  CHECK(f.converged);
  CHECK(f.values[s] == 0.0);
  double err = 0.0;
  for (Index n = 0; n < g.size(); ++n) err = std::max(err, std::abs(f.values[n] - (g.point(n) - g.point(s)).norm()));
  CHECK(err <= 2.0 * max_spacing(g));
}

TEST_CASE("moving in x only costs |x - x'|") {
  const Grid g(ball_grid(1, 1, 1.0, 0.0, 1.0, 40));
  const Index s = g.nearest_node(pt(0, 0));
  const DistanceField f = cc_distance(g, s);
  for (double x : {0.25, 0.5, -0.75}) {
    const Index t = g.nearest_node(pt(x, 0));
    CHECK(std::abs(f.values[t] - std::abs(g.point(t)[0])) <= 2.0 * max_spacing(g));
  }
}

TEST_CASE("vertical distance near the degenerate line matches shortest paths") {
  const Grid coarse(ball_grid(1, 1, 1.0, 0.0, 0.5, 20));
  const Grid fine(ball_grid(1, 1, 1.0, 0.0, 0.5, 80));
  const DistanceField f = cc_distance(coarse, coarse.nearest_node(pt(0, 0)));
  const Eigen::VectorXd dg = graph_distance(fine, fine.nearest_node(pt(0, 0)));
  const Index c = coarse.nearest_node(pt(0, 0.08));
  const double b = dg[fine.nearest_node(coarse.point(c))];
  CHECK(std::abs(f.values[c] - b) / b < 0.03);
  // vertical moves are expensive: d ~ sqrt(y) scale, far above |y|
  CHECK(f.values[c] > 2.0 * coarse.point(c)[1]);
}

TEST_CASE("volume model") {
  const VolumeModel vm(plane(8));
  CHECK(vm(0.0, 0.5) == doctest::Approx(0.125));
  CHECK(vm(1.0, 0.5) == doctest::Approx(0.25 * 1.5));
  const VolumeModel e(plane(8, 2.0, 0.0));
  CHECK(e(3.0, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("ball grids keep the center on a node") {
  for (double x0 : {0.0, 0.5, 1.0}) {
    const Grid g(ball_grid(1, 1, 1.0, x0, 0.4, 30));
    CHECK((g.point(g.nearest_node(pt(x0, 0))) - pt(x0, 0)).norm() < 1e-12);
  }
}

TEST_CASE("alpha=0 balls are disks") {
  const Grid g(ball_grid(1, 1, 0.0, 0.0, 0.6, 60));
  const DistanceField f = cc_distance(g, g.nearest_node(pt(0, 0)));
  for (double r : {0.3, 0.5}) {
    const BallVolume b = ball_volume(g, f, r);
    CHECK_FALSE(b.truncated);
    CHECK(b.volume == doctest::Approx(M_PI * r * r).epsilon(0.03));
  }
  CHECK(volume_scaling_fit(g, f, log_grid(0.2, 0.5, 8)).slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("Grushin balls scale with Q at the origin and n away from it") {
  const auto rg = log_grid(0.05, 0.15, 16);
  const Grid g0(ball_grid(1, 1, 1.0, 0.0, 0.3, 160));
  CHECK(volume_scaling_fit(g0, cc_distance(g0, g0.nearest_node(pt(0, 0))), rg).slope ==
        doctest::Approx(3.0).epsilon(0.05));
  const Grid g1(ball_grid(1, 1, 1.0, 1.0, 0.3, 80));
  CHECK(volume_scaling_fit(g1, cc_distance(g1, g1.nearest_node(pt(1, 0))), rg).slope ==
        doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("doubling and the volume band") {
  const Grid g(ball_grid(1, 1, 1.0, 0.5, 0.8, 40));
  const DistanceField f = cc_distance(g, g.nearest_node(pt(0.5, 0)));
  const VolumeModel vm(g.spec());
  for (double r : {0.1, 0.2, 0.4}) {
    const double v = ball_volume(g, f, r).volume;
    CHECK(ball_volume(g, f, 2 * r).volume / v <= 16.0);
    CHECK(ball_volume(g, f, 2 * r).volume / v >= 4.0 * 0.9);  // (R/r)^n lower rate
    CHECK(v / vm(0.5, r) > 0.25);
    CHECK(v / vm(0.5, r) < 4.0);
  }
  CHECK_THROWS_AS(ball_volume(g, f, 0.0), ConfigurationError);
}

}
