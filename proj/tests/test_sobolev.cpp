#include <doctest.h>

#include "grushin/quadrature.hpp"
#include "grushin/semigroup.hpp"
#include "grushin/sobolev.hpp"
#include "support.hpp"

using namespace grushin;
using test::plane;

namespace {

Eigen::VectorXd dilated_bump(const Grid& g, double lambda, double cx, double cy, double w) {
  const double ly = lambda * lambda;  // alpha = 1
  return g.sample([&](const Point& p) {
    const double dx = (p[0] - lambda * cx) / (lambda * w), dy = (p[1] - ly * cy) / (ly * w);
    return std::exp(-dx * dx - dy * dy);
  });
}

}  // namespace

TEST_SUITE("sobolev") {

TEST_CASE("HLS exponent") {
  CHECK(hls_exponent(3.0, 1.0, 1.0) == doctest::Approx(1.5));
  CHECK(hls_exponent(3.0, 1.0, 1.2) == doctest::Approx(2.0));
  CHECK_THROWS_AS(hls_exponent(3.0, 3.0, 1.0), ConfigurationError);
  CHECK_THROWS_AS(hls_exponent(3.0, 1.0, 3.0), ConfigurationError);
  CHECK_THROWS_AS(hls_exponent(3.0, 1.0, 0.5), ConfigurationError);
}

TEST_CASE("zero input gives zero ratios") {
  const Grid g(plane(24));
  const SpectralData spec = eigendecompose(assemble(g));
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(g.size());
  CHECK(hls_ratio(spec, z, 1.0, 1.2).ratio == 0.0);
  CHECK(sobolev_ratio(spec, z, 0.5, 1.0).weak_ratio == 0.0);
  CHECK(pointwise_bound_defect(spec, z, 1.0, 1.0, log_grid(1e-3, 10, 4), log_grid(1e-3, 10, 4)).defect == 0.0);
  CHECK(besov_embedding_ratio(spec, z, 0.25, 2.0, 0.75, QuadratureSpec{}) == 0.0);
}

TEST_CASE("ratios are stable under refinement and dilation") {
  const Grid a(plane(32)), b(plane(48));
  const Grid d = a.dilated(1.5);
  const SpectralData sa = eigendecompose(assemble(a)), sb = eigendecompose(assemble(b)), sd = eigendecompose(assemble(d));
  const Eigen::VectorXd ua = test::bump(a, 0.1, 0.2, 0.4), ub = test::bump(b, 0.1, 0.2, 0.4);
  const Eigen::VectorXd ud = dilated_bump(d, 1.5, 0.1, 0.2, 0.4);

  const EmbeddingReport ha = hls_ratio(sa, ua, 1.0, 1.2), hb = hls_ratio(sb, ub, 1.0, 1.2), hd = hls_ratio(sd, ud, 1.0, 1.2);
  CHECK(ha.q == doctest::Approx(2.0));
  CHECK(hb.ratio == doctest::Approx(ha.ratio).epsilon(0.20));
  CHECK(hd.ratio == doctest::Approx(ha.ratio).epsilon(0.05));

  const EmbeddingReport wa = sobolev_ratio(sa, ua, 0.5, 1.0), wb = sobolev_ratio(sb, ub, 0.5, 1.0);
  CHECK(wa.q == doctest::Approx(1.5));
  CHECK(std::isfinite(wa.weak_ratio));
  CHECK(wb.weak_ratio == doctest::Approx(wa.weak_ratio).epsilon(0.20));
  CHECK(wa.weak_ratio <= wa.ratio + 1e-12);

  const EmbeddingReport sa2 = sobolev_ratio(sa, ua, 0.5, 2.0), sd2 = sobolev_ratio(sd, ud, 0.5, 2.0);
  CHECK(sa2.q == doctest::Approx(6.0));
  CHECK(sd2.ratio == doctest::Approx(sa2.ratio).epsilon(0.05));
}

TEST_CASE("HLS of u equals Sobolev of the potential") {
  const Grid g(plane(32));
  const SpectralData spec = eigendecompose(assemble(g));
  const Eigen::VectorXd u = test::bump(g, -0.1, 0.0, 0.5);
  const double s = 0.5;
  CHECK(hls_ratio(spec, u, 2 * s, 2.0).ratio ==
        doctest::Approx(sobolev_ratio(spec, riesz_potential(spec, 2 * s, u), s, 2.0).ratio).epsilon(1e-8));
}

TEST_CASE("pointwise potential bound") {
  const Grid g(plane(32));
  const SpectralData spec = eigendecompose(assemble(g));
  const Eigen::VectorXd u = test::bump(g, 0.2, -0.1, 0.4);
  const auto grid = log_grid(1e-3, 10.0, 8);
  const PointwiseBoundReport r = pointwise_bound_defect(spec, u, 1.0, 1.0, grid, grid);
  CHECK(r.defect <= 1e-3);
  CHECK(r.c_fitted > 0.0);
  CHECK(r.c_alpha == doctest::Approx(1.0));
  // the minimizing epsilon follows (||u||_p / Mu)^(p/Q)
  std::vector<double> x, y;
  const double nu = lp_norm(g, u, 1.0);
  for (Index n = 0; n < g.size(); n += 7) {
    x.push_back(std::pow(nu / r.maximal[n], 1.0 / 3.0));
    y.push_back(r.best_epsilon[n]);
  }
  CHECK(loglog_fit(x, y).slope == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("rearrangement inequality") {
  CHECK(rearrangement_ratio({1.3}, {2.0}, 1.5) == doctest::Approx(1.0 / 1.5));
  CHECK(rearrangement_ratio({0.5, 1.0, 2.0}, {3.0, 1.0, 0.2}, 1.5) <= 1.0 / 1.5 + 1e-12);
  CHECK_THROWS_AS(rearrangement_ratio({1.0, 0.5}, {1.0, 0.5}, 1.5), ConfigurationError);
  CHECK_THROWS_AS(rearrangement_ratio({1.0, 2.0}, {1.0, 2.0}, 1.5), ConfigurationError);
}

TEST_CASE("Besov route to the Sobolev embedding") {
  const Grid g(plane(32));
  const SpectralData spec = eigendecompose(assemble(g));
  const QuadratureSpec q;
  const Eigen::VectorXd u = test::bump(g, 0.0, 0.1, 0.4);
  const double r = besov_embedding_ratio(spec, u, 0.25, 2.0, 0.75, q);
  const double cs = sobolev_ratio(spec, u, 0.25, 2.0).ratio;
  const double cb = ls_boundedness_check(spec, u, 0.25, 2.0, 0.75, q);
  CHECK(r > 0.0);
  CHECK(r <= cs * cb * (1 + 1e-9));
  CHECK_THROWS_AS(besov_embedding_ratio(spec, u, 0.25, 2.0, 0.4, q), ConfigurationError);
}

}
