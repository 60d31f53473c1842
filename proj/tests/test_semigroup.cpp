#include <doctest.h>

#include "grushin/besov.hpp"
#include "grushin/operator.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/semigroup.hpp"
#include "support.hpp"

#include <random>

using namespace grushin;
using test::plane;

namespace {

Eigen::VectorXd random_field(Index n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v[i] = d(gen);
  return v;
}

Eigen::VectorXd point_mass(const Grid& g) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(g.size());
  d[g.nearest_node(Point::Zero(g.dimension()))] = 1.0 / g.cell_volume();
  return d;
}

}  // namespace

TEST_SUITE("semigroup") {

TEST_CASE("heat flow basics") {
  const Grid g(plane(24));
  const GrushinOperator op = assemble(g);
  const SpectralData spec = eigendecompose(op);
  const Eigen::VectorXd u = random_field(g.size(), 3);
  CHECK((heat_apply(spec, 0.0, u) - u).cwiseAbs().maxCoeff() < 1e-12);
  for (double t : {0.01, 0.1}) {
    const Eigen::VectorXd a = heat_apply(spec, t, heat_apply(spec, 0.5 * t, u));
    CHECK(test::rel_l2(a, heat_apply(spec, 1.5 * t, u)) < 1e-10);
    CHECK(test::rel_l2(heat_apply_krylov(op, t, u), heat_apply(spec, t, u)) < 1e-8);
    for (double p : {1.0, 2.0, kInfinity}) CHECK(lp_norm(g, heat_apply(spec, t, u), p) <= lp_norm(g, u, p) + 1e-10);
  }
  CHECK_THROWS_AS(heat_apply(spec, -1.0, u), ConfigurationError);
}

TEST_CASE("stochastic completeness defect") {
  const Grid g(plane(64));
  const SpectralData spec = eigendecompose(assemble(g));
  CHECK(stochastic_completeness_defect(spec, 0.01, 1.0) < 1e-3);
  CHECK(stochastic_completeness_defect(spec, 1e-4, 1.0) < 1e-12);
  double prev = 0.0;
  for (double t : log_grid(1e-3, 1.0, 4)) {
    const double d = stochastic_completeness_defect(spec, t, 1.0);
    CHECK(d >= prev - 1e-14);
    prev = d;
  }
}

TEST_CASE("kernel columns") {
  const Grid g(plane(48));
  const SpectralData spec = eigendecompose(assemble(g));
  const Index src = g.nearest_node(test::pt(0.2, -0.1));
  for (double t : {0.01, 0.05}) {
    const HeatKernelColumn c = kernel_column(spec, t, src);
    CHECK(c.values.minCoeff() >= -1e-12);
    CHECK(integrate(g, c.values) <= 1.0 + 1e-10);
    CHECK(integrate(g, c.values) == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("ultracontractivity slopes") {
  const Grid g(plane(64));
  const SpectralData spec = eigendecompose(assemble(g));
  const auto d = point_mass(g);
  const auto window = log_grid(0.04, 0.4, 8);
  CHECK(ultracontractivity_fit(spec, d, 1.0, kInfinity, window).slope == doctest::Approx(-1.5).epsilon(0.10));
  CHECK(ultracontractivity_fit(spec, d, 1.0, 2.0, window).slope == doctest::Approx(-0.75).epsilon(0.10));
  CHECK(std::abs(ultracontractivity_fit(spec, d, 1.0, 1.0, window).slope) < 0.05);
}

TEST_CASE("log-log fit recovers a power law") {
  std::vector<double> x, y;
  for (double v : {0.1, 0.2, 0.5, 1.0, 3.0}) {
    x.push_back(v);
    y.push_back(2.5 * std::pow(v, -1.3));
  }
  const LogFit f = loglog_fit(x, y);
  CHECK(f.slope == doctest::Approx(-1.3));
  CHECK(std::exp(f.intercept) == doctest::Approx(2.5));
  CHECK(f.r2 == doctest::Approx(1.0));
}

TEST_CASE("subordination") {
  QuadratureSpec sq = SubordinatorSpec{}.sigma_quadrature;
  for (double t : {0.1, 0.5, 2.0}) CHECK(poisson_mass(t, sq) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(poisson_density(1.0, 0.0) == 0.0);

  const Grid g(plane(32));
  const SpectralData spec = eigendecompose(assemble(g));
  const auto u = test::bump(g, 0.0, 0.1, 0.5);
  SubordinatorSpec a, b;
  b.route = SubordinationRoute::poisson_quadrature;
  const OperatorResult ra = subordinate_apply(spec, a, 0.5, u), rb = subordinate_apply(spec, b, 0.5, u);
  CHECK(test::rel_l2(rb.values, ra.values) < 1e-4);
  // spectral route equals exp(-t sqrt(L))
  const Eigen::VectorXd direct = spec.apply(u, [](double l) { return std::exp(-0.5 * std::sqrt(l)); });
  CHECK(test::rel_l2(ra.values, direct) < 1e-12);
  SubordinatorSpec bad;
  bad.s = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
}

TEST_CASE("maximal function") {
  const Grid g(plane(32));
  const SpectralData spec = eigendecompose(assemble(g));
  const Eigen::VectorXd u = test::bump(g, 0.3, 0.0, 0.4) - test::bump(g, -0.4, 0.2, 0.3);
  const Eigen::VectorXd M = maximal_function(spec, u, log_grid(1e-4, 1.0, 4));
  CHECK((M.array() >= u.array().abs() - 1e-3).all());
  CHECK(M.maxCoeff() <= u.cwiseAbs().maxCoeff() + 1e-10);
}

TEST_CASE("weak norm") {
  const Grid g(plane(32));
  const SetMask m = rasterize(box_set(test::pt(0, 0), test::pt(0.5, 0.4)), g);
  CHECK(weak_norm(g, 3.0 * m.indicator(), 0.5) == doctest::Approx(3.0 * std::sqrt(m.measure)));
  const auto u = test::bump(g, 0, 0, 0.5);
  CHECK(weak_norm(g, u, 1.0) <= lp_norm(g, u, 1.0) + 1e-12);
  CHECK(weak_norm(g, Eigen::VectorXd::Zero(g.size()), 0.5) == 0.0);
}

TEST_CASE("Ledoux inequality") {
  const Grid g(plane(32));
  const SpectralData spec = eigendecompose(assemble(g));
  const auto u = test::bump(g, 0.1, 0.0, 0.4);
  std::vector<double> sigma{0.0};
  for (double v : log_grid(1e-5, 10.0, 8)) sigma.push_back(v);
  for (double s : {0.2, 0.4})
    for (double t : {0.01, 0.1, 1.0}) {
      const LedouxReport r = ledoux_defect(spec, s, t, u, sigma);
      CHECK(r.defect >= -1e-8);
      CHECK(r.monotonicity_violation <= 1e-10);
    }
}

}
