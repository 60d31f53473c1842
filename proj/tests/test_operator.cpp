#include <doctest.h>

#include "grushin/operator.hpp"
#include "grushin/quadrature.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>

using namespace grushin;
using test::plane;

namespace {

bool full_stencil(const Grid& g, Index n) {
  for (int a = 0; a < g.dimension(); ++a)
    if (g.neighbour(n, a, 1) < 0 || g.neighbour(n, a, -1) < 0) return false;
  return true;
}

}  // namespace

TEST_SUITE("operator") {

TEST_CASE("alpha=0 gives the standard Dirichlet Laplacian") {
  const Grid g(GridSpec::uniform(1, 2, 0.0, 1.5, 9));
  const Eigen::MatrixXd A = assemble(g).matrix;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(g.size(), g.size());
  for (Index n = 0; n < g.size(); ++n)
    for (int a = 0; a < g.dimension(); ++a) {
      const double w = 1.0 / (g.spacing(a) * g.spacing(a));
      B(n, n) += 2.0 * w;
      for (int d : {-1, 1})
        if (const Index j = g.neighbour(n, a, d); j >= 0) B(n, j) -= w;
    }
  CHECK((A - B).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("constants are annihilated away from the boundary") {
  for (auto rule : {CoefficientRule::cell_average, CoefficientRule::node_value}) {
    const Grid g(plane(20));
    const Eigen::VectorXd r = assemble(g, rule).apply(g.ones());
    for (Index n = 0; n < g.size(); ++n)
      if (full_stencil(g, n)) CHECK(std::abs(r[n]) < 1e-9);
  }
}

TEST_CASE("x^2 y is mapped to -2y") {
  for (int pts : {15, 31}) {
    const Grid g(plane(pts, 1.0));
    const auto u = g.sample([](const Point& p) { return p[0] * p[0] * p[1]; });
    const Eigen::VectorXd Lu = assemble(g).apply(u);
    double err = 0.0;
    for (Index n = 0; n < g.size(); ++n)
      if (full_stencil(g, n)) err = std::max(err, std::abs(Lu[n] + 2.0 * g.point(n)[1]));
    CHECK(err < 1e-8);  // central differences are exact on this polynomial
  }
}

TEST_CASE("a smooth function converges at second order") {
  // probe points that are nodes on every level
  const std::vector<Point> probes{test::pt(0.5, 0.5), test::pt(-0.25, 0.75), test::pt(0.75, -0.5)};
  std::vector<double> errs;
  for (int pts : {15, 31, 63}) {
    const Grid g(plane(pts, 1.0));
    const auto u = g.sample([](const Point& p) { return std::sin(p[0]) * std::cos(p[1]); });
    const Eigen::VectorXd Lu = assemble(g).apply(u);
    double err = 0.0;
    for (const Point& q : probes) {
      const Index n = g.nearest_node(q);
      REQUIRE((g.point(n) - q).norm() < 1e-12);
      const double exact = std::sin(q[0]) * std::cos(q[1]) * (1.0 + q[0] * q[0]);
      err = std::max(err, std::abs(Lu[n] - exact));
    }
    errs.push_back(err);
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.1));
  CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("alpha=0 spectrum is the sum of 1-D spectra") {
  const Grid g(GridSpec::uniform(1, 1, 0.0, 2.0, 20));
  const SpectralData spec = eigendecompose(assemble(g));
  // interval length L = 2 * half_width = 21 h
  const double h = g.spacing(0), L = 4.0;
  std::vector<double> ref;
  for (int i = 1; i <= 20; ++i)
    for (int j = 1; j <= 20; ++j) {
      const double a = std::sin(M_PI * i * h / (2 * L)), b = std::sin(M_PI * j * h / (2 * L));
      ref.push_back(4.0 / (h * h) * (a * a + b * b));
    }
  std::sort(ref.begin(), ref.end());
  REQUIRE(spec.size() == 400);
  for (Index i = 0; i < 400; ++i) CHECK(std::abs(spec.eigenvalues()[i] - ref[i]) < 1e-10 * ref.back());
  CHECK(sine_eigenvalues(5, 0.3)[0] == doctest::Approx(4.0 / 0.09 * std::pow(std::sin(M_PI / 12.0), 2)));
  CHECK(sine_eigenvalues(20, h).maxCoeff() < 4.0 / (h * h));
}

TEST_CASE("tensor and dense eigenvalues agree on 32x32") {
  const Grid g(plane(32));
  const GrushinOperator op = assemble(g);
  const SpectralData a = eigendecompose(op);
  EigenOptions o;
  o.dense = true;
  const SpectralData b = eigendecompose(op, o);
  CHECK(a.is_tensor());
  CHECK_FALSE(b.is_tensor());
  const double scale = a.eigenvalues().maxCoeff();
  CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-8 * scale);
  CHECK(a.eigenvalues()[0] > 0.0);
  CHECK(a.max_residual(op, 20) < 1e-8 * scale);
  CHECK(a.gram_defect(20) < 1e-10);
}

TEST_CASE("leading truncation keeps the smallest eigenvalues") {
  const Grid g(plane(16));
  EigenOptions o;
  o.leading = 30;
  const SpectralData full = eigendecompose(assemble(g));
  const SpectralData part = eigendecompose(assemble(g), o);
  CHECK(part.truncated());
  REQUIRE(part.size() == 30);
  CHECK((part.eigenvalues() - full.eigenvalues().head(30)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("fractional powers") {
  const Grid g(plane(24));
  const GrushinOperator op = assemble(g);
  const SpectralData spec = eigendecompose(op);
  const Eigen::VectorXd phi = spec.eigenvector(3);
  const double lam = spec.eigenvalues()[3];
  CHECK(test::rel_l2(fractional_power_spectral(spec, 0.3, phi), std::pow(lam, 0.3) * phi) < 1e-10);
  const auto u = test::bump(g, 0.1, 0.2, 0.5);
  CHECK(test::rel_l2(fractional_power_spectral(spec, 1.0, u), op.apply(u)) < 1e-8);
  const Eigen::VectorXd a = fractional_power_spectral(spec, 0.3, fractional_power_spectral(spec, 0.45, u));
  CHECK(test::rel_l2(a, fractional_power_spectral(spec, 0.75, u)) < 1e-10);
}

TEST_CASE("Balakrishnan route") {
  const Grid g(plane(24));
  const GrushinOperator op = assemble(g);
  const SpectralData spec = eigendecompose(op);
  QuadratureSpec q;
  q.t_min = 1e-6;
  q.t_max = 1e3;
  q.node_count = 200;
  const auto u = test::bump(g, 0.0, 0.0, 0.5);
  const OperatorResult r = fractional_power_balakrishnan(op, spec, 0.5, u, q);
  CHECK(test::rel_l2(r.values, fractional_power_spectral(spec, 0.5, u)) < 1e-3);

  const Eigen::VectorXd phi = spec.eigenvector(0);
  const OperatorResult rp = fractional_power_balakrishnan(op, spec, 0.5, phi, q);
  const double lam = std::sqrt(spec.eigenvalues()[0]);
  CHECK(std::abs(inner(g, phi, rp.values) - lam) <= std::max(rp.error_estimate, 1e-3 * lam));

  const OperatorResult z = fractional_power_balakrishnan(op, spec, 0.5, Eigen::VectorXd::Zero(g.size()), q);
  CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Riesz potentials") {
  const Grid g(plane(24));
  const SpectralData spec = eigendecompose(assemble(g));
  const auto u = test::bump(g, -0.2, 0.1, 0.4);
  for (double s : {0.25, 0.5}) {
    CHECK(test::rel_l2(riesz_potential(spec, 2 * s, fractional_power_spectral(spec, s, u)), u) < 1e-10);
    CHECK(test::rel_l2(fractional_power_spectral(spec, s, riesz_potential(spec, 2 * s, u)), u) < 1e-10);
  }
  const Eigen::VectorXd phi = spec.eigenvector(5);
  const double lam = spec.eigenvalues()[5];
  CHECK(test::rel_l2(riesz_potential(spec, 0.8, phi), std::pow(lam, -0.4) * phi) < 1e-10);

  QuadratureSpec q;
  q.t_min = 1e-8;
  q.t_max = 1e4;
  q.nodes_per_decade = 32;
  const OperatorResult r = riesz_potential_quadrature(spec, 1.0, u, q);
  CHECK(test::rel_l2(r.values, riesz_potential(spec, 1.0, u)) < 1e-3);
  CHECK_THROWS_AS(riesz_potential_quadrature(spec, -1.0, u, q), ConfigurationError);
}

}
