#include "grushin/quadrature.hpp"

#include "grushin/grid.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace grushin {

void QuadratureSpec::validate() const {
  if (!(t_min > 0.0)) throw ConfigurationError("quadrature.t_min must be > 0");
  if (!(t_max > t_min)) throw ConfigurationError("quadrature.t_max must exceed quadrature.t_min");
  if (node_count == 0 && nodes_per_decade < 4)
    throw ConfigurationError("quadrature.nodes_per_decade must be >= 4");
  if (node_count != 0 && node_count < 2) throw ConfigurationError("quadrature.node_count must be >= 2");
}

int QuadratureSpec::size() const {
  if (node_count > 0) return node_count;
  const double decades = std::log10(t_max / t_min);
  return static_cast<int>(std::ceil(decades * nodes_per_decade - 1e-9)) + 1;
}

LogQuadrature log_quadrature(const QuadratureSpec& spec) {
  spec.validate();
  const int n = spec.size();
  const double a = std::log(spec.t_min), b = std::log(spec.t_max);
  const double h = (b - a) / (n - 1);
  LogQuadrature q;
  q.t.resize(n);
  q.w.assign(n, h);
  for (int i = 0; i < n; ++i) q.t[i] = std::exp(a + i * h);
  q.t.front() = spec.t_min;
  q.t.back() = spec.t_max;
  q.w.front() = q.w.back() = 0.5 * h;
  return q;
}

std::vector<double> log_grid(double a, double b, int per_decade) {
  if (!(a > 0.0) || !(b >= a)) throw ConfigurationError("log_grid needs 0 < a <= b");
  const int n = std::max(1, static_cast<int>(std::ceil(std::log10(b / a) * per_decade - 1e-9))) + 1;
  std::vector<double> g(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * i / (n - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), sub(std::max(0, n - 1));
  for (int i = 1; i < n; ++i) sub[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()[i];
    w[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

}  // namespace grushin
