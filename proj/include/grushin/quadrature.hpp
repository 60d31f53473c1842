#pragma once

#include <vector>

namespace grushin {

enum class TailPolicy { analytic_bound, drop };

/// Log-uniform nodes for integrals of the form  int f(t) dt/t  on [t_min, t_max].
/// node_count > 0 overrides nodes_per_decade.
struct QuadratureSpec {
  double t_min = 1e-6;
  double t_max = 1e4;
  int nodes_per_decade = 16;
  int node_count = 0;
  TailPolicy tail_policy = TailPolicy::analytic_bound;

  void validate() const;
  int size() const;
};

struct LogQuadrature {
  std::vector<double> t;
  std::vector<double> w;  // trapezoid weights in ln t
};

/// Trapezoid rule in tau = ln t, endpoints included.
LogQuadrature log_quadrature(const QuadratureSpec& spec);

/// Log-spaced grid between a and b (inclusive) with the given density.
std::vector<double> log_grid(double a, double b, int per_decade);

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace grushin
