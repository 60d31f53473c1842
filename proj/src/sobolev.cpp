#include "grushin/sobolev.hpp"

#include <algorithm>
#include <cmath>

namespace grushin {

double hls_exponent(double Q, double alpha_tilde, double p) {
  if (!(alpha_tilde > 0.0 && alpha_tilde < Q)) throw ConfigurationError("potential order must lie in (0, Q)");
  if (!(p >= 1.0 && p < Q / alpha_tilde)) throw ConfigurationError("p must lie in [1, Q / alpha_tilde)");
  return 1.0 / (1.0 / p - alpha_tilde / Q);
}

namespace {

EmbeddingReport ratios(const Grid& grid, const Eigen::VectorXd& out, const Eigen::VectorXd& in, double p, double q) {
  EmbeddingReport r;
  r.p = p;
  r.q = q;
  const double den = lp_norm(grid, in, p);
  if (den == 0.0) return r;
  r.ratio = lp_norm(grid, out, q) / den;
  r.weak_ratio = weak_norm(grid, out, 1.0 / q) / den;
  return r;
}

}  // namespace

EmbeddingReport hls_ratio(const SpectralData& spec, const Eigen::VectorXd& u, double alpha_tilde, double p) {
  const Grid& grid = spec.grid();
  const double q = hls_exponent(hom_dimension(grid.spec()), alpha_tilde, p);
  EmbeddingReport r = ratios(grid, riesz_potential(spec, alpha_tilde, u), u, p, q);
  r.alpha_tilde = alpha_tilde;
  return r;
}

EmbeddingReport sobolev_ratio(const SpectralData& spec, const Eigen::VectorXd& u, double s, double p) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigurationError("Sobolev order s must lie in (0,1)");
  const Grid& grid = spec.grid();
  const double q = hls_exponent(hom_dimension(grid.spec()), 2.0 * s, p);
  const Eigen::VectorXd ls = fractional_power_spectral(spec, s, u);
  EmbeddingReport r = ratios(grid, riesz_potential(spec, 2.0 * s, ls), ls, p, q);
  r.s = s;
  r.alpha_tilde = 2.0 * s;
  return r;
}

double besov_embedding_ratio(const SpectralData& spec, const Eigen::VectorXd& u, double s, double p, double beta,
                             const QuadratureSpec& quad) {
  if (!(beta > 2.0 * s)) throw ConfigurationError("Besov route needs beta > 2s");
  const Grid& grid = spec.grid();
  const double q = hls_exponent(hom_dimension(grid.spec()), 2.0 * s, p);
  const double den = lp_norm(grid, u, p) + seminorm_heat(spec, u, BesovParams{p, p, beta, 0.5}, quad).value;
  return den > 0.0 ? lp_norm(grid, u, q) / den : 0.0;
}

double poisson_decay_constant(const SpectralData& spec, const std::vector<Eigen::VectorXd>& family, double p,
                              const std::vector<double>& t_grid) {
  const Grid& grid = spec.grid();
  const double Q = hom_dimension(grid.spec());
  const Eigen::VectorXd root = spec.eigenvalues().cwiseSqrt();
  double c = 0.0;
  for (const auto& v : family) {
    const double nv = lp_norm(grid, v, p);
    if (nv == 0.0) continue;
    const Eigen::VectorXd coef = spec.analyze(v);
    for (double t : t_grid) {
      const Eigen::VectorXd pv = spec.synthesize((-t * root.array()).exp().matrix().cwiseProduct(coef));
      c = std::max(c, std::pow(t, Q / p) * pv.cwiseAbs().maxCoeff() / nv);
    }
  }
  return c;
}

PointwiseBoundReport pointwise_bound_defect(const SpectralData& spec, const Eigen::VectorXd& u, double alpha_tilde,
                                            double p, const std::vector<double>& epsilon_grid,
                                            const std::vector<double>& t_grid) {
  const Grid& grid = spec.grid();
  const double Q = hom_dimension(grid.spec());
  hls_exponent(Q, alpha_tilde, p);
  if (epsilon_grid.empty()) throw ConfigurationError("epsilon grid is empty");
  PointwiseBoundReport r;
  const Index N = grid.size();
  r.c_alpha = 1.0 / std::tgamma(1.0 + alpha_tilde);
  r.best_epsilon = Eigen::VectorXd::Zero(N);
  r.potential = riesz_potential(spec, alpha_tilde, u);
  r.maximal = maximal_function(spec, u, t_grid);
  const double nu = lp_norm(grid, u, p);
  if (nu == 0.0) return r;
  r.c_fitted = poisson_decay_constant(spec, {u}, p, t_grid) / (std::tgamma(alpha_tilde) * (Q / p - alpha_tilde));
  const double scale = r.potential.cwiseAbs().maxCoeff();
  for (Index g = 0; g < N; ++g) {
    double best = kInfinity;
    for (double eps : epsilon_grid) {
      const double rhs = r.c_alpha * r.maximal[g] * std::pow(eps, alpha_tilde) +
                         r.c_fitted * nu * std::pow(eps, alpha_tilde - Q / p);
      if (rhs < best) {
        best = rhs;
        r.best_epsilon[g] = eps;
      }
    }
    r.defect = std::max(r.defect, (std::abs(r.potential[g]) - best) / scale);
  }
  return r;
}

double rearrangement_ratio(const std::vector<double>& breaks, const std::vector<double>& values, double gamma) {
  if (breaks.size() != values.size() || breaks.empty()) throw ConfigurationError("step function needs matching arrays");
  if (!(gamma >= 1.0)) throw ConfigurationError("gamma must be >= 1");
  double lhs = 0.0, rhs = 0.0, prev = 0.0;
  for (size_t i = 0; i < breaks.size(); ++i) {
    if (breaks[i] <= prev) throw ConfigurationError("breaks must increase");
    if (values[i] < 0.0 || (i > 0 && values[i] > values[i - 1])) throw ConfigurationError("U must be non-increasing");
    lhs += values[i] * (std::pow(breaks[i], gamma) - std::pow(prev, gamma)) / gamma;
    rhs += std::pow(values[i], 1.0 / gamma) * (breaks[i] - prev);
    prev = breaks[i];
  }
  return rhs > 0.0 ? lhs / std::pow(rhs, gamma) : 0.0;
}

}  // namespace grushin
