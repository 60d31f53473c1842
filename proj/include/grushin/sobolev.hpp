#pragma once

#include "grushin/besov.hpp"

#include <vector>

namespace grushin {

struct EmbeddingReport {
  double s = 0.0;            // Sobolev order (0 for the HLS form)
  double alpha_tilde = 0.0;  // potential order
  double p = 1.0;
  double q = 1.0;
  double ratio = 0.0;       // strong: ||out||_q / ||in||_p
  double weak_ratio = 0.0;  // sup_l l |{|out| > l}|^{1/q} / ||in||_p
};

/// q with 1/p - 1/q = alpha_tilde / Q; needs p in [1, Q / alpha_tilde).
double hls_exponent(double Q, double alpha_tilde, double p);

/// Riesz potential of u against u. The weak ratio is evaluated exactly over the
/// value levels, so it dominates any finite lambda grid.
EmbeddingReport hls_ratio(const SpectralData& spec, const Eigen::VectorXd& u, double alpha_tilde, double p);

/// ||u||_q / ||L^s u||_p with q = pQ/(Q - 2sp), through u = I_{2s}(L^s u).
EmbeddingReport sobolev_ratio(const SpectralData& spec, const Eigen::VectorXd& u, double s, double p);

/// ||u||_q / (||u||_p + N_{p,p}^beta(u)) for beta > 2s.
double besov_embedding_ratio(const SpectralData& spec, const Eigen::VectorXd& u, double s, double p, double beta,
                             const QuadratureSpec& quad);

/// sup_t t^{Q/p} ||e^{-t sqrt L} v||_inf / ||v||_p over the grid and the given functions.
double poisson_decay_constant(const SpectralData& spec, const std::vector<Eigen::VectorXd>& family, double p,
                              const std::vector<double>& t_grid);

struct PointwiseBoundReport {
  double defect = 0.0;             // max_g (|I u| - RHS)_+ / ||I u||_inf
  double c_alpha = 0.0;            // 1 / Gamma(1 + alpha_tilde)
  double c_fitted = 0.0;           // C(alpha_tilde, p, Q)
  Eigen::VectorXd best_epsilon;    // minimizing epsilon per node
  Eigen::VectorXd maximal;         // M u
  Eigen::VectorXd potential;       // I u
};

/// |I u| <= C(a) M u eps^a + C(a,p,Q) ||u||_p eps^{a - Q/p}, minimized over epsilon_grid.
/// C(a,p,Q) = C_P / (Gamma(a) (Q/p - a)) with C_P = poisson_decay_constant({u}).
PointwiseBoundReport pointwise_bound_defect(const SpectralData& spec, const Eigen::VectorXd& u, double alpha_tilde,
                                            double p, const std::vector<double>& epsilon_grid,
                                            const std::vector<double>& t_grid);

/// Step function U = sum heights on [0, breaks) with non-increasing values; the
/// ratio  int t^{g-1} U dt / (int U^{1/g} dt)^g, which never exceeds 1/g.
double rearrangement_ratio(const std::vector<double>& breaks, const std::vector<double>& values, double gamma);

}  // namespace grushin
