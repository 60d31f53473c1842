#pragma once

#include "grushin/grid.hpp"
#include "grushin/operator.hpp"
#include "grushin/quadrature.hpp"

#include <functional>
#include <string>
#include <vector>

namespace grushin {

Eigen::VectorXd heat_apply(const SpectralData& spec, double t, const Eigen::VectorXd& u);

/// e^{-tL}u by Lanczos on the sparse matrix; for grids beyond the dense budget.
Eigen::VectorXd heat_apply_krylov(const GrushinOperator& op, double t, const Eigen::VectorXd& u,
                                  double tol = 1e-12, int max_dim = 400);

/// max |e^{-tL}1 - 1| over nodes at least `margin` from the boundary.
double stochastic_completeness_defect(const SpectralData& spec, double t, double margin);

struct HeatKernelColumn {
  double t = 0.0;
  Index source = 0;
  Eigen::VectorXd values;  // K_t(., source)
};

HeatKernelColumn kernel_column(const SpectralData& spec, double t, Index source);

using DistanceProvider = std::function<Eigen::VectorXd(Index source)>;
using VolumeFunction = std::function<double(Index node, double r)>;

struct KernelPair {
  Index source = 0;
  Index target = 0;
};

struct GaussianFit {
  double slope = 0.0;      // fitted coefficient of d^2/t, expected negative
  double intercept = 0.0;
  double c_lower = 0.0;    // -slope of the lower envelope (C_1)
  double c_upper = 0.0;    // -slope of the upper envelope (C_2)
  double ratio_spread = 0.0;
  double max_d2_over_t = 0.0;
  Index samples = 0;
  std::vector<std::string> diagnostics;
};

/// Regress log(K_t |B(g, sqrt t)|) on d(g,g')^2 / t over the given pairs.
GaussianFit gaussian_bound_fit(const std::vector<HeatKernelColumn>& columns, const std::vector<KernelPair>& pairs,
                               const DistanceProvider& distance, const VolumeFunction& volume);

struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<std::string> diagnostics;
};

LogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Slope of log ||e^{-tL}u||_q against log t over t_window.
LogFit ultracontractivity_fit(const SpectralData& spec, const Eigen::VectorXd& u, double p, double q,
                              const std::vector<double>& t_window);

enum class SubordinationRoute { spectral, poisson_quadrature };

struct SubordinatorSpec {
  double s = 0.5;
  SubordinationRoute route = SubordinationRoute::spectral;
  QuadratureSpec sigma_quadrature{1e-10, 1e12, 32, 0, TailPolicy::analytic_bound};

  void validate() const;
};

/// eta^{1/2}_t(sigma) = t / (2 sqrt(pi) sigma^{3/2}) exp(-t^2 / (4 sigma)).
double poisson_density(double t, double sigma);

/// Quadrature value of int eta^{1/2}_t over (0, inf): log nodes plus the
/// closed-form head and tail masses.
double poisson_mass(double t, const QuadratureSpec& sigma_quadrature);

OperatorResult subordinate_apply(const SpectralData& spec, const SubordinatorSpec& sub, double t,
                                 const Eigen::VectorXd& u);

struct ComparabilityReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  Index samples = 0;
  double spread() const { return min_ratio > 0.0 ? max_ratio / min_ratio : 0.0; }
};

/// Ratio of K^s_t(g, g') to |B(g, t^{1/2s} + d)|^{-1} t / (t^{1/2s} + d)^{2s}.
ComparabilityReport subordinate_kernel_check(const SpectralData& spec, const SubordinatorSpec& sub,
                                             const std::vector<double>& t_values,
                                             const std::vector<KernelPair>& pairs, const DistanceProvider& distance,
                                             const VolumeFunction& volume);

/// sup over t_grid (and t -> 0) of |e^{-t sqrt L} u|.
Eigen::VectorXd maximal_function(const SpectralData& spec, const Eigen::VectorXd& u, const std::vector<double>& t_grid);

/// sup_lambda lambda |{|v| > lambda}|^theta, exact over the value levels of v.
double weak_norm(const Grid& grid, const Eigen::VectorXd& v, double theta);

struct LedouxReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double defect = 0.0;                // rhs - lhs
  double monotonicity_violation = 0.0;  // largest increase of sigma -> ||L^s e^{-sigma L}u||
  std::vector<double> sigma_profile;
};

/// ||e^{-tL}u - u|| <= (2 t^s / Gamma(1+s)) sup_sigma ||L^s e^{-sigma L} u||, in
/// the boundary-compensated L^1 norm.
LedouxReport ledoux_defect(const SpectralData& spec, double s, double t, const Eigen::VectorXd& u,
                           const std::vector<double>& sigma_grid);

}  // namespace grushin
