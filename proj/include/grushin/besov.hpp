#pragma once

#include "grushin/grid.hpp"
#include "grushin/operator.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/semigroup.hpp"

#include <limits>
#include <string>
#include <vector>

namespace grushin {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct BesovParams {
  double p = 1.0;
  double q = 1.0;  // kInfinity for the sup variant
  double beta = 0.5;
  double s = 0.5;  // fractional-semigroup family only

  void validate() const;
  bool q_infinite() const { return q == kInfinity; }
};

/// How the Dirichlet truncation enters  int e^{-tL}(|u - u(g)|^p)(g) dg.
///  completed: heat that left the box meets u = 0 outside (whole-space reading, default);
///  truncated: the exterior is dropped.
enum class EnergyMode { completed, truncated };

/// E(t) = sum_j (1 - e^{-t lambda_j^s}) w_j. One O(N^{5/2}) pass per function,
/// then every t costs O(N).
struct EnergySpectrum {
  Eigen::VectorXd lambda;
  Eigen::VectorXd weight;
  double p = 1.0;
  double lp_p = 0.0;  // ||u||_p^p

  double energy(double t, double s = 1.0) const;
  /// dE/dt at t = 0.
  double rate(double s = 1.0) const;
  /// Exact  int_0^inf E(t) t^{-gamma} dt/t  for 0 < gamma < 1.
  double mellin(double gamma, double s = 1.0) const;
};

EnergySpectrum energy_spectrum(const SpectralData& spec, const Eigen::VectorXd& u, double p,
                               EnergyMode mode = EnergyMode::completed);

/// Direct evaluation through kernel rows in blocks; the oracle for energy_spectrum.
double local_energy(const SpectralData& spec, double t, double p, const Eigen::VectorXd& u,
                    EnergyMode mode = EnergyMode::completed);

/// Small-t model of E below t_min.
///  taylor: E ~ rate * t (what the grid operator does for t below h^2);
///  continuum: E ~ E(t_c) (t / t_c)^kappa, anchored at t_c = t_min.
enum class HeadModel { taylor, continuum };

struct SeminormOptions {
  EnergyMode mode = EnergyMode::completed;
  HeadModel head = HeadModel::taylor;
  double kappa = 0.5;  // continuum exponent, usually p/2
};

struct SeminormResult {
  double value = 0.0;      // N
  double power = 0.0;      // N^q (q finite) or N^p (q infinite)
  double head = 0.0;       // contributions to N^q
  double body = 0.0;
  double tail = 0.0;
  double tail_bound = 0.0;  // bound on the tail with E <= 2^p ||u||_p^p
  bool head_divergent = false;
  std::vector<double> t;
  std::vector<double> energy;
  std::vector<std::string> diagnostics;
};

SeminormResult seminorm_heat(const SpectralData& spec, const Eigen::VectorXd& u, const BesovParams& params,
                             const QuadratureSpec& quad, const SeminormOptions& options = {});
SeminormResult seminorm_heat(const EnergySpectrum& es, const BesovParams& params, const QuadratureSpec& quad,
                             const SeminormOptions& options = {});

SeminormResult seminorm_subordinate(const SpectralData& spec, const Eigen::VectorXd& u, const BesovParams& params,
                                    const QuadratureSpec& quad, const SeminormOptions& options = {});
SeminormResult seminorm_subordinate(const EnergySpectrum& es, const BesovParams& params, const QuadratureSpec& quad,
                                    const SeminormOptions& options = {});

/// Sorted distances from a subsampled set of sources; the geometric half of the
/// difference seminorm, reusable across functions.
struct DistanceTable {
  Grid grid{GridSpec::uniform(1, 1, 0.0, 1.0, 3)};
  int stride = 1;
  std::vector<Index> sources;
  std::vector<std::vector<double>> distance;  // ascending, per source
  std::vector<std::vector<Index>> node;       // matching node ids
  double r_min = 0.0;                         // smallest nonzero distance
  double r_max = 0.0;                         // largest distance
};

/// Sources are the nodes whose multi-index is divisible by `stride` along every axis.
DistanceTable build_distance_table(const Grid& grid, const DistanceProvider& distance, int stride);

/// Default r-quadrature for a table: r_min/2 .. r_max, 32 nodes per decade.
QuadratureSpec difference_quadrature(const DistanceTable& table);

SeminormResult seminorm_difference(const Eigen::VectorXd& u, const BesovParams& params, const DistanceTable& table,
                                   const QuadratureSpec& r_quad);

/// N(max)^q + N(min)^q - N(u1)^q - N(u2)^q for p = q; for q = inf the p-th powers
/// of each extremal side against N(u1)^p + N(u2)^p. Nonpositive up to roundoff.
double minmax_defect(const SpectralData& spec, const Eigen::VectorXd& u1, const Eigen::VectorXd& u2,
                     const BesovParams& params, const QuadratureSpec& quad);
/// Same from precomputed energies of max, min, u1, u2; `rhs` receives the right-hand side.
double minmax_defect(const EnergySpectrum& hi, const EnergySpectrum& lo, const EnergySpectrum& e1,
                     const EnergySpectrum& e2, const BesovParams& params, const QuadratureSpec& quad,
                     double* rhs = nullptr);

/// Polynomial extrapolation (Neville) of y(x) to x0 through all points.
double richardson(const std::vector<double>& x, const std::vector<double>& y, double x0);

struct LimitScan {
  std::vector<double> parameter;
  std::vector<double> value;
  std::vector<double> head_part;  // contribution from t < 1 (already multiplied)
  double extrapolated = 0.0;
  double target = 0.0;
  std::vector<std::string> diagnostics;
};

/// beta * N_{p,p}^beta(u)^p along a descending beta grid, extrapolated to 0;
/// target (4/p) ||u||_p^p.
LimitScan ms_limit_scan(const SpectralData& spec, const Eigen::VectorXd& u, double p,
                        const std::vector<double>& beta_grid, const QuadratureSpec& quad);
LimitScan ms_limit_scan(const EnergySpectrum& es, const std::vector<double>& beta_grid, const QuadratureSpec& quad);

struct BracketReport {
  std::vector<double> beta;
  std::vector<double> value;  // (1 - beta) N^p
  double extrapolated = 0.0;  // beta -> 1
  double lower = 0.0;         // (2/p) inf of t^{-p/2} E over the decade
  double upper = 0.0;         // (2/p) sup
  double t_c = 0.0;
  bool holds(double slack) const {
    return extrapolated >= (1.0 - slack) * lower && extrapolated <= (1.0 + slack) * upper;
  }
};

/// (1 - beta) N^p for beta -> 1 against the bracket from the decade [t_c, 10 t_c].
/// Below t_c the energy follows the continuum law E ~ t^{p/2}.
BracketReport bbm_bracket(const SpectralData& spec, const Eigen::VectorXd& u, double p,
                          const std::vector<double>& beta_grid, const QuadratureSpec& quad, double t_c);
BracketReport bbm_bracket(const EnergySpectrum& es, const std::vector<double>& beta_grid, const QuadratureSpec& quad,
                          double t_c);

/// ||L^s u||_p / (||u||_p + N_{p,q}^beta(u)); q = p or q = inf.
double ls_boundedness_check(const SpectralData& spec, const Eigen::VectorXd& u, double s, double p, double beta,
                            const QuadratureSpec& quad, double q = -1.0);

}  // namespace grushin
