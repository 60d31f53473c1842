#pragma once

#include "grushin/besov.hpp"

#include <string>
#include <vector>

namespace grushin {

/// Heat defect of an indicator: E(t) = ||e^{-tL}1_E - 1_E||  (compensated L^1)
/// = 2 <1_E, 1_E - e^{-tL}1_E>, so the spectral weights are 2 c_j^2.
EnergySpectrum perimeter_energy(const SpectralData& spec, const SetMask& set);

struct PerimeterResult {
  double s = 0.0;
  double measure = 0.0;
  double p_star = 0.0;  // N_{1,1}^{2s}(1_E)
  double p_ls = 0.0;    // ||L^s 1_E|| on the Balakrishnan route, same quadrature
  double p_inf = 0.0;   // sup_t t^{-s} ||e^{-tL}1_E - 1_E||
  double ls_error = 0.0;
  std::vector<std::string> diagnostics;
};

/// Sets within two cells of the box boundary get a truncation warning.
PerimeterResult perimeter(const GrushinOperator& op, const SpectralData& spec, const SetMask& set, double s,
                          const QuadratureSpec& quad);

double perimeter_star(const SpectralData& spec, const SetMask& set, double s, const QuadratureSpec& quad);
double perimeter_infty(const SpectralData& spec, const SetMask& set, double s, const std::vector<double>& t_grid);

struct MollificationReport {
  std::vector<double> width;  // heat time of the mollifier
  std::vector<double> value;  // ||L^s e^{-eps L} 1_E||
  double unmollified = 0.0;   // ||L^s 1_E||
  double estimate = 0.0;      // value at the smallest width
};

/// Widths in any order; reported descending.
MollificationReport perimeter_via_mollification(const SpectralData& spec, const SetMask& set, double s,
                                                std::vector<double> widths);

struct CoareaReport {
  double seminorm = 0.0;
  double level_sum = 0.0;
  double defect = 0.0;  // |seminorm - level_sum| / seminorm
  int levels = 0;
};

/// N_{1,1}^{2s}(u) against sum over value gaps of P*_s of the level sets. Levels
/// above zero use {u > sigma}, levels below zero use {u <= sigma}; both sides go
/// through the same energy route and quadrature.
CoareaReport coarea_defect(const SpectralData& spec, const Eigen::VectorXd& u, double s, const QuadratureSpec& quad);
/// Same, with the level sum taken over `levels` (u rounded to multiples of a uniform step).
CoareaReport coarea_defect_binned(const SpectralData& spec, const Eigen::VectorXd& u, double s,
                                  const QuadratureSpec& quad, int levels);
/// Rounds u to the nearest multiple of (max - min) / levels.
Eigen::VectorXd bin_levels(const Eigen::VectorXd& u, int levels);

struct IsoperimetricRow {
  std::string label;
  double measure = 0.0;
  double p_star = 0.0;
  double p_inf = 0.0;
  double p_moll = 0.0;
  double ratio_star = 0.0;  // perimeter / |E|^{(Q-2s)/Q}
  double ratio_inf = 0.0;
  double ratio_moll = 0.0;
};

struct IsoperimetricScan {
  double s = 0.0;
  std::vector<IsoperimetricRow> rows;
  double min_star = 0.0;
  double min_inf = 0.0;
  double min_moll = 0.0;
  std::vector<std::string> diagnostics;
};

struct LabelledSet {
  std::string label;
  SetSpec set;
};

/// Mollifier widths are factors times |E|^{2/Q}: they follow the set under
/// dilation and stay put under refinement.
IsoperimetricScan isoperimetric_scan(const SpectralData& spec, const std::vector<LabelledSet>& family, double s,
                                     const QuadratureSpec& quad, const RasterContext& context = {},
                                     const std::vector<double>& mollifier_factors = {0.2, 0.1, 0.05});

/// ||u||_{Q/(Q-2s)} C / N_{1,1}^{2s}(u) for a staircase u; <= 1 when C is the
/// isoperimetric constant of every level set.
double sobolev_route_ratio(const SpectralData& spec, const Eigen::VectorXd& u, double s, const QuadratureSpec& quad,
                           double c_emp);

/// s P*_s(E) along s, extrapolated to s = 0; target 2|E|.
LimitScan small_s_limit_scan(const SpectralData& spec, const SetMask& set, const std::vector<double>& s_grid,
                             const QuadratureSpec& quad);

/// (1 - 2s) P*_s(E) for s -> 1/2 against 2 t^{-1/2} ||e^{-tL}1_E - 1_E|| on [t_c, 10 t_c].
/// The `beta` field of the report holds s.
BracketReport half_limit_bracket(const SpectralData& spec, const SetMask& set, const std::vector<double>& s_grid,
                                 const QuadratureSpec& quad, double t_c);

}  // namespace grushin
