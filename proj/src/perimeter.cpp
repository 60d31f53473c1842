#include "grushin/perimeter.hpp"

#include <algorithm>
#include <cmath>

namespace grushin {

namespace {

void check_s(double s) {
  if (!(s > 0.0 && s < 0.5)) throw ConfigurationError("perimeters need s in (0, 1/2)");
}

double star_from(const EnergySpectrum& es, double s, const QuadratureSpec& quad) {
  return seminorm_heat(es, BesovParams{1.0, 1.0, 2.0 * s, 0.5}, quad).power;
}

double sup_from(const EnergySpectrum& es, double s, const std::vector<double>& t_grid) {
  double sup = 0.0;
  for (double t : t_grid) sup = std::max(sup, std::pow(t, -s) * es.energy(t));
  return sup;
}

Eigen::VectorXd ls_spectral(const SpectralData& spec, double s, const Eigen::VectorXd& c) {
  return spec.synthesize(spec.eigenvalues().array().pow(s).matrix().cwiseProduct(c));
}

bool near_boundary(const Grid& grid, const SetMask& set) {
  double h = 0.0;
  for (int a = 0; a < grid.dimension(); ++a) h = std::max(h, grid.spacing(a));
  for (Index g = 0; g < grid.size(); ++g)
    if (set.inside[g] && grid.boundary_distance(g) < 2.0 * h) return true;
  return false;
}

}  // namespace

EnergySpectrum perimeter_energy(const SpectralData& spec, const SetMask& set) {
  EnergySpectrum es;
  es.p = 1.0;
  es.lambda = spec.eigenvalues();
  es.weight = 2.0 * spec.analyze(set.indicator()).cwiseAbs2();
  es.lp_p = set.measure;
  return es;
}

double perimeter_star(const SpectralData& spec, const SetMask& set, double s, const QuadratureSpec& quad) {
  check_s(s);
  return star_from(perimeter_energy(spec, set), s, quad);
}

double perimeter_infty(const SpectralData& spec, const SetMask& set, double s, const std::vector<double>& t_grid) {
  check_s(s);
  return sup_from(perimeter_energy(spec, set), s, t_grid);
}

PerimeterResult perimeter(const GrushinOperator& op, const SpectralData& spec, const SetMask& set, double s,
                          const QuadratureSpec& quad) {
  check_s(s);
  PerimeterResult r;
  r.s = s;
  r.measure = set.measure;
  const EnergySpectrum es = perimeter_energy(spec, set);
  r.p_star = star_from(es, s, quad);
  r.p_inf = sup_from(es, s, log_quadrature(quad).t);
  if (set.count() > 0) {
    const OperatorResult ls = fractional_power_balakrishnan(op, spec, s, set.indicator(), quad);
    r.p_ls = compensated_l1_norm(spec.grid(), ls.values);
    r.ls_error = ls.error_estimate;
    for (const auto& w : ls.warnings) r.diagnostics.push_back(w);
  }
  if (near_boundary(spec.grid(), set)) r.diagnostics.push_back("set reaches the boundary layer; truncation affects it");
  return r;
}

MollificationReport perimeter_via_mollification(const SpectralData& spec, const SetMask& set, double s,
                                                std::vector<double> widths) {
  check_s(s);
  if (widths.empty()) throw ConfigurationError("mollification needs at least one width");
  std::sort(widths.begin(), widths.end(), std::greater<>());
  const Grid& grid = spec.grid();
  const Eigen::VectorXd c = spec.analyze(set.indicator());
  MollificationReport rep;
  rep.unmollified = compensated_l1_norm(grid, ls_spectral(spec, s, c));
  for (double eps : widths) {
    if (!(eps > 0.0)) throw ConfigurationError("mollifier widths must be > 0");
    const Eigen::VectorXd ce = (-eps * spec.eigenvalues().array()).exp().matrix().cwiseProduct(c);
    rep.width.push_back(eps);
    rep.value.push_back(compensated_l1_norm(grid, ls_spectral(spec, s, ce)));
  }
  rep.estimate = rep.value.back();
  return rep;
}

Eigen::VectorXd bin_levels(const Eigen::VectorXd& u, int levels) {
  if (levels < 1) throw ConfigurationError("binning needs at least one level");
  const double span = u.maxCoeff() - u.minCoeff();
  if (span == 0.0) return u;
  const double step = span / levels;
  return u.unaryExpr([step](double v) { return step * std::round(v / step); });
}

namespace {

CoareaReport coarea_impl(const SpectralData& spec, const Eigen::VectorXd& u, const Eigen::VectorXd& levels_of,
                         double s, const QuadratureSpec& quad) {
  check_s(s);
  const BesovParams bp{1.0, 1.0, 2.0 * s, 0.5};
  CoareaReport rep;
  rep.seminorm = seminorm_heat(spec, u, bp, quad).power;

  std::vector<double> br(levels_of.data(), levels_of.data() + levels_of.size());
  br.push_back(0.0);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  const Index N = u.size();
  for (size_t i = 0; i + 1 < br.size(); ++i) {
    const double lo = br[i], gap = br[i + 1] - br[i];
    Eigen::VectorXd ind(N);
    if (lo >= 0.0)
      for (Index g = 0; g < N; ++g) ind[g] = levels_of[g] > lo ? 1.0 : 0.0;
    else
      for (Index g = 0; g < N; ++g) ind[g] = levels_of[g] <= lo ? 1.0 : 0.0;
    rep.level_sum += gap * seminorm_heat(spec, ind, bp, quad).power;
    ++rep.levels;
  }
  rep.defect = rep.seminorm > 0.0 ? std::abs(rep.seminorm - rep.level_sum) / rep.seminorm : rep.level_sum;
  return rep;
}

}  // namespace

CoareaReport coarea_defect(const SpectralData& spec, const Eigen::VectorXd& u, double s, const QuadratureSpec& quad) {
  return coarea_impl(spec, u, u, s, quad);
}

CoareaReport coarea_defect_binned(const SpectralData& spec, const Eigen::VectorXd& u, double s,
                                  const QuadratureSpec& quad, int levels) {
  return coarea_impl(spec, u, bin_levels(u, levels), s, quad);
}

IsoperimetricScan isoperimetric_scan(const SpectralData& spec, const std::vector<LabelledSet>& family, double s,
                                     const QuadratureSpec& quad, const RasterContext& context,
                                     const std::vector<double>& factors) {
  check_s(s);
  const Grid& grid = spec.grid();
  const double Q = hom_dimension(grid.spec());
  const double expo = (Q - 2.0 * s) / Q;
  double h = 0.0;
  for (int a = 0; a < grid.dimension(); ++a) h = std::max(h, grid.spacing(a));
  const std::vector<double> tg = log_quadrature(quad).t;

  IsoperimetricScan scan;
  scan.s = s;
  scan.min_star = scan.min_inf = scan.min_moll = kInfinity;
  for (const auto& item : family) {
    const SetMask mask = rasterize(item.set, grid, context);
    IsoperimetricRow row;
    row.label = item.label;
    row.measure = mask.measure;
    const EnergySpectrum es = perimeter_energy(spec, mask);
    row.p_star = star_from(es, s, quad);
    row.p_inf = sup_from(es, s, tg);
    if (mask.measure > 0.0) {
      std::vector<double> widths;
      for (double f : factors) widths.push_back(f * std::pow(mask.measure, 2.0 / Q));
      if (*std::min_element(widths.begin(), widths.end()) < 2.0 * h * h)
        scan.diagnostics.push_back(item.label + ": mollifier narrower than two cells");
      row.p_moll = perimeter_via_mollification(spec, mask, s, widths).estimate;
      const double d = std::pow(mask.measure, expo);
      row.ratio_star = row.p_star / d;
      row.ratio_inf = row.p_inf / d;
      row.ratio_moll = row.p_moll / d;
    }
    scan.min_star = std::min(scan.min_star, row.ratio_star);
    scan.min_inf = std::min(scan.min_inf, row.ratio_inf);
    scan.min_moll = std::min(scan.min_moll, row.ratio_moll);
    scan.rows.push_back(row);
  }
  return scan;
}

double sobolev_route_ratio(const SpectralData& spec, const Eigen::VectorXd& u, double s, const QuadratureSpec& quad,
                           double c_emp) {
  check_s(s);
  const Grid& grid = spec.grid();
  const double Q = hom_dimension(grid.spec());
  const double n = seminorm_heat(spec, u, BesovParams{1.0, 1.0, 2.0 * s, 0.5}, quad).power;
  const double lhs = lp_norm(grid, u, Q / (Q - 2.0 * s));
  if (n == 0.0) return lhs == 0.0 ? 0.0 : kInfinity;
  return lhs * c_emp / n;
}

LimitScan small_s_limit_scan(const SpectralData& spec, const SetMask& set, const std::vector<double>& s_grid,
                             const QuadratureSpec& quad) {
  if (quad.tail_policy == TailPolicy::drop)
    throw ConfigurationError("the s -> 0 limit lives in the tail; tail_policy = drop is not allowed");
  for (double s : s_grid) check_s(s);
  const EnergySpectrum es = perimeter_energy(spec, set);
  std::vector<double> betas;
  for (double s : s_grid) betas.push_back(2.0 * s);
  // 2s P*_s is the beta N^1 scan at beta = 2s
  LimitScan scan = ms_limit_scan(es, betas, quad);
  scan.parameter = s_grid;
  for (auto& v : scan.value) v *= 0.5;
  for (auto& v : scan.head_part) v *= 0.5;
  scan.extrapolated = richardson(scan.parameter, scan.value, 0.0);
  scan.target = 2.0 * set.measure;
  return scan;
}

BracketReport half_limit_bracket(const SpectralData& spec, const SetMask& set, const std::vector<double>& s_grid,
                                 const QuadratureSpec& quad, double t_c) {
  for (double s : s_grid) check_s(s);
  std::vector<double> betas;
  for (double s : s_grid) betas.push_back(2.0 * s);
  BracketReport rep = bbm_bracket(perimeter_energy(spec, set), betas, quad, t_c);
  rep.beta = s_grid;
  return rep;
}

}  // namespace grushin
