#include "common.hpp"

#include "grushin/metric.hpp"
#include "grushin/perimeter.hpp"

#include <algorithm>
#include <cmath>

namespace grushin::lab {

namespace {

Point pt(int n, int m, double x, double y) {
  Point p = Point::Zero(n);
  p[0] = x;
  p[m] = y;
  return p;
}

Point sides(int n, int m, double hx, double hy) {
  Point p(n);
  for (int a = 0; a < n; ++a) p[a] = a < m ? hx : hy;
  return p;
}

RasterContext metric_context() {
  RasterContext ctx;
  ctx.metric_field = [](const Grid& grid, const Point& c) { return cc_distance(grid, grid.nearest_node(c)).values; };
  return ctx;
}

std::vector<double> s_values(const Config& config, const std::string& key, std::vector<double> fallback) {
  auto v = config.numbers(key, fallback);
  if (v.empty()) throw ConfigurationError(key + ": needs at least one entry");
  for (double s : v)
    if (!(s > 0.0 && s < 0.5)) throw ConfigurationError(key + ": entries must lie in (0, 1/2)");
  return v;
}

}  // namespace

ExperimentReport run_perimeter_coarea(const Config& config) {
  config.require_known(with_keys(common_keys(),
                                 {"perimeter.s_values", "perimeter.box_half_side", "coarea.s", "coarea.levels",
                                  "coarea.staircase", "small_s.s_grid", "half.s_grid", "half.t_c", "half.slack",
                                  "mollifier.factors", "quadrature.t_min", "quadrature.t_max",
                                  "quadrature.nodes_per_decade", "quadrature.tail_policy"}));
  Context ctx(config, "perimeter-coarea");
  const QuadratureSpec quad = quadrature_from(config);
  const Grid grid(grid_from(config));
  const GrushinOperator op = assemble(grid);
  const SpectralData spec = eigendecompose(op);
  const int n = grid.dimension(), m = grid.m();
  const double Q = hom_dimension(grid.spec());
  const double a = config.number("perimeter.box_half_side", 0.5);
  if (!(a > 0.0)) throw ConfigurationError("perimeter.box_half_side: must be > 0");
  const SetMask box = rasterize(box_set(Point::Zero(n), sides(n, m, a, a)), grid);
  if (box.count() == 0) throw ConfigurationError("perimeter.box_half_side: set misses every node");

  const auto factors = config.numbers("mollifier.factors", {0.2, 0.1, 0.05});
  DataTable& mt = ctx.table("mollification", {"s", "width", "value", "unmollified", "scaled_star"});
  for (double s : s_values(config, "perimeter.s_values", {0.1, 0.25, 0.4})) {
    const PerimeterResult r = perimeter(op, spec, box, s, quad);
    for (const auto& d : r.diagnostics) ctx.warn("perimeter s=" + format_number(s) + ": " + d);
    const double scaled = s / std::tgamma(1.0 - s) * r.p_star;
    ctx.row("identity", "|s/Gamma(1-s) P* - ||L^s 1_E||| / ||L^s 1_E||", kv({{"s", s}, {"measure", box.measure}}),
            std::abs(scaled - r.p_ls) / r.p_ls, 0.0, Comparison::at_most, 1e-8, "[PAPER: Eq (equ-sta)]");
    std::vector<double> widths;
    for (double f : factors) widths.push_back(f * std::pow(box.measure, 2.0 / Q));
    const MollificationReport mr = perimeter_via_mollification(spec, box, s, widths);
    double drop = 0.0;  // values must grow as the width shrinks
    for (size_t i = 0; i < mr.value.size(); ++i) {
      mt.rows.push_back({format_number(s), format_number(mr.width[i]), format_number(mr.value[i]),
                         format_number(mr.unmollified), format_number(scaled)});
      if (i > 0) drop = std::max(drop, mr.value[i - 1] - mr.value[i]);
    }
    ctx.row("prop-com", "mollified estimate vs s/Gamma(1-s) P*", kv({{"s", s}, {"width", mr.width.back()}}),
            mr.estimate, scaled, Comparison::at_most, 1e-8 * scaled, "[PAPER: Prop com]");
    ctx.row("prop-com", "largest decrease along shrinking widths", kv({{"s", s}}), drop, 0.0, Comparison::at_most,
            1e-12 * mr.unmollified, "[DERIVED: heat contraction in the compensated norm]");
  }

  // Coarea.
  {
    const double s = config.number("coarea.s", 0.25);
    if (!(s > 0.0 && s < 0.5)) throw ConfigurationError("coarea.s: must lie in (0, 1/2)");
    const int levels = config.integer("coarea.levels", 64);
    if (levels < 1) throw ConfigurationError("coarea.levels: must be >= 1");
    const auto stairs = config.numbers("coarea.staircase", {0.9, 0.6, 0.3});
    const std::string par = kv({{"s", s}});
    const CoareaReport ind = coarea_defect(spec, box.indicator(), s, quad);
    ctx.row("coarea", "defect for an indicator", par, ind.defect, 0.0, Comparison::at_most, 0.0, "[TRIVIAL]");
    Eigen::VectorXd st = Eigen::VectorXd::Zero(grid.size());
    for (double h : stairs) st += rasterize(box_set(Point::Zero(n), sides(n, m, h, h)), grid).indicator();
    const CoareaReport sr = coarea_defect(spec, st, s, quad);
    ctx.row("coarea", "defect for a staircase on nested boxes",
            kv({{"s", s}, {"levels", static_cast<double>(stairs.size())}}), sr.defect, 0.0, Comparison::at_most, 1e-10,
            "[PAPER: Eq (coarea1)]");
    BumpParams bp;
    bp.sx = bp.sy = 0.4;
    const CoareaReport br = coarea_defect_binned(spec, sample_bump(grid, bp), s, quad, levels);
    ctx.row("coarea", "defect for a bump against its binned level sum", kv({{"s", s}, {"levels", levels}}), br.defect,
            0.0, Comparison::at_most, 0.01, "[PAPER: Eq (coarea1)]");
  }

  // s -> 0.
  {
    const auto sg = s_values(config, "small_s.s_grid", {0.2, 0.1, 0.05, 0.025});
    const LimitScan scan = small_s_limit_scan(spec, box, sg, quad);
    DataTable& tab = ctx.table("small_s", {"s", "s_P_star", "target"});
    for (size_t i = 0; i < scan.parameter.size(); ++i)
      tab.rows.push_back({format_number(scan.parameter[i]), format_number(scan.value[i]), format_number(scan.target)});
    ctx.row("small-s", "extrapolated s P*_s at s -> 0", kv({{"measure", box.measure}}), scan.extrapolated,
            scan.target, Comparison::relative, 0.10, "[PAPER: Theorem s->0]");
  }

  // s -> 1/2.
  {
    const auto sg = s_values(config, "half.s_grid", {0.4, 0.425, 0.45, 0.475});
    const double t_c = config.number("half.t_c", 0.01);
    const double slack = config.number("half.slack", 0.10);
    if (!(t_c > 0.0)) throw ConfigurationError("half.t_c: must be > 0");
    const BracketReport br = half_limit_bracket(spec, box, sg, quad, t_c);
    const std::string par = kv({{"t_c", t_c}});
    ctx.row("half-limit", "extrapolated (1-2s) P*_s above lower bracket", par, br.extrapolated, br.lower,
            Comparison::at_least, slack * br.lower, "[PAPER: Prop BBM1]");
    ctx.row("half-limit", "extrapolated (1-2s) P*_s below upper bracket", par, br.extrapolated, br.upper,
            Comparison::at_most, slack * br.upper, "[PAPER: Prop BBM1]");
  }
  return ctx.report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_isoperimetric_scan(const Config& config) {
  config.require_known(with_keys(common_keys(),
                                 {"iso.s_values", "iso.coarse_points", "iso.ladder", "iso.ball_radius",
                                  "iso.ball_centers", "mollifier.factors", "quadrature.t_min", "quadrature.t_max",
                                  "quadrature.nodes_per_decade", "quadrature.tail_policy"}));
  Context ctx(config, "isoperimetric-scan");
  const QuadratureSpec quad = quadrature_from(config);
  const GridSpec base = grid_from(config);
  const int n = base.dimension(), m = base.m;
  const auto ss = s_values(config, "iso.s_values", {0.1, 0.25, 0.4});
  const int coarse = config.integer("iso.coarse_points", 48);
  const auto ladder = config.numbers("iso.ladder", {1.0, 1.25, 1.5, 2.0});
  const double radius = config.number("iso.ball_radius", 0.6);
  const auto centers = config.numbers("iso.ball_centers", {0.0, 0.5, 1.0});
  const auto factors = config.numbers("mollifier.factors", {0.2, 0.1, 0.05});
  for (double l : ladder)
    if (!(l > 0.0)) throw ConfigurationError("iso.ladder: entries must be > 0");
  if (!(radius > 0.0)) throw ConfigurationError("iso.ball_radius: must be > 0");
  if (factors.empty()) throw ConfigurationError("mollifier.factors: needs at least one entry");

  const SetSpec rung = box_set(Point::Zero(n), sides(n, m, 0.4, 0.2));
  std::vector<LabelledSet> family{
      {"box 0.5x0.5", box_set(Point::Zero(n), sides(n, m, 0.5, 0.5))},
      {"box 0.8x0.3", box_set(Point::Zero(n), sides(n, m, 0.8, 0.3))},
      {"box 0.3x0.8", box_set(Point::Zero(n), sides(n, m, 0.3, 0.8))},
  };
  for (double c : centers) family.push_back({"metric ball x=" + format_number(c), metric_ball_set(pt(n, m, c, 0), radius)});
  for (double l : ladder) family.push_back({"ladder " + format_number(l), dilate_set(l, rung)});
  const RasterContext rc = metric_context();

  DataTable& tab = ctx.table("isoperimetric", {"points", "s", "set", "measure", "p_star", "p_inf", "p_moll",
                                               "ratio_star", "ratio_inf", "ratio_moll"});
  auto record = [&](int pts, const IsoperimetricScan& scan) {
    for (const auto& r : scan.rows)
      tab.rows.push_back({std::to_string(pts), format_number(scan.s), r.label, format_number(r.measure),
                          format_number(r.p_star), format_number(r.p_inf), format_number(r.p_moll),
                          format_number(r.ratio_star), format_number(r.ratio_inf), format_number(r.ratio_moll)});
    for (const auto& d : scan.diagnostics) ctx.warn("s=" + format_number(scan.s) + " points=" + std::to_string(pts) + ": " + d);
  };
  const std::string main1 = "[PAPER: Theorem main1]";

  // family on the coarse and the configured grid
  const int levels[2] = {coarse, base.points[0]};
  std::vector<IsoperimetricScan> scans[2];
  for (int li = 0; li < 2; ++li) {
    const Grid grid(grid_from(config, levels[li]));
    const SpectralData spec = eigendecompose(assemble(grid));
    for (double s : ss) {
      scans[li].push_back(isoperimetric_scan(spec, family, s, quad, rc, factors));
      record(levels[li], scans[li].back());
    }
    if (li == 1) {
      // Sobolev route on staircases of nested ladder sets; their level sets are family members.
      std::vector<Eigen::VectorXd> ind;
      for (double l : ladder) ind.push_back(rasterize(dilate_set(l, rung), grid).indicator());
      std::vector<Eigen::VectorXd> stairs;
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(grid.size());
      for (const auto& v : ind) {
        acc += v;
        if (&v != &ind.front()) stairs.push_back(acc);  // at least two levels
      }
      if (ind.size() >= 3) stairs.push_back(ind[0] + 2.0 * ind[2]);
      for (size_t si = 0; si < ss.size(); ++si) {
        const double c = scans[1][si].min_star;
        double worst = 0.0;
        for (const auto& u : stairs) worst = std::max(worst, sobolev_route_ratio(spec, u, ss[si], quad, c));
        ctx.row("sobolev-route", "largest ||u||_{Q/(Q-2s)} C_emp / N(u) over staircases",
                kv({{"s", ss[si]}, {"staircases", static_cast<double>(stairs.size())}}), worst, 1.0,
                Comparison::at_most, 1e-12, "[PAPER: Theorem main2]");
      }
    }
  }

  for (size_t si = 0; si < ss.size(); ++si) {
    const double s = ss[si];
    const IsoperimetricScan& f = scans[1][si];
    double smallest = kInfinity;
    for (const auto& r : f.rows) smallest = std::min({smallest, r.ratio_star, r.ratio_inf, r.ratio_moll});
    ctx.row("positivity", "smallest ratio over family and perimeters", kv({{"s", s}, {"points", levels[1]}}), smallest,
            0.0, Comparison::at_least, 0.0, main1);
    const IsoperimetricScan& g = scans[0][si];
    const std::string ref = kv({{"s", s}, {"from", coarse}, {"to", levels[1]}});
    ctx.row("refinement", "family minimum P*", ref, f.min_star, g.min_star, Comparison::relative, 0.10, main1);
    ctx.row("refinement", "family minimum P_inf", ref, f.min_inf, g.min_inf, Comparison::relative, 0.10, main1);
    ctx.row("refinement", "family minimum mollified", ref, f.min_moll, g.min_moll, Comparison::relative, 0.10, main1);
  }

  // Dilation ladder on paired grids: the rung scaled by lambda on the grid scaled by lambda.
  {
    DataTable& lt = ctx.table("ladder", {"s", "lambda", "measure", "ratio_star", "ratio_inf", "ratio_moll"});
    std::vector<std::vector<IsoperimetricRow>> rows(ss.size());
    for (double l : ladder) {
      const Grid grid(dilated_spec(base, l));
      const SpectralData spec = eigendecompose(assemble(grid));
      for (size_t si = 0; si < ss.size(); ++si) {
        const IsoperimetricScan sc = isoperimetric_scan(spec, {{"ladder", dilate_set(l, rung)}}, ss[si], quad, rc, factors);
        const auto& r = sc.rows.front();
        rows[si].push_back(r);
        lt.rows.push_back({format_number(ss[si]), format_number(l), format_number(r.measure),
                           format_number(r.ratio_star), format_number(r.ratio_inf), format_number(r.ratio_moll)});
      }
    }
    for (size_t si = 0; si < ss.size(); ++si) {
      auto spread = [&](double IsoperimetricRow::*f) {
        double lo = kInfinity, hi = 0.0;
        for (const auto& r : rows[si]) lo = std::min(lo, r.*f), hi = std::max(hi, r.*f);
        return hi / lo - 1.0;
      };
      const std::string par = kv({{"s", ss[si]}, {"rungs", static_cast<double>(ladder.size())}});
      ctx.row("dilation-ladder", "relative spread of P* ratio", par, spread(&IsoperimetricRow::ratio_star), 0.0,
              Comparison::at_most, 0.05, "[PAPER: Theorem main1]");
      ctx.row("dilation-ladder", "relative spread of P_inf ratio", par, spread(&IsoperimetricRow::ratio_inf), 0.0,
              Comparison::at_most, 0.05, "[PAPER: Theorem main1]");
      ctx.row("dilation-ladder", "relative spread of mollified ratio", par, spread(&IsoperimetricRow::ratio_moll), 0.0,
              Comparison::at_most, 0.05, "[PAPER: Theorem main1]");
    }
  }
  return ctx.report;
}

}  // namespace grushin::lab
