#include "common.hpp"

#include "grushin/metric.hpp"

#include <algorithm>
#include <cmath>

namespace grushin::lab {

namespace {

Point on_axis(int n, double x0, double y0 = 0.0, int m = 1) {
  Point p = Point::Zero(n);
  p[0] = x0;
  p[m] = y0;
  return p;
}

}  // namespace

ExperimentReport run_metric_volumes(const Config& config) {
  config.require_known(with_keys(common_keys(), {"metric.centers", "metric.radius", "metric.cells", "metric.band",
                                                 "metric.slope_cells", "metric.slope_radii", "metric.doubling_bound",
                                                 "metric.oracle_cells", "metric.oracle_refine"}));
  Context ctx(config, "metric-volumes");
  const GridSpec base = grid_from(config);
  const double Q = hom_dimension(base);
  const int m = base.m, k = base.k, n = base.dimension();
  const double alpha = base.alpha;

  // Euclidean control on the configured grid with alpha = 0.
  {
    GridSpec e = base;
    e.alpha = 0.0;
    const Grid grid(e);
    const Index src = grid.nearest_node(on_axis(n, 0.1, -0.2, m));
    const DistanceField f = cc_distance(grid, src);
    const Point c = grid.point(src);
    double err = 0.0, h = 0.0;
    for (Index g = 0; g < grid.size(); ++g) err = std::max(err, std::abs(f.values[g] - (grid.point(g) - c).norm()));
    for (int a = 0; a < n; ++a) h = std::max(h, grid.spacing(a));
    ctx.row("eikonal", "alpha=0 max error vs Euclidean distance", kv({{"h", h}}), err, 2.0 * h, Comparison::at_most,
            0.0, "[TRIVIAL]");
  }

  // Ball volumes against r^n (r + |x|)^{k alpha}.
  const auto centers = config.numbers("metric.centers", {0.0, 0.5, 1.0});
  const double rmax = config.number("metric.radius", 0.8);
  const int cells = config.integer("metric.cells", 40);
  const double band = config.number("metric.band", 4.0);
  const double dbound = config.number("metric.doubling_bound", std::pow(2.0, Q + 1.0));
  if (!(rmax > 0.0)) throw ConfigurationError("metric.radius: must be > 0");
  if (cells < 4) throw ConfigurationError("metric.cells: must be >= 4");
  {
    DataTable& tab = ctx.table("ball_volumes", {"x0", "r", "volume", "model", "ratio"});
    const VolumeModel vm(base);
    double lo = kInfinity, hi = 0.0, dmax = 0.0;
    for (double x0 : centers) {
      const Grid grid(ball_grid(m, k, alpha, x0, rmax, cells));
      const DistanceField f = cc_distance(grid, grid.nearest_node(on_axis(n, x0, 0.0, m)));
      if (!f.converged) ctx.warn("eikonal did not converge at x0=" + format_number(x0));
      for (int i = 1; i <= 8; ++i) {
        const double r = rmax * i / 8.0;
        const BallVolume b = ball_volume(grid, f, r);
        if (b.truncated) ctx.warn("ball truncated at x0=" + format_number(x0) + " r=" + format_number(r));
        const double ratio = b.volume / vm(x0, r);
        tab.rows.push_back({format_number(x0), format_number(r), format_number(b.volume), format_number(vm(x0, r)),
                            format_number(ratio)});
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        if (2 * i <= 8) dmax = std::max(dmax, ball_volume(grid, f, 2 * r).volume / b.volume);
      }
    }
    ctx.row("ball-volume", "smallest volume/model ratio", kv({{"r_max", rmax}, {"cells", cells}}), lo, 1.0 / band,
            Comparison::at_least, 0.0, "[PAPER: Eq (B)]");
    ctx.row("ball-volume", "largest volume/model ratio", kv({{"r_max", rmax}, {"cells", cells}}), hi, band,
            Comparison::at_most, 0.0, "[PAPER: Eq (B)]");
    ctx.row("doubling", "largest |B(2r)|/|B(r)|", kv({{"r_max", rmax}}), dmax, dbound, Comparison::at_most, 0.0,
            "[PAPER: Eq (Re)]");
  }

  // Scaling slopes: Q at the degenerate plane, n far from it.
  {
    const auto radii = config.numbers("metric.slope_radii", {0.05, 0.15});
    const int sc = config.integer("metric.slope_cells", 160);
    if (radii.size() != 2 || !(radii[0] > 0.0 && radii[1] > radii[0]))
      throw ConfigurationError("metric.slope_radii: expected [r_lo, r_hi] with 0 < r_lo < r_hi");
    std::vector<double> rg;
    for (int i = 0; i <= 8; ++i) rg.push_back(radii[0] * std::pow(radii[1] / radii[0], i / 8.0));
    const double reach = radii[1] * 2.0;
    {
      const Grid grid(ball_grid(m, k, alpha, 0.0, reach, sc));
      const LogFit f = volume_scaling_fit(grid, cc_distance(grid, grid.nearest_node(on_axis(n, 0.0, 0.0, m))), rg);
      for (const auto& d : f.diagnostics) ctx.warn("slope at x=0: " + d);
      ctx.row("ball-volume", "log-log slope at x=0", kv({{"r_lo", radii[0]}, {"r_hi", radii[1]}, {"cells", sc}}),
              f.slope, Q, Comparison::relative, 0.05, "[PAPER: Eq (B)]");
    }
    {
      const Grid grid(ball_grid(m, k, alpha, 1.0, reach, sc / 2));
      const LogFit f = volume_scaling_fit(grid, cc_distance(grid, grid.nearest_node(on_axis(n, 1.0, 0.0, m))), rg);
      for (const auto& d : f.diagnostics) ctx.warn("slope at x=1: " + d);
      ctx.row("ball-volume", "log-log slope at |x|=1 (r << |x|)",
              kv({{"r_lo", radii[0]}, {"r_hi", radii[1]}, {"cells", sc / 2}}), f.slope, static_cast<double>(n),
              Comparison::relative, 0.10, "[PAPER: Eq (B)]");
    }
  }

  // Independent oracle: shortest paths on a finer grid graph.
  {
    const int oc = config.integer("metric.oracle_cells", 20);
    const int refine = config.integer("metric.oracle_refine", 4);
    if (oc < 4 || refine < 1) throw ConfigurationError("metric.oracle_cells: must be >= 4 (oracle_refine >= 1)");
    const double r = 0.5;
    const Grid coarse(ball_grid(m, k, alpha, 0.0, r, oc));
    const Grid fine(ball_grid(m, k, alpha, 0.0, r, oc * refine));
    const DistanceField f = cc_distance(coarse, coarse.nearest_node(Point::Zero(n)));
    const Eigen::VectorXd dg = graph_distance(fine, fine.nearest_node(Point::Zero(n)));
    double worst = 0.0;
    for (const Point& p : {on_axis(n, 0.0, 0.08, m), on_axis(n, 0.3, 0.0, m), on_axis(n, 0.2, 0.05, m)}) {
      const Index c = coarse.nearest_node(p);
      const double a = f.values[c];
      const double b = dg[fine.nearest_node(coarse.point(c))];
      worst = std::max(worst, std::abs(a - b) / b);
    }
    ctx.row("eikonal", "relative mismatch vs grid-graph shortest paths", kv({{"cells", oc}, {"refine", refine}}),
            worst, 0.0, Comparison::at_most, 0.03, "[DERIVED: independent discretization]");
  }
  return ctx.report;
}

}  // namespace grushin::lab
