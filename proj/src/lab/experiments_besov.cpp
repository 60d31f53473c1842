#include "common.hpp"

#include "grushin/besov.hpp"
#include "grushin/metric.hpp"
#include "grushin/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace grushin::lab {

namespace {

struct Band {
  double lo = kInfinity, hi = 0.0, mean = 0.0;
  double width() const { return hi / lo; }
};

Band band_of(const std::vector<double>& r) {
  Band b;
  for (double v : r) {
    b.lo = std::min(b.lo, v);
    b.hi = std::max(b.hi, v);
    b.mean += v / r.size();
  }
  return b;
}

}  // namespace

ExperimentReport run_besov_equivalence(const Config& config) {
  config.require_known(with_keys(common_keys(),
                                 {"equivalence.functions", "equivalence.coarse_points", "equivalence.beta",
                                  "equivalence.sub_beta", "equivalence.stride", "equivalence.max_band",
                                  "minmax.pairs", "quadrature.t_min", "quadrature.t_max", "quadrature.nodes_per_decade",
                                  "quadrature.tail_policy"}));
  Context ctx(config, "besov-equivalence");
  const QuadratureSpec quad = quadrature_from(config);
  const int nf = config.integer("equivalence.functions", 10);
  const int coarse = config.integer("equivalence.coarse_points", 48);
  const double beta = config.number("equivalence.beta", 0.3);
  const double sub_beta = config.number("equivalence.sub_beta", 0.4);
  const int stride = config.integer("equivalence.stride", 2);
  const double max_band = config.number("equivalence.max_band", 20.0);
  if (nf < 2) throw ConfigurationError("equivalence.functions: must be >= 2");
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigurationError("equivalence.beta: must lie in (0,1)");
  if (!(sub_beta > 0.0 && sub_beta < 1.0)) throw ConfigurationError("equivalence.sub_beta: must lie in (0,1)");
  const GridSpec fine_spec = grid_from(config);
  const auto bumps = bump_family(ctx.seed, nf, 0.6, 0.25, 0.5);

  // heat at 2 beta vs differences at beta; subordinate (s = 1/2) at 2 beta' vs differences at beta'/2
  const BesovParams heat{1, 1, 2 * beta, 0.5}, diff{1, 1, beta, 0.5};
  const BesovParams sub{1, 1, 2 * sub_beta, 0.5}, sub_diff{1, 1, 0.5 * sub_beta, 0.5};

  DataTable& tab = ctx.table("equivalence_ratios", {"points", "function", "heat", "difference", "ratio_com1",
                                                    "subordinate", "difference_sub", "ratio_com2"});
  Band b1[2], b2[2];
  const int levels[2] = {coarse, fine_spec.points[0]};
  for (int li = 0; li < 2; ++li) {
    const Grid grid(grid_from(config, levels[li]));
    const SpectralData spec = eigendecompose(assemble(grid));
    const DistanceTable table =
        build_distance_table(grid, [&grid](Index s) { return cc_distance(grid, s).values; }, stride);
    const QuadratureSpec rq = difference_quadrature(table);
    std::vector<double> r1(nf), r2(nf);
    for (int i = 0; i < nf; ++i) {
      const Eigen::VectorXd u = sample_bump(grid, bumps[i]);
      const EnergySpectrum es = energy_spectrum(spec, u, 1.0);
      const double nh = seminorm_heat(es, heat, quad).value;
      const double nd = seminorm_difference(u, diff, table, rq).value;
      const double ns = seminorm_subordinate(es, sub, quad).value;
      const double nsd = seminorm_difference(u, sub_diff, table, rq).value;
      r1[i] = nh / nd;
      r2[i] = ns / nsd;
      tab.rows.push_back({std::to_string(levels[li]), std::to_string(i), format_number(nh), format_number(nd),
                          format_number(r1[i]), format_number(ns), format_number(nsd), format_number(r2[i])});
    }
    b1[li] = band_of(r1);
    b2[li] = band_of(r2);
  }
  const std::string c1 = "[PAPER: Theorem com-1]", c2 = "[PAPER: Theorem com-2]";
  for (int li = 0; li < 2; ++li) {
    ctx.row("com-1", "band width max/min", kv({{"points", levels[li]}, {"beta", beta}, {"p", 1}, {"q", 1}}),
            b1[li].width(), max_band, Comparison::at_most, 0.0, c1);
    ctx.row("com-1", "smallest ratio heat/difference", kv({{"points", levels[li]}, {"beta", beta}}), b1[li].lo, 0.0,
            Comparison::at_least, 0.0, c1);
    ctx.row("com-2", "band width max/min", kv({{"points", levels[li]}, {"beta", sub_beta}, {"s", 0.5}}),
            b2[li].width(), max_band, Comparison::at_most, 0.0, c2);
    ctx.row("com-2", "smallest ratio subordinate/difference", kv({{"points", levels[li]}, {"beta", sub_beta}}),
            b2[li].lo, 0.0, Comparison::at_least, 0.0, c2);
  }
  const std::string ref = kv({{"from", coarse}, {"to", levels[1]}});
  ctx.row("com-1", "band width under refinement", ref, b1[1].width(), b1[0].width(), Comparison::relative, 0.30,
          "[DERIVED: refinement stability]");
  ctx.row("com-1", "mean ratio under refinement", ref, b1[1].mean, b1[0].mean, Comparison::relative, 0.30,
          "[DERIVED: refinement stability]");
  ctx.row("com-2", "band width under refinement", ref, b2[1].width(), b2[0].width(), Comparison::relative, 0.30,
          "[DERIVED: refinement stability]");
  ctx.row("com-2", "mean ratio under refinement", ref, b2[1].mean, b2[0].mean, Comparison::relative, 0.30,
          "[DERIVED: refinement stability]");

  // Min-max property on random smooth pairs.
  {
    const int pairs = config.integer("minmax.pairs", 50);
    if (pairs < 1) throw ConfigurationError("minmax.pairs: must be >= 1");
    const Grid grid(fine_spec);
    const SpectralData spec = eigendecompose(assemble(grid));
    Rng rng(ctx.seed + 7);
    const auto fam = bump_family(ctx.seed + 8, 2 * pairs, 0.8, 0.2, 0.5);
    // rows: p=q=1, p=q=2, p=1 q=inf
    std::vector<std::array<double, 3>> rel(pairs);
    std::vector<double> amp(2 * pairs);
    for (auto& a : amp) a = rng.uniform(0.5, 1.5);
    parallel_for(pairs, [&](Index i) {
      BumpParams a = fam[2 * i], b = fam[2 * i + 1];
      a.amp = amp[2 * i];
      b.amp = amp[2 * i + 1];
      const Eigen::VectorXd u1 = sample_bump(grid, a), u2 = sample_bump(grid, b);
      const Eigen::VectorXd hi = u1.cwiseMax(u2), lo = u1.cwiseMin(u2);
      for (int k = 0; k < 2; ++k) {
        const double p = k == 0 ? 1.0 : 2.0;
        const EnergySpectrum eh = energy_spectrum(spec, hi, p), el = energy_spectrum(spec, lo, p),
                             e1 = energy_spectrum(spec, u1, p), e2 = energy_spectrum(spec, u2, p);
        double rhs = 0.0;
        const double d = minmax_defect(eh, el, e1, e2, BesovParams{p, p, 0.5, 0.5}, quad, &rhs);
        rel[i][k] = d / rhs;
        if (k == 0) {
          const double dq = minmax_defect(eh, el, e1, e2, BesovParams{1, kInfinity, 0.5, 0.5}, quad, &rhs);
          rel[i][2] = dq / rhs;
        }
      }
    });
    const char* names[3] = {"p=q=1", "p=q=2", "p=1 q=inf"};
    const double pv[3] = {1, 2, 1}, qv[3] = {1, 2, kInfinity};
    for (int k = 0; k < 3; ++k) {
      double worst = -kInfinity;
      for (const auto& r : rel) worst = std::max(worst, r[k]);
      ctx.row("min-max", std::string("largest defect / rhs, ") + names[k],
              kv({{"pairs", pairs}, {"p", pv[k]}, {"q", qv[k]}, {"beta", 0.5}}), worst, 0.0, Comparison::at_most,
              1e-10, "[PAPER: Lemma max]");
    }
  }
  return ctx.report;
}

// ---------------------------------------------------------------------------

ExperimentReport run_besov_limits(const Config& config) {
  config.require_known(with_keys(common_keys(), {"limits.beta_grid", "limits.p_values", "limits.bump_width",
                                                 "bbm.t_c", "bbm.beta_grid", "bbm.slack", "quadrature.t_min",
                                                 "quadrature.t_max", "quadrature.nodes_per_decade",
                                                 "quadrature.tail_policy"}));
  Context ctx(config, "besov-limits");
  const QuadratureSpec quad = quadrature_from(config);
  const auto betas = config.numbers("limits.beta_grid", {0.4, 0.2, 0.1, 0.05});
  const auto ps = config.numbers("limits.p_values", {1.0, 2.0});
  const double width = config.number("limits.bump_width", 0.3);
  if (betas.size() < 2) throw ConfigurationError("limits.beta_grid: needs at least two entries");
  for (double b : betas)
    if (!(b > 0.0 && b < 1.0)) throw ConfigurationError("limits.beta_grid: entries must lie in (0,1)");
  for (double p : ps)
    if (!(p >= 1.0)) throw ConfigurationError("limits.p_values: entries must be >= 1");
  if (!(width > 0.0)) throw ConfigurationError("limits.bump_width: must be > 0");

  const Grid grid(grid_from(config));
  const SpectralData spec = eigendecompose(assemble(grid));
  BumpParams bp;
  bp.sx = bp.sy = width;
  const Eigen::VectorXd u = sample_bump(grid, bp);

  DataTable& tab = ctx.table("ms_limit", {"p", "beta", "beta_N_p", "head_part", "target"});
  for (double p : ps) {
    const EnergySpectrum es = energy_spectrum(spec, u, p);
    const LimitScan scan = ms_limit_scan(es, betas, quad);
    for (size_t i = 0; i < scan.parameter.size(); ++i)
      tab.rows.push_back({format_number(p), format_number(scan.parameter[i]), format_number(scan.value[i]),
                          format_number(scan.head_part[i]), format_number(scan.target)});
    for (const auto& d : scan.diagnostics) ctx.warn("ms scan p=" + format_number(p) + ": " + d);
    ctx.row("ms-limit", "extrapolated beta N^p at beta -> 0", kv({{"p", p}, {"points", static_cast<double>(betas.size())}}),
            scan.extrapolated, scan.target, Comparison::relative, 0.10, "[PAPER: Theorem MS1]");
  }

  {
    const double t_c = config.number("bbm.t_c", 0.01);
    const auto bg = config.numbers("bbm.beta_grid", {0.8, 0.85, 0.9, 0.95});
    const double slack = config.number("bbm.slack", 0.05);
    if (!(t_c > 0.0)) throw ConfigurationError("bbm.t_c: must be > 0");
    const BracketReport br = bbm_bracket(energy_spectrum(spec, u, 1.0), bg, quad, t_c);
    DataTable& bt = ctx.table("bbm", {"beta", "one_minus_beta_N_p"});
    for (size_t i = 0; i < br.beta.size(); ++i)
      bt.rows.push_back({format_number(br.beta[i]), format_number(br.value[i])});
    const std::string par = kv({{"p", 1}, {"t_c", t_c}});
    ctx.row("bbm", "extrapolated (1-beta) N^p above lower bracket", par, br.extrapolated, br.lower,
            Comparison::at_least, slack * br.lower, "[PAPER: Prop BBM]");
    ctx.row("bbm", "extrapolated (1-beta) N^p below upper bracket", par, br.extrapolated, br.upper,
            Comparison::at_most, slack * br.upper, "[PAPER: Prop BBM]");
  }
  return ctx.report;
}

}  // namespace grushin::lab
