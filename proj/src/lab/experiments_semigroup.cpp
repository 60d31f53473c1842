#include "common.hpp"

#include "grushin/metric.hpp"
#include "grushin/semigroup.hpp"

#include <algorithm>
#include <cmath>

namespace grushin::lab {

namespace {

double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

std::vector<Eigen::VectorXd> bump_vectors(const Grid& grid, std::uint64_t seed, int count) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& b : bump_family(seed, count, 0.8, 0.2, 0.5)) out.push_back(sample_bump(grid, b));
  return out;
}

}  // namespace

ExperimentReport run_semigroup_checks(const Config& config) {
  config.require_known(with_keys(common_keys(), {"semigroup.t_values", "semigroup.s_values", "semigroup.functions",
                                                 "balakrishnan.nodes", "balakrishnan.t_min", "balakrishnan.t_max"}));
  Context ctx(config, "semigroup-checks");
  const Grid grid(grid_from(config));
  const GrushinOperator op = assemble(grid);
  const SpectralData spec = eigendecompose(op);
  const auto ts = config.numbers("semigroup.t_values", {0.01, 0.1, 1.0});
  const auto ss = config.numbers("semigroup.s_values", {0.25, 0.5, 0.75});
  const int nf = config.integer("semigroup.functions", 3);
  if (nf < 1) throw ConfigurationError("semigroup.functions: must be >= 1");
  for (double t : ts)
    if (!(t > 0.0)) throw ConfigurationError("semigroup.t_values: entries must be > 0");
  for (double s : ss)
    if (!(s > 0.0 && s < 1.0)) throw ConfigurationError("semigroup.s_values: entries must lie in (0,1)");
  const auto us = bump_vectors(grid, ctx.seed, nf);

  ctx.row("spectral", "eigen residual", kv({{"samples", 64}}), spec.max_residual(op, 64), 0.0, Comparison::at_most,
          1e-8, "[TRIVIAL]");
  ctx.row("spectral", "gram defect", kv({{"samples", 64}}), spec.gram_defect(64), 0.0, Comparison::at_most, 1e-8,
          "[TRIVIAL]");

  // Algebraic properties; each row is the worst case over functions.
  const std::string gp = "[PAPER: Prop G-Pro]";
  for (double t : ts) {
    double law = 0, adj = 0, pos = 0, commute = 0;
    double contr[3] = {0, 0, 0};
    const double ps[3] = {1.0, 2.0, kInfinity};
    for (size_t i = 0; i < us.size(); ++i) {
      const auto& u = us[i];
      const auto& v = us[(i + 1) % us.size()];
      const Eigen::VectorXd pu = heat_apply(spec, t, u);
      // spectral composition against the Krylov route at t + t/2
      law = std::max(law, rel(heat_apply(spec, t, heat_apply(spec, 0.5 * t, u)),
                              heat_apply_krylov(op, 1.5 * t, u)));
      adj = std::max(adj, std::abs(inner(grid, pu, v) - inner(grid, u, heat_apply(spec, t, v))) /
                              (lp_norm(grid, u, 2) * lp_norm(grid, v, 2)));
      // bumps are nonnegative
      pos = std::max(pos, std::max(0.0, -pu.minCoeff()) / pu.maxCoeff());
      for (int k = 0; k < 3; ++k) {
        const double nu = lp_norm(grid, u, ps[k]);
        contr[k] = std::max(contr[k], std::max(0.0, lp_norm(grid, pu, ps[k]) - nu) / nu);
      }
      for (double s : ss)
        commute = std::max(commute, rel(fractional_power_spectral(spec, s, pu),
                                        heat_apply(spec, t, fractional_power_spectral(spec, s, u))));
    }
    ctx.row("semigroup-algebra", "semigroup law", kv({{"t", t}}), law, 0.0, Comparison::at_most, 1e-8, gp);
    ctx.row("semigroup-algebra", "self-adjointness", kv({{"t", t}}), adj, 0.0, Comparison::at_most, 1e-8, gp);
    ctx.row("semigroup-algebra", "positivity", kv({{"t", t}}), pos, 0.0, Comparison::at_most, 1e-8, gp);
    ctx.row("semigroup-algebra", "contraction", kv({{"t", t}, {"p", 1}}), contr[0], 0.0, Comparison::at_most, 1e-8, gp);
    ctx.row("semigroup-algebra", "contraction", kv({{"t", t}, {"p", 2}}), contr[1], 0.0, Comparison::at_most, 1e-8, gp);
    ctx.row("semigroup-algebra", "contraction", kv({{"t", t}, {"p", kInfinity}}), contr[2], 0.0, Comparison::at_most,
            1e-8, gp);
    ctx.row("semigroup-algebra", "commutation with fractional powers", kv({{"t", t}}), commute, 0.0,
            Comparison::at_most, 1e-8, "[PAPER: Lemma co]");
  }
  for (double s : ss) {
    double a = 0, b = 0;
    for (const auto& u : us) {
      a = std::max(a, rel(riesz_potential(spec, 2 * s, fractional_power_spectral(spec, s, u)), u));
      b = std::max(b, rel(fractional_power_spectral(spec, s, riesz_potential(spec, 2 * s, u)), u));
    }
    ctx.row("semigroup-algebra", "Riesz inversion I(L^s u) = u", kv({{"s", s}}), a, 0.0, Comparison::at_most, 1e-8,
            "[PAPER: Lemma FF]");
    ctx.row("semigroup-algebra", "Riesz inversion L^s(I u) = u", kv({{"s", s}}), b, 0.0, Comparison::at_most, 1e-8,
            "[PAPER: Lemma FF]");
  }

  // Mass conservation away from the truncation.
  {
    const double d1 = stochastic_completeness_defect(spec, 0.01, 1.0);
    const double d2 = stochastic_completeness_defect(spec, 0.1, 1.0);
    ctx.row("stochastic-completeness", "interior defect", kv({{"t", 0.01}, {"margin", 1}}), d1, 0.0,
            Comparison::at_most, 1e-3, "[PAPER: Eq (SC)]");
    ctx.row("stochastic-completeness", "interior defect", kv({{"t", 0.1}, {"margin", 1}}), d2, 0.0,
            Comparison::at_most, 5e-2, "[PAPER: Eq (SC)]");
    const double hw = *std::min_element(grid.spec().half_width.begin(), grid.spec().half_width.end());
    for (double t : {0.01, 0.1}) {
      double increase = 0.0, prev = kInfinity;
      for (double f : {0.25, 0.375, 0.5, 0.625}) {
        const double d = stochastic_completeness_defect(spec, t, f * hw);
        increase = std::max(increase, d - prev);
        prev = d;
      }
      ctx.row("stochastic-completeness", "largest increase under margin growth", kv({{"t", t}}), increase, 0.0,
              Comparison::at_most, 0.0, "[DERIVED: boundary loss decays inward]");
    }
  }

  // Fractional powers by quadrature.
  {
    QuadratureSpec q;
    q.t_min = config.number("balakrishnan.t_min", 1e-6);
    q.t_max = config.number("balakrishnan.t_max", 1e3);
    q.node_count = config.integer("balakrishnan.nodes", 200);
    q.validate();
    for (double s : {0.25, 0.5, 0.75}) {
      double worst = 0.0;
      for (const auto& u : us) {
        const OperatorResult r = fractional_power_balakrishnan(op, spec, s, u, q);
        worst = std::max(worst, rel(r.values, fractional_power_spectral(spec, s, u)));
        for (const auto& w : r.warnings) ctx.warn("balakrishnan s=" + format_number(s) + ": " + w);
      }
      ctx.row("balakrishnan", "relative L2 mismatch vs spectral",
              kv({{"s", s}, {"nodes", q.node_count}, {"t_min", q.t_min}, {"t_max", q.t_max}}), worst, 0.0,
              Comparison::at_most, 1e-3, "[PAPER: Eq (-G)]");
    }
  }

  // Subordination at s = 1/2.
  {
    SubordinatorSpec spectral_route, poisson_route;
    spectral_route.s = poisson_route.s = 0.5;
    poisson_route.route = SubordinationRoute::poisson_quadrature;
    for (double t : {0.1, 0.5, 1.0}) {
      ctx.row("subordination", "Poisson density mass", kv({{"t", t}}), poisson_mass(t, poisson_route.sigma_quadrature),
              1.0, Comparison::absolute, 1e-8, "[PAPER: Eq (possion)]");
      double worst = 0.0;
      for (const auto& u : us) {
        const OperatorResult a = subordinate_apply(spec, spectral_route, t, u);
        const OperatorResult b = subordinate_apply(spec, poisson_route, t, u);
        worst = std::max(worst, rel(b.values, a.values));
      }
      ctx.row("subordination", "Poisson quadrature vs spectral", kv({{"t", t}, {"s", 0.5}}), worst, 0.0,
              Comparison::at_most, 1e-4, "[PAPER: Eq (possion)]");
    }
  }

  // Ledoux estimate and monotonicity of sigma -> ||L^s e^{-sigma L} u||.
  {
    std::vector<double> sigma{0.0};
    for (double v : log_grid(1e-5, 10.0, 8)) sigma.push_back(v);
    for (double s : {0.2, 0.4})
      for (double t : {0.01, 0.1, 1.0}) {
        double worst = kInfinity, mono = 0.0;
        for (const auto& u : us) {
          const LedouxReport r = ledoux_defect(spec, s, t, u, sigma);
          worst = std::min(worst, r.defect);
          mono = std::max(mono, r.monotonicity_violation);
        }
        ctx.row("ledoux", "rhs - lhs", kv({{"s", s}, {"t", t}}), worst, 0.0, Comparison::at_least, 1e-8,
                "[PAPER: Lemma Led]");
        ctx.row("ledoux", "sigma-monotonicity violation", kv({{"s", s}, {"t", t}}), mono, 0.0, Comparison::at_most,
                1e-8, "[PAPER: Lemma non-incre]");
      }
  }
  return ctx.report;
}

// ---------------------------------------------------------------------------

namespace {

struct PairSet {
  std::vector<KernelPair> pairs;
  std::vector<Index> sources;
};

// Sources far from the truncation, targets inside the d^2/t window.
PairSet gaussian_pairs(const Grid& grid, Rng& rng, double t, int n_sources, int per_source, double src_margin,
                       double tgt_margin, double max_d2t, const std::function<Eigen::VectorXd(Index)>& dist) {
  std::vector<Index> srcs, tgts;
  for (Index g = 0; g < grid.size(); ++g) {
    if (grid.boundary_distance(g) >= src_margin) srcs.push_back(g);
    if (grid.boundary_distance(g) >= tgt_margin) tgts.push_back(g);
  }
  if (srcs.empty()) throw ConfigurationError("kernel.source_margin: no admissible sources on this grid");
  PairSet out;
  for (int i = 0; i < n_sources; ++i) {
    const Index src = srcs[rng.bits() % srcs.size()];
    out.sources.push_back(src);
    const Eigen::VectorXd d = dist(src);
    std::vector<Index> ok;
    for (Index g : tgts)
      if (g != src && d[g] * d[g] / t <= max_d2t) ok.push_back(g);
    for (int j = 0; j < per_source && !ok.empty(); ++j) out.pairs.push_back({src, ok[rng.bits() % ok.size()]});
  }
  return out;
}

}  // namespace

ExperimentReport run_kernel_bounds(const Config& config) {
  config.require_known(with_keys(common_keys(), {"kernel.t_values", "kernel.sources", "kernel.targets_per_source",
                                                 "kernel.source_margin", "kernel.target_margin", "kernel.max_d2_over_t",
                                                 "kernel.control_t", "ultra.t_min", "ultra.t_max"}));
  Context ctx(config, "kernel-bounds");
  const auto ts = config.numbers("kernel.t_values", {0.01, 0.04});
  const int ns = config.integer("kernel.sources", 10);
  const int per = config.integer("kernel.targets_per_source", 20);
  const double sm = config.number("kernel.source_margin", 1.0);
  const double tm = config.number("kernel.target_margin", 0.6);
  const double dmax = config.number("kernel.max_d2_over_t", 12.0);
  if (ns < 1 || per < 1) throw ConfigurationError("kernel.sources: counts must be >= 1");

  auto fit_on = [&](const GridSpec& gs, double t, std::uint64_t seed, DataTable* tab) {
    const Grid grid(gs);
    const SpectralData spec = eigendecompose(assemble(grid));
    auto dist = [&grid](Index src) { return cc_distance(grid, src).values; };
    Rng rng(seed);
    const PairSet ps = gaussian_pairs(grid, rng, t, ns, per, sm, tm, dmax, dist);
    std::vector<HeatKernelColumn> cols;
    std::vector<Index> uniq = ps.sources;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (Index s : uniq) cols.push_back(kernel_column(spec, t, s));
    const VolumeModel vm(gs);
    auto vol = [&](Index g, double r) { return vm(grid.x_norm(g), r); };
    GaussianFit f = gaussian_bound_fit(cols, ps.pairs, dist, vol);
    if (tab)
      tab->rows.push_back({format_number(gs.alpha), format_number(t), std::to_string(f.samples), format_number(f.slope),
                           format_number(f.c_lower), format_number(f.c_upper), format_number(f.ratio_spread)});
    return f;
  };

  const GridSpec gs = grid_from(config);
  DataTable& tab = ctx.table("gaussian_fit", {"alpha", "t", "samples", "slope", "c_lower", "c_upper", "spread"});
  for (size_t i = 0; i < ts.size(); ++i) {
    const GaussianFit f = fit_on(gs, ts[i], ctx.seed + i, &tab);
    for (const auto& d : f.diagnostics) ctx.warn("gaussian fit t=" + format_number(ts[i]) + ": " + d);
    const std::string par = kv({{"t", ts[i]}, {"pairs", static_cast<double>(f.samples)}});
    ctx.row("gaussian-bounds", "residual spread factor", par, f.ratio_spread, 50.0, Comparison::at_most, 0.0,
            "[PAPER: Eq (Kt)]");
    ctx.row("gaussian-bounds", "fitted slope is negative", par, f.slope, 0.0, Comparison::at_most, 0.0,
            "[PAPER: Eq (Kt)]");
  }
  {
    // Euclidean control: K_t = (4 pi t)^{-n/2} e^{-d^2/4t}
    GridSpec e = gs;
    e.alpha = 0.0;
    const double t = config.number("kernel.control_t", 0.04);
    const GaussianFit f = fit_on(e, t, ctx.seed + 100, &tab);
    ctx.row("gaussian-bounds", "alpha=0 slope", kv({{"t", t}, {"alpha", 0}}), f.slope, -0.25, Comparison::relative,
            0.10, "[TRIVIAL]");
  }

  // Ultracontractivity from a unit point mass at the origin.
  {
    const Grid grid(gs);
    const SpectralData spec = eigendecompose(assemble(grid));
    const double Q = hom_dimension(gs);
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(grid.size());
    delta[grid.nearest_node(Point::Zero(grid.dimension()))] = 1.0 / grid.cell_volume();
    const auto window = log_grid(config.number("ultra.t_min", 0.04), config.number("ultra.t_max", 0.4), 8);
    DataTable& ut = ctx.table("ultracontractivity", {"t", "norm_inf", "norm_2"});
    for (double t : window) {
      const Eigen::VectorXd h = heat_apply(spec, t, delta);
      ut.rows.push_back({format_number(t), format_number(lp_norm(grid, h, kInfinity)), format_number(lp_norm(grid, h, 2))});
    }
    const std::string par = kv({{"t_min", window.front()}, {"t_max", window.back()}});
    const LogFit a = ultracontractivity_fit(spec, delta, 1.0, kInfinity, window);
    const LogFit b = ultracontractivity_fit(spec, delta, 1.0, 2.0, window);
    for (const auto& d : a.diagnostics) ctx.warn("ultracontractivity: " + d);
    ctx.row("ultracontractivity", "t-slope (p,q)=(1,inf)", par, a.slope, -Q / 2.0, Comparison::relative, 0.10,
            "[PAPER: Prop ulc]");
    ctx.row("ultracontractivity", "t-slope (p,q)=(1,2)", par, b.slope, Q * (1.0 - 2.0) / 4.0, Comparison::relative,
            0.10, "[PAPER: Prop lem4]");
    // one doubling of t inside the window
    const double t0 = window.front() * 2.0;
    const double r = lp_norm(grid, heat_apply(spec, 2 * t0, delta), kInfinity) /
                     lp_norm(grid, heat_apply(spec, t0, delta), kInfinity);
    ctx.row("ultracontractivity", "sup-norm ratio under t doubling", kv({{"t", t0}}), r, std::pow(2.0, -Q / 2.0),
            Comparison::relative, 0.10, "[PAPER: Prop ulc]");
  }
  return ctx.report;
}

}  // namespace grushin::lab
