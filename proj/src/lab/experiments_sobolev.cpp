#include "common.hpp"

#include "grushin/sobolev.hpp"

#include <algorithm>
#include <cmath>

namespace grushin::lab {

namespace {

struct FamilyStats {
  double strong = 0.0, weak = 0.0, hls = 0.0, hls_weak = 0.0;
  double weak_excess = -kInfinity;  // max over functions of weak - strong
};

BumpParams dilate_bump(BumpParams b, double lambda, double alpha) {
  const double ly = std::pow(lambda, alpha + 1.0);
  b.cx *= lambda;
  b.sx *= lambda;
  b.cy *= ly;
  b.sy *= ly;
  return b;
}

}  // namespace

ExperimentReport run_sobolev_hls(const Config& config) {
  config.require_known(with_keys(common_keys(),
                                 {"sobolev.functions", "sobolev.coarse_points", "sobolev.s", "sobolev.dilation",
                                  "hls.alpha_tilde", "hls.p", "pointwise.alpha_tilde", "pointwise.p",
                                  "rearrangement.samples", "corollary.s", "corollary.beta", "quadrature.t_min", "quadrature.t_max",
                                  "quadrature.nodes_per_decade", "quadrature.tail_policy"}));
  Context ctx(config, "sobolev-hls");
  const QuadratureSpec quad = quadrature_from(config);
  const GridSpec base = grid_from(config);
  const double Q = hom_dimension(base);
  const int nf = config.integer("sobolev.functions", 6);
  const int coarse = config.integer("sobolev.coarse_points", 48);
  const double s = config.number("sobolev.s", 0.5);
  const double lambda = config.number("sobolev.dilation", 1.5);
  const double at = config.number("hls.alpha_tilde", 1.0);
  const double hp = config.number("hls.p", 1.2);
  if (nf < 1) throw ConfigurationError("sobolev.functions: must be >= 1");
  if (!(s > 0.0 && 4.0 * s < Q)) throw ConfigurationError("sobolev.s: needs 0 < s < Q/4");
  if (!(lambda > 0.0)) throw ConfigurationError("sobolev.dilation: must be > 0");
  if (!(at > 0.0 && at < Q)) throw ConfigurationError("hls.alpha_tilde: must lie in (0, Q)");
  if (!(hp >= 1.0 && hp < Q / at)) throw ConfigurationError("hls.p: must lie in [1, Q/alpha_tilde)");
  const auto bumps = bump_family(ctx.seed, nf, 0.5, 0.25, 0.5);
  const double q_strong = 2.0 * Q / (Q - 4.0 * s), q_weak = Q / (Q - 2.0 * s);
  const double q_hls = hls_exponent(Q, at, hp);

  DataTable& tab = ctx.table("embedding_ratios", {"points", "function", "strong_p2", "weak_p1", "strong_p1", "hls",
                                                  "hls_weak_p1"});
  auto stats_on = [&](const GridSpec& gs, const std::vector<BumpParams>& fam, const std::string& label) {
    const Grid grid(gs);
    const SpectralData spec = eigendecompose(assemble(grid));
    FamilyStats st;
    for (size_t i = 0; i < fam.size(); ++i) {
      const Eigen::VectorXd u = sample_bump(grid, fam[i]);
      const EmbeddingReport a = sobolev_ratio(spec, u, s, 2.0);
      const EmbeddingReport b = sobolev_ratio(spec, u, s, 1.0);
      const EmbeddingReport c = hls_ratio(spec, u, at, hp);
      const EmbeddingReport d = hls_ratio(spec, u, at, 1.0);
      st.strong = std::max(st.strong, a.ratio);
      st.weak = std::max(st.weak, b.weak_ratio);
      st.hls = std::max(st.hls, c.ratio);
      st.hls_weak = std::max(st.hls_weak, d.weak_ratio);
      st.weak_excess = std::max({st.weak_excess, b.weak_ratio - b.ratio, d.weak_ratio - d.ratio});
      tab.rows.push_back({label, std::to_string(i), format_number(a.ratio), format_number(b.weak_ratio),
                          format_number(b.ratio), format_number(c.ratio), format_number(d.weak_ratio)});
    }
    return st;
  };

  const GridSpec coarse_spec = grid_from(config, coarse);
  const FamilyStats lo = stats_on(coarse_spec, bumps, std::to_string(coarse));
  const FamilyStats hi = stats_on(base, bumps, std::to_string(base.points[0]));
  std::vector<BumpParams> dil;
  for (const auto& b : bumps) dil.push_back(dilate_bump(b, lambda, base.alpha));
  const FamilyStats dl = stats_on(dilated_spec(base, lambda), dil, "dilated");

  const std::string sob = "[PAPER: Theorem Sobolev]", hls = "[PAPER: Prop HLS]";
  const std::string ref = kv({{"from", coarse}, {"to", base.points[0]}});
  ctx.row("sobolev", "largest strong ratio, finite", kv({{"s", s}, {"p", 2}, {"q", q_strong}}), hi.strong, 1e6,
          Comparison::at_most, 0.0, sob);
  ctx.row("sobolev", "strong ratio under refinement", ref + ";p=2", hi.strong, lo.strong, Comparison::relative, 0.20, sob);
  ctx.row("sobolev", "largest weak ratio, finite", kv({{"s", s}, {"p", 1}, {"q", q_weak}}), hi.weak, 1e6,
          Comparison::at_most, 0.0, sob);
  ctx.row("sobolev", "weak ratio under refinement", ref + ";p=1", hi.weak, lo.weak, Comparison::relative, 0.20, sob);
  ctx.row("hls", "largest strong ratio, finite", kv({{"alpha_tilde", at}, {"p", hp}, {"q", q_hls}}), hi.hls, 1e6,
          Comparison::at_most, 0.0, hls);
  ctx.row("hls", "strong ratio under refinement", ref, hi.hls, lo.hls, Comparison::relative, 0.20, hls);
  ctx.row("hls", "weak ratio under refinement", ref + ";p=1", hi.hls_weak, lo.hls_weak, Comparison::relative, 0.20,
          hls);
  const std::string dpar = kv({{"lambda", lambda}});
  ctx.row("scaling", "strong Sobolev ratio under dilation", dpar, dl.strong, hi.strong, Comparison::relative, 0.05,
          "[DERIVED: two-grid scaling oracle]");
  ctx.row("scaling", "weak Sobolev ratio under dilation", dpar, dl.weak, hi.weak, Comparison::relative, 0.05,
          "[DERIVED: two-grid scaling oracle]");
  ctx.row("scaling", "strong HLS ratio under dilation", dpar, dl.hls, hi.hls, Comparison::relative, 0.05,
          "[DERIVED: two-grid scaling oracle]");
  ctx.row("layer-cake", "largest weak - strong", kv({{"functions", nf}}),
          std::max({lo.weak_excess, hi.weak_excess, dl.weak_excess}), 0.0, Comparison::at_most, 1e-12, "[TRIVIAL]");

  const Grid grid(base);
  const SpectralData spec = eigendecompose(assemble(grid));
  std::vector<Eigen::VectorXd> us;
  for (const auto& b : bumps) us.push_back(sample_bump(grid, b));

  // HLS on u with order 2s equals Sobolev on I_{2s} u.
  {
    double worst = 0.0;
    for (const auto& u : us) {
      const double a = hls_ratio(spec, u, 2.0 * s, 2.0).ratio;
      const double b = sobolev_ratio(spec, riesz_potential(spec, 2.0 * s, u), s, 2.0).ratio;
      worst = std::max(worst, std::abs(a - b) / a);
    }
    ctx.row("hls", "HLS(u, 2s) vs Sobolev(I_2s u)", kv({{"s", s}, {"p", 2}}), worst, 0.0, Comparison::at_most, 1e-8,
            "[PAPER: Lemma FF]");
  }

  // Pointwise potential bound.
  {
    const double pa = config.number("pointwise.alpha_tilde", 1.0);
    const double pp = config.number("pointwise.p", 1.0);
    if (!(pa > 0.0 && pa < Q)) throw ConfigurationError("pointwise.alpha_tilde: must lie in (0, Q)");
    if (!(pp >= 1.0 && pp < Q / pa)) throw ConfigurationError("pointwise.p: must lie in [1, Q/alpha_tilde)");
    const auto eps = log_grid(1e-3, 10.0, 8);
    const auto tg = log_grid(1e-3, 10.0, 8);
    double worst = 0.0;
    for (const auto& u : us) worst = std::max(worst, pointwise_bound_defect(spec, u, pa, pp, eps, tg).defect);
    ctx.row("pointwise", "largest relative excess over the potential bound", kv({{"alpha_tilde", pa}, {"p", pp}}),
            worst, 0.0, Comparison::at_most, 1e-3, "[PAPER: Eq (Frac-ineq)]");
  }

  // Rearrangement inequality on random non-increasing step functions.
  {
    const int samples = config.integer("rearrangement.samples", 100);
    if (samples < 1) throw ConfigurationError("rearrangement.samples: must be >= 1");
    const double gamma = Q / (Q - 2.0 * s);
    Rng rng(ctx.seed + 11);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const int k = 1 + static_cast<int>(rng.bits() % 12);
      std::vector<double> br, val;
      double b = 0.0, v = rng.uniform(0.5, 3.0);
      for (int j = 0; j < k; ++j) {
        b += rng.uniform(0.05, 2.0);
        br.push_back(b);
        val.push_back(v);
        v *= rng.uniform(0.1, 1.0);
      }
      worst = std::max(worst, rearrangement_ratio(br, val, gamma));
    }
    ctx.row("rearrangement", "largest ratio over random step functions", kv({{"gamma", gamma}, {"samples", samples}}),
            worst, 1.0 / gamma, Comparison::at_most, 1e-12, "[PAPER: Eq (Frac-ineq)]");
  }

  // Besov route: ||u||_q <= C_S C_B (||u||_p + N(u)), needs 2s < beta < 1 at p = 2.
  {
    const double cs_s = config.number("corollary.s", 0.25);
    const double beta = config.number("corollary.beta", 0.75);
    if (!(cs_s > 0.0 && 4.0 * cs_s < Q)) throw ConfigurationError("corollary.s: needs 0 < s < Q/4");
    if (!(beta > 2.0 * cs_s && beta < 1.0)) throw ConfigurationError("corollary.beta: must lie in (2s, 1)");
    double cs = 0.0, cb = 0.0, worst = 0.0, least = kInfinity;
    for (const auto& u : us) {
      cs = std::max(cs, sobolev_ratio(spec, u, cs_s, 2.0).ratio);
      cb = std::max(cb, ls_boundedness_check(spec, u, cs_s, 2.0, beta, quad));
      const double r = besov_embedding_ratio(spec, u, cs_s, 2.0, beta, quad);
      worst = std::max(worst, r);
      least = std::min(least, r);
    }
    const std::string par = kv({{"s", cs_s}, {"p", 2}, {"beta", beta}});
    ctx.row("corollary", "smallest Besov embedding ratio (finite seminorm)", par, least, 0.0, Comparison::at_least,
            0.0, "[TRIVIAL]");
    ctx.row("corollary", "largest Besov embedding ratio vs composed constant", par, worst, cs * cb,
            Comparison::at_most, 1e-9 * cs * cb, "[PAPER: Corollary propo2.6]");
  }
  return ctx.report;
}

}  // namespace grushin::lab
