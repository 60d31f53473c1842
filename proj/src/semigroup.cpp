#include "grushin/semigroup.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace grushin {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd heat_multiplier(const SpectralData& spec, double t) {
  return (-t * spec.eigenvalues().array()).exp().matrix();
}

// Multiplier of e^{-t L^s} in ascending mode order, by either route.
Eigen::VectorXd subordinate_multiplier(const SpectralData& spec, const SubordinatorSpec& sub, double t,
                                       double* mass_out = nullptr) {
  sub.validate();
  const Eigen::ArrayXd lam = spec.eigenvalues().array();
  if (sub.route == SubordinationRoute::spectral) {
    if (mass_out) *mass_out = 1.0;
    return (-t * lam.pow(sub.s)).exp().matrix();
  }
  const QuadratureSpec& qs = sub.sigma_quadrature;
  const LogQuadrature q = log_quadrature(qs);
  Eigen::ArrayXd m = Eigen::ArrayXd::Zero(lam.size());
  double mass = 0.0;
  for (size_t i = 0; i < q.t.size(); ++i) {
    const double sg = q.t[i];
    const double w = q.w[i] * sg * poisson_density(t, sg);
    if (w == 0.0) continue;
    m += w * (-sg * lam).exp();
    mass += w;
  }
  // below sigma_min the heat flow is the identity to first order
  const double head = std::erfc(t / (2.0 * std::sqrt(qs.t_min)));
  m += head;
  mass += head;
  if (qs.tail_policy == TailPolicy::analytic_bound) {
    const double tail = std::erf(t / (2.0 * std::sqrt(qs.t_max)));
    m += tail * (-qs.t_max * lam).exp();
    mass += tail;
  }
  if (mass_out) *mass_out = mass;
  return m.matrix();
}

}  // namespace

Eigen::VectorXd heat_apply(const SpectralData& spec, double t, const Eigen::VectorXd& u) {
  if (!(t >= 0.0)) throw ConfigurationError("heat_apply needs t >= 0");
  if (t == 0.0 && !spec.truncated()) return u;
  return spec.apply_multiplier(u, heat_multiplier(spec, t));
}

Eigen::VectorXd heat_apply_krylov(const GrushinOperator& op, double t, const Eigen::VectorXd& u, double tol,
                                  int max_dim) {
  if (!(t >= 0.0)) throw ConfigurationError("heat_apply needs t >= 0");
  const double beta0 = u.norm();
  if (t == 0.0 || beta0 == 0.0) return u;
  const Index N = u.size();
  max_dim = static_cast<int>(std::min<Index>(max_dim, N));
  Eigen::MatrixXd V(N, max_dim + 1);
  std::vector<double> a, b;
  V.col(0) = u / beta0;
  Eigen::VectorXd w;
  Eigen::VectorXd prev;
  for (int j = 0; j < max_dim; ++j) {
    w = op.matrix * V.col(j);
    a.push_back(V.col(j).dot(w));
    w -= a.back() * V.col(j);
    if (j > 0) w -= b.back() * V.col(j - 1);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
    const double bj = w.norm();

    const int n = j + 1;
    Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(a.data(), n);
    Eigen::VectorXd e = n > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(b.data(), n - 1)) : Eigen::VectorXd();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    const Eigen::VectorXd y =
        es.eigenvectors() * ((-t * es.eigenvalues().array()).exp().matrix().cwiseProduct(
                                es.eigenvectors().row(0).transpose()));
    const bool done = bj < 1e-14 * beta0 || std::abs(bj * y[n - 1]) < tol || j + 1 == max_dim;
    if (done) {
      if (std::abs(bj * y[n - 1]) >= tol && bj >= 1e-14 * beta0)
        throw ConvergenceError("Lanczos exponential did not converge within the Krylov budget");
      return beta0 * (V.leftCols(n) * y);
    }
    b.push_back(bj);
    V.col(j + 1) = w / bj;
  }
  return u;  // unreachable
}

double stochastic_completeness_defect(const SpectralData& spec, double t, double margin) {
  if (!(t > 0.0)) throw ConfigurationError("stochastic completeness needs t > 0");
  if (!(margin > 0.0)) throw ConfigurationError("margin must be > 0");
  const Grid& grid = spec.grid();
  const Eigen::VectorXd h = heat_apply(spec, t, grid.ones());
  double worst = -1.0;
  for (Index g = 0; g < grid.size(); ++g)
    if (grid.boundary_distance(g) >= margin) worst = std::max(worst, std::abs(h[g] - 1.0));
  if (worst < 0.0) throw ConfigurationError("no interior nodes left after applying the margin");
  return worst;
}

HeatKernelColumn kernel_column(const SpectralData& spec, double t, Index source) {
  if (!(t > 0.0)) throw ConfigurationError("kernel_column needs t > 0");
  HeatKernelColumn col;
  col.t = t;
  col.source = source;
  col.values = spec.kernel_rows({source}, heat_multiplier(spec, t)).row(0).transpose() / spec.grid().cell_volume();
  return col;
}

LogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  LogFit f;
  const size_t n = x.size();
  if (n < 2) {
    f.diagnostics.push_back("fewer than two points");
    return f;
  }
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (size_t i = 0; i < n; ++i) {
    A(i, 0) = std::log(x[i]);
    A(i, 1) = 1.0;
    b[i] = std::log(y[i]);
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  f.slope = c[0];
  f.intercept = c[1];
  const double mean = b.mean();
  const double ss = (b.array() - mean).square().sum();
  const double rs = (A * c - b).squaredNorm();
  f.r2 = ss > 0.0 ? 1.0 - rs / ss : 1.0;
  return f;
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0;
};

LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  LineFit f;
  if (n == 0) return f;
  if (std::abs(den) < 1e-300) {
    f.intercept = sy / n;
    return f;
  }
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace

GaussianFit gaussian_bound_fit(const std::vector<HeatKernelColumn>& columns, const std::vector<KernelPair>& pairs,
                               const DistanceProvider& distance, const VolumeFunction& volume) {
  GaussianFit fit;
  std::vector<double> xs, ys;
  std::map<Index, Eigen::VectorXd> fields;
  for (const auto& col : columns) {
    for (const auto& pr : pairs) {
      if (pr.source != col.source) continue;
      auto it = fields.find(pr.source);
      if (it == fields.end()) it = fields.emplace(pr.source, distance(pr.source)).first;
      const double d = it->second[pr.target];
      const double k = col.values[pr.target];
      if (!(k > 0.0)) {
        fit.diagnostics.push_back("non-positive kernel value skipped");
        continue;
      }
      const double vol = volume(pr.source, std::sqrt(col.t));
      xs.push_back(d * d / col.t);
      ys.push_back(std::log(k * vol));
    }
  }
  fit.samples = static_cast<Index>(xs.size());
  if (xs.size() < 3) {
    fit.diagnostics.push_back("too few samples");
    return fit;
  }
  fit.max_d2_over_t = *std::max_element(xs.begin(), xs.end());
  if (fit.max_d2_over_t < 1.0) fit.diagnostics.push_back("insufficient dynamic range: all d^2/t < 1");
  const LineFit lf = line_fit(xs, ys);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  double rmin = 1e300, rmax = -1e300;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (lf.intercept + lf.slope * xs[i]);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  fit.ratio_spread = std::exp(rmax - rmin);

  // envelopes: per-bin extremes in d^2/t, then a line through each
  const int bins = 8;
  std::vector<double> lo_y(bins, 1e300), hi_y(bins, -1e300), lo_x(bins), hi_x(bins);
  for (size_t i = 0; i < xs.size(); ++i) {
    const int b = std::min(bins - 1, static_cast<int>(bins * xs[i] / (fit.max_d2_over_t * (1 + 1e-12))));
    if (ys[i] < lo_y[b]) lo_y[b] = ys[i], lo_x[b] = xs[i];
    if (ys[i] > hi_y[b]) hi_y[b] = ys[i], hi_x[b] = xs[i];
  }
  std::vector<double> lx, ly, hx, hy;
  for (int b = 0; b < bins; ++b)
    if (hi_y[b] > -1e300) {
      lx.push_back(lo_x[b]);
      ly.push_back(lo_y[b]);
      hx.push_back(hi_x[b]);
      hy.push_back(hi_y[b]);
    }
  fit.c_lower = -line_fit(lx, ly).slope;
  fit.c_upper = -line_fit(hx, hy).slope;
  return fit;
}

LogFit ultracontractivity_fit(const SpectralData& spec, const Eigen::VectorXd& u, double p, double q,
                              const std::vector<double>& t_window) {
  if (!(p >= 1.0 && q >= p)) throw ConfigurationError("ultracontractivity needs 1 <= p <= q");
  std::vector<double> ts, ns;
  for (double t : t_window) {
    ts.push_back(t);
    ns.push_back(lp_norm(spec.grid(), heat_apply(spec, t, u), q));
  }
  LogFit f = loglog_fit(ts, ns);
  if (t_window.size() < 3 || t_window.back() / t_window.front() < 3.0) f.diagnostics.push_back("t window too narrow");
  return f;
}

void SubordinatorSpec::validate() const {
  if (!(s > 0.0 && s < 1.0)) throw ConfigurationError("subordinator.s must lie in (0,1)");
  if (route == SubordinationRoute::poisson_quadrature && s != 0.5)
    throw ConfigurationError("poisson_quadrature route requires s = 1/2");
  if (route == SubordinationRoute::poisson_quadrature) sigma_quadrature.validate();
}

double poisson_density(double t, double sigma) {
  if (sigma <= 0.0) return 0.0;
  return t / (2.0 * std::sqrt(kPi) * std::pow(sigma, 1.5)) * std::exp(-t * t / (4.0 * sigma));
}

double poisson_mass(double t, const QuadratureSpec& qs) {
  const LogQuadrature q = log_quadrature(qs);
  double mass = std::erfc(t / (2.0 * std::sqrt(qs.t_min)));
  for (size_t i = 0; i < q.t.size(); ++i) mass += q.w[i] * q.t[i] * poisson_density(t, q.t[i]);
  if (qs.tail_policy == TailPolicy::analytic_bound) mass += std::erf(t / (2.0 * std::sqrt(qs.t_max)));
  return mass;
}

OperatorResult subordinate_apply(const SpectralData& spec, const SubordinatorSpec& sub, double t,
                                 const Eigen::VectorXd& u) {
  if (!(t > 0.0)) throw ConfigurationError("subordinate_apply needs t > 0");
  OperatorResult res;
  double mass = 1.0;
  res.values = spec.apply_multiplier(u, subordinate_multiplier(spec, sub, t, &mass));
  if (sub.route == SubordinationRoute::poisson_quadrature) {
    res.error_estimate = std::abs(mass - 1.0) * lp_norm(spec.grid(), u, 2.0);
    if (sub.sigma_quadrature.tail_policy == TailPolicy::drop)
      res.error_estimate += std::erf(t / (2.0 * std::sqrt(sub.sigma_quadrature.t_max))) * lp_norm(spec.grid(), u, 2.0);
  }
  return res;
}

ComparabilityReport subordinate_kernel_check(const SpectralData& spec, const SubordinatorSpec& sub,
                                             const std::vector<double>& t_values,
                                             const std::vector<KernelPair>& pairs, const DistanceProvider& distance,
                                             const VolumeFunction& volume) {
  ComparabilityReport rep;
  rep.min_ratio = 1e300;
  rep.max_ratio = 0.0;
  std::vector<Index> sources;
  for (const auto& pr : pairs) sources.push_back(pr.source);
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  const double cv = spec.grid().cell_volume();
  for (double t : t_values) {
    const Eigen::MatrixXd rows = spec.kernel_rows(sources, subordinate_multiplier(spec, sub, t)) / cv;
    const double r0 = std::pow(t, 1.0 / (2.0 * sub.s));
    for (size_t si = 0; si < sources.size(); ++si) {
      const Eigen::VectorXd d = distance(sources[si]);
      for (const auto& pr : pairs) {
        if (pr.source != sources[si]) continue;
        const double r = r0 + d[pr.target];
        const double model = t / (volume(pr.source, r) * std::pow(r, 2.0 * sub.s));
        const double ratio = rows(si, pr.target) / model;
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        ++rep.samples;
      }
    }
  }
  if (rep.samples == 0) rep.min_ratio = 0.0;
  return rep;
}

Eigen::VectorXd maximal_function(const SpectralData& spec, const Eigen::VectorXd& u, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw ConfigurationError("maximal_function needs a nonempty t grid");
  Eigen::VectorXd M = u.cwiseAbs();
  const Eigen::VectorXd c = spec.analyze(u);
  const Eigen::ArrayXd root = spec.eigenvalues().array().sqrt();
  for (double t : t_grid) {
    const Eigen::VectorXd v = spec.synthesize((-t * root).exp().matrix().cwiseProduct(c));
    M = M.cwiseMax(v.cwiseAbs());
  }
  return M;
}

double weak_norm(const Grid& grid, const Eigen::VectorXd& v, double theta) {
  std::vector<double> a(v.data(), v.data() + v.size());
  for (double& x : a) x = std::abs(x);
  std::sort(a.begin(), a.end(), std::greater<>());
  double best = 0.0;
  const double cv = grid.cell_volume();
  for (size_t k = 0; k < a.size(); ++k) {
    if (a[k] <= 0.0) break;
    // |{|v| > lambda}| for lambda just below a[k] counts every tie of a[k]
    size_t j = k;
    while (j + 1 < a.size() && a[j + 1] == a[k]) ++j;
    best = std::max(best, a[k] * std::pow((j + 1) * cv, theta));
    k = j;
  }
  return best;
}

LedouxReport ledoux_defect(const SpectralData& spec, double s, double t, const Eigen::VectorXd& u,
                           const std::vector<double>& sigma_grid) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigurationError("Ledoux estimate needs s in (0,1)");
  if (sigma_grid.empty()) throw ConfigurationError("Ledoux estimate needs a sigma grid");
  const Grid& grid = spec.grid();
  LedouxReport rep;
  rep.lhs = compensated_l1_norm(grid, heat_apply(spec, t, u) - u);
  const Eigen::VectorXd c = spec.analyze(u);
  const Eigen::ArrayXd lam = spec.eigenvalues().array();
  const Eigen::ArrayXd ls = lam.pow(s);
  std::vector<double> sg = sigma_grid;
  std::sort(sg.begin(), sg.end());
  double sup = 0.0;
  for (double sigma : sg) {
    const Eigen::VectorXd v = spec.synthesize((ls * (-sigma * lam).exp()).matrix().cwiseProduct(c));
    const double n = compensated_l1_norm(grid, v);
    if (!rep.sigma_profile.empty())
      rep.monotonicity_violation = std::max(rep.monotonicity_violation, n - rep.sigma_profile.back());
    rep.sigma_profile.push_back(n);
    sup = std::max(sup, n);
  }
  rep.rhs = 2.0 * std::pow(t, s) / std::tgamma(1.0 + s) * sup;
  rep.defect = rep.rhs - rep.lhs;
  return rep;
}

}  // namespace grushin
