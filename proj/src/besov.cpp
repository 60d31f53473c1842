#include "grushin/besov.hpp"
#include "grushin/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace grushin {

void BesovParams::validate() const {
  if (!(p >= 1.0) || std::isinf(p)) throw ConfigurationError("exponents.p must lie in [1, inf)");
  if (!(q >= 1.0)) throw ConfigurationError("exponents.q must be >= 1 or inf");
  if (!(beta > 0.0)) throw ConfigurationError("exponents.beta must be > 0");
  if (!(s > 0.0 && s < 1.0)) throw ConfigurationError("exponents.s must lie in (0,1)");
}

double EnergySpectrum::energy(double t, double s) const {
  double e = 0.0;
  for (Index j = 0; j < lambda.size(); ++j) {
    const double mu = s == 1.0 ? lambda[j] : std::pow(lambda[j], s);
    e -= std::expm1(-t * mu) * weight[j];
  }
  return e;
}

double EnergySpectrum::rate(double s) const {
  return s == 1.0 ? lambda.dot(weight) : lambda.array().pow(s).matrix().dot(weight);
}

double EnergySpectrum::mellin(double gamma, double s) const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigurationError("Mellin exponent must lie in (0,1)");
  return std::tgamma(1.0 - gamma) / gamma * lambda.array().pow(s * gamma).matrix().dot(weight);
}

EnergySpectrum energy_spectrum(const SpectralData& spec, const Eigen::VectorXd& u, double p, EnergyMode mode) {
  if (!(p >= 1.0)) throw ConfigurationError("energy needs p >= 1");
  const Grid& grid = spec.grid();
  const double cv = grid.cell_volume();
  EnergySpectrum es;
  es.p = p;
  es.lambda = spec.eigenvalues();
  const Eigen::VectorXd up = u.cwiseAbs().array().pow(p).matrix();
  es.lp_p = cv * up.sum();
  const Eigen::VectorXd d = spec.difference_spectrum(u, p);
  if (mode == EnergyMode::truncated) {
    es.weight = -cv * d;
  } else {
    const Eigen::VectorXd a = spec.euclidean_coefficients(up);
    const Eigen::VectorXd b = spec.euclidean_coefficients(grid.ones());
    es.weight = cv * (2.0 * a.cwiseProduct(b) - d);
  }
  return es;
}

double local_energy(const SpectralData& spec, double t, double p, const Eigen::VectorXd& u, EnergyMode mode) {
  if (!(t > 0.0)) throw ConfigurationError("local energy needs t > 0");
  if (!(p >= 1.0)) throw ConfigurationError("local energy needs p >= 1");
  const Grid& grid = spec.grid();
  const double cv = grid.cell_volume();
  const Index N = grid.size();
  const Eigen::VectorXd f = (-t * spec.eigenvalues().array()).exp().matrix();
  const Index block = 256;
  double acc = 0.0;
  std::vector<Index> rows;
  for (Index start = 0; start < N; start += block) {
    rows.clear();
    for (Index g = start; g < std::min(N, start + block); ++g) rows.push_back(g);
    const Eigen::MatrixXd R = spec.kernel_rows(rows, f);
    for (size_t i = 0; i < rows.size(); ++i) {
      const Eigen::ArrayXd diff = (u.array() - u[rows[i]]).abs().pow(p);
      acc += (R.row(i).transpose().array() * diff).sum();
    }
  }
  double e = cv * acc;
  if (mode == EnergyMode::completed) {
    const Eigen::VectorXd h = heat_apply(spec, t, grid.ones());
    e += 2.0 * cv * ((1.0 - h.array()) * u.array().abs().pow(p)).sum();
  }
  return e;
}

namespace {

SeminormResult seminorm_core(const std::function<double(double)>& energy, double rate, double lp_p,
                             const BesovParams& params, const QuadratureSpec& quad, const SeminormOptions& opt) {
  params.validate();
  const LogQuadrature lq = log_quadrature(quad);
  const double p = params.p, b = params.beta;
  SeminormResult r;
  r.t = lq.t;
  r.energy.resize(lq.t.size());
  for (size_t i = 0; i < lq.t.size(); ++i) r.energy[i] = std::max(0.0, energy(lq.t[i]));
  const double e_min = r.energy.front(), e_max = r.energy.back();
  rate = std::max(0.0, rate);

  if (params.q_infinite()) {
    double sup = 0.0;
    for (size_t i = 0; i < lq.t.size(); ++i) sup = std::max(sup, std::pow(lq.t[i], -0.5 * b * p) * r.energy[i]);
    const double lead = opt.head == HeadModel::taylor ? 1.0 : opt.kappa;
    if (0.5 * b * p > lead && e_min > 0.0) {
      r.head_divergent = true;
      r.diagnostics.push_back("sup over t is approached as t -> 0; the head diverges");
    }
    r.power = sup;
    r.body = sup;
    r.value = std::pow(sup, 1.0 / p);
    return r;
  }

  const double q = params.q;
  const double qp = q / p;
  for (size_t i = 0; i < lq.t.size(); ++i)
    r.body += lq.w[i] * std::pow(r.energy[i], qp) * std::pow(lq.t[i], -0.5 * b * q);

  if (opt.head == HeadModel::taylor) {
    const double gamma = qp - 0.5 * b * q;
    if (gamma <= 0.0) {
      if (rate > 0.0) r.head_divergent = true;
    } else {
      r.head = std::pow(rate, qp) * std::pow(quad.t_min, gamma) / gamma;
    }
  } else {
    const double gamma = opt.kappa * qp - 0.5 * b * q;
    if (gamma <= 0.0) {
      if (e_min > 0.0) r.head_divergent = true;
    } else {
      r.head = std::pow(e_min, qp) * std::pow(quad.t_min, -0.5 * b * q) / gamma;
    }
  }
  const double tail_w = std::pow(quad.t_max, -0.5 * b * q) * 2.0 / (b * q);
  if (quad.tail_policy == TailPolicy::analytic_bound) r.tail = std::pow(e_max, qp) * tail_w;
  r.tail_bound = std::pow(std::pow(2.0, p) * lp_p, qp) * tail_w;

  if (r.head_divergent) {
    r.diagnostics.push_back("head integral diverges for these exponents; value reported as infinite");
    r.power = r.value = kInfinity;
    return r;
  }
  r.power = r.head + r.body + r.tail;
  r.value = std::pow(r.power, 1.0 / q);
  return r;
}

}  // namespace

SeminormResult seminorm_heat(const EnergySpectrum& es, const BesovParams& params, const QuadratureSpec& quad,
                             const SeminormOptions& options) {
  if (params.p != es.p) throw ConfigurationError("energy spectrum computed for a different p");
  return seminorm_core([&](double t) { return es.energy(t); }, es.rate(), es.lp_p, params, quad, options);
}

SeminormResult seminorm_heat(const SpectralData& spec, const Eigen::VectorXd& u, const BesovParams& params,
                             const QuadratureSpec& quad, const SeminormOptions& options) {
  params.validate();
  return seminorm_heat(energy_spectrum(spec, u, params.p, options.mode), params, quad, options);
}

SeminormResult seminorm_subordinate(const EnergySpectrum& es, const BesovParams& params, const QuadratureSpec& quad,
                                    const SeminormOptions& options) {
  if (params.p != es.p) throw ConfigurationError("energy spectrum computed for a different p");
  const double s = params.s;
  return seminorm_core([&](double t) { return es.energy(t, s); }, es.rate(s), es.lp_p, params, quad, options);
}

SeminormResult seminorm_subordinate(const SpectralData& spec, const Eigen::VectorXd& u, const BesovParams& params,
                                    const QuadratureSpec& quad, const SeminormOptions& options) {
  params.validate();
  return seminorm_subordinate(energy_spectrum(spec, u, params.p, options.mode), params, quad, options);
}

// ---------------------------------------------------------------------------

DistanceTable build_distance_table(const Grid& grid, const DistanceProvider& distance, int stride) {
  if (stride < 1) throw ConfigurationError("source stride must be >= 1");
  DistanceTable tab;
  tab.grid = grid;
  tab.stride = stride;
  for (Index g = 0; g < grid.size(); ++g) {
    const auto idx = grid.multi_index(g);
    if (std::all_of(idx.begin(), idx.end(), [stride](int i) { return i % stride == 0; })) tab.sources.push_back(g);
  }
  const Index N = grid.size();
  tab.distance.resize(tab.sources.size());
  tab.node.resize(tab.sources.size());
  tab.r_min = kInfinity;
  parallel_for(static_cast<Index>(tab.sources.size()), [&](Index si) {
    const Eigen::VectorXd d = distance(tab.sources[si]);
    std::vector<Index> perm(N);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::sort(perm.begin(), perm.end(), [&](Index a, Index b) { return d[a] < d[b] || (d[a] == d[b] && a < b); });
    auto& dd = tab.distance[si];
    auto& nn = tab.node[si];
    dd.resize(N);
    nn.resize(N);
    for (Index k = 0; k < N; ++k) {
      dd[k] = d[perm[k]];
      nn[k] = perm[k];
    }
  });
  for (const auto& dd : tab.distance) {
    for (double v : dd)
      if (v > 0.0) {
        tab.r_min = std::min(tab.r_min, v);
        break;
      }
    tab.r_max = std::max(tab.r_max, dd.back());
  }
  return tab;
}

QuadratureSpec difference_quadrature(const DistanceTable& table) {
  QuadratureSpec q;
  q.t_min = 0.5 * table.r_min;
  q.t_max = table.r_max;
  q.nodes_per_decade = 32;
  return q;
}

SeminormResult seminorm_difference(const Eigen::VectorXd& u, const BesovParams& params, const DistanceTable& table,
                                   const QuadratureSpec& r_quad) {
  params.validate();
  const double p = params.p, b = params.beta;
  const Grid& grid = table.grid;
  const double cv = grid.cell_volume();
  const Index N = grid.size();
  const size_t S = table.sources.size();
  const double wsrc = static_cast<double>(N) / static_cast<double>(S);
  const LogQuadrature lq = log_quadrature(r_quad);

  // inner(r) = sum_g sum_{g' in B(g,r)} |u(g) - u(g')|^p cv^2 / |B(g,r)|, before the r^{-2 beta p} factor
  std::vector<double> inner(lq.t.size(), 0.0);
  double full = 0.0;
  std::vector<double> cum(N);
  for (size_t si = 0; si < S; ++si) {
    const double ug = u[table.sources[si]];
    const auto& dd = table.distance[si];
    const auto& nn = table.node[si];
    double acc = 0.0;
    for (Index k = 0; k < N; ++k) {
      const double diff = std::abs(ug - u[nn[k]]);
      acc += p == 1.0 ? diff : std::pow(diff, p);
      cum[k] = acc;
    }
    for (size_t i = 0; i < lq.t.size(); ++i) {
      const Index cnt = std::lower_bound(dd.begin(), dd.end(), lq.t[i]) - dd.begin();
      if (cnt > 0) inner[i] += wsrc * cv * cum[cnt - 1] / static_cast<double>(cnt);
    }
    full += wsrc * cv * acc / static_cast<double>(N);
  }

  SeminormResult r;
  r.t = lq.t;
  r.energy = inner;
  if (params.q_infinite()) {
    double sup = 0.0;
    for (size_t i = 0; i < lq.t.size(); ++i) sup = std::max(sup, inner[i] * std::pow(lq.t[i], -2.0 * b * p));
    r.power = r.body = sup;
    r.value = std::pow(sup, 1.0 / p);
    return r;
  }
  const double q = params.q, qp = q / p;
  for (size_t i = 0; i < lq.t.size(); ++i) r.body += lq.w[i] * std::pow(inner[i] * std::pow(lq.t[i], -2.0 * b * p), qp);
  // beyond r_max every ball is the whole box
  if (r_quad.tail_policy == TailPolicy::analytic_bound)
    r.tail = std::pow(full, qp) * std::pow(r_quad.t_max, -2.0 * b * q) / (2.0 * b * q);
  r.power = r.body + r.tail;
  r.value = std::pow(r.power, 1.0 / q);
  return r;
}

// ---------------------------------------------------------------------------

double minmax_defect(const SpectralData& spec, const Eigen::VectorXd& u1, const Eigen::VectorXd& u2,
                     const BesovParams& params, const QuadratureSpec& quad) {
  params.validate();
  auto es = [&](const Eigen::VectorXd& v) { return energy_spectrum(spec, v, params.p); };
  return minmax_defect(es(u1.cwiseMax(u2)), es(u1.cwiseMin(u2)), es(u1), es(u2), params, quad);
}

double minmax_defect(const EnergySpectrum& hi, const EnergySpectrum& lo, const EnergySpectrum& e1,
                     const EnergySpectrum& e2, const BesovParams& params, const QuadratureSpec& quad, double* rhs) {
  params.validate();
  if (!(params.q_infinite() || params.q == params.p))
    throw ConfigurationError("min-max property is checked for p = q or q = inf");
  auto pw = [&](const EnergySpectrum& e) { return seminorm_heat(e, params, quad).power; };
  const double a = pw(hi), c = pw(lo), n1 = pw(e1), n2 = pw(e2);
  if (rhs) *rhs = n1 + n2;
  if (params.q_infinite()) return std::max(a, c) - (n1 + n2);
  return a + c - n1 - n2;
}

double richardson(const std::vector<double>& x, const std::vector<double>& y, double x0) {
  std::vector<double> P = y;
  const size_t n = x.size();
  for (size_t m = 1; m < n; ++m)
    for (size_t i = 0; i + m < n; ++i)
      P[i] = ((x0 - x[i + m]) * P[i] + (x[i] - x0) * P[i + 1]) / (x[i] - x[i + m]);
  return n ? P[0] : 0.0;
}

LimitScan ms_limit_scan(const SpectralData& spec, const Eigen::VectorXd& u, double p,
                        const std::vector<double>& beta_grid, const QuadratureSpec& quad) {
  if (quad.tail_policy == TailPolicy::drop)
    throw ConfigurationError("the beta -> 0 limit lives in the tail; tail_policy = drop is not allowed");
  return ms_limit_scan(energy_spectrum(spec, u, p), beta_grid, quad);
}

LimitScan ms_limit_scan(const EnergySpectrum& es, const std::vector<double>& beta_grid, const QuadratureSpec& quad) {
  if (quad.tail_policy == TailPolicy::drop)
    throw ConfigurationError("the beta -> 0 limit lives in the tail; tail_policy = drop is not allowed");
  const double p = es.p;
  LimitScan scan;
  scan.target = 4.0 / p * es.lp_p;
  for (double b : beta_grid) {
    const BesovParams bp{p, p, b, 0.5};
    const SeminormResult r = seminorm_heat(es, bp, quad);
    double head = r.head;
    const LogQuadrature lq = log_quadrature(quad);
    for (size_t i = 0; i < lq.t.size(); ++i)
      if (lq.t[i] <= 1.0) head += lq.w[i] * r.energy[i] * std::pow(lq.t[i], -0.5 * b * p);
    scan.parameter.push_back(b);
    scan.value.push_back(b * r.power);
    scan.head_part.push_back(b * head);
  }
  scan.extrapolated = richardson(scan.parameter, scan.value, 0.0);
  return scan;
}

BracketReport bbm_bracket(const SpectralData& spec, const Eigen::VectorXd& u, double p,
                          const std::vector<double>& beta_grid, const QuadratureSpec& quad, double t_c) {
  return bbm_bracket(energy_spectrum(spec, u, p), beta_grid, quad, t_c);
}

BracketReport bbm_bracket(const EnergySpectrum& es, const std::vector<double>& beta_grid, const QuadratureSpec& quad,
                          double t_c) {
  if (!(t_c > 0.0)) throw ConfigurationError("bracket anchor t_c must be > 0");
  const double p = es.p;
  BracketReport rep;
  rep.t_c = t_c;
  QuadratureSpec q = quad;
  q.t_min = t_c;
  SeminormOptions opt;
  opt.head = HeadModel::continuum;
  opt.kappa = 0.5 * p;
  for (double b : beta_grid) {
    const SeminormResult r = seminorm_heat(es, BesovParams{p, p, b, 0.5}, q, opt);
    rep.beta.push_back(b);
    rep.value.push_back((1.0 - b) * r.power);
  }
  rep.extrapolated = richardson(rep.beta, rep.value, 1.0);
  const std::vector<double> ts = log_grid(t_c, 10.0 * t_c, 32);
  rep.lower = kInfinity;
  rep.upper = 0.0;
  for (double t : ts) {
    const double v = 2.0 / p * std::pow(t, -0.5 * p) * es.energy(t);
    rep.lower = std::min(rep.lower, v);
    rep.upper = std::max(rep.upper, v);
  }
  return rep;
}

double ls_boundedness_check(const SpectralData& spec, const Eigen::VectorXd& u, double s, double p, double beta,
                            const QuadratureSpec& quad, double q) {
  if (q < 0.0) q = p;
  const bool ok = q == kInfinity ? beta > 2.0 * s : (p == 1.0 ? beta >= 2.0 * s : beta > 2.0 * s);
  if (!ok) throw ConfigurationError("L^s boundedness needs beta >= 2s (p = 1) or beta > 2s");
  const Grid& grid = spec.grid();
  const double num = lp_norm(grid, fractional_power_spectral(spec, s, u), p);
  if (num == 0.0) return 0.0;
  const double den = lp_norm(grid, u, p) + seminorm_heat(spec, u, BesovParams{p, q, beta, 0.5}, quad).value;
  return num / den;
}

}  // namespace grushin
