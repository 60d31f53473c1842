#include "common.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace grushin::lab {

Context::Context(const Config& c, std::string id) : config(c) {
  report.id = std::move(id);
  const double s = c.number("seed", 1.0);
  if (s < 0 || s != std::floor(s)) throw ConfigurationError("seed: expected a nonnegative integer");
  seed = static_cast<std::uint64_t>(s);
}

void Context::row(const std::string& group, const std::string& check, const std::string& parameters, double measured,
                  double target, Comparison comparison, double tolerance, const std::string& tag) {
  ReportRow r;
  r.experiment = report.id;
  r.group = group;
  r.check = check;
  r.parameters = parameters;
  r.measured = measured;
  r.target = target;
  r.comparison = comparison;
  r.tolerance = tolerance;
  r.tag = tag;
  switch (comparison) {
    case Comparison::at_most: r.pass = measured <= target + tolerance; break;
    case Comparison::at_least: r.pass = measured >= target - tolerance; break;
    case Comparison::relative: r.pass = std::abs(measured - target) <= tolerance * std::abs(target); break;
    case Comparison::absolute: r.pass = std::abs(measured - target) <= tolerance; break;
  }
  if (std::isnan(measured)) r.pass = false;
  report.rows.push_back(std::move(r));
}

DataTable& Context::table(const std::string& name, std::vector<std::string> header) {
  report.tables.push_back({name, std::move(header), {}});
  return report.tables.back();
}

std::set<std::string> common_keys() {
  return {"experiment", "seed", "out_dir", "grid.m", "grid.k", "grid.alpha", "grid.half_width", "grid.points"};
}

std::set<std::string> with_keys(std::set<std::string> base, std::initializer_list<const char*> extra) {
  for (const char* k : extra) base.insert(k);
  return base;
}

GridSpec grid_from(const Config& config, int points) {
  GridSpec s;
  s.m = config.integer("grid.m", 1);
  s.k = config.integer("grid.k", 1);
  s.alpha = config.number("grid.alpha", 1.0);
  if (s.m < 1) throw ConfigurationError("grid.m: must be >= 1");
  if (s.k < 1) throw ConfigurationError("grid.k: must be >= 1");
  if (s.alpha < 0.0) throw ConfigurationError("grid.alpha: must be >= 0");
  const int n = s.m + s.k;
  auto hw = config.numbers("grid.half_width", {2.0});
  auto pts = config.numbers("grid.points", {64.0});
  if (hw.size() == 1) hw.assign(n, hw[0]);
  if (pts.size() == 1) pts.assign(n, pts[0]);
  if (static_cast<int>(hw.size()) != n) throw ConfigurationError("grid.half_width: needs one entry or m + k entries");
  if (static_cast<int>(pts.size()) != n) throw ConfigurationError("grid.points: needs one entry or m + k entries");
  for (int a = 0; a < n; ++a) {
    if (!(hw[a] > 0.0)) throw ConfigurationError("grid.half_width: entries must be > 0");
    if (pts[a] != std::floor(pts[a]) || pts[a] < 3) throw ConfigurationError("grid.points: entries must be integers >= 3");
    s.half_width.push_back(hw[a]);
    s.points.push_back(points > 0 ? points : static_cast<int>(pts[a]));
  }
  s.validate();
  return s;
}

QuadratureSpec quadrature_from(const Config& config) {
  QuadratureSpec q;
  q.t_min = config.number("quadrature.t_min", q.t_min);
  q.t_max = config.number("quadrature.t_max", q.t_max);
  q.nodes_per_decade = config.integer("quadrature.nodes_per_decade", q.nodes_per_decade);
  const std::string tail = config.string("quadrature.tail_policy", "analytic_bound");
  if (tail == "analytic_bound")
    q.tail_policy = TailPolicy::analytic_bound;
  else if (tail == "drop")
    q.tail_policy = TailPolicy::drop;
  else
    throw ConfigurationError("quadrature.tail_policy: expected \"analytic_bound\" or \"drop\"");
  try {
    q.validate();
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(std::string("quadrature: ") + e.what());
  }
  return q;
}

double Rng::normal() {
  // Box-Muller on our own uniforms
  const double u1 = uniform(1e-300, 1.0), u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Eigen::VectorXd sample_bump(const Grid& grid, const BumpParams& b) {
  const int m = grid.m();
  return grid.sample([&](const Point& p) {
    double e = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) {
      const bool x = a < m;
      const double c = a == 0 ? b.cx : a == m ? b.cy : 0.0;
      const double w = x ? b.sx : b.sy;
      e += (p[a] - c) * (p[a] - c) / (2.0 * w * w);
    }
    return b.amp * std::exp(-e);
  });
}

std::vector<BumpParams> bump_family(std::uint64_t seed, int count, double center_range, double w_lo, double w_hi) {
  Rng rng(seed);
  std::vector<BumpParams> out;
  for (int i = 0; i < count; ++i) {
    BumpParams b;
    b.cx = rng.uniform(-center_range, center_range);
    b.cy = rng.uniform(-center_range, center_range);
    b.sx = rng.uniform(w_lo, w_hi);
    b.sy = rng.uniform(w_lo, w_hi);
    out.push_back(b);
  }
  return out;
}

GridSpec dilated_spec(const GridSpec& spec, double lambda) {
  GridSpec d = spec;
  for (int a = 0; a < spec.dimension(); ++a)
    d.half_width[a] *= a < spec.m ? lambda : std::pow(lambda, spec.alpha + 1.0);
  return d;
}

std::string kv(std::initializer_list<std::pair<const char*, double>> items) {
  std::string out;
  for (const auto& [k, v] : items) {
    if (!out.empty()) out += ";";
    out += std::string(k) + "=" + format_number(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<ExperimentInfo>& experiment_table() {
  static const std::vector<ExperimentInfo> table{
      {"semigroup-checks", "semigroup algebra, mass conservation, fractional powers, subordination, Ledoux bound",
       "Prop G-Pro, Eq (SC), Eq (-G), Lemma FF, Eq (possion), Lemma Led, Lemma non-incre"},
      {"kernel-bounds", "Gaussian two-sided kernel fit and ultracontractivity exponents", "Eq (Kt), Prop lem4, Prop ulc"},
      {"metric-volumes", "eikonal CC distance, ball volumes, scaling slope and doubling", "Eq (B), Eq (Re)"},
      {"besov-equivalence", "heat, subordinate and difference seminorm bands; min-max property",
       "Theorem com-1, Theorem com-2, Lemma max"},
      {"besov-limits", "beta -> 0 and beta -> 1 limits of the heat seminorm", "Theorem MS1, Prop BBM"},
      {"perimeter-coarea", "perimeter identity, mollified perimeter, coarea, s -> 0 and s -> 1/2 limits",
       "Eq (equ-sta), Prop com, Eq (coarea1), Theorem s->0, Prop BBM1"},
      {"isoperimetric-scan", "isoperimetric ratios of three perimeters over a set family", "Theorem main1, Theorem main2"},
      {"sobolev-hls", "HLS and Sobolev ratios, pointwise potential bound, rearrangement inequality",
       "Prop HLS, Theorem Sobolev, Eq (Frac-ineq), Corollary propo2.6"},
  };
  return table;
}

std::string list_text() {
  std::string out;
  for (const auto& e : experiment_table()) out += e.id + " → " + e.claims + "\n    " + e.description + "\n";
  return out;
}

ExperimentReport run_experiment(const Config& config) {
  static const std::map<std::string, std::function<ExperimentReport(const Config&)>> runners{
      {"semigroup-checks", run_semigroup_checks},   {"kernel-bounds", run_kernel_bounds},
      {"metric-volumes", run_metric_volumes},       {"besov-equivalence", run_besov_equivalence},
      {"besov-limits", run_besov_limits},           {"perimeter-coarea", run_perimeter_coarea},
      {"isoperimetric-scan", run_isoperimetric_scan}, {"sobolev-hls", run_sobolev_hls},
  };
  const std::string id = config.string("experiment", "");
  if (id.empty()) throw ConfigurationError("experiment: missing");
  auto it = runners.find(id);
  if (it == runners.end()) throw ConfigurationError("experiment: unknown id \"" + id + "\"");
  return it->second(config);
}

}  // namespace grushin::lab
