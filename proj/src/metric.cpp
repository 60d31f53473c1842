#include "grushin/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace grushin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest root of sum_i w_i (u - m_i)_+^2 = 1 using the smallest active set.
double godunov_update(std::vector<std::pair<double, double>>& terms) {
  std::sort(terms.begin(), terms.end());
  double A = 0.0, B = 0.0, C = -1.0, u = kInf;
  for (size_t i = 0; i < terms.size(); ++i) {
    const auto [mi, wi] = terms[i];
    if (!std::isfinite(mi)) break;
    A += wi;
    B += wi * mi;
    C += wi * mi * mi;
    const double disc = B * B - A * C;
    if (disc < 0.0) continue;
    const double cand = (B + std::sqrt(disc)) / A;
    u = cand;
    if (i + 1 == terms.size() || cand <= terms[i + 1].first) break;
  }
  return u;
}

}  // namespace

DistanceField cc_distance(const Grid& grid, Index source, const EikonalOptions& options) {
  if (source < 0 || source >= grid.size()) throw ConfigurationError("eikonal source outside the grid");
  const int n = grid.dimension();
  const Index N = grid.size();
  DistanceField f;
  f.source = source;
  f.values = Eigen::VectorXd::Constant(N, kInf);
  f.values[source] = 0.0;

  // per-node weight of the y-axes: c(x) at the node
  Eigen::VectorXd cy(grid.x_size());
  {
    const Index Ny = grid.y_size();
    for (Index ix = 0; ix < grid.x_size(); ++ix) cy[ix] = std::pow(grid.x_norm(ix * Ny), 2.0 * grid.alpha());
  }
  std::vector<double> inv_h2(n);
  for (int a = 0; a < n; ++a) inv_h2[a] = 1.0 / (grid.spacing(a) * grid.spacing(a));

  std::vector<Index> stride(n);
  {
    Index s = 1;
    for (int a = n - 1; a >= 0; --a) {
      stride[a] = s;
      s *= grid.spec().points[a];
    }
  }
  const auto& pts = grid.spec().points;
  std::vector<std::pair<double, double>> terms;
  terms.reserve(n);
  std::vector<int> idx(n);

  const int orderings = 1 << n;
  int quiet = 0;  // consecutive orderings without change above tolerance
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const int dir = sweep % orderings;
    double change = 0.0;
    for (Index lin = 0; lin < N; ++lin) {
      // multi-index of the lin-th node in this sweep's traversal order
      Index rem = lin, g = 0;
      for (int a = 0; a < n; ++a) {
        int i = static_cast<int>(rem / stride[a]);
        rem -= i * stride[a];
        if (dir & (1 << a)) i = pts[a] - 1 - i;
        idx[a] = i;
        g += i * stride[a];
      }
      if (g == source) continue;
      const double c = cy[g / grid.y_size()];
      terms.clear();
      for (int a = 0; a < n; ++a) {
        const double w = (a < grid.m() ? 1.0 : c) * inv_h2[a];
        if (w == 0.0) continue;
        double mn = kInf;
        if (idx[a] > 0) mn = std::min(mn, f.values[g - stride[a]]);
        if (idx[a] + 1 < pts[a]) mn = std::min(mn, f.values[g + stride[a]]);
        if (std::isfinite(mn)) terms.emplace_back(mn, w);
      }
      if (terms.empty()) continue;
      const double u = godunov_update(terms);
      if (u < f.values[g]) {
        const double old = f.values[g];
        change = std::max(change, std::isfinite(old) ? old - u : kInf);
        f.values[g] = u;
      }
    }
    f.sweeps = sweep + 1;
    f.max_update = change;
    quiet = change < options.tolerance ? quiet + 1 : 0;
    if (quiet >= orderings) {
      f.converged = true;
      break;
    }
  }
  if (!f.converged) f.diagnostics.push_back("fast sweeping hit the sweep budget");
  if (!f.values.allFinite()) f.diagnostics.push_back("unreachable nodes remain");
  return f;
}

Eigen::VectorXd graph_distance(const Grid& grid, Index source) {
  if (source < 0 || source >= grid.size()) throw ConfigurationError("graph source outside the grid");
  const int n = grid.dimension();
  const int m = grid.m();
  const double a2 = 2.0 * grid.alpha();
  // all offsets in {-1, 0, 1}^n except zero
  std::vector<std::vector<int>> offsets;
  for (int code = 0; code < static_cast<int>(std::pow(3, n)); ++code) {
    std::vector<int> o(n);
    int c = code, nz = 0;
    for (int a = 0; a < n; ++a) {
      o[a] = c % 3 - 1;
      c /= 3;
      nz += o[a] != 0;
    }
    if (nz) offsets.push_back(o);
  }
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(grid.size(), kInf);
  dist[source] = 0.0;
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0.0, source});
  std::vector<int> idx(n), jdx(n);
  while (!heap.empty()) {
    const auto [d, g] = heap.top();
    heap.pop();
    if (d > dist[g]) continue;
    idx = grid.multi_index(g);
    for (const auto& o : offsets) {
      bool inside = true;
      double x2 = 0.0, y2 = 0.0, xm2 = 0.0;
      for (int a = 0; a < n && inside; ++a) {
        jdx[a] = idx[a] + o[a];
        if (jdx[a] < 0 || jdx[a] >= grid.spec().points[a]) inside = false;
      }
      if (!inside) continue;
      for (int a = 0; a < n; ++a) {
        const double step = o[a] * grid.spacing(a);
        if (a < m) {
          x2 += step * step;
          const double xm = 0.5 * (grid.coordinate(a, idx[a]) + grid.coordinate(a, jdx[a]));
          xm2 += xm * xm;
        } else {
          y2 += step * step;
        }
      }
      double w2 = x2;
      if (y2 > 0.0) {
        const double c = a2 == 0.0 ? 1.0 : std::pow(xm2, 0.5 * a2);
        if (c == 0.0) continue;
        w2 += y2 / c;
      }
      const Index h = grid.node(jdx);
      const double nd = d + std::sqrt(w2);
      if (nd < dist[h]) {
        dist[h] = nd;
        heap.push({nd, h});
      }
    }
  }
  return dist;
}

double VolumeModel::operator()(double x_norm, double r) const {
  return std::pow(r, n) * std::pow(r + x_norm, k * alpha);
}

BallVolume ball_volume(const Grid& grid, const DistanceField& field, double r) {
  if (!(r > 0.0)) throw ConfigurationError("ball radius must be > 0");
  BallVolume b;
  Index count = 0;
  double hmax = 0.0;
  for (int a = 0; a < grid.dimension(); ++a) hmax = std::max(hmax, grid.spacing(a));
  for (Index g = 0; g < grid.size(); ++g) {
    if (field.values[g] < r) {
      ++count;
      // outermost layer: the next node along some axis is outside the box
      for (int a = 0; a < grid.dimension() && !b.truncated; ++a)
        if (grid.neighbour(g, a, 1) < 0 || grid.neighbour(g, a, -1) < 0) b.truncated = true;
    }
  }
  b.volume = grid.cell_volume() * static_cast<double>(count);
  return b;
}

LogFit volume_scaling_fit(const Grid& grid, const DistanceField& field, const std::vector<double>& r_grid) {
  std::vector<double> rs, vs;
  bool truncated = false;
  for (double r : r_grid) {
    const BallVolume b = ball_volume(grid, field, r);
    truncated = truncated || b.truncated;
    if (b.volume > 0.0) {
      rs.push_back(r);
      vs.push_back(b.volume);
    }
  }
  LogFit fit = loglog_fit(rs, vs);
  if (truncated) fit.diagnostics.push_back("ball reaches the box boundary");
  return fit;
}

GridSpec ball_grid(int m, int k, double alpha, double x0, double r, int cells) {
  GridSpec s;
  s.m = m;
  s.k = k;
  s.alpha = alpha;
  double hx = r / cells;
  if (x0 != 0.0) hx = std::abs(x0) / std::ceil(std::abs(x0) / hx);  // keep the center on a node
  const double wx = std::abs(x0) + 1.25 * r;
  // |dy/dt| <= |x(t)|^alpha <= (|x0| + t)^alpha along unit-speed curves
  const double a1 = alpha + 1.0;
  const double wy = 1.1 * (std::pow(std::abs(x0) + r, a1) - std::pow(std::abs(x0), a1)) / a1;
  const int px = 2 * static_cast<int>(std::ceil(wx / hx)) + 1;
  for (int a = 0; a < m; ++a) {
    s.half_width.push_back(0.5 * (px + 1) * hx);
    s.points.push_back(a == 0 ? px : 2 * cells + 1);
  }
  for (int b = 0; b < k; ++b) {
    s.half_width.push_back(wy);
    s.points.push_back(8 * cells + 1);
  }
  if (m > 1)
    for (int a = 1; a < m; ++a) s.half_width[a] = 1.25 * r * (2 * cells + 2) / (2 * cells);
  return s;
}

}  // namespace grushin
