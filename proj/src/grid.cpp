#include "grushin/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace grushin {

Index GridSpec::node_count() const {
  Index n = 1;
  for (int p : points) n *= p;
  return n;
}

void GridSpec::validate() const {
  if (m < 1) throw ConfigurationError("grid.m must be >= 1");
  if (k < 1) throw ConfigurationError("grid.k must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigurationError("grid.alpha must be >= 0");
  const auto n = static_cast<size_t>(m + k);
  if (half_width.size() != n) throw ConfigurationError("grid.half_width needs one entry per axis");
  if (points.size() != n) throw ConfigurationError("grid.points needs one entry per axis");
  for (size_t a = 0; a < n; ++a) {
    if (!(half_width[a] > 0.0) || !std::isfinite(half_width[a])) {
      std::ostringstream msg;
      msg << "grid.half_width[" << a << "] must be > 0";
      throw ConfigurationError(msg.str());
    }
    if (points[a] < 3) {
      std::ostringstream msg;
      msg << "grid.points[" << a << "] must be >= 3";
      throw ConfigurationError(msg.str());
    }
  }
}

GridSpec GridSpec::uniform(int m, int k, double alpha, double half_width, int points) {
  GridSpec s;
  s.m = m;
  s.k = k;
  s.alpha = alpha;
  s.half_width.assign(static_cast<size_t>(m + k), half_width);
  s.points.assign(static_cast<size_t>(m + k), points);
  return s;
}

double hom_dimension(const GridSpec& spec) { return spec.m + (spec.alpha + 1.0) * spec.k; }

Grid::Grid(GridSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const int n = spec_.dimension();
  spacing_.resize(n);
  stride_.resize(n);
  cell_volume_ = 1.0;
  for (int a = 0; a < n; ++a) {
    spacing_[a] = 2.0 * spec_.half_width[a] / (spec_.points[a] + 1);
    cell_volume_ *= spacing_[a];
  }
  Index st = 1;
  for (int a = n - 1; a >= 0; --a) {
    stride_[a] = st;
    st *= spec_.points[a];
  }
  size_ = st;
  x_size_ = 1;
  for (int a = 0; a < spec_.m; ++a) x_size_ *= spec_.points[a];
  y_size_ = size_ / x_size_;
}

double Grid::coordinate(int axis, int i) const {
  return -spec_.half_width[axis] + (i + 1) * spacing_[axis];
}

std::vector<int> Grid::multi_index(Index node) const {
  std::vector<int> idx(dimension());
  for (int a = 0; a < dimension(); ++a) {
    idx[a] = static_cast<int>(node / stride_[a]);
    node -= idx[a] * stride_[a];
  }
  return idx;
}

Index Grid::node(std::span<const int> index) const {
  Index g = 0;
  for (int a = 0; a < dimension(); ++a) g += index[a] * stride_[a];
  return g;
}

Point Grid::point(Index node) const {
  Point p(dimension());
  point(node, p);
  return p;
}

void Grid::point(Index node, Point& out) const {
  out.resize(dimension());
  for (int a = 0; a < dimension(); ++a) {
    const Index i = node / stride_[a];
    node -= i * stride_[a];
    out[a] = coordinate(a, static_cast<int>(i));
  }
}

double Grid::x_norm(Index node) const {
  double s = 0.0;
  for (int a = 0; a < spec_.m; ++a) {
    const Index i = node / stride_[a];
    node -= i * stride_[a];
    const double x = coordinate(a, static_cast<int>(i));
    s += x * x;
  }
  return std::sqrt(s);
}

double Grid::boundary_distance(Index node) const {
  double d = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dimension(); ++a) {
    const Index i = node / stride_[a];
    node -= i * stride_[a];
    const double c = coordinate(a, static_cast<int>(i));
    d = std::min(d, spec_.half_width[a] - std::abs(c));
  }
  return d;
}

Index Grid::nearest_node(const Point& p) const {
  std::vector<int> idx(dimension());
  for (int a = 0; a < dimension(); ++a) {
    const double f = (p[a] + spec_.half_width[a]) / spacing_[a] - 1.0;
    idx[a] = std::clamp(static_cast<int>(std::lround(f)), 0, spec_.points[a] - 1);
  }
  return node(idx);
}

Index Grid::neighbour(Index node, int axis, int direction) const {
  const Index i = (node / stride_[axis]) % spec_.points[axis];
  const Index j = i + direction;
  if (j < 0 || j >= spec_.points[axis]) return -1;
  return node + direction * stride_[axis];
}

Grid Grid::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw ConfigurationError("dilation factor must be > 0");
  GridSpec s = spec_;
  const double ly = std::pow(lambda, spec_.alpha + 1.0);
  for (int a = 0; a < dimension(); ++a) s.half_width[a] *= (a < spec_.m ? lambda : ly);
  return Grid(std::move(s));
}

Point dilate_point(const Point& p, int m, double alpha, double lambda) {
  Point q = p;
  const double ly = std::pow(lambda, alpha + 1.0);
  for (Index a = 0; a < q.size(); ++a) q[a] *= (a < m ? lambda : ly);
  return q;
}

double integrate(const Grid& grid, const Eigen::VectorXd& u) { return grid.cell_volume() * u.sum(); }

double inner(const Grid& grid, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return grid.cell_volume() * u.dot(v);
}

double lp_norm(const Grid& grid, const Eigen::VectorXd& u, double p) {
  if (!(p >= 1.0)) throw ConfigurationError("lp_norm requires p >= 1");
  if (std::isinf(p)) return u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
  if (p == 1.0) return grid.cell_volume() * u.cwiseAbs().sum();
  if (p == 2.0) return std::sqrt(grid.cell_volume() * u.squaredNorm());
  // scale by the sup to keep large p from overflowing
  const double mx = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
  if (mx == 0.0) return 0.0;
  const double s = (u.cwiseAbs() / mx).array().pow(p).sum();
  return mx * std::pow(grid.cell_volume() * s, 1.0 / p);
}

double compensated_l1_norm(const Grid& grid, const Eigen::VectorXd& v) {
  return grid.cell_volume() * (v.cwiseAbs().sum() + std::abs(v.sum()));
}

// ---------------------------------------------------------------------------

SetSpec box_set(Point center, Point half_sides) { return {EuclideanBox{std::move(center), std::move(half_sides)}}; }
SetSpec ball_set(Point center, double radius) { return {EuclideanBall{std::move(center), radius}}; }
SetSpec metric_ball_set(Point center, double radius) { return {MetricBall{std::move(center), radius}}; }
SetSpec dilate_set(double lambda, SetSpec inner) {
  if (!(lambda > 0.0)) throw ConfigurationError("dilate requires lambda > 0");
  return {Dilate{lambda, std::make_shared<const SetSpec>(std::move(inner))}};
}
SetSpec superlevel_set(std::string function_id, double threshold) {
  return {Superlevel{std::move(function_id), threshold}};
}

namespace {

// Pulls nested dilations into a single factor so that dilate(l, dilate(m, S))
// and dilate(l*m, S) rasterize through the same arithmetic.
const SetSpec& flatten(const SetSpec& s, double& lambda) {
  const SetSpec* cur = &s;
  lambda = 1.0;
  while (auto* d = std::get_if<Dilate>(&cur->kind)) {
    if (!(d->lambda > 0.0)) throw ConfigurationError("dilate requires lambda > 0");
    if (!d->inner) throw ConfigurationError("dilate without inner set");
    lambda *= d->lambda;
    cur = d->inner.get();
  }
  return *cur;
}

void check_dim(const Point& p, const Grid& grid, const char* what) {
  if (p.size() != grid.dimension()) throw ConfigurationError(std::string(what) + " has wrong dimension");
}

}  // namespace

SetMask mask_from_indicator(const Grid& grid, const Eigen::Array<bool, Eigen::Dynamic, 1>& inside) {
  SetMask mask;
  mask.inside = inside;
  mask.measure = grid.cell_volume() * static_cast<double>(inside.count());
  return mask;
}

SetMask rasterize(const SetSpec& set, const Grid& grid, const RasterContext& context) {
  double lambda = 1.0;
  const SetSpec& base = flatten(set, lambda);
  const double ly = std::pow(lambda, grid.alpha() + 1.0);
  const int m = grid.m();

  Eigen::Array<bool, Eigen::Dynamic, 1> inside(grid.size());
  Point p(grid.dimension());

  auto pulled_back = [&](Index g) {
    grid.point(g, p);
    if (lambda != 1.0)
      for (int a = 0; a < grid.dimension(); ++a) p[a] /= (a < m ? lambda : ly);
  };

  if (auto* b = std::get_if<EuclideanBox>(&base.kind)) {
    check_dim(b->center, grid, "box center");
    check_dim(b->half_sides, grid, "box half_sides");
    for (Index g = 0; g < grid.size(); ++g) {
      pulled_back(g);
      inside[g] = ((p - b->center).cwiseAbs().array() <= b->half_sides.array()).all();
    }
  } else if (auto* b = std::get_if<EuclideanBall>(&base.kind)) {
    check_dim(b->center, grid, "ball center");
    for (Index g = 0; g < grid.size(); ++g) {
      pulled_back(g);
      inside[g] = (p - b->center).norm() < b->radius;
    }
  } else if (auto* b = std::get_if<MetricBall>(&base.kind)) {
    check_dim(b->center, grid, "metric ball center");
    if (!context.metric_field) throw ConfigurationError("metric_ball needs a metric_field provider");
    // d(delta_l g0, delta_l g) = l d(g0, g): the dilated ball is the ball of radius l*r about delta_l(center)
    const Point c = dilate_point(b->center, m, grid.alpha(), lambda);
    const Eigen::VectorXd d = context.metric_field(grid, c);
    if (d.size() != grid.size()) throw ConfigurationError("metric_field has wrong length");
    inside = d.array() < lambda * b->radius;
  } else if (auto* b = std::get_if<Superlevel>(&base.kind)) {
    auto it = context.functions.find(b->function_id);
    if (it == context.functions.end())
      throw ConfigurationError("superlevel references unknown function '" + b->function_id + "'");
    for (Index g = 0; g < grid.size(); ++g) {
      pulled_back(g);
      inside[g] = it->second(p) > b->threshold;
    }
  }
  return mask_from_indicator(grid, inside);
}

}  // namespace grushin
