#pragma once

#include <Eigen/Core>

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace grushin {

using Index = Eigen::Index;
using Point = Eigen::VectorXd;

/// Raised when a parameter bundle violates the preconditions of the operation it feeds.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative solver exhausts its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated box [-h_1,h_1] x ... x [-h_n,h_n] in R^m x R^k with interior nodes only.
/// Axes 0..m-1 are the x-axes, axes m..m+k-1 the y-axes.
struct GridSpec {
  int m = 1;
  int k = 1;
  double alpha = 1.0;
  std::vector<double> half_width;
  std::vector<int> points;

  int dimension() const { return m + k; }
  Index node_count() const;
  void validate() const;

  static GridSpec uniform(int m, int k, double alpha, double half_width, int points);
};

/// Q = m + (alpha + 1) k.
double hom_dimension(const GridSpec& spec);

/// Uniform interior-node tensor grid. Node ordering is row-major with the last
/// axis fastest, so node = x_index * y_size() + y_index.
class Grid {
 public:
  explicit Grid(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension(); }
  int m() const { return spec_.m; }
  int k() const { return spec_.k; }
  double alpha() const { return spec_.alpha; }

  Index size() const { return size_; }
  Index x_size() const { return x_size_; }
  Index y_size() const { return y_size_; }

  double spacing(int axis) const { return spacing_[axis]; }
  double coordinate(int axis, int i) const;
  double cell_volume() const { return cell_volume_; }

  std::vector<int> multi_index(Index node) const;
  Index node(std::span<const int> index) const;
  Point point(Index node) const;
  void point(Index node, Point& out) const;

  /// |x| at the node.
  double x_norm(Index node) const;
  /// Smallest per-axis distance from the node to the box boundary.
  double boundary_distance(Index node) const;
  Index nearest_node(const Point& p) const;

  /// Neighbour along an axis (+1 / -1), or -1 when it falls outside the box.
  Index neighbour(Index node, int axis, int direction) const;

  /// Image of the grid under the anisotropic dilation (x -> lambda x, y -> lambda^{alpha+1} y).
  Grid dilated(double lambda) const;

  template <class F>
  Eigen::VectorXd sample(F&& f) const {
    Eigen::VectorXd out(size_);
    Point p(dimension());
    for (Index g = 0; g < size_; ++g) {
      point(g, p);
      out[g] = f(p);
    }
    return out;
  }

  Eigen::VectorXd ones() const { return Eigen::VectorXd::Ones(size_); }

 private:
  GridSpec spec_;
  Index size_ = 0;
  Index x_size_ = 0;
  Index y_size_ = 0;
  std::vector<double> spacing_;
  std::vector<Index> stride_;
  double cell_volume_ = 0.0;
};

/// delta_lambda(x, y) = (lambda x, lambda^{alpha+1} y).
Point dilate_point(const Point& p, int m, double alpha, double lambda);

// Integration and norms. Midpoint rule with the uniform cell volume.
double integrate(const Grid& grid, const Eigen::VectorXd& u);
double inner(const Grid& grid, const Eigen::VectorXd& u, const Eigen::VectorXd& v);
/// p in [1, inf]; pass std::numeric_limits<double>::infinity() for the sup norm.
double lp_norm(const Grid& grid, const Eigen::VectorXd& u, double p);
/// L^1 norm plus the absolute net mass. Under Dirichlet truncation the mass a
/// semigroup difference loses through the boundary sits outside the box with
/// opposite sign; this is the L^1 norm of that completed function.
double compensated_l1_norm(const Grid& grid, const Eigen::VectorXd& v);

// ---------------------------------------------------------------------------
// Analytic sets.

struct SetSpec;

struct EuclideanBox {
  Point center;
  Point half_sides;
};
struct EuclideanBall {
  Point center;
  double radius = 0.0;
};
struct MetricBall {
  Point center;
  double radius = 0.0;
};
struct Dilate {
  double lambda = 1.0;
  std::shared_ptr<const SetSpec> inner;
};
struct Superlevel {
  std::string function_id;
  double threshold = 0.0;
};

struct SetSpec {
  std::variant<EuclideanBox, EuclideanBall, MetricBall, Dilate, Superlevel> kind;
};

SetSpec box_set(Point center, Point half_sides);
SetSpec ball_set(Point center, double radius);
SetSpec metric_ball_set(Point center, double radius);
SetSpec dilate_set(double lambda, SetSpec inner);
SetSpec superlevel_set(std::string function_id, double threshold);

/// Auxiliary data for set kinds that are not purely coordinate predicates.
struct RasterContext {
  /// Distance field d_alpha(center, .) on the grid; used by metric balls.
  std::function<Eigen::VectorXd(const Grid&, const Point& center)> metric_field;
  /// Analytic functions referenced by superlevel sets.
  std::map<std::string, std::function<double(const Point&)>> functions;
};

struct SetMask {
  Eigen::Array<bool, Eigen::Dynamic, 1> inside;
  double measure = 0.0;

  Index count() const { return inside.count(); }
  Eigen::VectorXd indicator() const { return inside.cast<double>().matrix(); }
};

SetMask rasterize(const SetSpec& set, const Grid& grid, const RasterContext& context = {});
SetMask mask_from_indicator(const Grid& grid, const Eigen::Array<bool, Eigen::Dynamic, 1>& inside);

}  // namespace grushin
