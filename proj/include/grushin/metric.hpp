#pragma once

#include "grushin/grid.hpp"
#include "grushin/semigroup.hpp"

#include <string>
#include <vector>

namespace grushin {

struct EikonalOptions {
  double tolerance = 1e-10;
  int max_sweeps = 4000;
};

/// d_alpha(source, .) on the grid.
struct DistanceField {
  Index source = 0;
  Eigen::VectorXd values;
  int sweeps = 0;
  double max_update = 0.0;
  bool converged = false;
  std::vector<std::string> diagnostics;
};

/// Fast sweeping for sqrt(|grad_x u|^2 + |x|^{2 alpha} |grad_y u|^2) = 1 with the
/// Godunov upwind update. At nodes with |x| = 0 (alpha > 0) the y-terms vanish.
DistanceField cc_distance(const Grid& grid, Index source, const EikonalOptions& options = {});

/// Shortest paths on the grid graph linking nodes whose multi-indices differ by at
/// most one per axis; an edge of displacement (dx, dy) costs
/// sqrt(|dx|^2 + |dy|^2 / |x_mid|^{2 alpha}) and is absent when it moves in y at x_mid = 0.
/// Independent of the eikonal discretization; used as its oracle.
Eigen::VectorXd graph_distance(const Grid& grid, Index source);

/// |B(g, r)| ~ r^n (r + |x|)^{k alpha}.
struct VolumeModel {
  int n = 2;
  int k = 1;
  double alpha = 1.0;

  explicit VolumeModel(const GridSpec& spec) : n(spec.dimension()), k(spec.k), alpha(spec.alpha) {}
  double operator()(double x_norm, double r) const;
};

struct BallVolume {
  double volume = 0.0;
  bool truncated = false;
};

/// cell_volume * #{d < r}; flags balls that reach the outermost node layer.
BallVolume ball_volume(const Grid& grid, const DistanceField& field, double r);

/// Log-log slope of ball volume against r.
LogFit volume_scaling_fit(const Grid& grid, const DistanceField& field, const std::vector<double>& r_grid);

/// Grid fitted around a ball of radius r about a point at |x| = x0 on the first
/// x-axis (y = 0): wide enough to contain it, with `cells` spacings per radius in x.
GridSpec ball_grid(int m, int k, double alpha, double x0, double r, int cells);

}  // namespace grushin
