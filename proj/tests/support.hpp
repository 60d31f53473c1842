#pragma once

#include "grushin/grid.hpp"

#include <cmath>

namespace test {

inline grushin::Point pt(double x, double y) {
  grushin::Point p(2);
  p << x, y;
  return p;
}

inline grushin::GridSpec plane(int points, double half_width = 2.0, double alpha = 1.0) {
  return grushin::GridSpec::uniform(1, 1, alpha, half_width, points);
}

inline Eigen::VectorXd bump(const grushin::Grid& g, double cx, double cy, double w, double amp = 1.0) {
  return g.sample([&](const grushin::Point& p) {
    const double dx = (p[0] - cx) / w, dy = (p[1] - cy) / w;
    return amp * std::exp(-dx * dx - dy * dy);
  });
}

inline double rel_l2(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).norm() / b.norm(); }

}  // namespace test
