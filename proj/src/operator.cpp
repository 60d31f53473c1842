#include "grushin/operator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace grushin {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Mean of |x|^{2a} over the cell of width h around x (one x-axis).
double cell_mean_1d(double x, double h, double a) {
  if (a == 0.0) return 1.0;
  const double e = 2.0 * a + 1.0;
  auto F = [e](double z) { return std::copysign(std::pow(std::abs(z), e), z) / e; };
  return (F(x + 0.5 * h) - F(x - 0.5 * h)) / h;
}

// Per x-node coefficient, x-nodes in row-major order over the first m axes.
Eigen::VectorXd x_coefficients(const Grid& grid, CoefficientRule rule) {
  const int m = grid.m();
  const double a = grid.alpha();
  Eigen::VectorXd c(grid.x_size());
  std::vector<double> gx, gw;
  if (m > 1) gauss_legendre(6, gx, gw);
  std::vector<int> idx(m, 0);
  for (Index ix = 0; ix < grid.x_size(); ++ix) {
    Index r = ix;
    for (int ax = m - 1; ax >= 0; --ax) {
      idx[ax] = static_cast<int>(r % grid.spec().points[ax]);
      r /= grid.spec().points[ax];
    }
    if (a == 0.0) {
      c[ix] = 1.0;
      continue;
    }
    if (rule == CoefficientRule::node_value) {
      double s = 0.0;
      for (int ax = 0; ax < m; ++ax) s += std::pow(grid.coordinate(ax, idx[ax]), 2);
      c[ix] = std::pow(s, a);
    } else if (m == 1) {
      c[ix] = cell_mean_1d(grid.coordinate(0, idx[0]), grid.spacing(0), a);
    } else {
      // tensor Gauss-Legendre over the cell
      const int q = static_cast<int>(gx.size());
      std::vector<int> t(m, 0);
      double acc = 0.0;
      for (;;) {
        double s = 0.0, w = 1.0;
        for (int ax = 0; ax < m; ++ax) {
          const double z = grid.coordinate(ax, idx[ax]) + 0.5 * grid.spacing(ax) * gx[t[ax]];
          s += z * z;
          w *= 0.5 * gw[t[ax]];
        }
        acc += w * std::pow(s, a);
        int ax = m - 1;
        while (ax >= 0 && ++t[ax] == q) t[ax--] = 0;
        if (ax < 0) break;
      }
      c[ix] = acc;
    }
  }
  return c;
}

// Sum of 1-D Laplacians over a block of axes, flattened row-major, dense.
Eigen::MatrixXd block_laplacian(const Grid& grid, int first, int last) {
  Index n = 1;
  for (int a = first; a < last; ++a) n *= grid.spec().points[a];
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Index stride = n;
  for (int a = first; a < last; ++a) {
    const int p = grid.spec().points[a];
    stride /= p;
    const double w = 1.0 / (grid.spacing(a) * grid.spacing(a));
    for (Index i = 0; i < n; ++i) {
      A(i, i) += 2.0 * w;
      const Index ia = (i / stride) % p;
      if (ia > 0) A(i, i - stride) -= w;
      if (ia + 1 < p) A(i, i + stride) -= w;
    }
  }
  return A;
}

}  // namespace

Eigen::MatrixXd dirichlet_laplacian_1d(int n, double h) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  const double w = 1.0 / (h * h);
  for (int i = 0; i < n; ++i) {
    T(i, i) = 2.0 * w;
    if (i > 0) T(i, i - 1) = -w;
    if (i + 1 < n) T(i, i + 1) = -w;
  }
  return T;
}

Eigen::MatrixXd sine_basis(int n) {
  Eigen::MatrixXd S(n, n);
  const double nrm = std::sqrt(2.0 / (n + 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = nrm * std::sin(kPi * (i + 1) * (j + 1) / (n + 1));
  return S;
}

Eigen::VectorXd sine_eigenvalues(int n, double h) {
  Eigen::VectorXd mu(n);
  for (int j = 0; j < n; ++j) {
    const double s = std::sin(kPi * (j + 1) / (2.0 * (n + 1)));
    mu[j] = 4.0 / (h * h) * s * s;
  }
  return mu;
}

GrushinOperator assemble(const Grid& grid, CoefficientRule rule) {
  GrushinOperator op{grid, {}, {}, x_coefficients(grid, rule), rule};
  const Index N = grid.size(), Ny = grid.y_size();
  op.coefficient_field.resize(N);
  for (Index g = 0; g < N; ++g) op.coefficient_field[g] = op.x_coefficient[g / Ny];

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(N) * (2 * grid.dimension() + 1));
  for (Index g = 0; g < N; ++g) {
    const double c = op.coefficient_field[g];
    double diag = 0.0;
    for (int a = 0; a < grid.dimension(); ++a) {
      const double w = (a < grid.m() ? 1.0 : c) / (grid.spacing(a) * grid.spacing(a));
      diag += 2.0 * w;
      if (w == 0.0) continue;
      for (int dir : {-1, 1}) {
        const Index nb = grid.neighbour(g, a, dir);
        if (nb >= 0) trip.emplace_back(g, nb, -w);
      }
    }
    trip.emplace_back(g, g, diag);
  }
  op.matrix.resize(N, N);
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  op.matrix.makeCompressed();
  return op;
}

// ---------------------------------------------------------------------------

SpectralData eigendecompose(const GrushinOperator& op, const EigenOptions& options) {
  SpectralData sd;
  sd.grid_ = op.grid;
  const Grid& grid = op.grid;
  const Index N = grid.size();

  if (options.dense) {
    if (N > options.dense_budget)
      throw ConfigurationError("dense eigensolve requested above the dense budget");
    sd.tensor_ = false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(op.matrix));
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolve failed");
    sd.internal_eigenvalues_ = es.eigenvalues();
    sd.phi_ = es.eigenvectors();
  } else {
    sd.tensor_ = true;
    const Index Nx = grid.x_size(), Ny = grid.y_size();
    // Kronecker product of the per-axis sine bases over the y-axes
    Eigen::MatrixXd Sy = Eigen::MatrixXd::Ones(1, 1);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(1);
    for (int a = grid.m(); a < grid.dimension(); ++a) {
      const int n = grid.spec().points[a];
      const Eigen::MatrixXd S = sine_basis(n);
      const Eigen::VectorXd ev = sine_eigenvalues(n, grid.spacing(a));
      Eigen::MatrixXd K(Sy.rows() * n, Sy.cols() * n);
      Eigen::VectorXd km(mu.size() * n);
      for (Index i = 0; i < Sy.rows(); ++i)
        for (Index j = 0; j < Sy.cols(); ++j) K.block(i * n, j * n, n, n) = Sy(i, j) * S;
      for (Index j = 0; j < mu.size(); ++j) km.segment(j * n, n) = mu[j] + ev.array();
      Sy = std::move(K);
      mu = std::move(km);
    }
    sd.sy_ = std::move(Sy);
    sd.x_modes_.resize(Ny);
    sd.internal_eigenvalues_.resize(N);

    if (grid.m() == 1) {
      const double w = 1.0 / (grid.spacing(0) * grid.spacing(0));
      Eigen::VectorXd sub = Eigen::VectorXd::Constant(Nx - 1, -w);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      for (Index j = 0; j < Ny; ++j) {
        Eigen::VectorXd d = (2.0 * w + mu[j] * op.x_coefficient.array()).matrix();
        // the tridiagonal QR iteration is not scale-invariant in its stopping test
        const double scale = std::max(d.cwiseAbs().maxCoeff(), w);
        es.computeFromTridiagonal(d / scale, sub / scale, Eigen::ComputeEigenvectors);
        if (es.info() != Eigen::Success) throw ConvergenceError("tridiagonal eigensolve failed");
        sd.x_modes_[j] = es.eigenvectors();
        sd.internal_eigenvalues_.segment(j * Nx, Nx) = scale * es.eigenvalues();
      }
    } else {
      const Eigen::MatrixXd Ax = block_laplacian(grid, 0, grid.m());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      for (Index j = 0; j < Ny; ++j) {
        Eigen::MatrixXd A = Ax;
        A.diagonal() += mu[j] * op.x_coefficient;
        es.compute(A);
        if (es.info() != Eigen::Success) throw ConvergenceError("x-block eigensolve failed");
        sd.x_modes_[j] = es.eigenvectors();
        sd.internal_eigenvalues_.segment(j * Nx, Nx) = es.eigenvalues();
      }
    }
  }

  std::vector<Index> order(N);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return sd.internal_eigenvalues_[a] < sd.internal_eigenvalues_[b];
  });
  Index keep = N;
  if (options.leading) {
    if (*options.leading < 1) throw ConfigurationError("leading mode count must be >= 1");
    keep = std::min(N, *options.leading);
  }
  order.resize(keep);
  sd.order_ = std::move(order);
  sd.eigenvalues_.resize(keep);
  for (Index r = 0; r < keep; ++r) sd.eigenvalues_[r] = sd.internal_eigenvalues_[sd.order_[r]];
  return sd;
}

Eigen::VectorXd SpectralData::forward(const Eigen::VectorXd& u) const {
  if (!tensor_) return phi_.transpose() * u;
  const Index Nx = grid_.x_size(), Ny = grid_.y_size();
  Eigen::Map<const Eigen::MatrixXd> U(u.data(), Ny, Nx);
  const Eigen::MatrixXd V = sy_.transpose() * U;  // Ny x Nx
  Eigen::VectorXd c(Nx * Ny);
  for (Index j = 0; j < Ny; ++j) c.segment(j * Nx, Nx).noalias() = x_modes_[j].transpose() * V.row(j).transpose();
  return c;
}

Eigen::VectorXd SpectralData::backward(const Eigen::VectorXd& c) const {
  if (!tensor_) return phi_ * c;
  const Index Nx = grid_.x_size(), Ny = grid_.y_size();
  Eigen::MatrixXd W(Ny, Nx);
  for (Index j = 0; j < Ny; ++j) W.row(j).noalias() = (x_modes_[j] * c.segment(j * Nx, Nx)).transpose();
  Eigen::VectorXd u(Nx * Ny);
  Eigen::Map<Eigen::MatrixXd> U(u.data(), Ny, Nx);
  U.noalias() = sy_ * W;
  return u;
}

Eigen::VectorXd SpectralData::euclidean_coefficients(const Eigen::VectorXd& v) const {
  const Eigen::VectorXd c = forward(v);
  Eigen::VectorXd out(size());
  for (Index r = 0; r < size(); ++r) out[r] = c[order_[r]];
  return out;
}

Eigen::VectorXd SpectralData::analyze(const Eigen::VectorXd& u) const {
  return std::sqrt(grid_.cell_volume()) * euclidean_coefficients(u);
}

Eigen::VectorXd SpectralData::synthesize(const Eigen::VectorXd& c) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(grid_.size());
  for (Index r = 0; r < size(); ++r) full[order_[r]] = c[r];
  return backward(full) / std::sqrt(grid_.cell_volume());
}

Eigen::VectorXd SpectralData::apply_multiplier(const Eigen::VectorXd& u, const Eigen::VectorXd& m) const {
  Eigen::VectorXd c = forward(u);
  Eigen::VectorXd scaled = Eigen::VectorXd::Zero(c.size());
  for (Index r = 0; r < size(); ++r) scaled[order_[r]] = m[r] * c[order_[r]];
  return backward(scaled);
}

Eigen::VectorXd SpectralData::euclidean_column(Index internal) const {
  if (!tensor_) return phi_.col(internal);
  const Index Nx = grid_.x_size(), Ny = grid_.y_size();
  const Index j = internal / Nx, i = internal % Nx;
  Eigen::VectorXd v(Nx * Ny);
  for (Index ix = 0; ix < Nx; ++ix) v.segment(ix * Ny, Ny) = x_modes_[j](ix, i) * sy_.col(j);
  return v;
}

Eigen::VectorXd SpectralData::eigenvector(Index j) const {
  return euclidean_column(order_[j]) / std::sqrt(grid_.cell_volume());
}

Eigen::MatrixXd SpectralData::kernel_rows(const std::vector<Index>& rows, const Eigen::VectorXd& m) const {
  const Index N = grid_.size();
  Eigen::VectorXd mi = Eigen::VectorXd::Zero(N);
  for (Index r = 0; r < size(); ++r) mi[order_[r]] = m[r];
  Eigen::MatrixXd out(rows.size(), N);
  Eigen::VectorXd c(N);
  for (size_t k = 0; k < rows.size(); ++k) {
    const Index g = rows[k];
    if (tensor_) {
      const Index Nx = grid_.x_size(), Ny = grid_.y_size();
      const Index ix = g / Ny, iy = g % Ny;
      for (Index j = 0; j < Ny; ++j)
        c.segment(j * Nx, Nx) = sy_(iy, j) * x_modes_[j].row(ix).transpose();
    } else {
      c = phi_.row(g).transpose();
    }
    out.row(k) = backward(c.cwiseProduct(mi)).transpose();
  }
  return out;
}

namespace {

inline double powabs(double d, double p) {
  d = std::abs(d);
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

}  // namespace

Eigen::VectorXd SpectralData::difference_spectrum(const Eigen::VectorXd& u, double p) const {
  const Index N = grid_.size();
  Eigen::VectorXd d(N);
  if (p == 2.0) {
    // |a - b|^2 = a^2 + b^2 - 2ab
    const Eigen::VectorXd cu = forward(u), cu2 = forward(u.cwiseAbs2()), c1 = forward(Eigen::VectorXd::Ones(N));
    d = 2.0 * (cu2.cwiseProduct(c1) - cu.cwiseAbs2());
  } else if (!tensor_) {
    Eigen::MatrixXd D(N, N);
    for (Index a = 0; a < N; ++a)
      for (Index b = 0; b < N; ++b) D(a, b) = powabs(u[a] - u[b], p);
    d = (phi_.array() * (D * phi_).array()).colwise().sum().transpose();
  } else {
    const Index Nx = grid_.x_size(), Ny = grid_.y_size();
    // G_j(ix, ix') = sum_{iy,iy'} Sy(iy,j) D[(ix,iy),(ix',iy')] Sy(iy',j)
    std::vector<Eigen::MatrixXd> G(Ny, Eigen::MatrixXd(Nx, Nx));
    Eigen::MatrixXd B(Ny, Ny), M(Ny, Ny);
    for (Index ix = 0; ix < Nx; ++ix) {
      for (Index jx = ix; jx < Nx; ++jx) {
        for (Index b = 0; b < Ny; ++b)
          for (Index a = 0; a < Ny; ++a) B(a, b) = powabs(u[ix * Ny + a] - u[jx * Ny + b], p);
        M.noalias() = B * sy_;
        const Eigen::VectorXd diag = (sy_.array() * M.array()).colwise().sum().transpose();
        for (Index j = 0; j < Ny; ++j) G[j](ix, jx) = G[j](jx, ix) = diag[j];
      }
    }
    for (Index j = 0; j < Ny; ++j) {
      const Eigen::MatrixXd GX = G[j] * x_modes_[j];
      d.segment(j * Nx, Nx) = (x_modes_[j].array() * GX.array()).colwise().sum().transpose();
    }
  }
  Eigen::VectorXd out(size());
  for (Index r = 0; r < size(); ++r) out[r] = d[order_[r]];
  return out;
}

double SpectralData::max_residual(const GrushinOperator& op, Index samples) const {
  double worst = 0.0;
  const Index n = size();
  const Index step = std::max<Index>(1, n / std::max<Index>(1, samples));
  for (Index j = 0; j < n; j += step) {
    const Eigen::VectorXd v = euclidean_column(order_[j]);
    const double r = (op.matrix * v - eigenvalues_[j] * v).norm() / (1.0 + eigenvalues_[j]);
    worst = std::max(worst, r);
  }
  return worst;
}

double SpectralData::gram_defect(Index samples) const {
  const Index n = size();
  const Index step = std::max<Index>(1, n / std::max<Index>(1, samples));
  std::vector<Index> pick;
  for (Index j = 0; j < n; j += step) pick.push_back(j);
  Eigen::MatrixXd V(grid_.size(), pick.size());
  for (size_t c = 0; c < pick.size(); ++c) V.col(c) = eigenvector(pick[c]);
  const Eigen::MatrixXd G = grid_.cell_volume() * V.transpose() * V;
  return (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

Eigen::VectorXd fractional_power_spectral(const SpectralData& spec, double s, const Eigen::VectorXd& u) {
  if (!(s > 0.0 && s <= 1.0)) throw ConfigurationError("fractional power needs s in (0,1]");
  return spec.apply(u, [s](double l) { return std::pow(l, s); });
}

OperatorResult fractional_power_balakrishnan(const GrushinOperator& op, const SpectralData& spec, double s,
                                             const Eigen::VectorXd& u, const QuadratureSpec& quad,
                                             double tolerance) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigurationError("Balakrishnan route needs s in (0,1)");
  const LogQuadrature q = log_quadrature(quad);
  OperatorResult res;
  const Index N = u.size();
  if (u.isZero(0.0)) {
    res.values = Eigen::VectorXd::Zero(N);
    return res;
  }
  // one forward transform, then every t is a diagonal scaling
  const Eigen::VectorXd c = spec.analyze(u);
  const Eigen::VectorXd& lam = spec.eigenvalues();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(c.size()), coarse = Eigen::VectorXd::Zero(c.size());
  const int n = static_cast<int>(q.t.size());
  for (int i = 0; i < n; ++i) {
    const double t = q.t[i];
    const Eigen::VectorXd g = (-(t * lam.array())).unaryExpr([](double x) { return std::expm1(x); }) * std::pow(t, -s);
    acc += q.w[i] * g.cwiseProduct(c);
    // every other node, for a step-doubling error estimate
    if (i % 2 == 0) {
      const double w2 = (i == 0 || i == n - 1) ? q.w[i] : 2.0 * q.w[1];
      coarse += w2 * g.cwiseProduct(c);
    }
  }
  // head: e^{-tL}u - u = -tLu + O(t^2)
  const Eigen::VectorXd Lu = op.apply(u);
  const double head_w = std::pow(quad.t_min, 1.0 - s) / (1.0 - s);
  // tail: hold e^{-t L}u at its t_max value
  const Eigen::VectorXd gmax =
      (-(quad.t_max * lam.array())).unaryExpr([](double x) { return std::expm1(x); });
  const double tail_w = std::pow(quad.t_max, -s) / s;
  const double pref = -s / std::tgamma(1.0 - s);

  Eigen::VectorXd integral = spec.synthesize(acc);
  integral -= head_w * Lu;
  Eigen::VectorXd tail = Eigen::VectorXd::Zero(N);
  if (quad.tail_policy == TailPolicy::analytic_bound) tail = tail_w * spec.synthesize(gmax.cwiseProduct(c));
  res.values = pref * (integral + tail);

  const Grid& grid = spec.grid();
  const double unorm = lp_norm(grid, u, 2.0);
  const double L2u = lp_norm(grid, op.apply(Lu), 2.0);
  const double head_err = std::abs(pref) * L2u * std::pow(quad.t_min, 2.0 - s) / (2.0 * (2.0 - s));
  double tail_err = 0.0;
  if (quad.tail_policy == TailPolicy::analytic_bound) {
    const Eigen::VectorXd emax = (-(quad.t_max * lam.array())).exp();
    tail_err = std::abs(pref) * (emax.cwiseProduct(c)).norm() * tail_w;
  } else {
    tail_err = std::abs(pref) * 2.0 * unorm * tail_w;
  }
  const double quad_err = std::abs(pref) * (acc - coarse).norm();
  res.error_estimate = head_err + tail_err + quad_err;
  const double scale = lp_norm(grid, res.values, 2.0);
  if (scale > 0.0 && res.error_estimate > tolerance * scale)
    res.warnings.push_back("Balakrishnan error estimate exceeds tolerance");
  return res;
}

Eigen::VectorXd riesz_potential(const SpectralData& spec, double alpha_tilde, const Eigen::VectorXd& u) {
  if (!(alpha_tilde > 0.0)) throw ConfigurationError("Riesz potential needs alpha_tilde > 0");
  if (!(spec.eigenvalues()[0] > 0.0)) throw ConfigurationError("Riesz potential needs a positive spectrum");
  const double e = -0.5 * alpha_tilde;
  return spec.apply(u, [e](double l) { return std::pow(l, e); });
}

OperatorResult riesz_potential_quadrature(const SpectralData& spec, double alpha_tilde, const Eigen::VectorXd& u,
                                          const QuadratureSpec& quad) {
  if (!(alpha_tilde > 0.0)) throw ConfigurationError("Riesz potential needs alpha_tilde > 0");
  const LogQuadrature q = log_quadrature(quad);
  const double a = 0.5 * alpha_tilde;
  const Eigen::VectorXd c = spec.analyze(u);
  const Eigen::VectorXd& lam = spec.eigenvalues();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(c.size());
  for (size_t i = 0; i < q.t.size(); ++i) {
    const double t = q.t[i];
    acc += (q.w[i] * std::pow(t, a)) * (-(t * lam.array())).exp().matrix().cwiseProduct(c);
  }
  // head: e^{-tL}u ~ u ; tail: e^{-tL}u decays at least like e^{-(t - t_max) lambda_1}
  const double head = std::pow(quad.t_min, a) / a;
  const double l1 = lam[0];
  const Eigen::VectorXd emax = (-(quad.t_max * lam.array())).exp();
  const double tail = std::pow(quad.t_max, a - 1.0) / l1;
  Eigen::VectorXd coef = acc + head * c;
  if (quad.tail_policy == TailPolicy::analytic_bound) coef += tail * emax.cwiseProduct(c);
  OperatorResult res;
  res.values = spec.synthesize(coef) / std::tgamma(a);
  res.error_estimate = (head * std::abs(lam[lam.size() - 1] * quad.t_min) * c.norm() +
                        tail * emax.cwiseProduct(c).norm()) /
                       std::tgamma(a);
  return res;
}

}  // namespace grushin
