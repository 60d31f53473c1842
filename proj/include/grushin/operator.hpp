#pragma once

#include "grushin/grid.hpp"
#include "grushin/quadrature.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <optional>
#include <string>
#include <vector>

namespace grushin {

enum class CoefficientRule { node_value, cell_average };

/// L = -Delta_x - |x|^{2 alpha} Delta_y with second-order central differences
/// and zero exterior values.
struct GrushinOperator {
  Grid grid;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd coefficient_field;  // per node
  Eigen::VectorXd x_coefficient;      // per x-node (the field only depends on x)
  CoefficientRule rule = CoefficientRule::cell_average;

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const { return matrix * u; }
};

GrushinOperator assemble(const Grid& grid, CoefficientRule rule = CoefficientRule::cell_average);

/// 1-D Dirichlet second-difference matrix (n interior nodes, spacing h), dense.
Eigen::MatrixXd dirichlet_laplacian_1d(int n, double h);
/// Orthonormal sine eigenbasis of dirichlet_laplacian_1d; column j has eigenvalue
/// 4/h^2 sin^2((j+1) pi / (2(n+1))).
Eigen::MatrixXd sine_basis(int n);
Eigen::VectorXd sine_eigenvalues(int n, double h);

struct EigenOptions {
  /// Retain only the r smallest modes. Empty keeps all.
  std::optional<Index> leading;
  /// Dense solve of the full matrix instead of the tensor route.
  bool dense = false;
  /// Guard for the dense route.
  Index dense_budget = 5000;
};

/// Eigenpairs of a GrushinOperator. Eigenvectors are orthonormal for
/// <u, v> = cell_volume * sum u_i v_i.
///
/// Default route: -Delta_y is diagonalized by products of sine modes, which
/// splits L into one x-problem  A_x + mu_j diag(c)  per y-mode.
class SpectralData {
 public:
  const Grid& grid() const { return grid_; }
  /// Retained eigenvalues, ascending.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  Index size() const { return eigenvalues_.size(); }
  bool is_tensor() const { return tensor_; }
  bool truncated() const { return size() < grid_.size(); }

  /// <u, phi_j> for retained modes, ascending.
  Eigen::VectorXd analyze(const Eigen::VectorXd& u) const;
  /// sum_j c_j phi_j.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& c) const;

  /// sum_j m_j <u, phi_j> phi_j, m given in ascending order.
  Eigen::VectorXd apply_multiplier(const Eigen::VectorXd& u, const Eigen::VectorXd& m) const;

  template <class F>
  Eigen::VectorXd apply(const Eigen::VectorXd& u, F&& f) const {
    return apply_multiplier(u, eigenvalues_.unaryExpr(f));
  }

  /// Weighted-normalized eigenvector phi_j (ascending index j).
  Eigen::VectorXd eigenvector(Index j) const;

  /// Rows g of the matrix sum_j m_j Phi_j Phi_j^T (Euclidean eigenvectors).
  /// Dividing by cell_volume turns a heat multiplier into kernel values.
  Eigen::MatrixXd kernel_rows(const std::vector<Index>& rows, const Eigen::VectorXd& m) const;

  /// omega_j = phi_j^T D phi_j for D_{g g'} = |u(g) - u(g')|^p (Euclidean
  /// eigenvectors, ascending order).
  Eigen::VectorXd difference_spectrum(const Eigen::VectorXd& u, double p) const;

  /// Euclidean coefficients Phi^T v, ascending.
  Eigen::VectorXd euclidean_coefficients(const Eigen::VectorXd& v) const;

  double max_residual(const GrushinOperator& op, Index samples) const;
  double gram_defect(Index samples) const;

  friend SpectralData eigendecompose(const GrushinOperator& op, const EigenOptions& options);

 private:
  Eigen::VectorXd forward(const Eigen::VectorXd& u) const;   // internal order
  Eigen::VectorXd backward(const Eigen::VectorXd& c) const;  // internal order
  Eigen::VectorXd euclidean_column(Index internal) const;

  Grid grid_{GridSpec::uniform(1, 1, 0.0, 1.0, 3)};
  bool tensor_ = true;
  Eigen::VectorXd eigenvalues_;
  std::vector<Index> order_;  // ascending position -> internal index (retained only)
  Eigen::VectorXd internal_eigenvalues_;

  // tensor route
  Eigen::MatrixXd sy_;
  std::vector<Eigen::MatrixXd> x_modes_;  // one per y-mode
  // dense route
  Eigen::MatrixXd phi_;
};

SpectralData eigendecompose(const GrushinOperator& op, const EigenOptions& options = {});

struct OperatorResult {
  Eigen::VectorXd values;
  double error_estimate = 0.0;
  std::vector<std::string> warnings;
};

Eigen::VectorXd fractional_power_spectral(const SpectralData& spec, double s, const Eigen::VectorXd& u);

/// L^s u = -(s / Gamma(1-s)) int t^{-s-1} (e^{-tL}u - u) dt on log nodes,
/// Taylor head below t_min and a frozen-endpoint tail above t_max.
OperatorResult fractional_power_balakrishnan(const GrushinOperator& op, const SpectralData& spec, double s,
                                             const Eigen::VectorXd& u, const QuadratureSpec& quad,
                                             double tolerance = 1e-3);

Eigen::VectorXd riesz_potential(const SpectralData& spec, double alpha_tilde, const Eigen::VectorXd& u);

/// (1/Gamma(a/2)) int t^{a/2 - 1} e^{-tL} u dt by log quadrature.
OperatorResult riesz_potential_quadrature(const SpectralData& spec, double alpha_tilde, const Eigen::VectorXd& u,
                                          const QuadratureSpec& quad);

}  // namespace grushin
