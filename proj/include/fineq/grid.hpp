#pragma once

#include <memory>
#include <vector>

namespace fineq {

// Gauss-Legendre nodes and weights on [a, b]
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Product grid on the sphere: Gauss-Legendre in u = cos(theta),
// equispaced azimuth on [0, 2pi). Integrates prod-degree <= 2*n_u - 1
// in u and azimuthal modes |q| < n_phi exactly against dphi du.
class QuadratureGrid {
 public:
  QuadratureGrid(int n_u, int n_phi);

  int n_u() const { return static_cast<int>(u_.size()); }
  int n_phi() const { return n_phi_; }
  const std::vector<double>& u_nodes() const { return u_; }
  const std::vector<double>& u_weights() const { return wu_; }
  const std::vector<double>& phi_nodes() const { return phi_; }
  double phi_weight() const { return wphi_; }

  // true when the grid integrates Y_{l1,*} * Y_{l2,*} exactly
  bool resolves(int l_total) const;

 private:
  std::vector<double> u_, wu_, phi_;
  int n_phi_;
  double wphi_;
};

// Grids are immutable; shared instances are cached by (n_u, n_phi).
std::shared_ptr<const QuadratureGrid> get_grid(int n_u, int n_phi);

// smallest cached grid resolving spherical-harmonic degree l_total products
std::shared_ptr<const QuadratureGrid> grid_for_degree(int l_total);

}  // namespace fineq
