#pragma once

// Classical phase space: the sphere CP^1 with Fubini-Study form of total
// area 2pi, written in the chart u = cos(theta), phi = azimuth.  In these
// coordinates omega = (1/2) dphi ^ du and the sign convention
// i_{sgrad f} omega = -df gives {f,g} = (2/sin theta)(f_theta g_phi - f_phi g_theta).

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "fineq/grid.hpp"

namespace fineq {

inline constexpr double kTotalArea = 2.0 * 3.14159265358979323846;
inline constexpr int kDefaultLCap = 64;

using Vec3 = std::array<double, 3>;

inline Vec3 embed(double u, double phi) {
  double s = std::sqrt(std::max(0.0, 1.0 - u * u));
  return {s * std::cos(phi), s * std::sin(phi), u};
}

// Fully normalized associated Legendre values Lambda_{l,q}(u), q >= 0,
// orthonormal against dphi du together with sqrt(2) cos/sin azimuth factors.
// Flat index tri(l, q) = l(l+1)/2 + q.
inline int tri(int l, int q) { return l * (l + 1) / 2 + q; }
void legendre_table(int l_max, double u, std::vector<double>& lam);
// lam, lam/sin(theta) (q >= 1 slots; q = 0 slots unset), d lam/d theta
void legendre_theta_tables(int l_max, double u, std::vector<double>& lam,
                           std::vector<double>& lam_over_sin,
                           std::vector<double>& dlam_dtheta);

// Real band-limited function stored as real spherical-harmonic
// coefficients; immutable value type with a lazily cached sample grid.
class SphereFunction {
 public:
  SphereFunction() : l_max_(0), coeffs_(1, 0.0) {}
  SphereFunction(int l_max, std::vector<double> coeffs);

  // index (l, q), |q| <= l <= l_max
  static int idx(int l, int q) { return l * l + (q + l); }

  int l_max() const { return l_max_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(int l, int q) const;
  double truncation_error() const { return truncation_error_; }

  double eval(double u, double phi) const;
  Vec3 grad(const Vec3& p) const;  // tangential gradient at |p| = 1

  // synthesized samples, n_u x n_phi; cached per grid
  const Eigen::MatrixXd& samples(const QuadratureGrid& grid) const;
  // d/dtheta and d/dphi sample fields
  void sample_derivatives(const QuadratureGrid& grid, Eigen::MatrixXd& d_theta,
                          Eigen::MatrixXd& d_phi) const;

  // azimuthal profiles f_q(u) with f = sum_q f_q(u) e^{i q phi};
  // row index q + l_max, one column per requested u value
  Eigen::MatrixXcd azimuthal_profiles(const std::vector<double>& u_nodes) const;

  SphereFunction truncated(int new_l_max) const;

  friend SphereFunction operator+(const SphereFunction& a, const SphereFunction& b);
  friend SphereFunction operator-(const SphereFunction& a, const SphereFunction& b);
  friend SphereFunction operator*(double s, const SphereFunction& f);

 private:
  int l_max_;
  std::vector<double> coeffs_;  // (l_max+1)^2 entries, idx(l, q)
  double truncation_error_ = 0.0;
  mutable std::shared_ptr<const QuadratureGrid> cache_grid_;
  mutable std::shared_ptr<Eigen::MatrixXd> cache_samples_;

  friend SphereFunction analyze(const QuadratureGrid&, const Eigen::MatrixXd&, int);
};

// quadrature projection onto harmonics up to l_max; records the residual
// mass not representable at this band limit in truncation_error()
SphereFunction analyze(const QuadratureGrid& grid, const Eigen::MatrixXd& samples,
                       int l_max);

// build from a pointwise formula, exact when the formula is band-limited
template <typename F>
SphereFunction from_pointwise(F&& fn, int l_max) {
  auto grid = grid_for_degree(2 * l_max + 2);
  Eigen::MatrixXd samples(grid->n_u(), grid->n_phi());
  for (int i = 0; i < grid->n_u(); ++i)
    for (int p = 0; p < grid->n_phi(); ++p)
      samples(i, p) = fn(grid->u_nodes()[i], grid->phi_nodes()[p]);
  return analyze(*grid, samples, l_max);
}

double integrate(const SphereFunction& f);  // against omega
SphereFunction normalize_zero_mean(const SphereFunction& f);
SphereFunction laplacian(const SphereFunction& f);  // diag(-l(l+1))
SphereFunction poisson_bracket(const SphereFunction& f, const SphereFunction& g,
                               int l_cap = kDefaultLCap);
SphereFunction multiply(const SphereFunction& f, const SphereFunction& g,
                        int l_cap = kDefaultLCap);

// max |f| over the sphere (coarse scan plus local refinement)
double sup_norm(const SphereFunction& f);

// named registry: "u", "x", "y", "u2", "xy", "xz", "Y3m2",
// "lincomb(a*name,b*name,...)"; throws config_error on unknown names
SphereFunction make_function(const std::string& name);

}  // namespace fineq
