#include "fineq/quantization.hpp"

#include <cmath>
#include <numbers>

#include "fineq/errors.hpp"
#include "fineq/grid.hpp"

namespace fineq {

namespace {
constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

// amp(j, a) = c_j t_a^{j/2} (1-t_a)^{(m-j)/2}, evaluated in log space;
// c_j = sqrt((m+1) binom(m,j) / 2pi)
Eigen::MatrixXd amplitude_table(int m, const std::vector<double>& t_nodes) {
  Eigen::MatrixXd amp(m + 1, t_nodes.size());
  for (int j = 0; j <= m; ++j) {
    double logc = 0.5 * (std::log(m + 1.0) + std::lgamma(m + 1.0) -
                         std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0) -
                         std::log(2.0 * kPi));
    for (size_t a = 0; a < t_nodes.size(); ++a) {
      double t = t_nodes[a];
      amp(j, a) = std::exp(logc + 0.5 * j * std::log(t) +
                           0.5 * (m - j) * std::log(1.0 - t));
    }
  }
  return amp;
}

}  // namespace

Matrix toeplitz(const QuantizationLevel& level, const SphereFunction& f) {
  const int m = level.m();
  const int lmax = f.l_max();
  // radial integrand after t = r^2/(1+r^2) is polynomial of degree <= m + lmax
  const int n_t = (m + lmax) / 2 + 3;
  GaussRule rule = gauss_legendre(n_t, 0.0, 1.0);

  std::vector<double> u_nodes(n_t);
  for (int a = 0; a < n_t; ++a) u_nodes[a] = 1.0 - 2.0 * rule.nodes[a];
  Eigen::MatrixXcd profiles = f.azimuthal_profiles(u_nodes);
  Eigen::MatrixXd amp = amplitude_table(m, rule.nodes);

  Matrix out = Matrix::Zero(level.dim(), level.dim());
  for (int q = -std::min(lmax, m); q <= std::min(lmax, m); ++q) {
    // entry (i, j) with i - j = q consumes azimuthal mode q of f
    bool any = false;
    for (int a = 0; a < n_t; ++a)
      if (std::abs(profiles(lmax + q, a)) > 0.0) any = true;
    if (!any) continue;
    for (int j = std::max(0, -q); j + q <= m && j <= m; ++j) {
      int i = j + q;
      cplx acc = 0.0;
      for (int a = 0; a < n_t; ++a)
        acc += rule.weights[a] * profiles(lmax + q, a) * amp(i, a) * amp(j, a);
      out(i, j) = 2.0 * kPi * acc;
    }
  }
  return out;
}

Matrix op_fine(const QuantizationLevel& level, const SphereFunction& f) {
  SphereFunction corrected = f - (0.5 / level.k) * laplacian(f);
  return toeplitz(level, corrected);
}

Matrix quantize(const QuantizationLevel& level, const SphereFunction& f, bool fine) {
  return fine ? op_fine(level, f) : toeplitz(level, f);
}

double bracket_defect(const QuantizationLevel& level, const SphereFunction& f,
                      const SphereFunction& g, bool fine, int l_cap) {
  Matrix qf = quantize(level, f, fine);
  Matrix qg = quantize(level, g, fine);
  Matrix qb = quantize(level, poisson_bracket(f, g, l_cap), fine);
  cplx hbar_over_i(0.0, -level.hbar());  // hbar/i = -i hbar
  return op_norm(commutator(qf, qg) - hbar_over_i * qb);
}

Eigen::VectorXd singular_values(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return vals.reverse();
}

double op_norm(const Matrix& a) {
  if (a.rows() == 0) return 0.0;
  return singular_values(a)(0);
}

double schatten_norm(const Matrix& a, double p) {
  if (p < 1.0) throw domain_error("Schatten norm requires p >= 1");
  if (std::isinf(p)) return op_norm(a);
  Eigen::VectorXd sv = singular_values(a);
  double acc = 0.0;
  for (int i = 0; i < sv.size(); ++i) acc += std::pow(sv(i), p);
  return std::pow(acc, 1.0 / p);
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double hermitian_defect(const Matrix& a) {
  return (a - a.adjoint().eval()).cwiseAbs().maxCoeff();
}

Matrix unitary_exp(const Matrix& h, double scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXcd phases(h.rows());
  for (int i = 0; i < h.rows(); ++i)
    phases(i) = std::polar(1.0, -scale * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double projective_distance(const Matrix& u, const Matrix& v, double p) {
  auto dist = [&](double theta) {
    return schatten_norm(u - cplx(std::polar(1.0, theta)) * v, p);
  };
  const int n_coarse = 256;
  double best = dist(0.0), best_theta = 0.0;
  for (int i = 1; i < n_coarse; ++i) {
    double theta = 2.0 * kPi * i / n_coarse;
    double d = dist(theta);
    if (d < best) {
      best = d;
      best_theta = theta;
    }
  }
  // golden-section refinement around the coarse minimum
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_theta - 2.0 * kPi / n_coarse;
  double b = best_theta + 2.0 * kPi / n_coarse;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = dist(x1), f2 = dist(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = dist(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = dist(x2);
    }
  }
  return std::min({best, f1, f2});
}

double gram_defect(const QuantizationLevel& level) {
  const int m = level.m();
  const int n_t = m / 2 + 2;
  GaussRule rule = gauss_legendre(n_t, 0.0, 1.0);
  Eigen::MatrixXd amp = amplitude_table(m, rule.nodes);
  Eigen::MatrixXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), n_t);
  Eigen::MatrixXd radial = amp * w.asDiagonal() * amp.transpose();

  // azimuthal factor for mode d, N-point trapezoid on the circle (N > m)
  const int n_phi = m + 1;
  std::vector<cplx> az(2 * m + 1);
  for (int d = -m; d <= m; ++d) {
    cplx acc = 0.0;
    for (int pth = 0; pth < n_phi; ++pth)
      acc += std::polar(1.0, d * 2.0 * kPi * pth / n_phi);
    az[d + m] = acc * (2.0 * kPi / n_phi);
  }

  double worst = 0.0;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      cplx g = radial(i, j) * az[(j - i) + m];
      double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g - target));
    }
  return worst;
}

}  // namespace fineq
