#include "fineq/sphere.hpp"

#include <cmath>
#include <numbers>

#include "fineq/errors.hpp"

namespace fineq {

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

void legendre_table(int l_max, double u, std::vector<double>& lam) {
  lam.assign(tri(l_max, l_max) + 1, 0.0);
  double s = std::sqrt(std::max(0.0, 1.0 - u * u));
  lam[tri(0, 0)] = std::sqrt(1.0 / (4.0 * kPi));
  for (int l = 1; l <= l_max; ++l)
    lam[tri(l, l)] = std::sqrt((2.0 * l + 1.0) / (2.0 * l)) * s * lam[tri(l - 1, l - 1)];
  for (int q = 0; q < l_max; ++q) {
    lam[tri(q + 1, q)] = std::sqrt(2.0 * q + 3.0) * u * lam[tri(q, q)];
    for (int l = q + 2; l <= l_max; ++l) {
      double a = std::sqrt((2.0 * l - 1.0) * (2.0 * l + 1.0) /
                           (double(l - q) * double(l + q)));
      double b = std::sqrt((2.0 * l + 1.0) * double(l - 1 - q) * double(l - 1 + q) /
                           (double(l - q) * double(l + q) * (2.0 * l - 3.0)));
      lam[tri(l, q)] = a * u * lam[tri(l - 1, q)] - b * lam[tri(l - 2, q)];
    }
  }
}

void legendre_theta_tables(int l_max, double u, std::vector<double>& lam,
                           std::vector<double>& lam_over_sin,
                           std::vector<double>& dlam_dtheta) {
  legendre_table(l_max, u, lam);
  lam_over_sin.assign(lam.size(), 0.0);
  dlam_dtheta.assign(lam.size(), 0.0);
  if (l_max == 0) return;
  double s = std::sqrt(std::max(0.0, 1.0 - u * u));
  // tilde Lambda = Lambda / sin(theta) satisfies the same recurrences (q >= 1)
  lam_over_sin[tri(1, 1)] = std::sqrt(3.0 / (8.0 * kPi));
  for (int l = 2; l <= l_max; ++l)
    lam_over_sin[tri(l, l)] =
        std::sqrt((2.0 * l + 1.0) / (2.0 * l)) * s * lam_over_sin[tri(l - 1, l - 1)];
  for (int q = 1; q < l_max; ++q) {
    lam_over_sin[tri(q + 1, q)] = std::sqrt(2.0 * q + 3.0) * u * lam_over_sin[tri(q, q)];
    for (int l = q + 2; l <= l_max; ++l) {
      double a = std::sqrt((2.0 * l - 1.0) * (2.0 * l + 1.0) /
                           (double(l - q) * double(l + q)));
      double b = std::sqrt((2.0 * l + 1.0) * double(l - 1 - q) * double(l - 1 + q) /
                           (double(l - q) * double(l + q) * (2.0 * l - 3.0)));
      lam_over_sin[tri(l, q)] =
          a * u * lam_over_sin[tri(l - 1, q)] - b * lam_over_sin[tri(l - 2, q)];
    }
  }
  for (int l = 1; l <= l_max; ++l) {
    dlam_dtheta[tri(l, 0)] = -std::sqrt(double(l) * (l + 1.0)) * lam[tri(l, 1)];
    for (int q = 1; q <= l; ++q) {
      double c = std::sqrt((double(l) * l - double(q) * q) * (2.0 * l + 1.0) /
                           (2.0 * l - 1.0));
      double prev = (l - 1 >= q) ? lam_over_sin[tri(l - 1, q)] : 0.0;
      dlam_dtheta[tri(l, q)] = l * u * lam_over_sin[tri(l, q)] - c * prev;
    }
  }
}

SphereFunction::SphereFunction(int l_max, std::vector<double> coeffs)
    : l_max_(l_max), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != (l_max_ + 1) * (l_max_ + 1))
    throw input_error("coefficient vector has wrong length for band limit");
}

double SphereFunction::coeff(int l, int q) const {
  if (l > l_max_ || std::abs(q) > l) return 0.0;
  return coeffs_[idx(l, q)];
}

double SphereFunction::eval(double u, double phi) const {
  std::vector<double> lam;
  legendre_table(l_max_, u, lam);
  double out = 0.0;
  for (int l = 0; l <= l_max_; ++l) out += coeffs_[idx(l, 0)] * lam[tri(l, 0)];
  for (int q = 1; q <= l_max_; ++q) {
    double radial_c = 0.0, radial_s = 0.0;
    for (int l = q; l <= l_max_; ++l) {
      radial_c += coeffs_[idx(l, q)] * lam[tri(l, q)];
      radial_s += coeffs_[idx(l, -q)] * lam[tri(l, q)];
    }
    out += kSqrt2 * (radial_c * std::cos(q * phi) + radial_s * std::sin(q * phi));
  }
  return out;
}

Vec3 SphereFunction::grad(const Vec3& p) const {
  double u = std::clamp(p[2], -1.0, 1.0);
  double phi = std::atan2(p[1], p[0]);
  std::vector<double> lam, los, dth;
  legendre_theta_tables(l_max_, u, lam, los, dth);
  double f_theta = 0.0, f_phi_over_sin = 0.0;
  for (int l = 1; l <= l_max_; ++l) f_theta += coeffs_[idx(l, 0)] * dth[tri(l, 0)];
  for (int q = 1; q <= l_max_; ++q) {
    double c = std::cos(q * phi), s = std::sin(q * phi);
    for (int l = q; l <= l_max_; ++l) {
      double a_c = coeffs_[idx(l, q)], a_s = coeffs_[idx(l, -q)];
      f_theta += kSqrt2 * (a_c * c + a_s * s) * dth[tri(l, q)];
      f_phi_over_sin += kSqrt2 * q * (-a_c * s + a_s * c) * los[tri(l, q)];
    }
  }
  double st = std::sqrt(std::max(0.0, 1.0 - u * u));
  double cp = std::cos(phi), sp = std::sin(phi);
  Vec3 e_theta = {u * cp, u * sp, -st};
  Vec3 e_phi = {-sp, cp, 0.0};
  return {f_theta * e_theta[0] + f_phi_over_sin * e_phi[0],
          f_theta * e_theta[1] + f_phi_over_sin * e_phi[1],
          f_theta * e_theta[2] + f_phi_over_sin * e_phi[2]};
}

const Eigen::MatrixXd& SphereFunction::samples(const QuadratureGrid& grid) const {
  if (cache_samples_ && cache_grid_ &&
      cache_grid_->n_u() == grid.n_u() && cache_grid_->n_phi() == grid.n_phi())
    return *cache_samples_;
  auto out = std::make_shared<Eigen::MatrixXd>(grid.n_u(), grid.n_phi());
  std::vector<double> lam;
  const auto& phis = grid.phi_nodes();
  for (int i = 0; i < grid.n_u(); ++i) {
    legendre_table(l_max_, grid.u_nodes()[i], lam);
    double a0 = 0.0;
    for (int l = 0; l <= l_max_; ++l) a0 += coeffs_[idx(l, 0)] * lam[tri(l, 0)];
    for (int p = 0; p < grid.n_phi(); ++p) (*out)(i, p) = a0;
    for (int q = 1; q <= l_max_; ++q) {
      double rc = 0.0, rs = 0.0;
      for (int l = q; l <= l_max_; ++l) {
        rc += coeffs_[idx(l, q)] * lam[tri(l, q)];
        rs += coeffs_[idx(l, -q)] * lam[tri(l, q)];
      }
      if (rc == 0.0 && rs == 0.0) continue;
      for (int p = 0; p < grid.n_phi(); ++p)
        (*out)(i, p) += kSqrt2 * (rc * std::cos(q * phis[p]) + rs * std::sin(q * phis[p]));
    }
  }
  cache_grid_ = get_grid(grid.n_u(), grid.n_phi());
  cache_samples_ = out;
  return *cache_samples_;
}

void SphereFunction::sample_derivatives(const QuadratureGrid& grid,
                                        Eigen::MatrixXd& d_theta,
                                        Eigen::MatrixXd& d_phi) const {
  d_theta.resize(grid.n_u(), grid.n_phi());
  d_phi.resize(grid.n_u(), grid.n_phi());
  d_theta.setZero();
  d_phi.setZero();
  std::vector<double> lam, los, dth;
  const auto& phis = grid.phi_nodes();
  for (int i = 0; i < grid.n_u(); ++i) {
    legendre_theta_tables(l_max_, grid.u_nodes()[i], lam, los, dth);
    double a0 = 0.0;
    for (int l = 1; l <= l_max_; ++l) a0 += coeffs_[idx(l, 0)] * dth[tri(l, 0)];
    for (int p = 0; p < grid.n_phi(); ++p) d_theta(i, p) = a0;
    for (int q = 1; q <= l_max_; ++q) {
      double tc = 0.0, ts = 0.0, vc = 0.0, vs = 0.0;
      for (int l = q; l <= l_max_; ++l) {
        tc += coeffs_[idx(l, q)] * dth[tri(l, q)];
        ts += coeffs_[idx(l, -q)] * dth[tri(l, q)];
        vc += coeffs_[idx(l, q)] * lam[tri(l, q)];
        vs += coeffs_[idx(l, -q)] * lam[tri(l, q)];
      }
      for (int p = 0; p < grid.n_phi(); ++p) {
        double c = std::cos(q * phis[p]), s = std::sin(q * phis[p]);
        d_theta(i, p) += kSqrt2 * (tc * c + ts * s);
        d_phi(i, p) += kSqrt2 * q * (-vc * s + vs * c);
      }
    }
  }
}

Eigen::MatrixXcd SphereFunction::azimuthal_profiles(
    const std::vector<double>& u_nodes) const {
  Eigen::MatrixXcd out(2 * l_max_ + 1, u_nodes.size());
  out.setZero();
  std::vector<double> lam;
  for (size_t a = 0; a < u_nodes.size(); ++a) {
    legendre_table(l_max_, u_nodes[a], lam);
    double p0 = 0.0;
    for (int l = 0; l <= l_max_; ++l) p0 += coeffs_[idx(l, 0)] * lam[tri(l, 0)];
    out(l_max_, a) = p0;
    for (int q = 1; q <= l_max_; ++q) {
      double rc = 0.0, rs = 0.0;
      for (int l = q; l <= l_max_; ++l) {
        rc += coeffs_[idx(l, q)] * lam[tri(l, q)];
        rs += coeffs_[idx(l, -q)] * lam[tri(l, q)];
      }
      std::complex<double> pq(rc / kSqrt2, -rs / kSqrt2);
      out(l_max_ + q, a) = pq;
      out(l_max_ - q, a) = std::conj(pq);
    }
  }
  return out;
}

SphereFunction SphereFunction::truncated(int new_l_max) const {
  if (new_l_max >= l_max_) return *this;
  std::vector<double> c((new_l_max + 1) * (new_l_max + 1), 0.0);
  double lost = 0.0;
  for (int l = 0; l <= l_max_; ++l)
    for (int q = -l; q <= l; ++q) {
      if (l <= new_l_max)
        c[(l * l) + q + l] = coeffs_[idx(l, q)];
      else
        lost += coeffs_[idx(l, q)] * coeffs_[idx(l, q)];
    }
  SphereFunction out(new_l_max, std::move(c));
  out.truncation_error_ = std::sqrt(lost + truncation_error_ * truncation_error_);
  return out;
}

SphereFunction operator+(const SphereFunction& a, const SphereFunction& b) {
  int l = std::max(a.l_max(), b.l_max());
  std::vector<double> c((l + 1) * (l + 1), 0.0);
  for (int li = 0; li <= l; ++li)
    for (int q = -li; q <= li; ++q)
      c[li * li + q + li] = a.coeff(li, q) + b.coeff(li, q);
  return SphereFunction(l, std::move(c));
}

SphereFunction operator-(const SphereFunction& a, const SphereFunction& b) {
  return a + (-1.0) * b;
}

SphereFunction operator*(double s, const SphereFunction& f) {
  std::vector<double> c = f.coeffs();
  for (auto& v : c) v *= s;
  return SphereFunction(f.l_max(), std::move(c));
}

SphereFunction analyze(const QuadratureGrid& grid, const Eigen::MatrixXd& samples,
                       int l_max) {
  if (!grid.resolves(2 * l_max))
    throw resolution_error("grid does not resolve analysis band limit");
  std::vector<double> c((l_max + 1) * (l_max + 1), 0.0);
  const int nu = grid.n_u(), np = grid.n_phi();
  const auto& phis = grid.phi_nodes();
  const double wphi = grid.phi_weight();

  // azimuthal projections b_q(u), then Legendre projections
  Eigen::MatrixXd bc(nu, l_max + 1), bs(nu, l_max + 1);
  bc.setZero();
  bs.setZero();
  for (int i = 0; i < nu; ++i)
    for (int p = 0; p < np; ++p) {
      double v = wphi * samples(i, p);
      bc(i, 0) += v;
      for (int q = 1; q <= l_max; ++q) {
        bc(i, q) += v * std::cos(q * phis[p]);
        bs(i, q) += v * std::sin(q * phis[p]);
      }
    }
  std::vector<double> lam;
  double mass = 0.0;
  for (int i = 0; i < nu; ++i) {
    legendre_table(l_max, grid.u_nodes()[i], lam);
    double wu = grid.u_weights()[i];
    for (int l = 0; l <= l_max; ++l)
      c[SphereFunction::idx(l, 0)] += wu * lam[tri(l, 0)] * bc(i, 0);
    for (int q = 1; q <= l_max; ++q)
      for (int l = q; l <= l_max; ++l) {
        c[SphereFunction::idx(l, q)] += wu * kSqrt2 * lam[tri(l, q)] * bc(i, q);
        c[SphereFunction::idx(l, -q)] += wu * kSqrt2 * lam[tri(l, q)] * bs(i, q);
      }
    for (int p = 0; p < np; ++p) mass += wu * wphi * samples(i, p) * samples(i, p);
  }
  SphereFunction out(l_max, std::move(c));
  double captured = 0.0;
  for (double v : out.coeffs()) captured += v * v;
  out.truncation_error_ = std::sqrt(std::max(0.0, mass - captured));
  return out;
}

double integrate(const SphereFunction& f) {
  return std::sqrt(kPi) * f.coeff(0, 0);
}

SphereFunction normalize_zero_mean(const SphereFunction& f) {
  std::vector<double> c = f.coeffs();
  c[SphereFunction::idx(0, 0)] = 0.0;
  return SphereFunction(f.l_max(), std::move(c));
}

SphereFunction laplacian(const SphereFunction& f) {
  std::vector<double> c = f.coeffs();
  for (int l = 0; l <= f.l_max(); ++l)
    for (int q = -l; q <= l; ++q)
      c[SphereFunction::idx(l, q)] *= -double(l) * (l + 1.0);
  return SphereFunction(f.l_max(), std::move(c));
}

SphereFunction poisson_bracket(const SphereFunction& f, const SphereFunction& g,
                               int l_cap) {
  int l_exact = f.l_max() + g.l_max();
  int l_out = std::min(l_exact, l_cap);
  auto grid = grid_for_degree(l_exact + l_out);
  Eigen::MatrixXd ft, fp, gt, gp;
  f.sample_derivatives(*grid, ft, fp);
  g.sample_derivatives(*grid, gt, gp);
  Eigen::MatrixXd pb(grid->n_u(), grid->n_phi());
  for (int i = 0; i < grid->n_u(); ++i) {
    double st = std::sqrt(std::max(1e-300, 1.0 - grid->u_nodes()[i] * grid->u_nodes()[i]));
    for (int p = 0; p < grid->n_phi(); ++p)
      pb(i, p) = 2.0 / st * (ft(i, p) * gp(i, p) - fp(i, p) * gt(i, p));
  }
  return analyze(*grid, pb, l_out);
}

SphereFunction multiply(const SphereFunction& f, const SphereFunction& g,
                        int l_cap) {
  int l_exact = f.l_max() + g.l_max();
  int l_out = std::min(l_exact, l_cap);
  auto grid = grid_for_degree(l_exact + l_out);
  Eigen::MatrixXd prod =
      f.samples(*grid).cwiseProduct(g.samples(*grid));
  return analyze(*grid, prod, l_out);
}

double sup_norm(const SphereFunction& f) {
  // coarse scan in (theta, phi), poles included
  const int nt = 181, np = 360;
  double best = 0.0, best_theta = 0.0, best_phi = 0.0;
  for (int i = 0; i <= nt; ++i) {
    double theta = kPi * i / nt;
    double u = std::cos(theta);
    for (int p = 0; p < np; ++p) {
      double phi = 2.0 * kPi * p / np;
      double v = std::abs(f.eval(u, phi));
      if (v > best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }
  // local refinement: alternating golden-section in theta and phi
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  auto val = [&](double th, double ph) { return std::abs(f.eval(std::cos(th), ph)); };
  double dt = kPi / nt, dp = 2.0 * kPi / np;
  double th = best_theta, ph = best_phi;
  for (int iter = 0; iter < 120; ++iter) {
    {
      double a = th - dt, b = th + dt;
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      for (int j = 0; j < 30; ++j) {
        if (val(x1, ph) > val(x2, ph)) { b = x2; x2 = x1; x1 = b - gr * (b - a); }
        else { a = x1; x1 = x2; x2 = a + gr * (b - a); }
      }
      th = 0.5 * (a + b);
    }
    {
      double a = ph - dp, b = ph + dp;
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      for (int j = 0; j < 30; ++j) {
        if (val(th, x1) > val(th, x2)) { b = x2; x2 = x1; x1 = b - gr * (b - a); }
        else { a = x1; x1 = x2; x2 = a + gr * (b - a); }
      }
      ph = 0.5 * (a + b);
    }
    double v = val(th, ph);
    if (v > best) best = v;
    dt *= 0.5;
    dp *= 0.5;
    if (dt < 1e-12 && dp < 1e-12) break;
  }
  return best;
}

namespace {

SphereFunction delta_harmonic(int l, int q) {
  std::vector<double> c((l + 1) * (l + 1), 0.0);
  c[SphereFunction::idx(l, q)] = 1.0;
  return SphereFunction(l, std::move(c));
}

std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else
      cur.push_back(ch);
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

std::string strip(const std::string& s) {
  auto a = s.find_first_not_of(" \t");
  auto b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

SphereFunction make_function(const std::string& raw) {
  std::string name = strip(raw);
  if (name == "u")
    return from_pointwise([](double u, double) { return u; }, 1);
  if (name == "x")
    return from_pointwise(
        [](double u, double phi) { return std::sqrt(1.0 - u * u) * std::cos(phi); }, 1);
  if (name == "y")
    return from_pointwise(
        [](double u, double phi) { return std::sqrt(1.0 - u * u) * std::sin(phi); }, 1);
  if (name == "u2")
    return from_pointwise([](double u, double) { return u * u - 1.0 / 3.0; }, 2);
  if (name == "xy")
    return from_pointwise(
        [](double u, double phi) {
          double s2 = 1.0 - u * u;
          return s2 * std::cos(phi) * std::sin(phi);
        },
        2);
  if (name == "xz")
    return from_pointwise(
        [](double u, double phi) { return std::sqrt(1.0 - u * u) * std::cos(phi) * u; }, 2);
  if (name == "Y3m2") return delta_harmonic(3, -2);
  if (name.rfind("lincomb(", 0) == 0 && name.back() == ')') {
    auto inner = name.substr(8, name.size() - 9);
    SphereFunction acc;
    for (const auto& part : split_top_level(inner)) {
      auto term = strip(part);
      auto star = term.find('*');
      if (star == std::string::npos)
        throw config_error("lincomb term '" + term + "' must be coef*name");
      double coef = 0.0;
      try {
        coef = std::stod(term.substr(0, star));
      } catch (const std::exception&) {
        throw config_error("bad coefficient in lincomb term '" + term + "'");
      }
      acc = acc + coef * make_function(term.substr(star + 1));
    }
    return acc;
  }
  throw config_error("unknown function name '" + name + "'");
}

}  // namespace fineq
