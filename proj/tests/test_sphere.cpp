#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fineq/errors.hpp"
#include "fineq/sphere.hpp"

using namespace fineq;
constexpr double pi = std::numbers::pi;

namespace {

SphereFunction constant_one() {
  return from_pointwise([](double, double) { return 1.0; }, 0);
}

// central-difference bracket in the (u, phi) chart:
// {f,g} = 2 (f_phi g_u - f_u g_phi)
double fd_bracket(const SphereFunction& f, const SphereFunction& g, double u,
                  double phi) {
  const double h = 1e-5;
  auto du = [&](const SphereFunction& fn) {
    return (fn.eval(u + h, phi) - fn.eval(u - h, phi)) / (2 * h);
  };
  auto dphi = [&](const SphereFunction& fn) {
    return (fn.eval(u, phi + h) - fn.eval(u, phi - h)) / (2 * h);
  };
  return 2.0 * (dphi(f) * du(g) - du(f) * dphi(g));
}

}  // namespace

TEST_CASE("quadrature integrates harmonics to zero") {
  for (int l = 1; l <= 12; ++l)
    for (int q = -l; q <= l; ++q) {
      std::vector<double> coeffs((l + 1) * (l + 1), 0.0);
      coeffs[SphereFunction::idx(l, q)] = 1.0;
      SphereFunction y(l, coeffs);
      CHECK(std::abs(integrate(y)) < 1e-12);
    }
}

TEST_CASE("analyze round-trips random band-limited functions") {
  std::mt19937 rng(11);
  std::normal_distribution<double> gauss;
  const int l_max = 8;
  std::vector<double> coeffs((l_max + 1) * (l_max + 1));
  for (auto& c : coeffs) c = gauss(rng);
  SphereFunction f(l_max, coeffs);
  auto grid = grid_for_degree(2 * l_max + 2);
  SphereFunction back = analyze(*grid, f.samples(*grid), l_max);
  for (int l = 0; l <= l_max; ++l)
    for (int q = -l; q <= l; ++q)
      CHECK(back.coeff(l, q) == doctest::Approx(f.coeff(l, q)).epsilon(1e-12));
  // the residual-mass estimate loses half its digits to the square root
  CHECK(back.truncation_error() < 1e-5);
}

TEST_CASE("coordinate functions evaluate to their formulas") {
  SphereFunction fu = make_function("u");
  SphereFunction fx = make_function("x");
  SphereFunction fy = make_function("y");
  for (double u : {-0.9, -0.3, 0.2, 0.7})
    for (double phi : {0.1, 1.3, 4.0}) {
      double s = std::sqrt(1 - u * u);
      CHECK(fu.eval(u, phi) == doctest::Approx(u).epsilon(1e-12));
      CHECK(fx.eval(u, phi) == doctest::Approx(s * std::cos(phi)).epsilon(1e-12));
      CHECK(fy.eval(u, phi) == doctest::Approx(s * std::sin(phi)).epsilon(1e-12));
    }
}

TEST_CASE("integration and normalization") {
  CHECK(integrate(constant_one()) == doctest::Approx(2 * pi).epsilon(1e-13));
  SphereFunction usq = from_pointwise([](double u, double) { return u * u; }, 2);
  CHECK(integrate(usq) == doctest::Approx(2 * pi / 3.0).epsilon(1e-13));
  SphereFunction z = normalize_zero_mean(usq);
  CHECK(std::abs(integrate(z)) < 1e-12);
  CHECK(z.eval(0.5, 0.0) == doctest::Approx(0.25 - 1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("x^2 + y^2 + u^2 = 1 under multiply") {
  SphereFunction fx = make_function("x"), fy = make_function("y"),
                 fu = make_function("u");
  SphereFunction sum =
      multiply(fx, fx) + multiply(fy, fy) + multiply(fu, fu) - constant_one();
  CHECK(sup_norm(sum) < 1e-11);
}

TEST_CASE("laplacian acts diagonally") {
  SphereFunction fu = make_function("u");
  SphereFunction d = laplacian(fu) + 2.0 * fu;
  CHECK(sup_norm(d) < 1e-12);
  SphereFunction fxy = make_function("xy");
  CHECK(sup_norm(laplacian(fxy) + 6.0 * fxy) < 1e-12);
}

TEST_CASE("sup norms of named functions") {
  CHECK(sup_norm(make_function("u")) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sup_norm(make_function("x")) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sup_norm(make_function("u2")) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("bracket identities in closed form") {
  SphereFunction fx = make_function("x"), fy = make_function("y"),
                 fu = make_function("u");
  CHECK(sup_norm(poisson_bracket(fx, fy) - 2.0 * fu) < 1e-10);
  CHECK(sup_norm(poisson_bracket(fu, fx) - 2.0 * fy) < 1e-10);
  // {u^2 - 1/3, xy} = -4 u sin^2(theta) cos(2 phi)
  SphereFunction lhs = poisson_bracket(make_function("u2"), make_function("xy"));
  SphereFunction rhs = from_pointwise(
      [](double u, double phi) {
        return -4.0 * u * (1 - u * u) * std::cos(2 * phi);
      },
      3);
  CHECK(sup_norm(lhs - rhs) < 1e-10);
}

TEST_CASE("bracket matches finite differences at random points") {
  SphereFunction f = make_function("u2");
  SphereFunction g = make_function("xy");
  SphereFunction br = poisson_bracket(f, g);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uu(-0.8, 0.8), pp(0.0, 2 * pi);
  for (int i = 0; i < 20; ++i) {
    double u = uu(rng), phi = pp(rng);
    CHECK(br.eval(u, phi) == doctest::Approx(fd_bracket(f, g, u, phi)).epsilon(1e-5));
  }
}

TEST_CASE("Jacobi identity") {
  SphereFunction f = make_function("u2"), g = make_function("x"),
                 h = make_function("xy");
  SphereFunction acc = poisson_bracket(f, poisson_bracket(g, h)) +
                       poisson_bracket(g, poisson_bracket(h, f)) +
                       poisson_bracket(h, poisson_bracket(f, g));
  CHECK(sup_norm(acc) < 1e-8);
}

TEST_CASE("Leibniz rule") {
  SphereFunction f = make_function("u2"), g = make_function("x"),
                 h = make_function("y");
  SphereFunction lhs = poisson_bracket(f, multiply(g, h));
  SphereFunction rhs =
      multiply(poisson_bracket(f, g), h) + multiply(g, poisson_bracket(f, h));
  CHECK(sup_norm(lhs - rhs) < 1e-8);
}

TEST_CASE("gradient matches finite differences on the embedding") {
  SphereFunction f = make_function("xz");
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uu(-0.8, 0.8), pp(0.0, 2 * pi);
  for (int i = 0; i < 10; ++i) {
    double u = uu(rng), phi = pp(rng);
    Vec3 p = embed(u, phi);
    Vec3 grad = f.grad(p);
    // tangency
    CHECK(std::abs(grad[0] * p[0] + grad[1] * p[1] + grad[2] * p[2]) < 1e-8);
    // directional derivative along a tangent direction
    double s = std::sqrt(1 - u * u);
    Vec3 e_phi = {-std::sin(phi), std::cos(phi), 0.0};
    double h = 1e-6;
    double fd = (f.eval(u, phi + h / s) - f.eval(u, phi - h / s)) / (2 * h);
    CHECK(grad[0] * e_phi[0] + grad[1] * e_phi[1] + grad[2] * e_phi[2] ==
          doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("truncation error is reported when the band limit is too low") {
  SphereFunction f = from_pointwise(
      [](double u, double phi) { return std::pow(u, 3) * std::cos(2 * phi); }, 1);
  CHECK(f.truncation_error() > 1e-3);
}

TEST_CASE("lincomb parsing and unknown names") {
  SphereFunction f = make_function("lincomb(2*u,-1*x)");
  for (double u : {-0.5, 0.4})
    for (double phi : {0.3, 2.0}) {
      double s = std::sqrt(1 - u * u);
      CHECK(f.eval(u, phi) ==
            doctest::Approx(2 * u - s * std::cos(phi)).epsilon(1e-10));
    }
  CHECK_THROWS_AS(make_function("nope"), config_error);
}

TEST_CASE("grid resolution guard") {
  QuadratureGrid grid(4, 8);
  CHECK(grid.resolves(7));
  CHECK_FALSE(grid.resolves(8));
}
