#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fineq/dynamics.hpp"
#include "fineq/errors.hpp"
#include "fineq/flow.hpp"
#include "fineq/quantization.hpp"

using namespace fineq;
using std::complex;
constexpr double pi = std::numbers::pi;
const complex<double> I_(0.0, 1.0);

namespace {

double mat_dist(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Vec3 random_point(std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Vec3 p{gauss(rng), gauss(rng), gauss(rng)};
  double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  return {p[0] / n, p[1] / n, p[2] / n};
}

double dist3(const Vec3& a, const Vec3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

TEST_CASE("the zero path propagates to the identity") {
  for (int k : {1, 4, 16}) {
    UnitaryPropagator u = propagate(QuantizationLevel(k), make_path("zero"));
    CHECK(mat_dist(u.mat, Matrix::Identity(k, k)) < 1e-13);
    CHECK(u.integrator_defect == 0.0);
  }
}

TEST_CASE("the 2pi rotation loop quantizes to a parity sign") {
  for (int k = 1; k <= 16; ++k) {
    UnitaryPropagator u = propagate(QuantizationLevel(k), make_path("twopiloop"));
    double sign = (k % 2 == 1) ? 1.0 : -1.0;
    CHECK(mat_dist(u.mat, sign * Matrix::Identity(k, k)) < 1e-11);
  }
}

TEST_CASE("the 4pi rotation loop quantizes to the identity") {
  for (int k : {2, 7, 16}) {
    UnitaryPropagator u = propagate(QuantizationLevel(k), make_path("fourpiloop"));
    CHECK(mat_dist(u.mat, Matrix::Identity(k, k)) < 1e-11);
  }
}

TEST_CASE("inverse paths invert the propagator") {
  QuantizationLevel level(9);
  HamiltonianPath p = make_path("rot_x(pi/3)");
  Matrix u = propagate(level, p).mat;
  Matrix v = propagate(level, inverse_path(p)).mat;
  CHECK(mat_dist(v * u, Matrix::Identity(9, 9)) < 1e-11);
  // registry spelling produces the same path
  Matrix w = propagate(level, make_path("inv(rot_x(pi/3))")).mat;
  CHECK(mat_dist(w, v) < 1e-11);
}

TEST_CASE("products of commuting rotations add their angles") {
  QuantizationLevel level(8);
  HamiltonianPath prod = make_path("prod(rot_u(pi/3),rot_u(pi/4))");
  CHECK(prod.all_constant());
  Matrix u = propagate(level, prod).mat;
  Matrix v = propagate(level, make_path("rot_u(7*pi/12)")).mat;
  CHECK(mat_dist(u, v) < 1e-11);
}

TEST_CASE("product with the zero path is a no-op") {
  QuantizationLevel level(6);
  HamiltonianPath p = make_path("rot_x(pi/5)");
  Matrix u = propagate(level, p).mat;
  Matrix v = propagate(level, make_path("prod(rot_x(pi/5),zero)")).mat;
  CHECK(mat_dist(u, v) < 1e-11);
}

TEST_CASE("concatenation of equal rotations doubles the angle") {
  QuantizationLevel level(8);
  Matrix u = propagate(level, make_path("concat(rot_u(pi/6),rot_u(pi/6))")).mat;
  Matrix v = propagate(level, make_path("rot_u(pi/3)")).mat;
  CHECK(mat_dist(u, v) < 1e-11);
}

TEST_CASE("product-path Hamiltonians stay zero-mean") {
  HamiltonianPath p = make_path("prod(rot_x(pi/3),rot_u(pi/3))");
  for (double t : {0.1, 0.45, 0.8})
    CHECK(std::abs(integrate(p.hamiltonian(t))) < 1e-10);
}

TEST_CASE("adaptive integrator agrees with a forced midpoint run") {
  QuantizationLevel level(8);
  HamiltonianPath p = make_path("prod(rot_x(pi/3),rot_u(pi/3))");
  CHECK_FALSE(p.all_constant());
  UnitaryPropagator u = propagate(level, p);
  CHECK(u.integrator_defect < 1e-9);
  Matrix ref = propagate_midpoint(level, p, 8192);
  CHECK(mat_dist(u.mat, ref) < 1e-5);
}

TEST_CASE("midpoint scheme converges at second order") {
  QuantizationLevel level(8);
  HamiltonianPath p = make_path("prod(rot_x(pi/3),rot_u(pi/3))");
  Matrix ref = propagate(level, p).mat;
  double e1 = mat_dist(propagate_midpoint(level, p, 64), ref);
  double e2 = mat_dist(propagate_midpoint(level, p, 128), ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("loop invariants of the 2pi loop") {
  HamiltonianPath loop = make_path("twopiloop");
  for (int k : {1, 2, 3, 8}) {
    LoopInvariants inv = loop_invariants(loop, Vec3{0.0, 0.0, 1.0}, k);
    CHECK(inv.action == doctest::Approx(-pi).epsilon(1e-9));
    CHECK(inv.maslov_parity == 1);
    double sign = (k % 2 == 1) ? 1.0 : -1.0;
    CHECK(std::abs(std::exp(I_ * inv.predicted_phase) - sign) < 1e-9);
  }
}

TEST_CASE("loop invariants of the 4pi loop") {
  HamiltonianPath loop = make_path("fourpiloop");
  LoopInvariants inv = loop_invariants(loop, Vec3{0.0, 0.0, 1.0}, 5);
  CHECK(std::abs(reduce_mod_2pi(inv.action)) < 1e-9);
  CHECK(inv.maslov_parity == 0);
  CHECK(std::abs(std::exp(I_ * inv.predicted_phase) - 1.0) < 1e-9);
}

TEST_CASE("non-loops are rejected") {
  CHECK_THROWS_AS(
      loop_invariants(make_path("rot_u(pi/3)"), Vec3{1.0, 0.0, 0.0}, 4),
      not_a_loop_error);
}

TEST_CASE("pullback transports coordinates the covariant way") {
  double a = pi / 3;
  HamiltonianPath p = make_path("rot_u(pi/3)");
  REQUIRE(p.flow.has_value());
  CHECK(p.flow->is_rigid());
  SphereFunction pb = pullback(make_function("x"), *p.flow, 1.0);
  SphereFunction expected =
      std::cos(a) * make_function("x") - std::sin(a) * make_function("y");
  CHECK(sup_norm(pb - expected) < 1e-10);
  CHECK(pb.l_max() == 1);  // rotations preserve the band limit
}

TEST_CASE("velocity field of the height Hamiltonian") {
  double a = 0.8;
  SphereFunction f = (a / 2.0) * make_function("u");
  std::mt19937 rng(9);
  for (int i = 0; i < 5; ++i) {
    Vec3 p = random_point(rng);
    Vec3 v = hamiltonian_velocity(f, p);
    // sgrad of (a/2) u generates rotation about z at rate -a
    Vec3 want{a * p[1], -a * p[0], 0.0};
    CHECK(dist3(v, want) < 1e-8);
  }
}

TEST_CASE("numeric flow reproduces the closed-form rotation") {
  double a = 0.9;
  SphereFunction f = (a / 2.0) * make_function("u");
  ClassicalFlow numeric = ClassicalFlow::numeric([f](double) { return f; });
  ClassicalFlow exact = ClassicalFlow::rotation(Vec3{0.0, 0.0, 1.0}, -a);
  CHECK_FALSE(numeric.is_rigid());
  CHECK(exact.is_rigid());
  std::mt19937 rng(13);
  for (int i = 0; i < 4; ++i) {
    Vec3 p = random_point(rng);
    CHECK(dist3(numeric.apply(1.0, p), exact.apply(1.0, p)) < 1e-7);
  }
}

TEST_CASE("axisymmetric flow matches numeric integration") {
  SphereFunction f = make_function("u2");
  ClassicalFlow axi = ClassicalFlow::axisymmetric(f);
  ClassicalFlow numeric = ClassicalFlow::numeric([f](double) { return f; });
  std::mt19937 rng(17);
  for (int i = 0; i < 4; ++i) {
    Vec3 p = random_point(rng);
    CHECK(dist3(axi.apply(0.7, p), numeric.apply(0.7, p)) < 1e-6);
  }
}

TEST_CASE("path registry rejects unknown names") {
  CHECK_THROWS_AS(make_path("whirl(3)"), config_error);
}
