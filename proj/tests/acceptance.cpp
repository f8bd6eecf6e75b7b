// End-to-end acceptance sweep: one line per criterion, nonzero exit on any
// failure.  Runs the default experiment suite once and adds direct checks
// with independently known values.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fineq/config.hpp"
#include "fineq/dynamics.hpp"
#include "fineq/errors.hpp"
#include "fineq/experiments.hpp"
#include "fineq/lattice.hpp"
#include "fineq/quantization.hpp"
#include "fineq/report.hpp"
#include "fineq/sphere.hpp"

using namespace fineq;
using std::complex;
constexpr double pi = std::numbers::pi;

namespace {

int g_failures = 0;

void criterion(const std::string& name, const std::function<std::string()>& fn) {
  std::string detail;
  try {
    detail = fn();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  if (detail.empty()) {
    std::printf("PASS  %s\n", name.c_str());
  } else {
    std::printf("FAIL  %s: %s\n", name.c_str(), detail.c_str());
    ++g_failures;
  }
  std::fflush(stdout);
}

const RateReport* find_report(const SuiteResult& suite, const std::string& name) {
  for (const auto& r : suite.reports)
    if (r.name == name) return &r;
  return nullptr;
}

std::string expect_pass(const SuiteResult& suite, const std::string& name,
                        double slope_max = std::numeric_limits<double>::infinity(),
                        double slope_min = -std::numeric_limits<double>::infinity()) {
  const RateReport* r = find_report(suite, name);
  if (!r) return name + ": report missing";
  if (r->verdict != "pass") return name + ": verdict " + r->verdict + " (" + r->note + ")";
  if (r->fitted && (r->slope > slope_max || r->slope < slope_min)) {
    std::ostringstream os;
    os << name << ": slope " << r->slope << " outside [" << slope_min << ", "
       << slope_max << "]";
    return os.str();
  }
  return "";
}

double max_sample(const RateReport& r) {
  double m = 0.0;
  for (const auto& s : r.samples) m = std::max(m, s.defect);
  return m;
}

// brute-force reference for the even-pairing condition: scan an integer box
bool brute_force_satisfied(const std::vector<long long>& w,
                           const std::vector<long long>& c1, long long B) {
  size_t n = w.size();
  std::vector<long long> v(n, -B);
  while (true) {
    long long dot_w = 0, dot_c = 0;
    bool zero = true;
    for (size_t i = 0; i < n; ++i) {
      dot_w += w[i] * v[i];
      dot_c += c1[i] * v[i];
      if (v[i] != 0) zero = false;
    }
    if (!zero && dot_w == 0 && ((dot_c % 2) + 2) % 2 == 1) return false;
    size_t i = 0;
    while (i < n && v[i] == B) v[i++] = -B;
    if (i == n) return true;
    ++v[i];
  }
}

}  // namespace

int main() {
  RunConfig cfg;  // defaults: full catalog, k = 8..128 (egorov sweeps to 512)
  cfg.emit_plots = false;
  SuiteResult suite = run_suite(cfg);

  criterion("dimension and frame normalization (k = 1..256)", [&] {
    for (int k = 1; k <= 256; ++k) {
      QuantizationLevel level(k);
      if (level.dim() != k) return "dim mismatch at k=" + std::to_string(k);
      double g = gram_defect(level);
      if (g > 1e-10)
        return "gram defect " + format_double(g) + " at k=" + std::to_string(k);
    }
    return std::string();
  });

  criterion("constant function compresses to the identity (k = 1..128)", [&] {
    SphereFunction one = from_pointwise([](double, double) { return 1.0; }, 0);
    for (int k = 1; k <= 128; ++k) {
      QuantizationLevel level(k);
      for (bool fine : {false, true}) {
        double d = (quantize(level, one, fine) - Matrix::Identity(k, k))
                       .cwiseAbs()
                       .maxCoeff();
        if (d > 1e-12)
          return "defect " + format_double(d) + " at k=" + std::to_string(k);
      }
    }
    return std::string();
  });

  criterion("norm asymptotics: exact height norm and first-order rates", [&] {
    SphereFunction fu = make_function("u");
    for (int k = 2; k <= 64; ++k) {
      double got = op_norm(toeplitz(QuantizationLevel(k), fu));
      double want = double(k - 1) / (k + 1);
      if (std::abs(got - want) > 1e-10)
        return "||T(u)|| off by " + format_double(got - want) +
               " at k=" + std::to_string(k);
    }
    for (const char* v : {"fine", "toeplitz"})
      for (const char* f : {"u", "x", "u2"}) {
        std::string err = expect_pass(
            suite, std::string("p1_norm.") + v + "." + f, -0.8);
        if (!err.empty()) return err;
      }
    return std::string();
  });

  criterion("bracket remainder rates (second order)", [&] {
    std::string err = expect_pass(suite, "p2_bracket.fine.u2-x");
    if (!err.empty()) return err;
    err = expect_pass(suite, "p2_bracket.fine.u2-xy", -2.5);
    if (!err.empty()) return err;
    for (const char* pair : {"u2-x", "u2-xy"}) {
      err = expect_pass(suite, std::string("p2_bracket.toeplitz.") + pair, -1.6,
                        -2.7);
      if (!err.empty()) return err;
    }
    for (const auto& r : suite.reports)
      if (r.name.rfind("p2_bracket.", 0) == 0 && r.fitted && r.r_squared < 0.98)
        return r.name + ": r^2 " + format_double(r.r_squared);
    return std::string();
  });

  criterion("degree-one brackets are exact (k = 2..128)", [&] {
    SphereFunction fx = make_function("x"), fy = make_function("y");
    for (int k = 2; k <= 128; ++k) {
      double d = bracket_defect(QuantizationLevel(k), fx, fy, true);
      if (d > 1e-10)
        return "defect " + format_double(d) + " at k=" + std::to_string(k);
    }
    return std::string();
  });

  criterion("product expansion with first-order bracket term", [&] {
    for (const char* pair : {"u2-x", "u2-xy"}) {
      std::string err =
          expect_pass(suite, std::string("product_expansion.") + pair, -1.6);
      if (!err.empty()) return err;
    }
    return std::string();
  });

  criterion("Egorov transport (rotations exact, axisymmetric decaying)", [&] {
    for (const char* obs : {"x", "xy"}) {
      std::string err =
          expect_pass(suite, std::string("egorov.rot_u(pi/2).") + obs);
      if (!err.empty()) return err;
      const RateReport* r =
          find_report(suite, std::string("egorov.rot_u(pi/2).") + obs);
      if (r->fitted) return r->name + ": expected exact, got a fitted rate";
      err = expect_pass(suite, std::string("egorov.axisym(u2).") + obs, -1.6);
      if (!err.empty()) return err;
    }
    return std::string();
  });

  criterion("composition of quantized flows (operator and Schatten norms)", [&] {
    for (const char* norm : {"op", "p2", "p5"}) {
      std::string name = std::string("composition_defect.") + norm;
      std::string err = expect_pass(suite, name);
      if (!err.empty()) return err;
      double m = max_sample(*find_report(suite, name));
      if (m > 1e-9) return name + ": max defect " + format_double(m);
    }
    return std::string();
  });

  criterion("homotopy invariance (conjugated pair and 4pi loop, k = 1..128)", [&] {
    std::string err = expect_pass(suite, "homotopy_defect.conjugated");
    if (!err.empty()) return err;
    HamiltonianPath loop = make_path("fourpiloop");
    for (int k = 1; k <= 128; ++k) {
      QuantizationLevel level(k);
      double d = (propagate(level, loop).mat - Matrix::Identity(k, k))
                     .cwiseAbs()
                     .maxCoeff();
      if (d > 1e-8)
        return "4pi loop defect " + format_double(d) + " at k=" + std::to_string(k);
    }
    return std::string();
  });

  criterion("loop phase from action and Maslov parity (k = 2..128)", [&] {
    HamiltonianPath loop = make_path("twopiloop");
    for (int k = 2; k <= 128; ++k) {
      QuantizationLevel level(k);
      Matrix u = propagate(level, loop).mat;
      LoopInvariants inv = loop_invariants(loop, Vec3{0.0, 0.0, 1.0}, k);
      complex<double> phase = std::exp(complex<double>(0.0, inv.predicted_phase));
      double d = (u - phase * Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
      if (d > 1e-8)
        return "phase defect " + format_double(d) + " at k=" + std::to_string(k);
      double sign = (k % 2 == 1) ? 1.0 : -1.0;
      if (std::abs(phase - sign) > 1e-9)
        return "scalar is not (-1)^(k-1) at k=" + std::to_string(k);
      // traversing the loop twice must square the predicted scalar
      LoopInvariants twice = loop_invariants(make_path("fourpiloop"),
                                             Vec3{0.0, 0.0, 1.0}, k);
      double hom = reduce_mod_2pi(2.0 * inv.predicted_phase - twice.predicted_phase);
      if (std::abs(hom) > 1e-9)
        return "phase homomorphism broken at k=" + std::to_string(k);
    }
    return std::string();
  });

  criterion("unitary separation for the half-turn loop stays above 1/2", [&] {
    for (const char* name : {"separation", "projective_separation"}) {
      std::string err = expect_pass(suite, name);
      if (!err.empty()) return err;
      const RateReport* r = find_report(suite, name);
      for (const auto& s : r->samples)
        if (s.defect < 0.5)
          return std::string(name) + ": " + format_double(s.defect) +
                 " at k=" + std::to_string(s.k);
    }
    return std::string();
  });

  criterion("Schatten sandwich inequalities on random matrices", [&] {
    std::string err = expect_pass(suite, "schatten_sandwich");
    if (!err.empty()) return err;
    double m = max_sample(*find_report(suite, "schatten_sandwich"));
    if (m > 1e-10) return "max violation " + format_double(m);
    return std::string();
  });

  criterion("even-pairing condition on kernel lattices", [&] {
    // blow-up with equal areas satisfies; areas (2, 1) violate with witness
    CohomologyData eq;
    eq.basis_rank = 2;
    eq.omega = {Rational(1), Rational(1)};
    eq.c1 = {3, -1};
    if (!check_condition_c(eq).satisfied) return std::string("equal areas rejected");
    CohomologyData uneq = eq;
    uneq.omega = {Rational(2), Rational(1)};
    ConditionCResult res = check_condition_c(uneq);
    if (res.satisfied) return std::string("areas (2,1) accepted");
    long long dot = 2 * res.witness[0] + res.witness[1];
    long long val = 3 * res.witness[0] - res.witness[1];
    if (dot != 0 || ((val % 2) + 2) % 2 != 1) return std::string("bad witness");
    std::mt19937 rng(424242);
    std::uniform_int_distribution<long long> num(-3, 3), den(1, 3), c1v(-5, 5);
    std::uniform_int_distribution<int> rank_dist(1, 3);
    for (int trial = 0; trial < 100; ++trial) {
      int n = rank_dist(rng);
      CohomologyData data;
      data.basis_rank = n;
      bool all_zero = true;
      long long lcm = 1;
      for (int i = 0; i < n; ++i) {
        long long a = num(rng);
        if (a != 0) all_zero = false;
        data.omega.push_back(Rational(a, den(rng)));
        data.c1.push_back(c1v(rng));
      }
      if (all_zero) data.omega[0] = Rational(1, 2);
      for (const auto& r : data.omega) lcm = std::lcm(lcm, r.denominator());
      std::vector<long long> w;
      for (const auto& r : data.omega)
        w.push_back(r.numerator() * (lcm / r.denominator()));
      if (check_condition_c(data).satisfied != brute_force_satisfied(w, data.c1, 10))
        return "disagreement with brute force at trial " + std::to_string(trial);
    }
    return std::string();
  });

  criterion("trace normalization of compressions", [&] {
    for (const char* f : {"u", "x", "u2", "xy"}) {
      std::string err = expect_pass(suite, std::string("trace_check.") + f);
      if (!err.empty()) return err;
    }
    for (int k = 2; k <= 64; ++k) {
      QuantizationLevel level(k);
      for (const char* f : {"u", "x", "u2", "xy"}) {
        double tr = std::abs(toeplitz(level, make_function(f)).trace());
        if (tr > 1e-12)
          return std::string("tr T(") + f + ") = " + format_double(tr) +
                 " at k=" + std::to_string(k);
      }
    }
    return std::string();
  });

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
