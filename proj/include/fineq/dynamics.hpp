#pragma once

// Quantization of Hamiltonian paths: the Schrodinger propagator
// U'(t) = -i k Op_k(f_t) U(t), path algebra (inverse, product,
// concatenation) and loop action / Maslov-parity invariants.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fineq/flow.hpp"
#include "fineq/quantization.hpp"

namespace fineq {

struct PathSegment {
  double t0 = 0.0, t1 = 1.0;  // global times, 0 <= t0 < t1 <= 1
  bool constant = true;
  SphereFunction f;                              // when constant
  std::function<SphereFunction(double)> f_of_t;  // global time, when not
};

struct HamiltonianPath {
  std::vector<PathSegment> segments;  // covering [0,1]
  std::string label;
  std::optional<ClassicalFlow> flow;

  SphereFunction hamiltonian(double t) const;
  bool all_constant() const;

  static HamiltonianPath constant(const SphereFunction& f, std::string label,
                                  std::optional<ClassicalFlow> flow = std::nullopt);
};

struct PropagateOptions {
  bool fine = true;          // quantize with op_fine (toeplitz for contrast runs)
  double tolerance = 1e-10;  // step-halving target on ||U_n - U_2n||_op
  long max_steps = 1 << 20;
  long initial_steps = 16;   // per non-constant segment
  int l_cap = kDefaultLCap;
};

UnitaryPropagator propagate(const QuantizationLevel& level,
                            const HamiltonianPath& path,
                            const PropagateOptions& opts = {});

// second-order midpoint-exponential run at a forced step count (cross-check)
Matrix propagate_midpoint(const QuantizationLevel& level, const HamiltonianPath& path,
                          long steps, const PropagateOptions& opts = {});

HamiltonianPath inverse_path(const HamiltonianPath& path, int l_cap = kDefaultLCap);
HamiltonianPath product_path(const HamiltonianPath& p, const HamiltonianPath& q,
                             int l_cap = kDefaultLCap);
HamiltonianPath concat_path(const HamiltonianPath& p, const HamiltonianPath& q);

struct LoopInvariants {
  double action = 0.0;       // mod 2pi, reduced to [-pi, pi)
  int maslov_parity = 0;     // winding parity of the linearized flow
  double predicted_phase = 0.0;  // k * action + pi * parity, mod 2pi
};

// base_point must be a fixed point of the whole loop
LoopInvariants loop_invariants(const HamiltonianPath& loop, const Vec3& base_point,
                               int k);

// registry: "rot_u(a)", "rot_x(a)", "axisym(name,T)", "twopiloop",
// "fourpiloop", "kick(name)", "concat(p,q)", "prod(p,q)", "inv(p)"
HamiltonianPath make_path(const std::string& name, int l_cap = kDefaultLCap);

double reduce_mod_2pi(double x);  // to [-pi, pi)

}  // namespace fineq
