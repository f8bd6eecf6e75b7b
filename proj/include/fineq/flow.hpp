#pragma once

// Classical Hamiltonian flows on the sphere: closed-form rotations and
// axisymmetric flows, plus a Runge-Kutta fallback for generic Hamiltonians.
// All point maps act on unit vectors in R^3.

#include <functional>
#include <memory>

#include "fineq/sphere.hpp"

namespace fineq {

class ClassicalFlow {
 public:
  ClassicalFlow();  // identity

  // rotation about `axis` by angle rate * t
  static ClassicalFlow rotation(const Vec3& axis, double rate);
  // flow of f = F(u): each latitude circle rotates at azimuthal rate -2 F'(u)
  static ClassicalFlow axisymmetric(const SphereFunction& profile);
  // RK4 integration of sgrad f_t; steps double until pointwise change < 1e-10
  static ClassicalFlow numeric(std::function<SphereFunction(double)> hamiltonian);

  ClassicalFlow inverse() const;
  // pointwise composition at equal times: t -> this_t o other_t
  ClassicalFlow compose(const ClassicalFlow& other) const;
  // concatenation: this on [0, split], then other started from this(end_time)
  ClassicalFlow then(const ClassicalFlow& other, double split) const;

  Vec3 apply(double t, const Vec3& p) const;
  Vec3 apply_inverse(double t, const Vec3& p) const;

  bool is_identity() const;
  // true when every time-t map is a rigid rotation (band limits preserved)
  bool is_rigid() const;

  struct Impl;

 private:
  explicit ClassicalFlow(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

// g o (phi_t)^{-1}; rigid flows keep the band limit of g, others use l_cap
SphereFunction pullback(const SphereFunction& g, const ClassicalFlow& flow,
                        double t, int l_cap = kDefaultLCap);
// g o phi_t (used for inverse-path Hamiltonians)
SphereFunction compose_forward(const SphereFunction& g, const ClassicalFlow& flow,
                               double t, int l_cap = kDefaultLCap);

// velocity field of sgrad f at p: 2 p x grad_S f
Vec3 hamiltonian_velocity(const SphereFunction& f, const Vec3& p);

}  // namespace fineq
