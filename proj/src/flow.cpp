#include "fineq/flow.hpp"

#include <cmath>

#include "fineq/errors.hpp"

namespace fineq {

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 normalized(const Vec3& a) {
  double n = std::sqrt(dot(a, a));
  return {a[0] / n, a[1] / n, a[2] / n};
}

Vec3 rodrigues(const Vec3& axis, double angle, const Vec3& p) {
  double c = std::cos(angle), s = std::sin(angle);
  Vec3 kxp = cross(axis, p);
  double kd = dot(axis, p);
  return {p[0] * c + kxp[0] * s + axis[0] * kd * (1 - c),
          p[1] * c + kxp[1] * s + axis[1] * kd * (1 - c),
          p[2] * c + kxp[2] * s + axis[2] * kd * (1 - c)};
}

}  // namespace

Vec3 hamiltonian_velocity(const SphereFunction& f, const Vec3& p) {
  Vec3 g = f.grad(p);
  Vec3 v = cross(p, g);
  return {2 * v[0], 2 * v[1], 2 * v[2]};
}

struct ClassicalFlow::Impl {
  virtual ~Impl() = default;
  virtual Vec3 apply(double t, const Vec3& p) const = 0;
  virtual Vec3 apply_inv(double t, const Vec3& p) const = 0;
  virtual bool identity() const { return false; }
  virtual bool rigid() const { return false; }
};

namespace {

struct IdentityImpl final : ClassicalFlow::Impl {
  Vec3 apply(double, const Vec3& p) const override { return p; }
  Vec3 apply_inv(double, const Vec3& p) const override { return p; }
  bool identity() const override { return true; }
  bool rigid() const override { return true; }
};

struct RotationImpl final : ClassicalFlow::Impl {
  Vec3 axis;
  double rate;
  RotationImpl(const Vec3& a, double r) : axis(normalized(a)), rate(r) {}
  Vec3 apply(double t, const Vec3& p) const override {
    return rodrigues(axis, rate * t, p);
  }
  Vec3 apply_inv(double t, const Vec3& p) const override {
    return rodrigues(axis, -rate * t, p);
  }
  bool rigid() const override { return true; }
};

struct AxisymImpl final : ClassicalFlow::Impl {
  // azimuthal rate -2 F'(u) expanded as sum_l c_l sqrt(l(l+1)) Lambda_{l,1}/sin
  std::vector<double> zonal;  // c_{l,0}
  int l_max;

  explicit AxisymImpl(const SphereFunction& profile) : l_max(profile.l_max()) {
    for (int l = 0; l <= profile.l_max(); ++l) {
      zonal.push_back(profile.coeff(l, 0));
      for (int q = -l; q <= l; ++q)
        if (q != 0 && std::abs(profile.coeff(l, q)) > 1e-12)
          throw flow_error("axisymmetric flow requires a zonal profile");
    }
  }

  double rate(double u) const {
    std::vector<double> lam, los, dth;
    legendre_theta_tables(l_max, u, lam, los, dth);
    double fp = 0.0;  // F'(u)
    for (int l = 1; l <= l_max; ++l)
      fp += zonal[l] * std::sqrt(double(l) * (l + 1.0)) * los[tri(l, 1)];
    return -2.0 * fp;
  }

  Vec3 apply(double t, const Vec3& p) const override {
    return rodrigues({0, 0, 1}, rate(p[2]) * t, p);
  }
  Vec3 apply_inv(double t, const Vec3& p) const override {
    return rodrigues({0, 0, 1}, -rate(p[2]) * t, p);
  }
};

struct NumericImpl final : ClassicalFlow::Impl {
  std::function<SphereFunction(double)> ham;

  explicit NumericImpl(std::function<SphereFunction(double)> h) : ham(std::move(h)) {}

  Vec3 integrate(double t0, double t1, Vec3 p, long n) const {
    double h = (t1 - t0) / n;
    for (long s = 0; s < n; ++s) {
      double t = t0 + s * h;
      SphereFunction f1 = ham(t), f2 = ham(t + 0.5 * h), f3 = ham(t + h);
      auto vel = [](const SphereFunction& f, const Vec3& q) {
        return hamiltonian_velocity(f, q);
      };
      Vec3 k1 = vel(f1, p);
      Vec3 q2 = {p[0] + 0.5 * h * k1[0], p[1] + 0.5 * h * k1[1], p[2] + 0.5 * h * k1[2]};
      Vec3 k2 = vel(f2, q2);
      Vec3 q3 = {p[0] + 0.5 * h * k2[0], p[1] + 0.5 * h * k2[1], p[2] + 0.5 * h * k2[2]};
      Vec3 k3 = vel(f2, q3);
      Vec3 q4 = {p[0] + h * k3[0], p[1] + h * k3[1], p[2] + h * k3[2]};
      Vec3 k4 = vel(f3, q4);
      for (int c = 0; c < 3; ++c)
        p[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
      p = normalized(p);
    }
    return p;
  }

  Vec3 solve(double t0, double t1, const Vec3& p) const {
    long n = 64 * std::max<long>(1, (long)std::ceil(std::abs(t1 - t0)));
    Vec3 prev = integrate(t0, t1, p, n);
    for (int iter = 0; iter < 14; ++iter) {
      n *= 2;
      Vec3 next = integrate(t0, t1, p, n);
      double diff = std::sqrt(dot({next[0] - prev[0], next[1] - prev[1], next[2] - prev[2]},
                                  {next[0] - prev[0], next[1] - prev[1], next[2] - prev[2]}));
      if (diff < 1e-10) return next;
      prev = next;
    }
    throw integration_error("numeric flow did not converge under step doubling");
  }

  Vec3 apply(double t, const Vec3& p) const override { return solve(0.0, t, p); }
  Vec3 apply_inv(double t, const Vec3& p) const override { return solve(t, 0.0, p); }
};

struct InverseImpl final : ClassicalFlow::Impl {
  std::shared_ptr<const ClassicalFlow::Impl> base;
  explicit InverseImpl(std::shared_ptr<const ClassicalFlow::Impl> b) : base(std::move(b)) {}
  Vec3 apply(double t, const Vec3& p) const override { return base->apply_inv(t, p); }
  Vec3 apply_inv(double t, const Vec3& p) const override { return base->apply(t, p); }
  bool rigid() const override { return base->rigid(); }
};

struct ComposeImpl final : ClassicalFlow::Impl {
  std::shared_ptr<const ClassicalFlow::Impl> outer, inner;
  ComposeImpl(std::shared_ptr<const ClassicalFlow::Impl> a,
              std::shared_ptr<const ClassicalFlow::Impl> b)
      : outer(std::move(a)), inner(std::move(b)) {}
  Vec3 apply(double t, const Vec3& p) const override {
    return outer->apply(t, inner->apply(t, p));
  }
  Vec3 apply_inv(double t, const Vec3& p) const override {
    return inner->apply_inv(t, outer->apply_inv(t, p));
  }
  bool rigid() const override { return outer->rigid() && inner->rigid(); }
};

struct ConcatImpl final : ClassicalFlow::Impl {
  std::shared_ptr<const ClassicalFlow::Impl> first, second;
  double split;
  ConcatImpl(std::shared_ptr<const ClassicalFlow::Impl> a,
             std::shared_ptr<const ClassicalFlow::Impl> b, double s)
      : first(std::move(a)), second(std::move(b)), split(s) {}
  Vec3 apply(double t, const Vec3& p) const override {
    if (t <= split) return first->apply(t / split, p);
    return second->apply((t - split) / (1.0 - split), first->apply(1.0, p));
  }
  Vec3 apply_inv(double t, const Vec3& p) const override {
    if (t <= split) return first->apply_inv(t / split, p);
    return first->apply_inv(1.0, second->apply_inv((t - split) / (1.0 - split), p));
  }
  bool rigid() const override { return first->rigid() && second->rigid(); }
};

}  // namespace

ClassicalFlow::ClassicalFlow() : impl_(std::make_shared<IdentityImpl>()) {}
ClassicalFlow::ClassicalFlow(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ClassicalFlow ClassicalFlow::rotation(const Vec3& axis, double rate) {
  return ClassicalFlow(std::make_shared<RotationImpl>(axis, rate));
}

ClassicalFlow ClassicalFlow::axisymmetric(const SphereFunction& profile) {
  return ClassicalFlow(std::make_shared<AxisymImpl>(profile));
}

ClassicalFlow ClassicalFlow::numeric(std::function<SphereFunction(double)> hamiltonian) {
  return ClassicalFlow(std::make_shared<NumericImpl>(std::move(hamiltonian)));
}

ClassicalFlow ClassicalFlow::inverse() const {
  return ClassicalFlow(std::make_shared<InverseImpl>(impl_));
}

ClassicalFlow ClassicalFlow::compose(const ClassicalFlow& other) const {
  return ClassicalFlow(std::make_shared<ComposeImpl>(impl_, other.impl_));
}

ClassicalFlow ClassicalFlow::then(const ClassicalFlow& other, double split) const {
  return ClassicalFlow(std::make_shared<ConcatImpl>(impl_, other.impl_, split));
}

Vec3 ClassicalFlow::apply(double t, const Vec3& p) const { return impl_->apply(t, p); }
Vec3 ClassicalFlow::apply_inverse(double t, const Vec3& p) const {
  return impl_->apply_inv(t, p);
}
bool ClassicalFlow::is_identity() const { return impl_->identity(); }
bool ClassicalFlow::is_rigid() const { return impl_->rigid(); }

namespace {

template <typename MapFn>
SphereFunction resample(const SphereFunction& g, MapFn&& map, bool rigid, int l_cap) {
  // rigid rotations preserve the band limit; generic flows smear the
  // spectrum and need the full cap
  int l_out = rigid ? g.l_max() : std::max(l_cap, g.l_max());
  auto grid = grid_for_degree(2 * l_out + 2);
  Eigen::MatrixXd samples(grid->n_u(), grid->n_phi());
  for (int i = 0; i < grid->n_u(); ++i)
    for (int p = 0; p < grid->n_phi(); ++p) {
      Vec3 q = map(embed(grid->u_nodes()[i], grid->phi_nodes()[p]));
      samples(i, p) = g.eval(std::clamp(q[2], -1.0, 1.0), std::atan2(q[1], q[0]));
    }
  return analyze(*grid, samples, l_out);
}

}  // namespace

SphereFunction pullback(const SphereFunction& g, const ClassicalFlow& flow,
                        double t, int l_cap) {
  if (flow.is_identity()) return g;
  return resample(
      g, [&](const Vec3& p) { return flow.apply_inverse(t, p); }, flow.is_rigid(),
      l_cap);
}

SphereFunction compose_forward(const SphereFunction& g, const ClassicalFlow& flow,
                               double t, int l_cap) {
  if (flow.is_identity()) return g;
  return resample(
      g, [&](const Vec3& p) { return flow.apply(t, p); }, flow.is_rigid(), l_cap);
}

}  // namespace fineq
