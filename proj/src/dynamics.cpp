#include "fineq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fineq/errors.hpp"

namespace fineq {

namespace {
constexpr double kPi = std::numbers::pi;

Vec3 vcross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
double vdot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
Vec3 vnorm(const Vec3& a) {
  double n = std::sqrt(vdot(a, a));
  return {a[0] / n, a[1] / n, a[2] / n};
}

double coeff_distance(const SphereFunction& a, const SphereFunction& b) {
  double worst = 0.0;
  int l = std::max(a.l_max(), b.l_max());
  for (int li = 0; li <= l; ++li)
    for (int q = -li; q <= li; ++q)
      worst = std::max(worst, std::abs(a.coeff(li, q) - b.coeff(li, q)));
  return worst;
}

// collapse a sampled-Hamiltonian segment to a constant one when the
// Hamiltonian does not actually depend on t (commuting flows etc.)
PathSegment make_segment(double t0, double t1,
                         std::function<SphereFunction(double)> f_of_t) {
  PathSegment seg;
  seg.t0 = t0;
  seg.t1 = t1;
  SphereFunction a = f_of_t(t0);
  SphereFunction b = f_of_t(0.5 * (t0 + t1));
  SphereFunction c = f_of_t(t1);
  if (coeff_distance(a, b) < 1e-12 && coeff_distance(a, c) < 1e-12) {
    seg.constant = true;
    seg.f = a;
  } else {
    seg.constant = false;
    seg.f_of_t = std::move(f_of_t);
  }
  return seg;
}

}  // namespace

double reduce_mod_2pi(double x) {
  double y = std::fmod(x + kPi, 2.0 * kPi);
  if (y < 0) y += 2.0 * kPi;
  return y - kPi;
}

SphereFunction HamiltonianPath::hamiltonian(double t) const {
  for (const auto& seg : segments) {
    if (t <= seg.t1 + 1e-15 && t >= seg.t0 - 1e-15) {
      double tc = std::clamp(t, seg.t0, seg.t1);
      return seg.constant ? seg.f : seg.f_of_t(tc);
    }
  }
  throw input_error("time outside [0,1] in hamiltonian()");
}

bool HamiltonianPath::all_constant() const {
  for (const auto& seg : segments)
    if (!seg.constant) return false;
  return true;
}

HamiltonianPath HamiltonianPath::constant(const SphereFunction& f, std::string label,
                                          std::optional<ClassicalFlow> flow) {
  HamiltonianPath p;
  PathSegment seg;
  seg.t0 = 0.0;
  seg.t1 = 1.0;
  seg.constant = true;
  seg.f = normalize_zero_mean(f);
  p.segments.push_back(std::move(seg));
  p.label = std::move(label);
  p.flow = std::move(flow);
  return p;
}

namespace {

// one commutator-free 4th-order Magnus step over [t, t+h]
Matrix cf4_step(const QuantizationLevel& level, const PathSegment& seg, double t,
                double h, const PropagateOptions& opts, const Matrix& u) {
  static const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  static const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  static const double a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
  static const double a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;
  SphereFunction f1 = normalize_zero_mean(seg.f_of_t(t + c1 * h));
  SphereFunction f2 = normalize_zero_mean(seg.f_of_t(t + c2 * h));
  SphereFunction ga = (h * a1) * f1 + (h * a2) * f2;
  SphereFunction gb = (h * a2) * f1 + (h * a1) * f2;
  Matrix qa = quantize(level, ga, opts.fine);
  Matrix qb = quantize(level, gb, opts.fine);
  return unitary_exp(qa, level.k) * (unitary_exp(qb, level.k) * u);
}

Matrix run_segment_cf4(const QuantizationLevel& level, const PathSegment& seg,
                       long n, const PropagateOptions& opts) {
  Matrix u = Matrix::Identity(level.dim(), level.dim());
  double h = (seg.t1 - seg.t0) / n;
  for (long s = 0; s < n; ++s) u = cf4_step(level, seg, seg.t0 + s * h, h, opts, u);
  return u;
}

}  // namespace

UnitaryPropagator propagate(const QuantizationLevel& level,
                            const HamiltonianPath& path,
                            const PropagateOptions& opts) {
  UnitaryPropagator out;
  out.k = level.k;
  out.path_label = path.label;
  Matrix u = Matrix::Identity(level.dim(), level.dim());
  for (const auto& seg : path.segments) {
    double dt = seg.t1 - seg.t0;
    if (dt <= 0) continue;
    if (seg.constant) {
      Matrix q = quantize(level, normalize_zero_mean(seg.f), opts.fine);
      u = unitary_exp(q, level.k * dt) * u;
      continue;
    }
    long n = opts.initial_steps;
    Matrix prev = run_segment_cf4(level, seg, n, opts);
    bool converged = false;
    while (2 * n <= opts.max_steps) {
      n *= 2;
      Matrix next = run_segment_cf4(level, seg, n, opts);
      double diff = op_norm(next - prev);
      prev = next;
      if (diff < opts.tolerance) {
        out.integrator_defect = std::max(out.integrator_defect, diff);
        converged = true;
        break;
      }
    }
    if (!converged)
      throw integration_error("propagator step refinement did not reach " +
                              std::to_string(opts.tolerance) + " within step cap");
    out.steps += n;
    u = prev * u;
  }
  out.mat = u;
  return out;
}

Matrix propagate_midpoint(const QuantizationLevel& level, const HamiltonianPath& path,
                          long steps, const PropagateOptions& opts) {
  Matrix u = Matrix::Identity(level.dim(), level.dim());
  double h = 1.0 / steps;
  for (long s = 0; s < steps; ++s) {
    SphereFunction f = normalize_zero_mean(path.hamiltonian((s + 0.5) * h));
    u = unitary_exp(quantize(level, f, opts.fine), level.k * h) * u;
  }
  return u;
}

HamiltonianPath inverse_path(const HamiltonianPath& path, int l_cap) {
  if (!path.flow) throw flow_error("inverse_path requires a classical flow");
  ClassicalFlow flow = *path.flow;
  HamiltonianPath out;
  out.label = "inv(" + path.label + ")";
  for (const auto& seg : path.segments) {
    auto ham = [seg](double t) {
      return seg.constant ? seg.f : seg.f_of_t(t);
    };
    out.segments.push_back(make_segment(seg.t0, seg.t1, [ham, flow, l_cap](double t) {
      return normalize_zero_mean(-1.0 * compose_forward(ham(t), flow, t, l_cap));
    }));
  }
  out.flow = flow.inverse();
  return out;
}

HamiltonianPath product_path(const HamiltonianPath& p, const HamiltonianPath& q,
                             int l_cap) {
  if (!p.flow) throw flow_error("product_path requires a classical flow on the left factor");
  ClassicalFlow pflow = *p.flow;
  HamiltonianPath out;
  out.label = "prod(" + p.label + "," + q.label + ")";
  // breakpoints: union of both segmentations
  std::vector<double> cuts{0.0, 1.0};
  for (const auto& s : p.segments) cuts.push_back(s.t1);
  for (const auto& s : q.segments) cuts.push_back(s.t1);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             cuts.end());
  HamiltonianPath pc = p, qc = q;
  pc.flow.reset();
  qc.flow.reset();
  auto ham = [pc, qc, pflow, l_cap](double t) {
    SphereFunction h =
        pc.hamiltonian(t) + pullback(qc.hamiltonian(t), pflow, t, l_cap);
    return normalize_zero_mean(h);
  };
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    out.segments.push_back(make_segment(cuts[i], cuts[i + 1], ham));
  if (q.flow) out.flow = pflow.compose(*q.flow);
  return out;
}

HamiltonianPath concat_path(const HamiltonianPath& p, const HamiltonianPath& q) {
  HamiltonianPath out;
  out.label = "concat(" + p.label + "," + q.label + ")";
  for (const auto& seg : p.segments) {
    PathSegment s;
    s.t0 = seg.t0 / 2.0;
    s.t1 = seg.t1 / 2.0;
    s.constant = seg.constant;
    if (seg.constant)
      s.f = 2.0 * seg.f;
    else {
      auto inner = seg.f_of_t;
      s.f_of_t = [inner](double t) { return 2.0 * inner(2.0 * t); };
    }
    out.segments.push_back(std::move(s));
  }
  for (const auto& seg : q.segments) {
    PathSegment s;
    s.t0 = 0.5 + seg.t0 / 2.0;
    s.t1 = 0.5 + seg.t1 / 2.0;
    s.constant = seg.constant;
    if (seg.constant)
      s.f = 2.0 * seg.f;
    else {
      auto inner = seg.f_of_t;
      s.f_of_t = [inner](double t) { return 2.0 * inner(2.0 * t - 1.0); };
    }
    out.segments.push_back(std::move(s));
  }
  if (p.flow && q.flow) out.flow = p.flow->then(*q.flow, 0.5);
  return out;
}

LoopInvariants loop_invariants(const HamiltonianPath& loop, const Vec3& base_point,
                               int k) {
  if (!loop.flow) throw flow_error("loop_invariants requires a classical flow");
  const ClassicalFlow& flow = *loop.flow;

  // time-1 map must be the identity
  double worst = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int p = 0; p < 8; ++p) {
      Vec3 x = embed(-0.9 + 1.8 * i / 7.0, 2.0 * kPi * p / 8.0);
      Vec3 y = flow.apply(1.0, x);
      worst = std::max(worst, std::sqrt(vdot({y[0] - x[0], y[1] - x[1], y[2] - x[2]},
                                             {y[0] - x[0], y[1] - x[1], y[2] - x[2]})));
    }
  if (worst > 1e-8) throw not_a_loop_error("time-1 map is not the identity");

  Vec3 p0 = vnorm(base_point);
  for (int s = 1; s <= 16; ++s) {
    Vec3 y = flow.apply(s / 16.0, p0);
    double d = std::sqrt(vdot({y[0] - p0[0], y[1] - p0[1], y[2] - p0[2]},
                              {y[0] - p0[0], y[1] - p0[1], y[2] - p0[2]}));
    if (d > 1e-8)
      throw flow_error("base point is not fixed by the loop (cap discs unsupported)");
  }

  // action of the constant trajectory: degenerate disc, A = -int H_t(p0) dt
  double u0 = std::clamp(p0[2], -1.0, 1.0);
  double phi0 = std::atan2(p0[1], p0[0]);
  double action = 0.0;
  GaussRule rule = gauss_legendre(32, 0.0, 1.0);
  for (const auto& seg : loop.segments) {
    if (seg.constant) {
      action -= (seg.t1 - seg.t0) * seg.f.eval(u0, phi0);
    } else {
      for (size_t a = 0; a < rule.nodes.size(); ++a) {
        double t = seg.t0 + (seg.t1 - seg.t0) * rule.nodes[a];
        action -= (seg.t1 - seg.t0) * rule.weights[a] * seg.f_of_t(t).eval(u0, phi0);
      }
    }
  }

  // Maslov parity: winding of a tangent vector under the linearized flow
  Vec3 ref = std::abs(p0[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1 = vnorm(vcross(p0, ref));
  Vec3 e2 = vcross(p0, e1);
  const double eps = 1e-5;
  const int nt = 1024;
  double prev_angle = 0.0, total = 0.0;
  for (int s = 0; s <= nt; ++s) {
    double t = double(s) / nt;
    Vec3 xp = vnorm({p0[0] + eps * e1[0], p0[1] + eps * e1[1], p0[2] + eps * e1[2]});
    Vec3 xm = vnorm({p0[0] - eps * e1[0], p0[1] - eps * e1[1], p0[2] - eps * e1[2]});
    Vec3 yp = flow.apply(t, xp);
    Vec3 ym = flow.apply(t, xm);
    Vec3 d = {yp[0] - ym[0], yp[1] - ym[1], yp[2] - ym[2]};
    double angle = std::atan2(vdot(d, e2), vdot(d, e1));
    if (s == 0) {
      prev_angle = angle;
    } else {
      double step = angle - prev_angle;
      while (step > kPi) step -= 2.0 * kPi;
      while (step < -kPi) step += 2.0 * kPi;
      total += step;
      prev_angle = angle;
    }
  }
  long winding = std::lround(total / (2.0 * kPi));
  LoopInvariants out;
  out.action = reduce_mod_2pi(action);
  out.maslov_parity = static_cast<int>(std::llabs(winding) % 2);
  out.predicted_phase = reduce_mod_2pi(k * action + kPi * out.maslov_parity);
  return out;
}

namespace {

std::string strip_ws(const std::string& s) {
  auto a = s.find_first_not_of(" \t");
  auto b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      parts.push_back(strip_ws(cur));
      cur.clear();
    } else
      cur.push_back(ch);
  }
  if (!strip_ws(cur).empty()) parts.push_back(strip_ws(cur));
  return parts;
}

// numbers plus the forms "pi", "a*pi", "pi/b", "a*pi/b", with optional sign
double parse_angle(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != ' ') s.push_back(c);
  auto pos = s.find("pi");
  if (pos == std::string::npos) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw config_error("cannot parse angle '" + raw + "'");
    }
  }
  double coef = 1.0, div = 1.0;
  std::string pre = s.substr(0, pos), post = s.substr(pos + 2);
  if (!pre.empty()) {
    if (pre == "-")
      coef = -1.0;
    else {
      if (pre.back() == '*') pre.pop_back();
      try {
        coef = std::stod(pre);
      } catch (const std::exception&) {
        throw config_error("cannot parse angle '" + raw + "'");
      }
    }
  }
  if (!post.empty()) {
    if (post.front() != '/') throw config_error("cannot parse angle '" + raw + "'");
    try {
      div = std::stod(post.substr(1));
    } catch (const std::exception&) {
      throw config_error("cannot parse angle '" + raw + "'");
    }
  }
  return coef * kPi / div;
}

HamiltonianPath rotation_path(const Vec3& axis, double angle, std::string label) {
  SphereFunction coord = from_pointwise(
      [axis](double u, double phi) {
        Vec3 p = embed(u, phi);
        return axis[0] * p[0] + axis[1] * p[1] + axis[2] * p[2];
      },
      1);
  return HamiltonianPath::constant((angle / 2.0) * coord, std::move(label),
                                   ClassicalFlow::rotation(axis, -angle));
}

}  // namespace

HamiltonianPath make_path(const std::string& raw, int l_cap) {
  std::string name = strip_ws(raw);
  auto call = [&](const std::string& fn) -> std::optional<std::string> {
    if (name.rfind(fn + "(", 0) == 0 && name.back() == ')')
      return name.substr(fn.size() + 1, name.size() - fn.size() - 2);
    return std::nullopt;
  };

  if (name == "zero")
    return HamiltonianPath::constant(SphereFunction(), "zero", ClassicalFlow());
  if (name == "twopiloop") return rotation_path({0, 0, 1}, 2.0 * kPi, "twopiloop");
  if (name == "fourpiloop") return rotation_path({0, 0, 1}, 4.0 * kPi, "fourpiloop");
  if (auto a = call("rot_u"))
    return rotation_path({0, 0, 1}, parse_angle(*a), "rot_u(" + *a + ")");
  if (auto a = call("rot_x"))
    return rotation_path({1, 0, 0}, parse_angle(*a), "rot_x(" + *a + ")");
  if (auto a = call("rot_y"))
    return rotation_path({0, 1, 0}, parse_angle(*a), "rot_y(" + *a + ")");
  if (auto a = call("axisym")) {
    auto args = split_args(*a);
    if (args.empty() || args.size() > 2)
      throw config_error("axisym(name[,time]) takes one or two arguments");
    double time = args.size() == 2 ? parse_angle(args[1]) : 1.0;
    SphereFunction f = time * normalize_zero_mean(make_function(args[0]));
    return HamiltonianPath::constant(f, "axisym(" + *a + ")",
                                     ClassicalFlow::axisymmetric(f));
  }
  if (auto a = call("kick")) {
    SphereFunction f = normalize_zero_mean(make_function(*a));
    return HamiltonianPath::constant(
        f, "kick(" + *a + ")",
        ClassicalFlow::numeric([f](double) { return f; }));
  }
  if (auto a = call("concat")) {
    auto args = split_args(*a);
    if (args.size() != 2) throw config_error("concat(p,q) takes two paths");
    return concat_path(make_path(args[0], l_cap), make_path(args[1], l_cap));
  }
  if (auto a = call("prod")) {
    auto args = split_args(*a);
    if (args.size() != 2) throw config_error("prod(p,q) takes two paths");
    return product_path(make_path(args[0], l_cap), make_path(args[1], l_cap), l_cap);
  }
  if (auto a = call("inv")) return inverse_path(make_path(*a, l_cap), l_cap);
  throw config_error("unknown path name '" + name + "'");
}

}  // namespace fineq
