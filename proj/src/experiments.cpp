#include "fineq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "fineq/dynamics.hpp"
#include "fineq/errors.hpp"

namespace fineq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using cplx = std::complex<double>;

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    auto a = item.find_first_not_of(" \t");
    auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
  }
  return out;
}

std::vector<int> sweep(const RunConfig& cfg, const ExperimentSpec& spec,
                       const std::string& fallback = "") {
  std::string text = spec.param("ks", fallback);
  if (text.empty()) return cfg.ks;
  std::vector<int> ks;
  for (const auto& tok : split_list(text, ',')) ks.push_back(std::stoi(tok));
  for (size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 1 || ks[i] > 512) throw config_error("each k must lie in [1, 512]");
    if (i > 0 && ks[i] <= ks[i - 1])
      throw config_error("ks must be strictly increasing");
  }
  return ks;
}

struct Context {
  const RunConfig& cfg;
  std::map<std::string, SphereFunction> functions;
  std::map<std::string, HamiltonianPath> paths;
  std::map<std::string, UnitaryPropagator> propagators;

  explicit Context(const RunConfig& c) : cfg(c) {}

  const SphereFunction& function(const std::string& name) {
    auto it = functions.find(name);
    if (it == functions.end())
      it = functions.emplace(name, normalize_zero_mean(make_function(name))).first;
    return it->second;
  }

  const HamiltonianPath& path(const std::string& name) {
    auto it = paths.find(name);
    if (it == paths.end()) it = paths.emplace(name, make_path(name, cfg.l_cap)).first;
    return it->second;
  }

  const UnitaryPropagator& propagator(int k, const std::string& path_name) {
    std::string key = path_name + "@" + std::to_string(k);
    auto it = propagators.find(key);
    if (it == propagators.end()) {
      PropagateOptions opts;
      opts.l_cap = cfg.l_cap;
      it = propagators.emplace(key, propagate(QuantizationLevel(k), path(path_name), opts))
               .first;
    }
    return it->second;
  }
};

using Runner = void (*)(Context&, const ExperimentSpec&, SuiteResult&);

RateCriteria slope_below(const ExperimentSpec& spec, double fallback,
                         double exact_floor = kDefectFloor) {
  RateCriteria c;
  c.slope_max = spec.param("slope_max", fallback);
  c.r2_min = spec.param("r2_min", 0.0);
  c.exact_floor = spec.param("exact_floor", exact_floor);
  return c;
}

void push_rows(SuiteResult& out, const std::string& name,
               const std::vector<RateSample>& samples, double p,
               const std::string& extra = "") {
  for (const auto& s : samples) out.rows.push_back({name, s.k, s.defect, p, extra});
}

// ---- catalog ----

void run_dim_check(Context& ctx, const ExperimentSpec&, SuiteResult& out) {
  std::vector<RateSample> samples;
  for (int k : ctx.cfg.ks)
    samples.push_back({k, std::abs(double(QuantizationLevel(k).dim() - k))});
  push_rows(out, "dim_check", samples, kInf);
  out.reports.push_back(assess_rate("dim_check", samples, RateCriteria{}));
}

void run_p1_norm(Context& ctx, const ExperimentSpec& spec, SuiteResult& out) {
  auto names = split_list(spec.param("functions", std::string("u,x,u2")), ',');
  for (bool fine : {false, true}) {
    for (const auto& fname : names) {
      const SphereFunction& f = ctx.function(fname);
      double sup = sup_norm(f);
      std::vector<RateSample> samples;
      for (int k : ctx.cfg.ks) {
        QuantizationLevel level(k);
        samples.push_back({k, std::abs(sup - op_norm(quantize(level, f, fine)))});
      }
      std::string name =
          std::string("p1_norm.") + (fine ? "fine" : "toeplitz") + "." + fname;
      push_rows(out, name, samples, kInf);
      out.reports.push_back(assess_rate(name, samples, slope_below(spec, -0.8)));
    }
  }
}

std::vector<std::pair<std::string, std::string>> parse_pairs(
    const ExperimentSpec& spec) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& item : split_list(spec.param("pairs", std::string("u2:xy,u2:x")), ',')) {
    auto parts = split_list(item, ':');
    if (parts.size() != 2)
      throw config_error("pair '" + item + "' must have the form f:g");
    pairs.emplace_back(parts[0], parts[1]);
  }
  return pairs;
}

void run_p2_bracket(Context& ctx, const ExperimentSpec& spec, SuiteResult& out) {
  for (bool fine : {false, true}) {
    for (const auto& [fn, gn] : parse_pairs(spec)) {
      const SphereFunction& f = ctx.function(fn);
      const SphereFunction& g = ctx.function(gn);
      std::vector<RateSample> samples;
      for (int k : ctx.cfg.ks)
        samples.push_back(
            {k, bracket_defect(QuantizationLevel(k), f, g, fine, ctx.cfg.l_cap)});
      std::string name = std::string("p2_bracket.") + (fine ? "fine" : "toeplitz") +
                         "." + fn + "-" + gn;
      RateCriteria c;
      if (fine) {
        c.slope_max = spec.param("fine_slope_max", -2.5);
      } else {
        c.slope_max = spec.param("toeplitz_slope_max", -1.6);
        c.slope_min = spec.param("toeplitz_slope_min", -2.7);
      }
      c.r2_min = spec.param("r2_min", 0.98);
      push_rows(out, name, samples, kInf);
      out.reports.push_back(assess_rate(name, samples, c));
    }
  }
}

void run_product_expansion(Context& ctx, const ExperimentSpec& spec, SuiteResult& out) {
  double sign = spec.param("bracket_sign", -1.0);
  for (const auto& [fn, gn] : parse_pairs(spec)) {
    const SphereFunction& f = ctx.function(fn);
    const SphereFunction& g = ctx.function(gn);
    SphereFunction fg = multiply(f, g, ctx.cfg.l_cap);
    SphereFunction pb = poisson_bracket(f, g, ctx.cfg.l_cap);
    std::vector<RateSample> samples;
    for (int k : ctx.cfg.ks) {
      QuantizationLevel level(k);
      Matrix residual = op_fine(level, f) * op_fine(level, g) - op_fine(level, fg) -
                        cplx(0.0, sign * 0.5 / k) * op_fine(level, pb);
      samples.push_back({k, op_norm(residual)});
    }
    std::string name = "product_expansion." + fn + "-" + gn;
    push_rows(out, name, samples, kInf);
    out.reports.push_back(assess_rate(name, samples, slope_below(spec, -1.6)));
  }
}

void run_trace_check(Context& ctx, const ExperimentSpec& spec, SuiteResult& out) {
  auto names = split_list(spec.param("functions", std::string("u,x,u2,xy")), ',');
  for (const auto& fname : names) {
    const SphereFunction& f = ctx.function(fname);
    double mean_term = integrate(f) / (2.0 * 3.14159265358979323846);
    std::vector<RateSample> samples;
    for (int k : ctx.cfg.ks) {
      QuantizationLevel level(k);
      double tr = toeplitz(level, f).trace().real();
      samples.push_back({k, std::abs(tr - k * mean_term)});
    }
    std::string name = "trace_check." + fname;
    push_rows(out, name, samples, kInf);
    RateCriteria c;
    c.slope_max = spec.param("slope_max", 0.1);
    out.reports.push_back(assess_rate(name, samples, c));
  }
}

void run_egorov(Context& ctx, const ExperimentSpec& spec, SuiteResult& out) {
  // '|' separates flow names since registry names may contain commas
  auto flows =
      split_list(spec.param("flows", std::string("rot_u(pi/2)|axisym(u2)")), '|');
  auto gs = split_list(spec.param("observables", std::string("x,xy")), ',');
  for (const auto& pname : flows) {
    const HamiltonianPath& path = ctx.path(pname);
    if (!path.flow) throw config_error("egorov flow '" + pname + "' has no classical flow");
    for (const auto& gn : gs) {
      const SphereFunction& g = ctx.function(gn);
      SphereFunction g_moved = pullback(g, *path.flow, 1.0, ctx.cfg.l_cap);
      std::vector<RateSample> samples;
      double integ = 0.0;
      // the axisymmetric transport reaches its asymptotic rate late, so the
      // default sweep sits higher than the suite-wide one
      for (int k : sweep(ctx.cfg, spec, "32,64,128,256,512")) {
        QuantizationLevel level(k);
        const UnitaryPropagator& up = ctx.propagator(k, pname);
        integ = std::max(integ, up.integrator_defect);
        Matrix lhs = op_fine(level, g_moved);
        Matrix rhs = up.mat * op_fine(level, g) * up.mat.adjoint();
        samples.push_back({k, op_norm(lhs - rhs)});
      }
      std::string name = "egorov." + pname + "." + gn;
      push_rows(out, name, samples, kInf);
      out.reports.push_back(
          assess_rate(name, samples, slope_below(spec, -1.6, 1e-9), integ));
    }
  }
}

void run_composition_defect(Context& ctx, const ExperimentSpec& spec, SuiteResult& out) {
  std::string pn = spec.param("p", std::string("rot_x(pi/3)"));
  std::string qn = spec.param("q", std::string("rot_u(pi/3)"));
  std::string prod_name = "prod(" + pn + "," + qn + ")";
  std::vector<RateSample> op_samples, p2_samples, p5_samples;
  double integ = 0.0;
  for (int k : ctx.cfg.ks) {
    const UnitaryPropagator& up = ctx.propagator(k, pn);
    const UnitaryPropagator& uq = ctx.propagator(k, qn);
    const UnitaryPropagator& uprod = ctx.propagator(k, prod_name);
    integ = std::max({integ, up.integrator_defect, uq.integrator_defect,
                      uprod.integrator_defect});
    Matrix d = up.mat * uq.mat - uprod.mat;
    op_samples.push_back({k, op_norm(d)});
    p2_samples.push_back({k, schatten_norm(d, 2.0) / std::pow(double(k), 1.0 / 2.0)});
    p5_samples.push_back({k, schatten_norm(d, 5.0) / std::pow(double(k), 1.0 / 5.0)});
  }
  RateCriteria c = slope_below(spec, -0.6, 1e-9);
  push_rows(out, "composition_defect.op", op_samples, kInf);
  push_rows(out, "composition_defect.p2", p2_samples, 2.0);
  push_rows(out, "composition_defect.p5", p5_samples, 5.0);
  out.reports.push_back(assess_rate("composition_defect.op", op_samples, c, integ));
  out.reports.push_back(assess_rate("composition_defect.p2", p2_samples, c, integ));
  out.reports.push_back(assess_rate("composition_defect.p5", p5_samples, c, integ));
}

void run_homotopy_defect(Context& ctx, const ExperimentSpec& spec, SuiteResult& out) {
  // conjugated path R^{-1} * rot_u(alpha) * R vs the transported Hamiltonian
  std::string conj = "concat(concat(inv(rot_x(pi/2)),rot_u(pi/3)),rot_x(pi/2))";
  std::string direct = "rot_y(pi/3)";
  std::vector<RateSample> samples;
  double integ = 0.0;
  for (int k : ctx.cfg.ks) {
    const UnitaryPropagator& a = ctx.propagator(k, conj);
    const UnitaryPropagator& b = ctx.propagator(k, direct);
    integ = std::max({integ, a.integrator_defect, b.integrator_defect});
    samples.push_back({k, op_norm(a.mat - b.mat)});
  }
  push_rows(out, "homotopy_defect.conjugated", samples, kInf);
  out.reports.push_back(assess_rate("homotopy_defect.conjugated", samples,
                                    slope_below(spec, -0.6, 1e-9), integ));

  std::vector<RateSample> loop_samples;
  for (int k : ctx.cfg.ks) {
    const UnitaryPropagator& u = ctx.propagator(k, "fourpiloop");
    Matrix eye = Matrix::Identity(k, k);
    loop_samples.push_back({k, op_norm(u.mat - eye)});
  }
  push_rows(out, "homotopy_defect.fourpiloop", loop_samples, kInf);
  out.reports.push_back(assess_absolute("homotopy_defect.fourpiloop", loop_samples,
                                        spec.param("loop_tol", 1e-8), true));
}

void run_loop_phase(Context& ctx, const ExperimentSpec& spec, SuiteResult& out) {
  const HamiltonianPath& loop = ctx.path("twopiloop");
  std::vector<RateSample> samples;
  std::vector<std::string> extras;
  for (int k : ctx.cfg.ks) {
    const UnitaryPropagator& u = ctx.propagator(k, "twopiloop");
    LoopInvariants inv = loop_invariants(loop, {0.0, 0.0, 1.0}, k);
    Matrix eye = Matrix::Identity(k, k);
    double d = op_norm(u.mat - cplx(std::polar(1.0, inv.predicted_phase)) * eye);
    samples.push_back({k, d});
    std::ostringstream os;
    os << "phase=" << inv.predicted_phase << " maslov=" << inv.maslov_parity;
    extras.push_back(os.str());
  }
  for (size_t i = 0; i < samples.size(); ++i)
    out.rows.push_back({"loop_phase", samples[i].k, samples[i].defect, kInf, extras[i]});
  out.reports.push_back(
      assess_absolute("loop_phase", samples, spec.param("tol", 1e-8), true));
}

void run_separation(Context& ctx, const ExperimentSpec& spec, SuiteResult& out) {
  std::vector<RateSample> samples;
  for (int k : ctx.cfg.ks) {
    if (k < 8) continue;
    const UnitaryPropagator& u = ctx.propagator(k, "rot_x(pi)");
    Matrix eye = Matrix::Identity(k, k);
    samples.push_back({k, op_norm(u.mat - eye)});
  }
  push_rows(out, "separation", samples, kInf);
  out.reports.push_back(
      assess_absolute("separation", samples, spec.param("bound", 0.5), false));
}

void run_projective_separation(Context& ctx, const ExperimentSpec& spec,
                               SuiteResult& out) {
  std::vector<RateSample> samples;
  for (int k : ctx.cfg.ks) {
    if (k < 8) continue;
    const UnitaryPropagator& u = ctx.propagator(k, "rot_x(pi)");
    Matrix eye = Matrix::Identity(k, k);
    samples.push_back({k, projective_distance(u.mat, eye, kInf)});
  }
  push_rows(out, "projective_separation", samples, kInf);
  out.reports.push_back(assess_absolute("projective_separation", samples,
                                        spec.param("bound", 0.5), false));
}

void run_schatten_sandwich(Context& ctx, const ExperimentSpec& spec, SuiteResult& out) {
  std::mt19937_64 rng(ctx.cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int trials = int(spec.param("trials", 1000.0));
  const std::vector<int> dims = {4, 16, 64};
  const std::vector<double> ps = {1.0, 2.0, 5.0, kInf};
  double tol = spec.param("tol", 1e-10);
  std::vector<RateSample> all;
  for (int d : dims) {
    std::vector<double> worst(ps.size(), 0.0);
    for (int trial = 0; trial < trials; ++trial) {
      Matrix b(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) = cplx(gauss(rng), gauss(rng));
      Matrix a = 0.5 * (b + b.adjoint().eval());
      Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
      Eigen::VectorXd sv = es.eigenvalues().cwiseAbs();
      double opn = sv.maxCoeff();
      for (size_t pi = 0; pi < ps.size(); ++pi) {
        double p = ps[pi];
        double norm_p;
        if (std::isinf(p)) {
          norm_p = opn;
        } else {
          double acc = 0.0;
          for (int i = 0; i < d; ++i) acc += std::pow(sv(i), p);
          norm_p = std::pow(acc, 1.0 / p);
        }
        double upper = std::isinf(p) ? opn : std::pow(double(d), 1.0 / p) * opn;
        double violation = std::max(opn - norm_p, norm_p - upper);
        worst[pi] = std::max(worst[pi], std::max(0.0, violation));
      }
    }
    for (size_t pi = 0; pi < ps.size(); ++pi) {
      out.rows.push_back({"schatten_sandwich", d, worst[pi], ps[pi],
                          "trials=" + std::to_string(trials)});
      all.push_back({d, worst[pi]});
    }
  }
  out.reports.push_back(assess_absolute("schatten_sandwich", all, tol, true));
}

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"dim_check", run_dim_check},
      {"p1_norm", run_p1_norm},
      {"p2_bracket", run_p2_bracket},
      {"product_expansion", run_product_expansion},
      {"trace_check", run_trace_check},
      {"egorov", run_egorov},
      {"composition_defect", run_composition_defect},
      {"homotopy_defect", run_homotopy_defect},
      {"loop_phase", run_loop_phase},
      {"separation", run_separation},
      {"projective_separation", run_projective_separation},
      {"schatten_sandwich", run_schatten_sandwich}};
  return table;
}

}  // namespace

bool SuiteResult::all_pass() const {
  for (const auto& r : reports)
    if (r.verdict != "pass") return false;
  return !reports.empty();
}

SuiteResult run_suite(const RunConfig& cfg) {
  cfg.validate();
  Context ctx(cfg);
  SuiteResult out;
  std::vector<ExperimentSpec> specs = cfg.experiments;
  if (specs.empty())
    for (const auto& name : experiment_catalog()) specs.push_back({name, {}});
  for (const auto& spec : specs) {
    auto it = runners().find(spec.name);
    if (it == runners().end())
      throw config_error("unknown experiment '" + spec.name + "'");
    it->second(ctx, spec, out);
  }
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const DefectRow& a, const DefectRow& b) {
                     if (a.experiment != b.experiment) return a.experiment < b.experiment;
                     if (a.k != b.k) return a.k < b.k;
                     return a.p < b.p;
                   });
  std::stable_sort(out.reports.begin(), out.reports.end(),
                   [](const RateReport& a, const RateReport& b) { return a.name < b.name; });
  return out;
}

}  // namespace fineq
