// fineq: quantization laboratory for the sphere.
//
//   fineq run <config>            run the experiment suite, emit reports
//   fineq condition-c ...         parity check on cohomological data
//   fineq quantize --k K --f F    operator summary for a named function
//   fineq propagate --k K --path P  propagator summary for a named path
//   fineq dump-operator ...       matrix entries as CSV (re,im pairs)
//   fineq plot <defects.csv>      re-emit SVG plots from a defects table

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "fineq/dynamics.hpp"
#include "fineq/errors.hpp"
#include "fineq/experiments.hpp"
#include "fineq/lattice.hpp"
#include "fineq/report.hpp"

namespace {

using namespace fineq;

void apply_thread_cap() {
  if (const char* env = std::getenv("FINEQ_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else
      cur.push_back(c);
  }
  out.push_back(cur);
  return out;
}

int cmd_run(const std::string& config_path) {
  RunConfig cfg = load_config(config_path);
  SuiteResult result = run_suite(cfg);
  std::string json_path = write_reports(result, cfg);
  for (const auto& r : result.reports) {
    std::cout << r.name << ": " << r.verdict;
    if (r.fitted)
      std::cout << " (slope " << format_double(r.slope) << ", r2 "
                << format_double(r.r_squared) << ")";
    if (!r.note.empty()) std::cout << " [" << r.note << "]";
    std::cout << "\n";
  }
  std::cout << "report: " << json_path << "\n";
  return result.all_pass() ? 0 : 1;
}

int cmd_condition_c(const std::string& omega_arg, const std::string& c1_arg) {
  CohomologyData data;
  for (const auto& tok : split_commas(omega_arg))
    data.omega.push_back(parse_rational(tok));
  for (const auto& tok : split_commas(c1_arg)) data.c1.push_back(std::stoll(tok));
  data.basis_rank = int(data.omega.size());
  data.validate();
  ConditionCResult res = check_condition_c(data);
  if (res.satisfied) {
    std::cout << "satisfied\n";
    return 0;
  }
  std::cout << "violated (witness:";
  for (long long v : res.witness) std::cout << ' ' << v;
  std::cout << ")\n";
  return 1;
}

int cmd_quantize(int k, const std::string& fname, bool fine, bool dump) {
  QuantizationLevel level(k);
  SphereFunction f = normalize_zero_mean(make_function(fname));
  Matrix q = quantize(level, f, fine);
  std::cout << "dim = " << level.dim() << "\n";
  std::cout << "op-norm = " << format_double(op_norm(q)) << "\n";
  std::cout << "hermitian-defect = " << format_double(hermitian_defect(q)) << "\n";
  if (dump) {
    std::cout.precision(17);
    for (int i = 0; i < q.rows(); ++i) {
      for (int j = 0; j < q.cols(); ++j) {
        if (j) std::cout << ',';
        std::cout << q(i, j).real() << ',' << q(i, j).imag();
      }
      std::cout << '\n';
    }
  }
  return 0;
}

int cmd_propagate(int k, const std::string& path_name, bool toeplitz_mode) {
  QuantizationLevel level(k);
  HamiltonianPath path = make_path(path_name);
  PropagateOptions opts;
  opts.fine = !toeplitz_mode;
  UnitaryPropagator u = propagate(level, path, opts);
  Matrix eye = Matrix::Identity(k, k);
  std::cout << "path = " << u.path_label << "\n";
  std::cout << "steps = " << u.steps << (u.steps == 0 ? " (exact exponentials)" : "")
            << "\n";
  std::cout << "integrator-defect = " << format_double(u.integrator_defect) << "\n";
  std::cout << "unitarity-defect = "
            << format_double(op_norm(u.mat.adjoint() * u.mat - eye)) << "\n";
  std::cout << "distance-to-identity = " << format_double(op_norm(u.mat - eye))
            << "\n";
  return 0;
}

int cmd_dump_operator(int k, const std::string& fname, bool fine,
                      const std::string& out_path) {
  QuantizationLevel level(k);
  SphereFunction f = normalize_zero_mean(make_function(fname));
  Matrix q = quantize(level, f, fine);
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < q.rows(); ++i) {
    for (int j = 0; j < q.cols(); ++j) {
      if (j) os << ',';
      os << q(i, j).real() << ',' << q(i, j).imag();
    }
    os << '\n';
  }
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    atomic_write(out_path, os.str());
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_plot(const std::string& csv_path, std::string out_dir) {
  auto rows = read_defects_csv(csv_path);
  if (out_dir.empty())
    out_dir = (std::filesystem::path(csv_path).parent_path() / "plots").string();
  std::map<std::string, std::vector<DefectRow>> families;
  for (const auto& r : rows)
    families[r.experiment.substr(0, r.experiment.find('.'))].push_back(r);
  for (const auto& [family, frows] : families) {
    std::string name = family;
    for (char& c : name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' &&
          c != '_')
        c = '_';
    std::string path = (std::filesystem::path(out_dir) / (name + ".svg")).string();
    atomic_write(path, plot_svg(frows, {}));
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{"fineq: Berezin-Toeplitz quantization laboratory on the sphere"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run the experiment suite from a config");
  run->add_option("config", config_path, "config file")->required();

  std::string omega_arg, c1_arg;
  auto* cond = app.add_subcommand("condition-c", "parity check on (omega, c1) data");
  cond->add_option("--omega", omega_arg, "comma-separated rationals")->required();
  cond->add_option("--c1", c1_arg, "comma-separated integers")->required();

  int k = 16;
  std::string fname = "u", path_name = "twopiloop", out_path;
  bool fine = false, dump = false, toeplitz_mode = false;
  auto* quant = app.add_subcommand("quantize", "operator summary for a function");
  quant->add_option("--k", k, "level")->required();
  quant->add_option("--f", fname, "function name")->required();
  quant->add_flag("--fine", fine, "use the Laplacian-corrected quantization");
  quant->add_flag("--dump", dump, "print matrix entries");

  auto* prop = app.add_subcommand("propagate", "propagator summary for a path");
  prop->add_option("--k", k, "level")->required();
  prop->add_option("--path", path_name, "path name")->required();
  prop->add_flag("--toeplitz", toeplitz_mode, "propagate with plain Toeplitz operators");

  auto* dumpop = app.add_subcommand("dump-operator", "matrix entries as CSV");
  dumpop->add_option("--k", k, "level")->required();
  dumpop->add_option("--f", fname, "function name")->required();
  dumpop->add_flag("--fine", fine, "use the Laplacian-corrected quantization");
  dumpop->add_option("--out", out_path, "output file (default stdout)");

  std::string csv_path, plot_out;
  auto* plot = app.add_subcommand("plot", "re-emit SVG plots from defects.csv");
  plot->add_option("csv", csv_path, "defects.csv path")->required();
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (cond->parsed()) return cmd_condition_c(omega_arg, c1_arg);
    if (quant->parsed()) return cmd_quantize(k, fname, fine, dump);
    if (prop->parsed()) return cmd_propagate(k, path_name, toeplitz_mode);
    if (dumpop->parsed()) return cmd_dump_operator(k, fname, fine, out_path);
    if (plot->parsed()) return cmd_plot(csv_path, plot_out);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
