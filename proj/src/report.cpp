#include "fineq/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fineq/errors.hpp"
#include "json.hpp"

namespace fineq {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

namespace {

double parse_special(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out.push_back((std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                   c == '-' || c == '_')
                      ? c
                      : '_');
  return out;
}

}  // namespace

std::string defects_csv(const SuiteResult& result) {
  std::ostringstream os;
  os << "experiment,k,defect,p,extra\n";
  for (const auto& r : result.rows)
    os << r.experiment << ',' << r.k << ',' << format_double(r.defect) << ','
       << format_double(r.p) << ',' << r.extra << '\n';
  return os.str();
}

std::string rates_csv(const SuiteResult& result) {
  std::ostringstream os;
  os << "experiment,slope,intercept,r2,verdict\n";
  for (const auto& r : result.reports)
    os << r.name << ',' << format_double(r.slope) << ',' << format_double(r.intercept)
       << ',' << format_double(r.r_squared) << ',' << r.verdict << '\n';
  return os.str();
}

std::string report_json(const SuiteResult& result, const RunConfig& cfg) {
  json doc;
  doc["schema-version"] = 1;
  doc["ks"] = cfg.ks;
  doc["seed"] = cfg.seed;
  doc["l_cap"] = cfg.l_cap;
  doc["defects"] = json::array();
  for (const auto& r : result.rows)
    doc["defects"].push_back({{"experiment", r.experiment},
                              {"k", r.k},
                              {"defect", number_or_string(r.defect)},
                              {"p", number_or_string(r.p)},
                              {"extra", r.extra}});
  doc["rates"] = json::array();
  for (const auto& r : result.reports) {
    json samples = json::array();
    for (const auto& s : r.samples)
      samples.push_back({{"k", s.k}, {"defect", number_or_string(s.defect)}});
    doc["rates"].push_back({{"experiment", r.name},
                            {"slope", number_or_string(r.slope)},
                            {"intercept", number_or_string(r.intercept)},
                            {"r2", number_or_string(r.r_squared)},
                            {"verdict", r.verdict},
                            {"note", r.note},
                            {"integrator_defect", number_or_string(r.integrator_defect)},
                            {"samples", samples}});
  }
  doc["all_pass"] = result.all_pass();
  return doc.dump(2) + "\n";
}

std::string plot_svg(const std::vector<DefectRow>& rows,
                     const std::vector<RateReport>& reports) {
  const double width = 560, height = 400;
  const double ml = 70, mr = 20, mt = 30, mb = 50;
  const double floor_val = 1e-16;

  double kmin = 1e300, kmax = 0, dmin = 1e300, dmax = 0;
  for (const auto& r : rows) {
    double d = std::max(r.defect, floor_val);
    kmin = std::min(kmin, double(r.k));
    kmax = std::max(kmax, double(r.k));
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  if (rows.empty()) {
    kmin = 1;
    kmax = 10;
    dmin = 1e-10;
    dmax = 1;
  }
  double lx0 = std::log10(kmin), lx1 = std::log10(std::max(kmax, kmin * 1.01));
  double ly0 = std::floor(std::log10(dmin)), ly1 = std::ceil(std::log10(dmax * 1.01));
  if (ly1 <= ly0) ly1 = ly0 + 1;

  auto sx = [&](double k) {
    return ml + (std::log10(k) - lx0) / (lx1 - lx0) * (width - ml - mr);
  };
  auto sy = [&](double d) {
    return height - mb -
           (std::log10(std::max(d, floor_val)) - ly0) / (ly1 - ly0) *
               (height - mt - mb);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
     << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
     << height - mb << "\" stroke=\"black\"/>\n";

  for (int e = int(ly0); e <= int(ly1); ++e) {
    double y = sy(std::pow(10.0, e));
    os << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml
       << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
       << "\" font-size=\"11\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  for (double k : {kmin, std::sqrt(kmin * kmax), kmax}) {
    double x = sx(k);
    os << "<line x1=\"" << x << "\" y1=\"" << height - mb << "\" x2=\"" << x
       << "\" y2=\"" << height - mb + 4 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << height - mb + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << format_double(k)
       << "</text>\n";
  }
  os << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
     << "\" font-size=\"12\" text-anchor=\"middle\">k</text>\n";

  // group rows into one series per (experiment, p)
  std::map<std::string, std::vector<const DefectRow*>> series;
  for (const auto& r : rows)
    series[r.experiment + "|" + format_double(r.p)].push_back(&r);

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  int ci = 0;
  double legend_y = mt + 4;
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end(),
              [](const DefectRow* a, const DefectRow* b) { return a->k < b->k; });
    const char* color = colors[ci % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto* r : pts) os << sx(r->k) << ',' << sy(r->defect) << ' ';
    os << "\"/>\n";
    for (const auto* r : pts)
      os << "<circle cx=\"" << sx(r->k) << "\" cy=\"" << sy(r->defect)
         << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    std::string label = key.substr(0, key.find('|'));
    std::string slope_txt;
    for (const auto& rep : reports)
      if (rep.name == label && rep.fitted)
        slope_txt = " slope=" + format_double(rep.slope);
    os << "<text x=\"" << width - mr - 4 << "\" y=\"" << legend_y
       << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << color << "\">" << label
       << slope_txt << "</text>\n";
    legend_y += 14;
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out) throw input_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string write_reports(const SuiteResult& result, const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  atomic_write((dir / "defects.csv").string(), defects_csv(result));
  atomic_write((dir / "rates.csv").string(), rates_csv(result));
  std::string json_path = (dir / "report.json").string();
  atomic_write(json_path, report_json(result, cfg));
  if (cfg.emit_plots) {
    // one plot per experiment family (text before the first '.')
    std::map<std::string, std::vector<DefectRow>> families;
    for (const auto& r : result.rows)
      families[r.experiment.substr(0, r.experiment.find('.'))].push_back(r);
    for (const auto& [family, rows] : families)
      atomic_write((dir / "plots" / (sanitize(family) + ".svg")).string(),
                   plot_svg(rows, result.reports));
  }
  return json_path;
}

std::vector<DefectRow> read_defects_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot read '" + path + "'");
  std::vector<DefectRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("experiment,", 0) == 0) continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 4) throw input_error("malformed defects row: " + line);
    DefectRow r;
    r.experiment = cells[0];
    r.k = std::stoi(cells[1]);
    r.defect = parse_special(cells[2]);
    r.p = parse_special(cells[3]);
    if (cells.size() > 4) r.extra = cells[4];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fineq
