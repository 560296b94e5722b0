#include "layersolve/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>

#include "layersolve/solver.hpp"

namespace layersolve {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Series {
  std::string label;
  std::string color;
  std::string dash;
  std::vector<std::pair<double, double>> points;  // (log2 N, log2 E)
};

}  // namespace

void write_convergence_svg(std::ostream& out, const std::vector<ConvergenceTable>& tables) {
  std::vector<Series> series;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const ConvergenceTable& t = tables[k];
    Series s{std::string(to_string(t.scheme)), kColors[k % std::size(kColors)], "", {}};
    for (std::size_t j = 0; j < t.n_list.size(); ++j)
      if (t.E_uniform[j] && *t.E_uniform[j] > 0.0)
        s.points.emplace_back(std::log2(t.n_list[j]), std::log2(*t.E_uniform[j]));
    series.push_back(std::move(s));
  }

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  for (const auto& t : tables)
    for (int N : t.n_list) {
      x_min = std::min(x_min, std::log2(N));
      x_max = std::max(x_max, std::log2(N));
    }
  if (!(x_min < x_max)) {
    x_min = std::isfinite(x_min) ? x_min - 1.0 : 4.0;
    x_max = x_min + 2.0;
  }

  // Reference slopes start at the largest first-column error.
  double anchor = -std::numeric_limits<double>::infinity();
  for (const auto& s : series)
    if (!s.points.empty() && s.points.front().first == x_min) anchor = std::max(anchor, s.points.front().second);
  if (!std::isfinite(anchor)) anchor = 0.0;
  for (int slope : {1, 2}) {
    Series ref{"N^-" + std::to_string(slope), "#555555", slope == 1 ? "6,4" : "2,3", {}};
    ref.points = {{x_min, anchor}, {x_max, anchor - slope * (x_max - x_min)}};
    series.push_back(std::move(ref));
  }

  double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  y_min = std::floor(y_min);
  y_max = std::ceil(y_max);
  if (!(y_min < y_max)) y_max = y_min + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (y_max - y) / (y_max - y_min) * plot_h; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << num(plot_w) << "\" height=\"" << num(plot_h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = static_cast<int>(std::ceil(x_min)); k <= static_cast<int>(std::floor(x_max)); ++k) {
    const double x = px(k);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(x) << "\" y2=\""
        << num(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
        << (1 << k) << "</text>\n";
  }
  const int y_step = std::max(1, static_cast<int>(std::ceil((y_max - y_min) / 10.0)));
  for (int k = static_cast<int>(y_min); k <= static_cast<int>(y_max); k += y_step) {
    const double y = py(k);
    out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft << "\" y2=\"" << num(y)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">2^" << k
        << "</text>\n";
  }
  out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 10)
      << "\" text-anchor=\"middle\">N</text>\n";
  out << "<text x=\"15\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << num(kTop + plot_h / 2) << ")\">eps-uniform error</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (!s.dash.empty()) out << " stroke-dasharray=\"" << s.dash << '"';
    out << " points=\"";
    for (std::size_t m = 0; m < s.points.size(); ++m)
      out << (m ? " " : "") << num(px(s.points[m].first)) << ',' << num(py(s.points[m].second));
    out << "\"/>\n";
    const bool reference = !s.dash.empty();
    if (!reference)
      for (const auto& [x, y] : s.points)
        out << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"3\" fill=\"" << s.color
            << "\"/>\n";

    const double ly = kTop + 10 + 20.0 * k;
    const double lx = kWidth - kRight + 15;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 25) << "\" y2=\"" << num(ly)
        << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (reference) out << " stroke-dasharray=\"" << s.dash << '"';
    out << "/>\n";
    out << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly + 4) << "\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

namespace {

void write_file(EmitReport& report, const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  try {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing");
    body(out);
    out.close();
    if (!out) throw std::runtime_error("write failed");
    report.written.push_back(path.string());
  } catch (const std::exception& e) {
    report.failures.push_back(path.string() + ": " + e.what());
  }
}

}  // namespace

EmitReport emit_outputs(const std::vector<ConvergenceTable>& tables, const RunConfig& config) {
  if (tables.empty()) throw std::invalid_argument("emit_outputs: no tables");
  EmitReport report;
  const std::filesystem::path dir(config.out_dir);
  try {
    std::filesystem::create_directories(dir);
  } catch (const std::exception& e) {
    report.failures.push_back(dir.string() + ": " + e.what());
    return report;
  }

  const std::string problem(to_string(config.problem));
  write_file(report, dir / "config.json", [&](std::ostream& out) { out << config_to_json(config); });

  for (const ConvergenceTable& table : tables) {
    const std::string stem = std::string(to_string(table.scheme)) + "_" + problem;
    if (config.emits(EmitKind::Csv))
      write_file(report, dir / (stem + ".csv"), [&](std::ostream& out) { write_table_csv(out, table); });
    if (config.emits(EmitKind::Markdown))
      write_file(report, dir / (stem + ".md"), [&](std::ostream& out) { write_table_markdown(out, table); });
  }
  if (config.emits(EmitKind::Svg))
    write_file(report, dir / ("convergence_" + problem + ".svg"),
               [&](std::ostream& out) { write_convergence_svg(out, tables); });

  if (config.emits(EmitKind::Surface)) {
    const TurningPointProblem tp = make_problem(config);
    const int N = config.n_list.front();
    const double eps = *std::min_element(config.eps_list.begin(), config.eps_list.end());
    for (const ConvergenceTable& table : tables) {
      const auto path = dir / (std::string(to_string(table.scheme)) + "_" + problem + "_surface.csv");
      write_file(report, path, [&](std::ostream& out) {
        SolveOptions options;
        options.mesh = config.mesh_options();
        options.max_retained_levels = 257;
        write_surface_csv(out, solve(tp, table.scheme, N, config.m_policy.steps(N), eps, options));
      });
    }
  }
  return report;
}

}  // namespace layersolve
