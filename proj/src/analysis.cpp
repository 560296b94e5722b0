#include "layersolve/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace layersolve {

int MPolicy::steps(int N) const {
  switch (kind) {
    case Kind::EqualN: return N;
    case Kind::NSquared: return N * N;
    case Kind::Fixed: return fixed;
  }
  return N;
}

std::string MPolicy::to_string() const {
  switch (kind) {
    case Kind::EqualN: return "equal-n";
    case Kind::NSquared: return "n-squared";
    case Kind::Fixed: return "fixed:" + std::to_string(fixed);
  }
  return "?";
}

MPolicy MPolicy::parse(const std::string& text) {
  if (text == "equal-n") return equal_n();
  if (text == "n-squared") return n_squared();
  if (text.rfind("fixed:", 0) == 0) {
    const std::string digits = text.substr(6);
    int M = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), M);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && M >= 1) return fixed_steps(M);
  }
  throw std::invalid_argument("invalid m-policy '" + text + "' (expected equal-n, n-squared or fixed:<int>)");
}

std::string_view to_string(ErrorNorm norm) { return norm == ErrorNorm::SpaceTime ? "space-time" : "final-time"; }

namespace {

// Coarse node i lies in fine interval [x_j, x_{j+1}] with weight w on x_{j+1}.
struct Interpolant {
  std::vector<int> index;
  std::vector<double> weight;
};

Interpolant locate(const SpatialMesh& coarse, const SpatialMesh& fine) {
  Interpolant out;
  const auto nodes = fine.nodes();
  for (int i = 0; i <= coarse.intervals(); ++i) {
    const double x = coarse.x(i);
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    int j = static_cast<int>(it - nodes.begin()) - 1;
    j = std::clamp(j, 0, fine.intervals() - 1);
    const double w = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
    out.index.push_back(j);
    out.weight.push_back(std::clamp(w, 0.0, 1.0));
  }
  return out;
}

void update_extremes(DoubleMeshResult& r, std::span<const double> values) {
  for (const double v : values) {
    r.max_abs = std::max(r.max_abs, std::abs(v));
    r.min_value = std::min(r.min_value, v);
  }
}

}  // namespace

DoubleMeshResult double_mesh_estimate(const TurningPointProblem& problem, Scheme scheme, int N, int M, double eps,
                                      const DoubleMeshOptions& options) {
  if (M < 1) throw std::invalid_argument("double_mesh_estimate: M must be >= 1");
  SpatialMesh coarse_mesh = build_mesh(problem, scheme, N, eps, options.mesh);
  const bool nested = options.mesh.refine == Refinement::Bisect || scheme == Scheme::UpwindUniform;
  SpatialMesh fine_mesh = nested ? bisect(coarse_mesh) : build_mesh(problem, scheme, 2 * N, eps, options.mesh);

  Interpolant interp;
  if (nested) {
    for (int i = 0; i <= N; ++i) {
      if (fine_mesh.x(2 * i) != coarse_mesh.x(i)) {
        throw std::logic_error("double_mesh_estimate: bisected mesh lost coarse node " + std::to_string(i));
      }
    }
  } else {
    interp = locate(coarse_mesh, fine_mesh);
  }

  const SpatialScheme spatial = spatial_scheme(scheme);
  TimeStepper coarse(problem, spatial, std::move(coarse_mesh), TimeMesh(M, problem.t_final), eps);
  TimeStepper fine(problem, spatial, std::move(fine_mesh), TimeMesh(2 * M, problem.t_final), eps);
  coarse.track_m_matrix(options.track_m_matrix);
  fine.track_m_matrix(options.track_m_matrix);

  DoubleMeshResult result;
  result.min_value = coarse.current()[0];
  auto compare = [&] {
    const bool counted = options.norm == ErrorNorm::SpaceTime || coarse.done();
    const auto u = coarse.current();
    const auto v = fine.current();
    for (int i = 0; i <= N; ++i) {
      const double fine_value = nested ? v[2 * i]
                                       : (1.0 - interp.weight[i]) * v[interp.index[i]] +
                                             interp.weight[i] * v[interp.index[i] + 1];
      if (counted) result.error = std::max(result.error, std::abs(u[i] - fine_value));
    }
    update_extremes(result, u);
    update_extremes(result, v);
  };

  compare();
  while (!coarse.done()) {
    coarse.advance();
    fine.advance();
    update_extremes(result, fine.current());
    fine.advance();
    compare();
  }
  for (const double v : coarse.current()) {
    if (!std::isfinite(v)) throw std::runtime_error("double_mesh_estimate: non-finite coarse solution");
  }
  if (!std::isfinite(result.error)) throw std::runtime_error("double_mesh_estimate: non-finite error");
  result.m_matrix_failures = coarse.m_matrix_failures() + fine.m_matrix_failures();
  return result;
}

double order(double E_coarse, double E_fine) {
  if (!(E_coarse > 0.0) || !(E_fine > 0.0)) {
    throw std::invalid_argument("order: errors must be positive");
  }
  return std::log2(E_coarse / E_fine);
}

bool ConvergenceTable::complete() const {
  for (const auto& row : cells) {
    for (const auto& cell : row) {
      if (!cell.E) return false;
    }
  }
  return true;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("LAYERSOLVE_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::optional<double> safe_order(const std::optional<double>& coarse, const std::optional<double>& fine) {
  if (!coarse || !fine || !(*coarse > 0.0) || !(*fine > 0.0)) return std::nullopt;
  return order(*coarse, *fine);
}

}  // namespace

void finalize(ConvergenceTable& table) {
  const std::size_t ne = table.eps_list.size();
  const std::size_t nn = table.n_list.size();
  table.q.assign(ne, std::vector<std::optional<double>>(nn > 0 ? nn - 1 : 0));
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t j = 0; j + 1 < nn; ++j) table.q[e][j] = safe_order(table.E(e, j), table.E(e, j + 1));
  }
  table.E_uniform.assign(nn, std::nullopt);
  for (std::size_t j = 0; j < nn; ++j) {
    std::optional<double> worst;
    bool all = ne > 0;
    for (std::size_t e = 0; e < ne; ++e) {
      const auto E = table.E(e, j);
      if (!E) {
        all = false;
        break;
      }
      worst = worst ? std::max(*worst, *E) : *E;
    }
    if (all) table.E_uniform[j] = worst;
  }
  table.q_uniform.assign(nn > 0 ? nn - 1 : 0, std::nullopt);
  for (std::size_t j = 0; j + 1 < nn; ++j) table.q_uniform[j] = safe_order(table.E_uniform[j], table.E_uniform[j + 1]);
}

ConvergenceTable run_experiment(const TurningPointProblem& problem, Scheme scheme, const std::vector<double>& eps_list,
                                const std::vector<int>& n_list, const MPolicy& m_policy,
                                const ExperimentOptions& options) {
  for (std::size_t j = 0; j < n_list.size(); ++j) {
    if (j > 0 && n_list[j] <= n_list[j - 1]) throw std::invalid_argument("run_experiment: n_list must ascend");
    if (scheme != Scheme::UpwindUniform && n_list[j] % 4 != 0) {
      throw std::invalid_argument("run_experiment: N must be divisible by 4");
    }
  }
  ConvergenceTable table;
  table.scheme = scheme;
  table.problem = problem.name;
  table.p = problem.p;
  table.m_policy = m_policy;
  table.eps_list = eps_list;
  table.n_list = n_list;
  table.cells.assign(eps_list.size(), std::vector<TableCell>(n_list.size()));

  // Largest N first so the expensive cells do not trail at the end.
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t j = n_list.size(); j-- > 0;) {
    for (std::size_t e = 0; e < eps_list.size(); ++e) jobs.emplace_back(e, j);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const auto [e, j] = jobs[k];
      TableCell& cell = table.cells[e][j];
      cell.M = m_policy.steps(n_list[j]);
      try {
        const DoubleMeshResult r =
            double_mesh_estimate(problem, scheme, n_list[j], cell.M, eps_list[e], options.double_mesh);
        cell.E = r.error;
        cell.max_abs = r.max_abs;
        cell.min_value = r.min_value;
        cell.m_matrix_failures = r.m_matrix_failures;
      } catch (const std::exception& ex) {
        cell.error = ex.what();
      }
    }
  };

  const unsigned threads =
      std::min<std::size_t>(options.threads > 0 ? options.threads : default_thread_count(), jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  finalize(table);
  return table;
}

std::string format_sig6(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", value);
  return buf;
}

namespace {
std::string opt(const std::optional<double>& v) { return v ? format_sig6(*v) : std::string(); }
}  // namespace

void write_table_csv(std::ostream& out, const ConvergenceTable& table) {
  out << "eps,N,M,E,q\n";
  for (std::size_t e = 0; e < table.eps_list.size(); ++e) {
    for (std::size_t j = 0; j < table.n_list.size(); ++j) {
      const TableCell& cell = table.cells[e][j];
      out << format_sig6(table.eps_list[e]) << ',' << table.n_list[j] << ',' << cell.M << ',' << opt(cell.E) << ','
          << (j < table.q[e].size() ? opt(table.q[e][j]) : std::string()) << '\n';
    }
  }
  for (std::size_t j = 0; j < table.n_list.size(); ++j) {
    out << "uniform," << table.n_list[j] << ',' << table.m_policy.steps(table.n_list[j]) << ','
        << opt(table.E_uniform[j]) << ','
        << (j < table.q_uniform.size() ? opt(table.q_uniform[j]) : std::string()) << '\n';
  }
}

namespace {

std::string eps_label(double eps) {
  const double k = -std::log2(eps);
  if (k == std::round(k)) return "2^-" + std::to_string(static_cast<int>(k));
  return format_sig6(eps);
}

}  // namespace

void write_table_markdown(std::ostream& out, const ConvergenceTable& table) {
  out << "### " << to_string(table.scheme) << ", problem " << table.problem;
  if (table.problem == "p2") out << " (p = " << table.p << ")";
  out << ", M policy " << table.m_policy.to_string() << "\n\n";
  out << "| eps |  |";
  for (const int N : table.n_list) out << " N=" << N << " |";
  out << "\n|---|---|";
  for (std::size_t j = 0; j < table.n_list.size(); ++j) out << "---|";
  out << '\n';
  auto rows = [&](const std::string& label, auto E_of, auto q_of) {
    out << "| " << label << " | E |";
    for (std::size_t j = 0; j < table.n_list.size(); ++j) {
      const auto E = E_of(j);
      out << ' ' << (E ? format_sig6(*E) : std::string("n/a")) << " |";
    }
    out << "\n|  | q |";
    for (std::size_t j = 0; j < table.n_list.size(); ++j) {
      const auto q = j + 1 < table.n_list.size() ? q_of(j) : std::optional<double>();
      out << ' ' << (q ? format_sig6(*q) : std::string()) << " |";
    }
    out << '\n';
  };
  for (std::size_t e = 0; e < table.eps_list.size(); ++e) {
    rows(eps_label(table.eps_list[e]), [&](std::size_t j) { return table.E(e, j); },
         [&](std::size_t j) { return table.q[e][j]; });
  }
  rows("**uniform**", [&](std::size_t j) { return table.E_uniform[j]; },
       [&](std::size_t j) { return table.q_uniform[j]; });
}

std::vector<CsvRow> read_table_csv(std::istream& in) {
  std::vector<CsvRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != "eps,N,M,E,q") {
    throw std::runtime_error("read_table_csv: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 5) throw std::runtime_error("read_table_csv: bad row '" + line + "'");
    CsvRow row;
    row.eps = fields[0];
    row.N = std::stoi(fields[1]);
    row.M = std::stoi(fields[2]);
    if (!fields[3].empty()) row.E = std::stod(fields[3]);
    if (!fields[4].empty()) row.q = std::stod(fields[4]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace layersolve
