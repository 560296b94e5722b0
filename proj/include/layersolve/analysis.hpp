#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "layersolve/problem.hpp"
#include "layersolve/solver.hpp"

namespace layersolve {

/// Number of time steps used for a given spatial N.
struct MPolicy {
  enum class Kind { EqualN, NSquared, Fixed };
  Kind kind = Kind::EqualN;
  int fixed = 0;

  static MPolicy equal_n() { return {Kind::EqualN, 0}; }
  static MPolicy n_squared() { return {Kind::NSquared, 0}; }
  static MPolicy fixed_steps(int M) { return {Kind::Fixed, M}; }

  int steps(int N) const;
  std::string to_string() const;
  /// Accepts "equal-n", "n-squared" and "fixed:<int>".
  static MPolicy parse(const std::string& text);

  bool operator==(const MPolicy&) const = default;
};

struct DoubleMeshResult {
  double error = 0.0;
  /// Space-time extremes of the coarse and fine runs.
  double max_abs = 0.0;
  double min_value = 0.0;
  std::size_t m_matrix_failures = 0;
};

/// Which coarse levels enter the double-mesh maximum.
enum class ErrorNorm { SpaceTime, FinalTime };

std::string_view to_string(ErrorNorm norm);

struct DoubleMeshOptions {
  MeshOptions mesh;
  ErrorNorm norm = ErrorNorm::SpaceTime;
  /// Run is_m_matrix on every assembled level of both runs.
  bool track_m_matrix = false;
};

/// Double-mesh estimate max_{i,n} |U^{N,M}(x_i,t_n) - U^{2N,2M}(x_i,t_n)| over
/// every coarse node and level. The two runs advance in lockstep so memory
/// stays O(N) for any M.
DoubleMeshResult double_mesh_estimate(const TurningPointProblem& problem, Scheme scheme, int N, int M, double eps,
                                      const DoubleMeshOptions& options = {});

inline double double_mesh_error(const TurningPointProblem& problem, Scheme scheme, int N, int M, double eps,
                                const MeshOptions& mesh_options = {}) {
  return double_mesh_estimate(problem, scheme, N, M, eps, DoubleMeshOptions{.mesh = mesh_options}).error;
}

/// log2(E_coarse / E_fine).
double order(double E_coarse, double E_fine);

struct TableCell {
  std::optional<double> E;
  int M = 0;
  double max_abs = 0.0;
  double min_value = 0.0;
  std::size_t m_matrix_failures = 0;
  std::string error;
};

struct ConvergenceTable {
  Scheme scheme = Scheme::HybridGeneralizedShishkin;
  std::string problem;
  int p = 1;
  MPolicy m_policy;
  std::vector<double> eps_list;
  std::vector<int> n_list;

  /// cells[e][j] for eps_list[e], n_list[j].
  std::vector<std::vector<TableCell>> cells;
  /// q[e][j] = order(E[e][j], E[e][j+1]); one column fewer than n_list.
  std::vector<std::vector<std::optional<double>>> q;
  std::vector<std::optional<double>> E_uniform;
  std::vector<std::optional<double>> q_uniform;

  std::optional<double> E(std::size_t e, std::size_t j) const { return cells[e][j].E; }
  bool complete() const;
};

struct ExperimentOptions {
  DoubleMeshOptions double_mesh;
  /// 0 picks LAYERSOLVE_THREADS, else the hardware concurrency.
  unsigned threads = 0;
};

/// Worker count from LAYERSOLVE_THREADS, falling back to hardware concurrency.
unsigned default_thread_count();

/// Fills every (eps, N) cell by double_mesh_estimate. Cells run in parallel;
/// results do not depend on the thread count. A failing cell is recorded with
/// its message and the rest of the table still completes.
ConvergenceTable run_experiment(const TurningPointProblem& problem, Scheme scheme, const std::vector<double>& eps_list,
                                const std::vector<int>& n_list, const MPolicy& m_policy,
                                const ExperimentOptions& options = {});

/// Recomputes q, E_uniform and q_uniform from the cells.
void finalize(ConvergenceTable& table);

/// 6 significant digits, e.g. 1.98574e-02.
std::string format_sig6(double value);

/// CSV `eps,N,M,E,q`, one row per cell, then `uniform` rows.
void write_table_csv(std::ostream& out, const ConvergenceTable& table);
/// Markdown table: per eps an error row and an order row, N across.
void write_table_markdown(std::ostream& out, const ConvergenceTable& table);

struct CsvRow {
  std::string eps;
  int N = 0;
  int M = 0;
  std::optional<double> E;
  std::optional<double> q;
};
std::vector<CsvRow> read_table_csv(std::istream& in);

}  // namespace layersolve
