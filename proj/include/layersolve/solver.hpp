#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "layersolve/discretization.hpp"
#include "layersolve/mesh.hpp"
#include "layersolve/problem.hpp"

namespace layersolve {

enum class Scheme { HybridGeneralizedShishkin, UpwindUniform, UpwindShishkin };
enum class Refinement { Bisect, Regenerate };

std::string_view to_string(Scheme scheme);
std::string_view to_string(Refinement refine);
SpatialScheme spatial_scheme(Scheme scheme);

struct MeshOptions {
  /// Generalized Shishkin transition constant. Unset: the problem's
  /// mesh_defaults, then 2/alpha.
  std::optional<double> tau0;
  /// Standard Shishkin transition constant, resolved the same way.
  std::optional<double> sigma;
  /// Unset: LambertW if the problem asks for it, else LogN.
  std::optional<LStrategy> L_strategy;
  Refinement refine = Refinement::Bisect;

  double resolved_tau0(const TurningPointProblem& problem) const;
  double resolved_sigma(const TurningPointProblem& problem) const;
  LStrategy resolved_L_strategy(const TurningPointProblem& problem) const;
};

/// Spatial mesh the given scheme runs on.
SpatialMesh build_mesh(const TurningPointProblem& problem, Scheme scheme, int N, double eps,
                       const MeshOptions& options);

/// Advances the discrete problem one implicit Euler level at a time, keeping
/// only the current level. Matrix and factorization are built once when the
/// problem is autonomous, otherwise rebuilt at every t_n.
class TimeStepper {
 public:
  TimeStepper(const TurningPointProblem& problem, SpatialScheme scheme, SpatialMesh mesh, TimeMesh time_mesh,
              double eps);

  int level() const { return level_; }
  double time() const { return time_mesh_.t(level_); }
  bool done() const { return level_ == time_mesh_.M; }
  std::span<const double> current() const { return current_; }
  const SpatialMesh& mesh() const { return mesh_; }
  const TimeMesh& time_mesh() const { return time_mesh_; }

  /// Check every assembled level with is_m_matrix and record the first failure.
  void track_m_matrix(bool enabled) { track_m_matrix_ = enabled; }
  std::size_t m_matrix_failures() const { return m_matrix_failures_; }
  /// (level, 0-based row, reason) of the first non-M-matrix level seen.
  struct Violation {
    int level;
    std::size_t row;
    std::string reason;
  };
  const std::optional<Violation>& first_m_matrix_violation() const { return first_violation_; }

  void advance();

 private:
  void rebuild(double t_n);

  const TurningPointProblem* problem_;
  SpatialScheme scheme_;
  SpatialMesh mesh_;
  TimeMesh time_mesh_;
  double eps_;
  int level_ = 0;

  std::vector<double> current_;
  std::vector<double> rhs_;
  std::vector<double> interior_;
  std::optional<LevelOperator> operator_;
  std::optional<TridiagonalFactorization> factorization_;
  bool track_m_matrix_ = false;
  std::size_t m_matrix_failures_ = 0;
  std::optional<Violation> first_violation_;
};

/// Space-time solution. Levels are kept every `stride()` steps (always
/// including 0 and M); values_at throws for levels that were not kept.
class SolutionGrid {
 public:
  SolutionGrid(SpatialMesh space_mesh, TimeMesh time_mesh, Scheme scheme, double eps, int stride);

  const SpatialMesh& space_mesh() const { return space_mesh_; }
  const TimeMesh& time_mesh() const { return time_mesh_; }
  Scheme scheme() const { return scheme_; }
  double eps() const { return eps_; }
  int stride() const { return stride_; }

  bool retained(int n) const { return n == time_mesh_.M || n % stride_ == 0; }
  std::vector<int> retained_levels() const;
  double values_at(int i, int n) const;
  std::span<const double> level(int n) const;

  /// max |U| and min U over every level computed, retained or not.
  double max_abs() const { return max_abs_; }
  double min_value() const { return min_value_; }

  void record(int n, std::span<const double> values);

 private:
  std::size_t slot(int n) const;

  SpatialMesh space_mesh_;
  TimeMesh time_mesh_;
  Scheme scheme_;
  double eps_;
  int stride_;
  std::vector<double> values_;
  double max_abs_ = 0.0;
  double min_value_ = 0.0;
  bool any_recorded_ = false;
};

struct SolveOptions {
  MeshOptions mesh;
  /// Upper bound on stored levels; above it levels are subsampled.
  int max_retained_levels = 4097;
};

/// Full run: mesh per scheme, initial level from g_init, M implicit Euler levels.
SolutionGrid solve(const TurningPointProblem& problem, Scheme scheme, int N, int M, double eps,
                   const SolveOptions& options = {});

/// Same, on a caller-supplied spatial mesh.
SolutionGrid solve_on(const TurningPointProblem& problem, Scheme scheme, const SpatialMesh& mesh, int M, double eps,
                      int max_retained_levels = 4097);

/// Samples a fine grid computed on bisect(coarse_mesh) with 2M levels (or on
/// the coarse grid itself) at the shared nodes. Result is (N+1) x (M+1),
/// row-major in n: out[n * (N+1) + i].
std::vector<double> restrict_to_coarse(const SolutionGrid& fine, const SpatialMesh& coarse_mesh,
                                       const TimeMesh& coarse_time);

/// Surface dump over retained levels: CSV `x,t,u`.
void write_surface_csv(std::ostream& out, const SolutionGrid& grid);

}  // namespace layersolve
