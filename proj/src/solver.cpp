#include "layersolve/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace layersolve {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::HybridGeneralizedShishkin: return "hybrid-gshishkin";
    case Scheme::UpwindUniform: return "upwind-uniform";
    case Scheme::UpwindShishkin: return "upwind-shishkin";
  }
  return "?";
}

std::string_view to_string(Refinement refine) { return refine == Refinement::Bisect ? "bisect" : "regenerate"; }

SpatialScheme spatial_scheme(Scheme scheme) {
  return scheme == Scheme::HybridGeneralizedShishkin ? SpatialScheme::Hybrid : SpatialScheme::Upwind;
}

double MeshOptions::resolved_tau0(const TurningPointProblem& problem) const {
  return tau0.value_or(problem.mesh_defaults.tau0.value_or(2.0 / problem.alpha));
}

double MeshOptions::resolved_sigma(const TurningPointProblem& problem) const {
  return sigma.value_or(problem.mesh_defaults.sigma.value_or(2.0 / problem.alpha));
}

LStrategy MeshOptions::resolved_L_strategy(const TurningPointProblem& problem) const {
  if (L_strategy) return *L_strategy;
  return problem.mesh_defaults.lambert_w ? LStrategy::LambertW : LStrategy::LogN;
}

SpatialMesh build_mesh(const TurningPointProblem& problem, Scheme scheme, int N, double eps,
                       const MeshOptions& options) {
  switch (scheme) {
    case Scheme::HybridGeneralizedShishkin:
      return generalized_shishkin(N, eps, options.resolved_tau0(problem), problem,
                                  options.resolved_L_strategy(problem));
    case Scheme::UpwindShishkin:
      return standard_shishkin(N, eps, options.resolved_sigma(problem), problem);
    case Scheme::UpwindUniform:
      return uniform_mesh(N, problem);
  }
  throw std::invalid_argument("build_mesh: unknown scheme");
}

TimeStepper::TimeStepper(const TurningPointProblem& problem, SpatialScheme scheme, SpatialMesh mesh,
                         TimeMesh time_mesh, double eps)
    : problem_(&problem), scheme_(scheme), mesh_(std::move(mesh)), time_mesh_(time_mesh), eps_(eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("TimeStepper: eps must be positive");
  const int N = mesh_.intervals();
  current_.resize(N + 1);
  for (int i = 0; i <= N; ++i) current_[i] = problem.g_init(mesh_.x(i));
  rhs_.resize(N - 1);
  interior_.resize(N - 1);
}

void TimeStepper::rebuild(double t_n) {
  operator_ = LevelOperator::build(scheme_, *problem_, mesh_, eps_, time_mesh_.dt(), t_n);
  const TridiagonalSystem& m = operator_->matrix();
  factorization_.emplace(m.lower, m.diag, m.upper);
}

void TimeStepper::advance() {
  if (done()) throw std::logic_error("TimeStepper: already at final level");
  const int n = level_ + 1;
  const double t_n = time_mesh_.t(n);
  const bool fresh = !operator_ || !problem_->autonomous;
  try {
    if (fresh) rebuild(t_n);
  } catch (const std::exception& e) {
    std::ostringstream out;
    out << "level n=" << n << " (t_n=" << t_n << "): " << e.what();
    throw std::runtime_error(out.str());
  }
  if (track_m_matrix_ && (fresh || m_matrix_failures_ > 0)) {
    const MMatrixCheck check = is_m_matrix(operator_->matrix());
    if (!check) {
      ++m_matrix_failures_;
      if (!first_violation_) first_violation_ = Violation{n, *check.first_violation, check.reason};
    }
  }

  const double g_left = problem_->g_left(t_n);
  const double g_right = problem_->g_right(t_n);
  operator_->form_rhs(current_, g_left, g_right, rhs_);
  factorization_->solve(rhs_, interior_);

  const int N = mesh_.intervals();
  current_[0] = g_left;
  std::copy(interior_.begin(), interior_.end(), current_.begin() + 1);
  current_[N] = g_right;
  level_ = n;
}

SolutionGrid::SolutionGrid(SpatialMesh space_mesh, TimeMesh time_mesh, Scheme scheme, double eps, int stride)
    : space_mesh_(std::move(space_mesh)), time_mesh_(time_mesh), scheme_(scheme), eps_(eps), stride_(stride) {
  if (stride < 1) throw std::invalid_argument("SolutionGrid: stride must be >= 1");
  const std::size_t levels = retained_levels().size();
  values_.assign(levels * (space_mesh_.intervals() + 1), 0.0);
}

std::vector<int> SolutionGrid::retained_levels() const {
  std::vector<int> out;
  for (int n = 0; n <= time_mesh_.M; n += stride_) out.push_back(n);
  if (out.back() != time_mesh_.M) out.push_back(time_mesh_.M);
  return out;
}

std::size_t SolutionGrid::slot(int n) const {
  if (n < 0 || n > time_mesh_.M || !retained(n)) {
    throw std::out_of_range("SolutionGrid: level " + std::to_string(n) + " is not retained");
  }
  return static_cast<std::size_t>(n % stride_ == 0 ? n / stride_ : (time_mesh_.M + stride_ - 1) / stride_);
}

double SolutionGrid::values_at(int i, int n) const {
  const int N = space_mesh_.intervals();
  if (i < 0 || i > N) throw std::out_of_range("SolutionGrid: node index out of range");
  return values_[slot(n) * (N + 1) + i];
}

std::span<const double> SolutionGrid::level(int n) const {
  const std::size_t width = space_mesh_.intervals() + 1;
  return std::span<const double>(values_).subspan(slot(n) * width, width);
}

void SolutionGrid::record(int n, std::span<const double> values) {
  for (const double v : values) {
    if (!std::isfinite(v)) throw std::runtime_error("SolutionGrid: non-finite value at level " + std::to_string(n));
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double level_max = std::max(std::abs(*lo), std::abs(*hi));
  max_abs_ = any_recorded_ ? std::max(max_abs_, level_max) : level_max;
  min_value_ = any_recorded_ ? std::min(min_value_, *lo) : *lo;
  any_recorded_ = true;
  if (retained(n)) {
    const std::size_t width = space_mesh_.intervals() + 1;
    std::copy(values.begin(), values.end(), values_.begin() + slot(n) * width);
  }
}

SolutionGrid solve_on(const TurningPointProblem& problem, Scheme scheme, const SpatialMesh& mesh, int M, double eps,
                      int max_retained_levels) {
  if (M < 1) throw std::invalid_argument("solve: M must be >= 1");
  if (max_retained_levels < 2) throw std::invalid_argument("solve: must retain at least 2 levels");
  const TimeMesh time_mesh(M, problem.t_final);
  const int stride = (M + max_retained_levels - 2) / (max_retained_levels - 1);
  SolutionGrid grid(mesh, time_mesh, scheme, eps, std::max(stride, 1));
  TimeStepper stepper(problem, spatial_scheme(scheme), mesh, time_mesh, eps);
  grid.record(0, stepper.current());
  while (!stepper.done()) {
    stepper.advance();
    grid.record(stepper.level(), stepper.current());
  }
  return grid;
}

SolutionGrid solve(const TurningPointProblem& problem, Scheme scheme, int N, int M, double eps,
                   const SolveOptions& options) {
  if (!(eps > 0.0)) throw std::invalid_argument("solve: eps must be positive");
  return solve_on(problem, scheme, build_mesh(problem, scheme, N, eps, options.mesh), M, eps,
                  options.max_retained_levels);
}

std::vector<double> restrict_to_coarse(const SolutionGrid& fine, const SpatialMesh& coarse_mesh,
                                       const TimeMesh& coarse_time) {
  const int N = coarse_mesh.intervals();
  const int M = coarse_time.M;
  const int N_fine = fine.space_mesh().intervals();
  const int M_fine = fine.time_mesh().M;
  if (N_fine % N != 0 || M_fine % M != 0 || N_fine / N != M_fine / M || (N_fine / N != 1 && N_fine / N != 2)) {
    throw std::invalid_argument("restrict_to_coarse: fine grid is not a 1x or 2x refinement of the coarse grid");
  }
  const int r = N_fine / N;
  for (int i = 0; i <= N; ++i) {
    if (fine.space_mesh().x(r * i) != coarse_mesh.x(i)) {
      throw std::invalid_argument("restrict_to_coarse: node " + std::to_string(i) + " is not shared");
    }
  }
  if (fine.time_mesh().t_final != coarse_time.t_final) {
    throw std::invalid_argument("restrict_to_coarse: final times differ");
  }
  std::vector<double> out(static_cast<std::size_t>(M + 1) * (N + 1));
  for (int n = 0; n <= M; ++n) {
    const auto level = fine.level(r * n);
    for (int i = 0; i <= N; ++i) out[static_cast<std::size_t>(n) * (N + 1) + i] = level[r * i];
  }
  return out;
}

void write_surface_csv(std::ostream& out, const SolutionGrid& grid) {
  out << "x,t,u\n" << std::setprecision(17);
  for (const int n : grid.retained_levels()) {
    const double t = grid.time_mesh().t(n);
    const auto level = grid.level(n);
    for (int i = 0; i <= grid.space_mesh().intervals(); ++i) {
      out << grid.space_mesh().x(i) << ',' << t << ',' << level[i] << '\n';
    }
  }
}

}  // namespace layersolve
