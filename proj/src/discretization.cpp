#include "layersolve/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace layersolve {

namespace {

std::string assembly_message(int node, double t_n, const std::string& what) {
  std::ostringstream out;
  out << "assembly failed at node i=" << node << ", t_n=" << t_n << ": " << what;
  return out.str();
}

// Coefficients sampled at the nodes of one level.
struct NodalCoefficients {
  std::vector<double> a, b, d, f;
};

NodalCoefficients sample(const TurningPointProblem& problem, const SpatialMesh& mesh, double t_n) {
  const int N = mesh.intervals();
  NodalCoefficients c;
  c.a.resize(N + 1);
  c.b.resize(N + 1);
  c.d.resize(N + 1);
  c.f.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double x = mesh.x(i);
    c.a[i] = problem.a(x, t_n);
    c.b[i] = problem.b(x, t_n);
    c.d[i] = problem.d(x, t_n);
    c.f[i] = problem.f(x, t_n);
    if (!std::isfinite(c.a[i]) || !std::isfinite(c.b[i]) || !std::isfinite(c.d[i]) || !std::isfinite(c.f[i])) {
      throw AssemblyError(i, t_n, "non-finite coefficient");
    }
  }
  return c;
}

}  // namespace

AssemblyError::AssemblyError(int node, double t_n, const std::string& what)
    : std::runtime_error(assembly_message(node, t_n, what)), node_(node), t_n_(t_n) {}

NodeClassification classify_nodes(const TurningPointProblem& problem, const SpatialMesh& mesh, double eps,
                                  double t_n) {
  const int N = mesh.intervals();
  NodeClassification result;
  result.in_I.resize(N - 1);
  for (int i = 1; i < N; ++i) {
    result.in_I[i - 1] = std::abs(problem.a(mesh.x(i), t_n)) * mesh.h(i) < 2.0 * eps;
  }
  return result;
}

LevelOperator LevelOperator::build(SpatialScheme scheme, const TurningPointProblem& problem, const SpatialMesh& mesh,
                                   double eps, double dt, double t_n) {
  const int N = mesh.intervals();
  if (N < 2) throw std::invalid_argument("LevelOperator: mesh needs at least 2 intervals");
  const NodalCoefficients c = sample(problem, mesh, t_n);

  LevelOperator op;
  op.t_n_ = t_n;
  op.matrix_ = TridiagonalSystem(N - 1);
  op.source_.resize(N - 1);
  op.mass_.resize(N - 1);

  for (int i = 1; i < N; ++i) {
    const std::size_t k = i - 1;
    const double h = mesh.h(i);
    const double h_next = mesh.h(i + 1);
    const double h_hat = mesh.h_hat(i);
    const double diff_lo = 2.0 * eps * dt / (h_hat * h);
    const double diff_hi = 2.0 * eps * dt / (h_hat * h_next);
    // Built from the off-diagonals so that constants cancel exactly.
    const double diff_mid = -(diff_lo + diff_hi);

    double lo = 0.0, mid = 0.0, hi = 0.0;
    SchemeTag tag = SchemeTag::Central;
    const bool central = scheme == SpatialScheme::Central ||
                         (scheme == SpatialScheme::Hybrid && std::abs(c.a[i]) * h < 2.0 * eps);
    if (central) {
      lo = diff_lo - c.a[i] * dt / h_hat;
      mid = diff_mid - c.b[i] * dt - c.d[i];
      hi = diff_hi + c.a[i] * dt / h_hat;
      op.source_[k] = dt * c.f[i];
      op.mass_[k] = c.d[i];
    } else if (scheme == SpatialScheme::Hybrid && 2 * i <= N) {
      tag = SchemeTag::MidpointPlus;
      const double a_m = 0.5 * (c.a[i + 1] + c.a[i]);
      const double b_m = 0.5 * (c.b[i + 1] + c.b[i]);
      const double d_m = 0.5 * (c.d[i + 1] + c.d[i]);
      const double f_m = 0.5 * (c.f[i + 1] + c.f[i]);
      hi = diff_hi + a_m * dt / h_next - 0.5 * d_m - 0.5 * dt * b_m;
      mid = diff_mid - a_m * dt / h_next - 0.5 * d_m - 0.5 * dt * b_m;
      lo = diff_lo;
      op.source_[k] = dt * f_m;
      op.mass_[k] = d_m;
    } else if (scheme == SpatialScheme::Hybrid) {
      tag = SchemeTag::MidpointMinus;
      const double a_m = 0.5 * (c.a[i - 1] + c.a[i]);
      const double b_m = 0.5 * (c.b[i - 1] + c.b[i]);
      const double d_m = 0.5 * (c.d[i - 1] + c.d[i]);
      const double f_m = 0.5 * (c.f[i - 1] + c.f[i]);
      hi = diff_hi;
      mid = diff_mid + a_m * dt / h - 0.5 * d_m - 0.5 * dt * b_m;
      lo = diff_lo - a_m * dt / h - 0.5 * d_m - 0.5 * dt * b_m;
      op.source_[k] = dt * f_m;
      op.mass_[k] = d_m;
    } else {
      const double a_plus = std::max(c.a[i], 0.0);
      const double a_minus = std::min(c.a[i], 0.0);
      tag = c.a[i] >= 0.0 ? SchemeTag::UpwindPlus : SchemeTag::UpwindMinus;
      lo = diff_lo - a_minus * dt / h;
      mid = diff_mid - a_plus * dt / h_next + a_minus * dt / h - c.b[i] * dt - c.d[i];
      hi = diff_hi + a_plus * dt / h_next;
      op.source_[k] = dt * c.f[i];
      op.mass_[k] = c.d[i];
    }
    if (!std::isfinite(lo) || !std::isfinite(mid) || !std::isfinite(hi)) {
      throw AssemblyError(i, t_n, "non-finite stencil entry");
    }

    op.matrix_.diag[k] = mid;
    op.matrix_.tags[k] = tag;
    if (i > 1) {
      op.matrix_.lower[k] = lo;
    } else {
      op.left_coupling_ = lo;
    }
    if (i < N - 1) {
      op.matrix_.upper[k] = hi;
    } else {
      op.right_coupling_ = hi;
    }
  }
  return op;
}

void LevelOperator::form_rhs(std::span<const double> U_prev, double g_left, double g_right,
                             std::span<double> rhs) const {
  const std::size_t n = rows();
  if (U_prev.size() != n + 2 || rhs.size() != n) {
    throw std::invalid_argument("LevelOperator::form_rhs: size mismatch");
  }
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = k + 1;
    double u = U_prev[i];
    switch (matrix_.tags[k]) {
      case SchemeTag::MidpointPlus: u = 0.5 * (U_prev[i] + U_prev[i + 1]); break;
      case SchemeTag::MidpointMinus: u = 0.5 * (U_prev[i - 1] + U_prev[i]); break;
      default: break;
    }
    rhs[k] = source_[k] - mass_[k] * u;
  }
  rhs[0] -= left_coupling_ * g_left;
  rhs[n - 1] -= right_coupling_ * g_right;
}

TridiagonalSystem LevelOperator::system(std::span<const double> U_prev, double g_left, double g_right) const {
  TridiagonalSystem out = matrix_;
  form_rhs(U_prev, g_left, g_right, out.rhs);
  return out;
}

TridiagonalSystem assemble(SpatialScheme scheme, const TurningPointProblem& problem, const SpatialMesh& mesh,
                           double eps, double dt, std::span<const double> U_prev, double t_n) {
  if (U_prev.size() != static_cast<std::size_t>(mesh.intervals() + 1)) {
    throw std::invalid_argument("assemble: U_prev must hold N+1 values");
  }
  const LevelOperator op = LevelOperator::build(scheme, problem, mesh, eps, dt, t_n);
  return op.system(U_prev, problem.g_left(t_n), problem.g_right(t_n));
}

void write_system_csv(std::ostream& out, const TridiagonalSystem& system) {
  out << "i,lower,diag,upper,rhs,tag\n" << std::setprecision(17);
  for (std::size_t k = 0; k < system.size(); ++k) {
    out << k + 1 << ',' << system.lower[k] << ',' << system.diag[k] << ',' << system.upper[k] << ','
        << system.rhs[k] << ',' << to_string(system.tags[k]) << '\n';
  }
}

}  // namespace layersolve
