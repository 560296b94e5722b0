#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace layersolve {

using SpaceTimeFunction = std::function<double(double x, double t)>;
using SpaceFunction = std::function<double(double x)>;
using TimeFunction = std::function<double(double t)>;

/// Parabolic convection-diffusion problem with an interior turning point,
///
///   eps u_xx + a u_x - d u_t - b u = f   on (x_lo, x_hi) x (0, t_final],
///
/// with a = -a0(x,t) (x - x_c)^p, a0 >= alpha0 > 0, b >= beta > 0, d >= gamma >= 0,
/// and Dirichlet data on the initial line and both lateral boundaries.
struct TurningPointProblem {
  std::string name;

  double x_lo = -1.0;
  double x_hi = 1.0;
  double t_final = 1.0;
  double x_c = 0.0;
  int p = 1;

  SpaceTimeFunction a;
  SpaceTimeFunction b;
  SpaceTimeFunction d;
  SpaceTimeFunction f;
  SpaceFunction g_init;
  TimeFunction g_left;
  TimeFunction g_right;

  double alpha0 = 1.0;
  double beta = 1.0;
  double gamma = 0.0;
  /// Layer decay rate used to size the fine mesh region, 0 < alpha <= alpha0.
  double alpha = 1.0;

  /// True when a, b, d and f do not depend on t. Lets the time stepper reuse
  /// one factorized operator for every level.
  bool autonomous = false;

  /// Mesh constants used when a run does not set its own. Unset fields fall
  /// back to 2/alpha and L = ln N.
  struct MeshDefaults {
    std::optional<double> tau0;
    std::optional<double> sigma;
    bool lambert_w = false;
  } mesh_defaults;

  double width() const { return x_hi - x_lo; }
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks the structural assumptions on a uniform samples_x x samples_t grid
/// covering the closed space-time domain. Violations are collected, never thrown;
/// an empty report only means nothing was caught at that resolution.
ValidationReport validate(const TurningPointProblem& problem, int samples_x, int samples_t);

/// eps u_xx - 2(2x-1) u_x - u_t - 4u = 0 on (0,1) x (0,1], u = 1 on the boundary.
TurningPointProblem builtin_problem_1();

/// eps u_xx - x^p u_x - u_t - u = 1 on (-1,1) x (0,1], u = 1 on the boundary.
/// Throws std::invalid_argument unless p is odd and positive.
TurningPointProblem builtin_problem_2(int p);

}  // namespace layersolve
