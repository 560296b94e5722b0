#include "layersolve/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace layersolve {

namespace {

std::string at(double x, double t) {
  std::ostringstream out;
  out << " at (x=" << x << ", t=" << t << ")";
  return out.str();
}

}  // namespace

ValidationReport validate(const TurningPointProblem& problem, int samples_x, int samples_t) {
  if (samples_x < 2 || samples_t < 2) {
    throw std::invalid_argument("validate: need at least 2 samples in each direction");
  }
  ValidationReport report;
  auto& out = report.violations;

  if (!(problem.x_lo < problem.x_hi)) out.push_back("x_lo < x_hi fails");
  if (problem.x_c != 0.5 * (problem.x_lo + problem.x_hi)) out.push_back("x_c is not the interval midpoint");
  if (problem.p < 1 || problem.p % 2 == 0) out.push_back("p must be a positive odd integer");
  if (!(problem.t_final > 0.0)) out.push_back("t_final > 0 fails");
  if (!(problem.alpha0 > 0.0)) out.push_back("alpha0 > 0 fails");
  if (!(problem.beta > 0.0)) out.push_back("beta > 0 fails");
  if (!(problem.gamma >= 0.0)) out.push_back("gamma >= 0 fails");
  if (!(problem.alpha > 0.0 && problem.alpha <= problem.alpha0)) out.push_back("0 < alpha <= alpha0 fails");
  if (!problem.a || !problem.b || !problem.d || !problem.f || !problem.g_init || !problem.g_left ||
      !problem.g_right) {
    out.push_back("coefficient or data function missing");
    return report;
  }

  // Only the first occurrence of each kind is reported.
  bool seen_a = false, seen_b = false, seen_d = false, seen_nan = false;
  for (int j = 0; j < samples_t; ++j) {
    const double t = problem.t_final * j / (samples_t - 1);
    for (int k = 0; k < samples_x; ++k) {
      const double x = k + 1 == samples_x ? problem.x_hi
                                          : problem.x_lo + problem.width() * k / (samples_x - 1);
      const double a = problem.a(x, t);
      const double b = problem.b(x, t);
      const double d = problem.d(x, t);
      const double f = problem.f(x, t);
      if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(d) || !std::isfinite(f)) {
        if (!seen_nan) out.push_back("non-finite coefficient" + at(x, t));
        seen_nan = true;
        continue;
      }
      const double s = x - problem.x_c;
      const bool sign_ok = s == 0.0 ? a == 0.0 : a * s < 0.0;
      if (!sign_ok && !seen_a) {
        out.push_back("a(x,t)(x - x_c) < 0 away from x_c, a(x_c,t) = 0 fails" + at(x, t));
        seen_a = true;
      }
      if (!(b >= problem.beta) && !seen_b) {
        out.push_back("b >= beta fails" + at(x, t));
        seen_b = true;
      }
      if (!(d >= problem.gamma) && !seen_d) {
        out.push_back("d >= gamma fails" + at(x, t));
        seen_d = true;
      }
    }
  }
  for (int k = 0; k < samples_x; ++k) {
    const double x = problem.x_lo + problem.width() * k / (samples_x - 1);
    if (!std::isfinite(problem.g_init(x))) {
      out.push_back("non-finite initial data" + at(x, 0.0));
      break;
    }
  }
  for (int j = 0; j < samples_t; ++j) {
    const double t = problem.t_final * j / (samples_t - 1);
    if (!std::isfinite(problem.g_left(t)) || !std::isfinite(problem.g_right(t))) {
      out.push_back("non-finite boundary data" + at(problem.x_lo, t));
      break;
    }
  }
  return report;
}

TurningPointProblem builtin_problem_1() {
  TurningPointProblem problem;
  problem.name = "p1";
  problem.x_lo = 0.0;
  problem.x_hi = 1.0;
  problem.x_c = 0.5;
  problem.t_final = 1.0;
  problem.p = 1;
  problem.a = [](double x, double) { return -2.0 * (2.0 * x - 1.0); };
  problem.b = [](double, double) { return 4.0; };
  problem.d = [](double, double) { return 1.0; };
  problem.f = [](double, double) { return 0.0; };
  problem.g_init = [](double) { return 1.0; };
  problem.g_left = [](double) { return 1.0; };
  problem.g_right = [](double) { return 1.0; };
  problem.alpha0 = 4.0;
  problem.beta = 4.0;
  problem.gamma = 1.0;
  problem.alpha = problem.alpha0;
  problem.autonomous = true;
  problem.mesh_defaults = {.tau0 = 2.2, .sigma = 1.0, .lambert_w = true};
  return problem;
}

TurningPointProblem builtin_problem_2(int p) {
  if (p < 1 || p % 2 == 0) {
    throw std::invalid_argument("builtin_problem_2: p must be a positive odd integer, got " +
                                std::to_string(p));
  }
  TurningPointProblem problem;
  problem.name = "p2";
  problem.x_lo = -1.0;
  problem.x_hi = 1.0;
  problem.x_c = 0.0;
  problem.t_final = 1.0;
  problem.p = p;
  problem.a = [p](double x, double) {
    double xp = x;
    for (int k = 1; k < p; ++k) xp *= x;
    return -xp;
  };
  problem.b = [](double, double) { return 1.0; };
  problem.d = [](double, double) { return 1.0; };
  problem.f = [](double, double) { return 1.0; };
  problem.g_init = [](double) { return 1.0; };
  problem.g_left = [](double) { return 1.0; };
  problem.g_right = [](double) { return 1.0; };
  problem.alpha0 = 1.0;
  problem.beta = 1.0;
  problem.gamma = 1.0;
  problem.alpha = problem.alpha0;
  problem.autonomous = true;
  problem.mesh_defaults = {.tau0 = 2.5, .sigma = 1.0, .lambert_w = true};
  return problem;
}

}  // namespace layersolve
