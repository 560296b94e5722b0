#pragma once

#include <cmath>

#include "layersolve/problem.hpp"

namespace testing_support {

// a = -(x - x_c)^p-like convection on [-1,1], constant data c, f = -b c:
// U = c solves every scheme exactly.
inline layersolve::TurningPointProblem constant_problem(double c, int p = 1) {
  layersolve::TurningPointProblem pr = layersolve::builtin_problem_2(p);
  pr.name = "constant";
  pr.b = [](double x, double) { return 1.5 + 0.25 * x * x; };
  pr.d = [](double x, double) { return 1.0 + 0.5 * std::cos(x); };
  pr.f = [c](double x, double) { return -(1.5 + 0.25 * x * x) * c; };
  pr.g_init = [c](double) { return c; };
  pr.g_left = [c](double) { return c; };
  pr.g_right = [c](double) { return c; };
  pr.beta = 1.5;
  return pr;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing_support
