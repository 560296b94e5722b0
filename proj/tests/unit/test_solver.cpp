#include <cmath>
#include <stdexcept>
#include <sstream>

#include "doctest.h"
#include "layersolve/solver.hpp"
#include "support.hpp"

using namespace layersolve;

namespace {

constexpr Scheme kSchemes[] = {Scheme::HybridGeneralizedShishkin, Scheme::UpwindUniform, Scheme::UpwindShishkin};

TurningPointProblem zero_data(double scale) {
  TurningPointProblem pr = builtin_problem_2(3);
  pr.f = [scale](double x, double t) { return scale * (1.0 + x * t); };
  pr.g_init = [](double) { return 0.0; };
  pr.g_left = [](double) { return 0.0; };
  pr.g_right = [](double) { return 0.0; };
  pr.autonomous = false;
  return pr;
}

}  // namespace

TEST_CASE("constant problem is reproduced by every scheme") {
  const double c = -1.25;
  const auto pr = testing_support::constant_problem(c);
  for (Scheme s : kSchemes) {
    for (int N : {8, 32}) {
      for (int M : {1, 7, 40}) {
        for (double eps : {1.0, 1e-4, 1e-9}) {
          const auto grid = solve(pr, s, N, M, eps);
          for (int n = 0; n <= M; ++n)
            for (int i = 0; i <= N; ++i) CHECK(std::abs(grid.values_at(i, n) - c) < 1e-13);
        }
      }
    }
  }
}

TEST_CASE("initial and boundary levels come from the data") {
  auto pr = builtin_problem_2(1);
  pr.g_init = [](double x) { return 1.0 + x; };
  pr.g_left = [](double t) { return 0.0 + t; };
  pr.g_right = [](double t) { return 2.0 - t; };
  const auto grid = solve(pr, Scheme::HybridGeneralizedShishkin, 16, 8, 1e-3);
  const auto& m = grid.space_mesh();
  for (int i = 0; i <= 16; ++i) CHECK(grid.values_at(i, 0) == 1.0 + m.x(i));
  for (int n = 1; n <= 8; ++n) {
    CHECK(grid.values_at(0, n) == grid.time_mesh().t(n));
    CHECK(grid.values_at(16, n) == 2.0 - grid.time_mesh().t(n));
  }
}

TEST_CASE("stability bound for problem 2, p = 3") {
  const auto grid = solve(builtin_problem_2(3), Scheme::HybridGeneralizedShishkin, 64, 64, std::ldexp(1.0, -8));
  CHECK(grid.max_abs() <= 2.0);
  for (int n = 0; n <= 64; ++n)
    for (int i = 0; i <= 64; ++i) CHECK(std::isfinite(grid.values_at(i, n)));
}

TEST_CASE("problem 1 shows boundary layers") {
  const auto grid = solve(builtin_problem_1(), Scheme::HybridGeneralizedShishkin, 128, 128, std::ldexp(1.0, -10));
  const double layer = std::abs(grid.values_at(127, 128) - grid.values_at(128, 128));
  const double centre = std::abs(grid.values_at(64, 128) - grid.values_at(65, 128));
  CHECK(layer > 10 * centre);
  CHECK(grid.min_value() > 0.0);
}

TEST_CASE("solve is deterministic") {
  const auto pr = builtin_problem_2(5);
  for (Scheme s : kSchemes) {
    const auto a = solve(pr, s, 32, 50, 1e-6);
    const auto b = solve(pr, s, 32, 50, 1e-6);
    for (int n = 0; n <= 50; ++n)
      for (int i = 0; i <= 32; ++i) CHECK(a.values_at(i, n) == b.values_at(i, n));
  }
}

TEST_CASE("solution is linear in f with zero data") {
  const auto one = zero_data(1.0), two = zero_data(2.0);
  for (Scheme s : kSchemes) {
    const auto a = solve(one, s, 32, 16, 1e-4);
    const auto b = solve(two, s, 32, 16, 1e-4);
    for (int n = 0; n <= 16; ++n)
      for (int i = 0; i <= 32; ++i) CHECK(b.values_at(i, n) == doctest::Approx(2 * a.values_at(i, n)).epsilon(1e-12));
  }
}

TEST_CASE("non-autonomous stepping matches rebuilt levels") {
  auto pr = builtin_problem_2(3);
  const auto ref = solve(pr, Scheme::HybridGeneralizedShishkin, 32, 20, 1e-5);
  pr.autonomous = false;
  const auto rebuilt = solve(pr, Scheme::HybridGeneralizedShishkin, 32, 20, 1e-5);
  for (int i = 0; i <= 32; ++i) CHECK(ref.values_at(i, 20) == rebuilt.values_at(i, 20));
}

TEST_CASE("invalid arguments are rejected") {
  const auto pr = builtin_problem_2(1);
  CHECK_THROWS(solve(pr, Scheme::HybridGeneralizedShishkin, 30, 10, 1e-3));
  CHECK_THROWS(solve(pr, Scheme::UpwindShishkin, 30, 10, 1e-3));
  CHECK_THROWS(solve(pr, Scheme::UpwindUniform, 32, 0, 1e-3));
  CHECK_THROWS(solve(pr, Scheme::UpwindUniform, 32, 4, 0.0));
}

TEST_CASE("long runs keep a subsample of levels") {
  SolveOptions options;
  options.max_retained_levels = 17;
  const auto grid = solve(builtin_problem_2(1), Scheme::UpwindUniform, 8, 100, 1e-3, options);
  const auto kept = grid.retained_levels();
  CHECK(kept.front() == 0);
  CHECK(kept.back() == 100);
  CHECK(kept.size() <= 18);
  int missing = -1;
  for (int n = 0; n <= 100; ++n)
    if (!grid.retained(n)) missing = n;
  REQUIRE(missing > 0);
  CHECK_THROWS(grid.values_at(3, missing));
  CHECK(grid.max_abs() >= std::abs(grid.values_at(4, 100)));
}

TEST_CASE("restrict_to_coarse") {
  const auto pr = builtin_problem_2(3);
  const double eps = 1e-4;
  const auto coarse_mesh = build_mesh(pr, Scheme::HybridGeneralizedShishkin, 16, eps, {});
  const TimeMesh coarse_time(8, pr.t_final);
  const auto fine = solve_on(pr, Scheme::HybridGeneralizedShishkin, bisect(coarse_mesh), 16, eps);
  const auto r = restrict_to_coarse(fine, coarse_mesh, coarse_time);
  REQUIRE(r.size() == 17u * 9u);
  for (int n = 0; n <= 8; ++n)
    for (int i = 0; i <= 16; ++i) CHECK(r[n * 17 + i] == fine.values_at(2 * i, 2 * n));

  const auto same = solve_on(pr, Scheme::HybridGeneralizedShishkin, coarse_mesh, 8, eps);
  const auto id = restrict_to_coarse(same, coarse_mesh, coarse_time);
  for (int n = 0; n <= 8; ++n)
    for (int i = 0; i <= 16; ++i) CHECK(id[n * 17 + i] == same.values_at(i, n));

  const auto constant = testing_support::constant_problem(0.5);
  const auto cf = solve_on(constant, Scheme::UpwindUniform, bisect(uniform_mesh(8, constant)), 8, eps);
  for (double v : restrict_to_coarse(cf, uniform_mesh(8, constant), TimeMesh(4, 1.0)))
    CHECK(v == doctest::Approx(0.5).epsilon(1e-13));

  const auto other = build_mesh(pr, Scheme::HybridGeneralizedShishkin, 16, 2 * eps, {});
  CHECK_THROWS(restrict_to_coarse(fine, other, coarse_time));
}

TEST_CASE("surface csv") {
  const auto grid = solve(builtin_problem_1(), Scheme::UpwindUniform, 4, 2, 0.1);
  std::ostringstream out;
  write_surface_csv(out, grid);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,t,u");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5 * 3);
}
