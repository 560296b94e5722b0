// Acceptance suite: one PASS/FAIL line per criterion.
//
//   layersolve_acceptance [--out DIR] [--known-gap K]...
//
// Criteria listed with --known-gap still print FAIL but do not change the
// exit status.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "layersolve/analysis.hpp"
#include "layersolve/config.hpp"
#include "layersolve/report.hpp"
#include "layersolve/solver.hpp"

using namespace layersolve;

namespace {

const std::vector<double> kTable5 = {
    // rows eps = 2^-6 ... 2^-24, columns N = 32 ... 512
    1.61692e-02, 6.74563e-03, 1.89181e-03, 6.31041e-04, 2.03613e-04,
    1.89880e-02, 6.50248e-03, 2.17098e-03, 7.70847e-04, 2.33877e-04,
    1.96402e-02, 6.74166e-03, 2.25106e-03, 7.47893e-04, 2.41407e-04,
    1.98031e-02, 6.80120e-03, 2.27317e-03, 7.54483e-04, 2.43306e-04,
    1.98439e-02, 6.81607e-03, 2.27873e-03, 7.56505e-04, 2.43837e-04,
    1.98540e-02, 6.81978e-03, 2.28013e-03, 7.57016e-04, 2.44028e-04,
    1.98566e-02, 6.82071e-03, 2.28047e-03, 7.57145e-04, 2.44076e-04,
    1.98572e-02, 6.82094e-03, 2.28056e-03, 7.57177e-04, 2.44088e-04,
    1.98574e-02, 6.82100e-03, 2.28058e-03, 7.57185e-04, 2.44091e-04,
    1.98574e-02, 6.82102e-03, 2.28059e-03, 7.57187e-04, 2.44092e-04,
};
const std::vector<double> kTable5Uniform = {1.98574e-02, 6.82102e-03, 2.28059e-03, 7.70847e-04, 2.44092e-04};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) { return format_sig6(v); }

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.2f%%", 100.0 * v);
  return buf;
}

std::vector<int> n_range(int lo, int hi) {
  std::vector<int> out;
  for (int N = lo; N <= hi; N *= 2) out.push_back(N);
  return out;
}

class Suite {
 public:
  Suite(std::filesystem::path out_dir, std::set<int> known_gaps)
      : out_dir_(std::move(out_dir)), known_gaps_(std::move(known_gaps)) {
    std::filesystem::create_directories(out_dir_);
  }

  // Runs (or reuses) a table and records it for the stability audit.
  const ConvergenceTable& table(const std::string& key, const TurningPointProblem& problem, Scheme scheme,
                                const std::vector<int>& n_list, const MPolicy& policy, unsigned threads = 0) {
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    const auto start = std::chrono::steady_clock::now();
    ExperimentOptions options;
    options.threads = threads;
    ConvergenceTable t = run_experiment(problem, scheme, default_eps_list(), n_list, policy, options);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "  [" << key << "] " << secs << " s\n";
    std::ofstream csv(out_dir_ / (key + ".csv"));
    write_table_csv(csv, t);
    audit(key, problem, t);
    return tables_.emplace(key, std::move(t)).first->second;
  }

  // Lemma-style bounds over every run: |U| <= max|g| + T/beta max|f| and,
  // when f <= 0 and the data are nonnegative, U >= 0.
  void audit(const std::string& key, const TurningPointProblem& problem, const ConvergenceTable& t) {
    double f_max = 0.0, g_max = 0.0, g_min = INFINITY, f_sup = -INFINITY;
    for (int k = 0; k <= 200; ++k) {
      const double x = problem.x_lo + problem.width() * k / 200.0;
      g_max = std::max(g_max, std::abs(problem.g_init(x)));
      g_min = std::min(g_min, problem.g_init(x));
      for (int m = 0; m <= 20; ++m) {
        const double s = problem.t_final * m / 20.0;
        f_max = std::max(f_max, std::abs(problem.f(x, s)));
        f_sup = std::max(f_sup, problem.f(x, s));
      }
    }
    for (int m = 0; m <= 20; ++m) {
      const double s = problem.t_final * m / 20.0;
      for (double g : {problem.g_left(s), problem.g_right(s)}) {
        g_max = std::max(g_max, std::abs(g));
        g_min = std::min(g_min, g);
      }
    }
    const double bound = g_max + problem.t_final / problem.beta * f_max + 1e-8;
    const bool sign_applies = f_sup <= 0.0 && g_min >= 0.0;
    for (const auto& row : t.cells)
      for (const auto& cell : row) {
        if (!cell.E) continue;
        ++runs_;
        if (cell.max_abs > bound) stability_.push_back(key + ": max|U| " + fmt(cell.max_abs) + " > " + fmt(bound));
        if (sign_applies) {
          ++sign_runs_;
          if (cell.min_value < 0.0) positivity_.push_back(key + ": min U " + fmt(cell.min_value));
        }
      }
  }

  void report(int id, const std::string& title, const std::function<Outcome()>& body) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool gap = known_gaps_.count(id) > 0;
    std::printf("%s criterion %d: %s -- %s%s (%.0f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
                o.detail.c_str(), !o.pass && gap ? " [known gap]" : "", secs);
    std::fflush(stdout);
    if (!o.pass && !gap) ++failures_;
  }

  int failures() const { return failures_; }
  const std::filesystem::path& out_dir() const { return out_dir_; }
  std::size_t runs() const { return runs_; }
  std::size_t sign_runs() const { return sign_runs_; }
  const std::vector<std::string>& stability_violations() const { return stability_; }
  const std::vector<std::string>& positivity_violations() const { return positivity_; }

 private:
  std::filesystem::path out_dir_;
  std::set<int> known_gaps_;
  std::map<std::string, ConvergenceTable> tables_;
  int failures_ = 0;
  std::size_t runs_ = 0, sign_runs_ = 0;
  std::vector<std::string> stability_, positivity_;
};

// Half a unit in the third significant digit of the largest value.
bool agree_3_sig(const std::vector<double>& values) {
  const double hi = *std::max_element(values.begin(), values.end());
  const double lo = *std::min_element(values.begin(), values.end());
  const double unit = std::pow(10.0, std::floor(std::log10(hi)) - 2);
  return hi - lo < 0.5 * unit;
}

double uniform_over(const ConvergenceTable& t, std::size_t j, double eps_max) {
  double e = 0.0;
  for (std::size_t k = 0; k < t.eps_list.size(); ++k)
    if (t.eps_list[k] <= eps_max) e = std::max(e, *t.E(k, j));
  return e;
}

std::vector<double> dense_solve(const TridiagonalSystem& s) {
  const std::size_t n = s.size();
  std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    A[k][k] = s.diag[k];
    if (k > 0) A[k][k - 1] = s.lower[k];
    if (k + 1 < n) A[k][k + 1] = s.upper[k];
    A[k][n] = s.rhs[k];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double m = A[r][c] / A[c][c];
      for (std::size_t k = c; k <= n; ++k) A[r][k] -= m * A[c][k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = A[r][n];
    for (std::size_t k = r + 1; k < n; ++k) acc -= A[r][k] * x[k];
    x[r] = acc / A[r][r];
  }
  return x;
}

double sup_abs_a(const TurningPointProblem& problem) {
  double a = 0.0;
  for (int k = 0; k <= 1000; ++k) a = std::max(a, std::abs(problem.a(problem.x_lo + problem.width() * k / 1000.0, 0.5)));
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path out_dir = "acceptance-out";
  std::set<int> known_gaps;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--out" && k + 1 < argc) out_dir = argv[++k];
    else if (arg == "--known-gap" && k + 1 < argc) known_gaps.insert(std::stoi(argv[++k]));
    else {
      std::cerr << "usage: layersolve_acceptance [--out DIR] [--known-gap K]...\n";
      return 2;
    }
  }
  Suite suite(out_dir, known_gaps);
  std::cerr << "acceptance: threads = " << default_thread_count() << ", output in " << out_dir << '\n';

  const auto p1 = builtin_problem_1();
  const auto p2_3 = builtin_problem_2(3);
  const auto table5 = [&]() -> const ConvergenceTable& {
    return suite.table("table5_hybrid_p2_p3_nsq", p2_3, Scheme::HybridGeneralizedShishkin, n_range(32, 512),
                       MPolicy::n_squared(), 3);
  };

  suite.report(1, "Table 5 reproduction (problem 2, p=3, hybrid, M=N^2)", [&] {
    const auto& t = table5();
    if (!t.complete()) return Outcome{false, "table has failed cells"};
    std::ostringstream d;
    bool ok = true;
    double worst_u = 0.0, worst_cell = 0.0, worst_signed = 0.0;
    std::string worst_where;
    for (std::size_t j = 0; j < 5; ++j) {
      const double rel = *t.E_uniform[j] / kTable5Uniform[j] - 1.0;
      worst_u = std::max(worst_u, std::abs(rel));
      if (std::abs(rel) > 0.10) {
        ok = false;
        d << "uniform N=" << t.n_list[j] << " " << fmt(*t.E_uniform[j]) << " vs " << fmt(kTable5Uniform[j]) << " ("
          << pct(rel) << "); ";
      }
    }
    int bad = 0;
    for (std::size_t e = 0; e < 10; ++e)
      for (std::size_t j = 0; j < 5; ++j) {
        const double ref = kTable5[e * 5 + j];
        const double rel = *t.E(e, j) / ref - 1.0;
        if (std::abs(rel) > worst_cell) {
          worst_cell = std::abs(rel);
          worst_signed = rel;
          worst_where = "eps=2^-" + std::to_string(6 + 2 * e) + " N=" + std::to_string(t.n_list[j]) + " " +
                        fmt(*t.E(e, j)) + " vs " + fmt(ref);
        }
        if (std::abs(rel) > 0.15) {
          ok = false;
          ++bad;
          d << "cell eps=2^-" << 6 + 2 * e << " N=" << t.n_list[j] << " " << fmt(*t.E(e, j)) << " vs " << fmt(ref)
            << " (" << pct(rel) << "); ";
        }
      }
    d << "eps-uniform row within " << pct(worst_u) << " (limit 10%), worst cell " << worst_where << " ("
      << pct(worst_signed) << ", limit 15%), " << bad << "/50 cells outside";
    return Outcome{ok, d.str()};
  });

  suite.report(2, "Table 6 orders for p = 1, 5, 7, 9 (M=N^2)", [&] {
    std::ostringstream d;
    bool ok = true;
    for (int p : {1, 5, 7, 9}) {
      const auto& t = suite.table("table6_hybrid_p2_p" + std::to_string(p) + "_nsq", builtin_problem_2(p),
                                  Scheme::HybridGeneralizedShishkin, n_range(32, 512), MPolicy::n_squared());
      d << "p=" << p << ":";
      for (std::size_t j = 1; j <= 3; ++j) {
        const auto q = t.q_uniform[j];
        d << ' ' << (q ? fmt(*q) : std::string("n/a"));
        if (!q || *q < 1.4) ok = false;
      }
      d << "; ";
    }
    d << "(q at N=64,128,256; need >= 1.4)";
    return Outcome{ok, d.str()};
  });

  const std::vector<int> wide = n_range(32, 2048);
  struct Baseline {
    std::string name;
    const TurningPointProblem* problem;
  };
  const std::vector<Baseline> baselines = {{"p1", &p1}, {"p2_p3", &p2_3}};

  suite.report(3, "upwind baselines: uniform mesh not eps-uniform, Shishkin mesh orders in [0.5, 0.9]", [&] {
    std::ostringstream d;
    bool ok = true;
    for (const auto& b : baselines) {
      const auto& u = suite.table("upwind_uniform_" + b.name + "_eqn", *b.problem, Scheme::UpwindUniform, wide,
                                  MPolicy::equal_n());
      const auto& s = suite.table("upwind_shishkin_" + b.name + "_eqn", *b.problem, Scheme::UpwindShishkin, wide,
                                  MPolicy::equal_n());
      if (!u.complete() || !s.complete()) return Outcome{false, b.name + ": table has failed cells"};
      double min_uniform = INFINITY;
      for (std::size_t j = 0; j < u.n_list.size(); ++j) min_uniform = std::min(min_uniform, *u.E_uniform[j]);
      const bool large = min_uniform >= 5e-2;
      bool alternates = true, small = true;
      for (std::size_t j = 0; j < u.q_uniform.size(); ++j) {
        small = small && std::abs(*u.q_uniform[j]) < 0.2;
        if (j > 0) alternates = alternates && (*u.q_uniform[j] * *u.q_uniform[j - 1] < 0.0);
      }
      double q_lo = INFINITY, q_hi = -INFINITY;
      for (std::size_t j = 0; j < s.q_uniform.size(); ++j) {
        q_lo = std::min(q_lo, *s.q_uniform[j]);
        q_hi = std::max(q_hi, *s.q_uniform[j]);
      }
      const bool shishkin_ok = q_lo >= 0.5 && q_hi <= 0.9;
      ok = ok && large && (alternates || small) && shishkin_ok;
      d << b.name << ": uniform-mesh min_N max_eps E " << fmt(min_uniform) << (alternates ? ", orders alternate" : "")
        << (small ? ", |q| < 0.2" : "") << "; Shishkin orders " << fmt(q_lo) << ".." << fmt(q_hi) << "; ";
    }
    return Outcome{ok, d.str()};
  });

  suite.report(4, "eps-stabilization of the hybrid scheme for eps = 2^-16 ... 2^-24", [&] {
    std::ostringstream d;
    bool ok = true;
    std::vector<std::pair<std::string, const ConvergenceTable*>> hybrid = {
        {"p1 M=N", &suite.table("hybrid_p1_eqn", p1, Scheme::HybridGeneralizedShishkin, wide, MPolicy::equal_n())},
        {"p2 p=3 M=N",
         &suite.table("hybrid_p2_p3_eqn", p2_3, Scheme::HybridGeneralizedShishkin, wide, MPolicy::equal_n())},
        {"p2 p=3 M=N^2", &table5()}};
    int checked = 0;
    for (const auto& [name, t] : hybrid) {
      for (std::size_t j = 0; j < t->n_list.size(); ++j) {
        std::vector<double> tail;
        for (std::size_t e = 0; e < t->eps_list.size(); ++e)
          if (t->eps_list[e] <= std::ldexp(1.0, -16)) tail.push_back(*t->E(e, j));
        ++checked;
        if (!agree_3_sig(tail)) {
          ok = false;
          d << name << " N=" << t->n_list[j] << " spread " << fmt(*std::min_element(tail.begin(), tail.end())) << ".."
            << fmt(*std::max_element(tail.begin(), tail.end())) << "; ";
        }
      }
    }
    d << checked << " columns checked";
    return Outcome{ok, d.str()};
  });

  suite.report(5, "hybrid beats upwind-Shishkin for N >= 64, eps <= 2^-8", [&] {
    std::ostringstream d;
    bool ok = true;
    double worst_ratio = 0.0;
    for (const auto& b : baselines) {
      const auto& h = suite.table("hybrid_" + b.name + "_eqn", *b.problem, Scheme::HybridGeneralizedShishkin, wide,
                                  MPolicy::equal_n());
      const auto& s = suite.table("upwind_shishkin_" + b.name + "_eqn", *b.problem, Scheme::UpwindShishkin, wide,
                                  MPolicy::equal_n());
      for (std::size_t j = 0; j < h.n_list.size(); ++j) {
        if (h.n_list[j] < 64) continue;
        const double eh = uniform_over(h, j, std::ldexp(1.0, -8));
        const double es = uniform_over(s, j, std::ldexp(1.0, -8));
        worst_ratio = std::max(worst_ratio, eh / es);
        if (!(eh < es)) {
          ok = false;
          d << b.name << " N=" << h.n_list[j] << ": " << fmt(eh) << " >= " << fmt(es) << "; ";
        }
      }
    }
    d << "largest hybrid/upwind ratio " << fmt(worst_ratio);
    return Outcome{ok, d.str()};
  });

  suite.report(6, "M-matrix property of the hybrid assembly at every level", [&] {
    std::ostringstream d;
    int cases = 0, failing = 0;
    std::string first;
    for (const auto& problem : {p1, builtin_problem_2(1), p2_3}) {
      const double tau0 = MeshOptions{}.resolved_tau0(problem);
      const double a_sup = sup_abs_a(problem);
      for (int N : n_range(64, 512)) {
        if (!(2 * tau0 * a_sup < N / std::log(N))) continue;
        for (double eps : default_eps_list()) {
          ++cases;
          TimeStepper stepper(problem, SpatialScheme::Hybrid,
                              build_mesh(problem, Scheme::HybridGeneralizedShishkin, N, eps, {}),
                              TimeMesh(N, problem.t_final), eps);
          stepper.track_m_matrix(true);
          while (!stepper.done()) stepper.advance();
          if (stepper.m_matrix_failures() > 0) {
            ++failing;
            if (first.empty()) {
              const auto& v = *stepper.first_m_matrix_violation();
              std::ostringstream f;
              f << problem.name << " N=" << N << " eps=" << fmt(eps) << " level " << v.level << " node "
                << v.row + 1 << ": " << v.reason;
              first = f.str();
            }
          }
        }
      }
    }
    d << failing << "/" << cases << " (problem, N, eps) runs have a non-M-matrix level";
    if (!first.empty()) d << "; first: " << first;
    return Outcome{failing == 0 && cases > 0, d.str()};
  });

  suite.report(7, "discrete minimum principle and stability bound on every run", [&] {
    // Problem 2 with the source negated satisfies the sign hypotheses too.
    for (int p : {1, 3}) {
      auto q = builtin_problem_2(p);
      q.name = "p2-negated-f";
      q.f = [](double, double) { return -1.0; };
      suite.table("hybrid_p2_p" + std::to_string(p) + "_negf_eqn", q, Scheme::HybridGeneralizedShishkin,
                  n_range(32, 512), MPolicy::equal_n());
    }
    std::ostringstream d;
    d << suite.runs() << " runs bounded, " << suite.sign_runs() << " runs under the sign hypotheses";
    for (const auto& v : suite.stability_violations()) d << "; " << v;
    for (const auto& v : suite.positivity_violations()) d << "; " << v;
    return Outcome{suite.stability_violations().empty() && suite.positivity_violations().empty() && suite.sign_runs() > 0,
                   d.str()};
  });

  suite.report(8, "exactness oracles (constant solutions, Thomas vs dense elimination)", [&] {
    std::ostringstream d;
    auto constant = builtin_problem_2(3);
    const double c = 0.625;
    constant.b = [](double x, double) { return 2.0 + x; };
    constant.f = [c](double x, double) { return -(2.0 + x) * c; };
    constant.g_init = [c](double) { return c; };
    constant.g_left = constant.g_right = [c](double) { return c; };
    double worst_E = 0.0;
    for (Scheme s : {Scheme::HybridGeneralizedShishkin, Scheme::UpwindUniform, Scheme::UpwindShishkin})
      for (int N : {16, 64, 256})
        for (double eps : {1.0, 1e-4, std::ldexp(1.0, -24)})
          for (int M : {1, N}) worst_E = std::max(worst_E, double_mesh_error(constant, s, N, M, eps));

    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> size(1, 16);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_thomas = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      TridiagonalSystem sys(size(rng));
      for (std::size_t k = 0; k < sys.size(); ++k) {
        if (k > 0) sys.lower[k] = u(rng);
        if (k + 1 < sys.size()) sys.upper[k] = u(rng);
        sys.diag[k] = (u(rng) < 0 ? -1.0 : 1.0) * (std::abs(sys.lower[k]) + std::abs(sys.upper[k]) + 0.05 + std::abs(u(rng)));
        sys.rhs[k] = 10.0 * u(rng);
      }
      const auto x = thomas_solve(sys);
      const auto y = dense_solve(sys);
      for (std::size_t k = 0; k < x.size(); ++k) worst_thomas = std::max(worst_thomas, std::abs(x[k] - y[k]));
    }
    d << "constant-solution max E " << fmt(worst_E) << " (< 1e-13), Thomas max diff " << fmt(worst_thomas)
      << " over 1000 systems (< 1e-12)";
    return Outcome{worst_E < 1e-13 && worst_thomas < 1e-12, d.str()};
  });

  suite.report(9, "determinism of the Table 5 run across thread counts", [&] {
    const auto& first = table5();
    ExperimentOptions options;
    options.threads = 1;
    const auto again = run_experiment(p2_3, Scheme::HybridGeneralizedShishkin, default_eps_list(), n_range(32, 512),
                                      MPolicy::n_squared(), options);
    std::ostringstream a, b;
    write_table_csv(a, first);
    write_table_csv(b, again);
    std::ofstream(suite.out_dir() / "table5_hybrid_p2_p3_nsq_threads1.csv") << b.str();
    const bool same = a.str() == b.str();
    bool bits = true;
    for (std::size_t e = 0; e < first.eps_list.size(); ++e)
      for (std::size_t j = 0; j < first.n_list.size(); ++j) bits = bits && first.E(e, j) == again.E(e, j);
    return Outcome{same && bits, std::string("3 threads vs 1 thread: CSV ") + (same ? "identical" : "differs") +
                                     ", raw E " + (bits ? "bit-identical" : "differ")};
  });

  std::printf("%s: %d unexpected failure(s)\n", suite.failures() == 0 ? "OK" : "FAILED", suite.failures());
  return suite.failures() == 0 ? 0 : 1;
}
