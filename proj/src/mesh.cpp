#include "layersolve/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>
#include <string>

namespace layersolve {

std::string_view to_string(MeshKind kind) {
  switch (kind) {
    case MeshKind::GeneralizedShishkin: return "generalized-shishkin";
    case MeshKind::StandardShishkin: return "standard-shishkin";
    case MeshKind::Uniform: return "uniform";
  }
  return "?";
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::LeftLayer: return "left";
    case Region::Interior: return "interior";
    case Region::RightLayer: return "right";
  }
  return "?";
}

std::string_view to_string(LStrategy strategy) {
  return strategy == LStrategy::LogN ? "logN" : "lambertW";
}

SpatialMesh::SpatialMesh(std::vector<double> nodes, std::vector<Region> interval_regions, double tau,
                         MeshKind kind, double L_value)
    : nodes_(std::move(nodes)), regions_(std::move(interval_regions)), tau_(tau), kind_(kind), L_(L_value) {
  if (nodes_.size() < 2 || regions_.size() + 1 != nodes_.size()) {
    throw std::invalid_argument("SpatialMesh: need N+1 >= 2 nodes and N region tags");
  }
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) {
      throw std::invalid_argument("SpatialMesh: nodes not strictly increasing at i=" + std::to_string(i));
    }
  }
}

TimeMesh::TimeMesh(int steps, double final_time) : M(steps), t_final(final_time) {
  if (steps < 1) throw std::invalid_argument("TimeMesh: M must be >= 1");
  if (!(final_time > 0.0)) throw std::invalid_argument("TimeMesh: t_final must be positive");
}

double compute_L(int N, LStrategy strategy) {
  if (N < 3) throw std::invalid_argument("compute_L: N must be >= 3, got " + std::to_string(N));
  const double log_n = std::log(static_cast<double>(N));
  if (strategy == LStrategy::LogN) return log_n;

  // L e^L is increasing on [0, ln N] and brackets N there.
  double lo = 0.0;
  double hi = log_n;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < N) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // hi satisfies hi e^hi >= N, i.e. e^{-L} <= L/N.
  return hi;
}

namespace {

void check_shishkin_args(int N, double eps) {
  if (N < 4 || N % 4 != 0) {
    throw std::invalid_argument("Shishkin mesh: N must be a positive multiple of 4, got " + std::to_string(N));
  }
  if (!(eps > 0.0)) throw std::invalid_argument("Shishkin mesh: eps must be positive");
}

// Fine spacing on N/4 intervals at each end, coarse spacing on the middle N/2.
// Nodes are placed by their distance from the nearer endpoint so that the mesh
// is mirror-symmetric and x_{N/2} is exactly the midpoint.
SpatialMesh piecewise_uniform(int N, double tau, MeshKind kind, double L, const TurningPointProblem& problem) {
  const double W = problem.width();
  const int quarter = N / 4;
  const double h = tau / quarter;
  const double H = (W - 2.0 * tau) / (N / 2);

  std::vector<double> nodes(N + 1);
  for (int i = 0; i < N / 2; ++i) {
    const double s = i <= quarter ? i * h : tau + (i - quarter) * H;
    nodes[i] = problem.x_lo + s;
    nodes[N - i] = problem.x_hi - s;
  }
  nodes[N / 2] = 0.5 * (problem.x_lo + problem.x_hi);

  std::vector<Region> regions(N, Region::Interior);
  for (int i = 1; i <= N; ++i) {
    if (i <= quarter) {
      regions[i - 1] = Region::LeftLayer;
    } else if (i > 3 * quarter) {
      regions[i - 1] = Region::RightLayer;
    }
  }
  return SpatialMesh(std::move(nodes), std::move(regions), tau, kind, L);
}

}  // namespace

SpatialMesh generalized_shishkin(int N, double eps, double tau0, const TurningPointProblem& problem,
                                 LStrategy strategy) {
  check_shishkin_args(N, eps);
  if (tau0 < 1.0 / problem.alpha) {
    throw std::invalid_argument("generalized_shishkin: tau0 must be >= 1/alpha");
  }
  const double L = compute_L(N, strategy);
  const double tau = std::min(problem.width() / 8.0, tau0 * eps * L);
  return piecewise_uniform(N, tau, MeshKind::GeneralizedShishkin, L, problem);
}

SpatialMesh standard_shishkin(int N, double eps, double sigma, const TurningPointProblem& problem) {
  check_shishkin_args(N, eps);
  if (!(sigma > 0.0)) throw std::invalid_argument("standard_shishkin: sigma must be positive");
  const double L = std::log(static_cast<double>(N));
  const double tau = std::min(problem.width() / 8.0, sigma * eps * L);
  return piecewise_uniform(N, tau, MeshKind::StandardShishkin, L, problem);
}

SpatialMesh uniform_mesh(int N, const TurningPointProblem& problem) {
  if (N < 2) throw std::invalid_argument("uniform_mesh: N must be >= 2");
  std::vector<double> nodes(N + 1);
  const double W = problem.width();
  for (int i = 0; i <= N; ++i) nodes[i] = problem.x_lo + W * i / N;
  nodes[N] = problem.x_hi;
  return SpatialMesh(std::move(nodes), std::vector<Region>(N, Region::Interior), 0.0, MeshKind::Uniform, 1.0);
}

SpatialMesh bisect(const SpatialMesh& mesh) {
  const int N = mesh.intervals();
  std::vector<double> nodes(2 * N + 1);
  std::vector<Region> regions(2 * N);
  for (int i = 0; i < N; ++i) {
    nodes[2 * i] = mesh.x(i);
    nodes[2 * i + 1] = 0.5 * (mesh.x(i) + mesh.x(i + 1));
    regions[2 * i] = regions[2 * i + 1] = mesh.region_of(i + 1);
  }
  nodes[2 * N] = mesh.x(N);
  return SpatialMesh(std::move(nodes), std::move(regions), mesh.tau(), mesh.kind(), mesh.L_value());
}

void write_mesh_csv(std::ostream& out, const SpatialMesh& mesh) {
  out << "i,x,region\n";
  out << std::setprecision(17);
  for (int i = 0; i <= mesh.intervals(); ++i) {
    // Node 0 has no interval of its own; it belongs with interval 1.
    out << i << ',' << mesh.x(i) << ',' << to_string(mesh.region_of(std::max(i, 1))) << '\n';
  }
}

}  // namespace layersolve
