#pragma once

#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "layersolve/problem.hpp"

namespace layersolve {

enum class MeshKind { GeneralizedShishkin, StandardShishkin, Uniform };
enum class Region { LeftLayer, Interior, RightLayer };
enum class LStrategy { LogN, LambertW };

std::string_view to_string(MeshKind kind);
std::string_view to_string(Region region);
std::string_view to_string(LStrategy strategy);

/// Piecewise-uniform spatial mesh x_0 < ... < x_N. Intervals are numbered
/// 1..N, interval i being [x_{i-1}, x_i].
class SpatialMesh {
 public:
  SpatialMesh(std::vector<double> nodes, std::vector<Region> interval_regions, double tau, MeshKind kind,
              double L_value);

  /// Number of intervals N.
  int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
  std::span<const double> nodes() const { return nodes_; }
  double x(int i) const { return nodes_[i]; }
  /// h_i = x_i - x_{i-1}, 1 <= i <= N.
  double h(int i) const { return nodes_[i] - nodes_[i - 1]; }
  /// h_i + h_{i+1}, 1 <= i <= N-1.
  double h_hat(int i) const { return nodes_[i + 1] - nodes_[i - 1]; }
  Region region_of(int i) const { return regions_[i - 1]; }

  double tau() const { return tau_; }
  MeshKind kind() const { return kind_; }
  double L_value() const { return L_; }

 private:
  std::vector<double> nodes_;
  std::vector<Region> regions_;
  double tau_;
  MeshKind kind_;
  double L_;
};

struct TimeMesh {
  int M = 1;
  double t_final = 1.0;

  TimeMesh(int steps, double final_time);

  double dt() const { return t_final / M; }
  double t(int n) const { return n == M ? t_final : n * dt(); }
};

/// Logarithmic factor of the generalized Shishkin mesh: e^{-L} <= L/N and L <= ln N.
/// LogN gives ln N; LambertW gives the root of L e^L = N, the smallest admissible value.
double compute_L(int N, LStrategy strategy);

SpatialMesh generalized_shishkin(int N, double eps, double tau0, const TurningPointProblem& problem,
                                 LStrategy strategy = LStrategy::LogN);
SpatialMesh standard_shishkin(int N, double eps, double sigma, const TurningPointProblem& problem);
SpatialMesh uniform_mesh(int N, const TurningPointProblem& problem);

/// Splits every interval at its midpoint; original nodes are kept bit-exactly.
SpatialMesh bisect(const SpatialMesh& mesh);

/// CSV dump with header `i,x,region`.
void write_mesh_csv(std::ostream& out, const SpatialMesh& mesh);

}  // namespace layersolve
