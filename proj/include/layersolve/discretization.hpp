#pragma once

#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "layersolve/mesh.hpp"
#include "layersolve/problem.hpp"
#include "layersolve/tridiagonal.hpp"

namespace layersolve {

/// Spatial difference operator used on each level.
///  - Hybrid: central differences where |a_i h_i| < 2 eps, midpoint upwinding elsewhere.
///  - Upwind: first-order a+ D+ / a- D- upwinding on every node.
///  - Central: central differences everywhere (reference operator, not monotone in general).
enum class SpatialScheme { Hybrid, Upwind, Central };

/// in_I[k] refers to node i = k+1.
struct NodeClassification {
  std::vector<bool> in_I;

  bool contains(int i) const { return in_I[i - 1]; }
};

/// in_I[i] <=> |a(x_i, t_n)| h_i < 2 eps (strict).
NodeClassification classify_nodes(const TurningPointProblem& problem, const SpatialMesh& mesh, double eps,
                                  double t_n);

class AssemblyError : public std::runtime_error {
 public:
  AssemblyError(int node, double t_n, const std::string& what);
  int node() const { return node_; }
  double time() const { return t_n_; }

 private:
  int node_;
  double t_n_;
};

/// Level operator of the implicit Euler step at t_n, everything multiplied by dt:
///
///   r-_i U_{i-1} + r0_i U_i + r+_i U_{i+1} = dt f* - d* U*_prev,
///
/// where f*, d* and U*_prev are nodal values (central/upwind rows) or two-node
/// averages (midpoint rows). The matrix does not depend on the previous level,
/// so one instance can be reused across levels when the coefficients are
/// time-independent.
class LevelOperator {
 public:
  static LevelOperator build(SpatialScheme scheme, const TurningPointProblem& problem, const SpatialMesh& mesh,
                             double eps, double dt, double t_n);

  /// Matrix with boundary columns removed; rhs left zero.
  const TridiagonalSystem& matrix() const { return matrix_; }
  std::size_t rows() const { return matrix_.size(); }
  double t_n() const { return t_n_; }

  /// rhs for previous level U_prev (N+1 entries) and boundary values at t_n.
  void form_rhs(std::span<const double> U_prev, double g_left, double g_right, std::span<double> rhs) const;

  TridiagonalSystem system(std::span<const double> U_prev, double g_left, double g_right) const;

 private:
  LevelOperator() = default;

  TridiagonalSystem matrix_;
  std::vector<double> source_;  // dt * f*
  std::vector<double> mass_;    // d*
  double left_coupling_ = 0.0;  // r- of node 1
  double right_coupling_ = 0.0; // r+ of node N-1
  double t_n_ = 0.0;
};

TridiagonalSystem assemble(SpatialScheme scheme, const TurningPointProblem& problem, const SpatialMesh& mesh,
                           double eps, double dt, std::span<const double> U_prev, double t_n);

inline TridiagonalSystem assemble_hybrid(const TurningPointProblem& problem, const SpatialMesh& mesh, double eps,
                                         double dt, std::span<const double> U_prev, double t_n) {
  return assemble(SpatialScheme::Hybrid, problem, mesh, eps, dt, U_prev, t_n);
}

inline TridiagonalSystem assemble_upwind(const TurningPointProblem& problem, const SpatialMesh& mesh, double eps,
                                         double dt, std::span<const double> U_prev, double t_n) {
  return assemble(SpatialScheme::Upwind, problem, mesh, eps, dt, U_prev, t_n);
}

inline TridiagonalSystem assemble_central(const TurningPointProblem& problem, const SpatialMesh& mesh, double eps,
                                          double dt, std::span<const double> U_prev, double t_n) {
  return assemble(SpatialScheme::Central, problem, mesh, eps, dt, U_prev, t_n);
}

/// Debug dump of one level: CSV `i,lower,diag,upper,rhs,tag`, i = 1..N-1.
void write_system_csv(std::ostream& out, const TridiagonalSystem& system);

}  // namespace layersolve
