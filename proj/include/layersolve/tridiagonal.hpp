#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace layersolve {

enum class SchemeTag { Central, MidpointPlus, MidpointMinus, UpwindPlus, UpwindMinus };

std::string_view to_string(SchemeTag tag);

/// One time level's linear system over the interior unknowns i = 1..N-1, stored
/// 0-based (row k holds node i = k+1). lower[0] and upper[back] are unused and 0.
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;
  std::vector<SchemeTag> tags;

  TridiagonalSystem() = default;
  explicit TridiagonalSystem(std::size_t rows)
      : lower(rows, 0.0), diag(rows, 0.0), upper(rows, 0.0), rhs(rows, 0.0), tags(rows, SchemeTag::Central) {}

  std::size_t size() const { return diag.size(); }
};

class PivotError : public std::runtime_error {
 public:
  PivotError(std::size_t row, double pivot);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Forward-elimination factors of a tridiagonal matrix. Reusable across
/// right-hand sides; solve() performs the same arithmetic as thomas_solve.
class TridiagonalFactorization {
 public:
  TridiagonalFactorization(std::span<const double> lower, std::span<const double> diag,
                           std::span<const double> upper);

  std::size_t size() const { return pivot_.size(); }
  void solve(std::span<const double> rhs, std::span<double> out) const;
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::vector<double> lower_;
  std::vector<double> pivot_;
  std::vector<double> upper_scaled_;
};

/// Thomas algorithm. Throws PivotError on a pivot with |p| < 1e-300.
std::vector<double> thomas_solve(const TridiagonalSystem& system);

struct MMatrixCheck {
  bool ok = true;
  /// First row (0-based) violating the sign pattern or strict diagonal dominance.
  std::optional<std::size_t> first_violation;
  std::string reason;

  explicit operator bool() const { return ok; }
};

/// Negates every row and checks diag > 0, off-diagonals <= 0 and strict
/// diagonal dominance on every row.
MMatrixCheck is_m_matrix(const TridiagonalSystem& system);

}  // namespace layersolve
