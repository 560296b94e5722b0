#include "layersolve/tridiagonal.hpp"

#include <cmath>
#include <sstream>

namespace layersolve {

namespace {
constexpr double kPivotFloor = 1e-300;

std::string pivot_message(std::size_t row, double pivot) {
  std::ostringstream out;
  out << "tridiagonal solve: zero pivot " << pivot << " at row " << row;
  return out.str();
}
}  // namespace

std::string_view to_string(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::Central: return "central";
    case SchemeTag::MidpointPlus: return "midpoint+";
    case SchemeTag::MidpointMinus: return "midpoint-";
    case SchemeTag::UpwindPlus: return "upwind+";
    case SchemeTag::UpwindMinus: return "upwind-";
  }
  return "?";
}

PivotError::PivotError(std::size_t row, double pivot) : std::runtime_error(pivot_message(row, pivot)), row_(row) {}

TridiagonalFactorization::TridiagonalFactorization(std::span<const double> lower, std::span<const double> diag,
                                                   std::span<const double> upper)
    : lower_(lower.begin(), lower.end()), pivot_(diag.size()), upper_scaled_(diag.size(), 0.0) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("tridiagonal solve: inconsistent diagonal lengths");
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double pivot = k == 0 ? diag[0] : diag[k] - lower[k] * upper_scaled_[k - 1];
    if (!(std::abs(pivot) >= kPivotFloor)) throw PivotError(k, pivot);
    pivot_[k] = pivot;
    if (k + 1 < n) upper_scaled_[k] = upper[k] / pivot;
  }
}

void TridiagonalFactorization::solve(std::span<const double> rhs, std::span<double> out) const {
  const std::size_t n = pivot_.size();
  if (rhs.size() != n || out.size() != n) {
    throw std::invalid_argument("tridiagonal solve: right-hand side has wrong length");
  }
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = k == 0 ? rhs[0] / pivot_[0] : (rhs[k] - lower_[k] * out[k - 1]) / pivot_[k];
  }
  for (std::size_t k = n; k-- > 1;) {
    out[k - 1] -= upper_scaled_[k - 1] * out[k];
  }
}

std::vector<double> TridiagonalFactorization::solve(std::span<const double> rhs) const {
  std::vector<double> out(rhs.size());
  solve(rhs, out);
  return out;
}

std::vector<double> thomas_solve(const TridiagonalSystem& system) {
  if (system.rhs.size() != system.diag.size()) {
    throw std::invalid_argument("tridiagonal solve: right-hand side has wrong length");
  }
  return TridiagonalFactorization(system.lower, system.diag, system.upper).solve(system.rhs);
}

MMatrixCheck is_m_matrix(const TridiagonalSystem& system) {
  MMatrixCheck check;
  const std::size_t n = system.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double diag = -system.diag[k];
    const double lower = k == 0 ? 0.0 : -system.lower[k];
    const double upper = k + 1 == n ? 0.0 : -system.upper[k];
    const char* reason = nullptr;
    if (!(diag > 0.0)) {
      reason = "non-positive diagonal";
    } else if (lower > 0.0 || upper > 0.0) {
      reason = "positive off-diagonal";
    } else if (!(diag > std::abs(lower) + std::abs(upper))) {
      reason = "not strictly diagonally dominant";
    }
    if (reason != nullptr) {
      check.ok = false;
      check.first_violation = k;
      check.reason = reason;
      return check;
    }
  }
  return check;
}

}  // namespace layersolve
