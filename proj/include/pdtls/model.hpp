#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "pdtls/matrix.hpp"

namespace pdtls {

/// The pair (D, T) of m×n matrices in DX ≈ T. Construction validates shape
/// (m ≥ n, equal shapes) and finiteness.
class ProblemInstance {
 public:
  ProblemInstance(Matrix d, Matrix t, std::optional<std::size_t> declared_rank = std::nullopt);

  const Matrix& d() const noexcept { return d_; }
  const Matrix& t() const noexcept { return t_; }
  std::size_t m() const noexcept { return d_.rows(); }
  std::size_t n() const noexcept { return d_.cols(); }
  std::optional<std::size_t> declared_rank() const noexcept { return declared_rank_; }

 private:
  Matrix d_;
  Matrix t_;
  std::optional<std::size_t> declared_rank_;
};

/// A = DᵀD and B = TᵀT.
struct GramPair {
  Matrix a;
  Matrix b;
};

enum class MethodTag { qr, spectral, rankdef_spectral, rankdef_cod, baseline_ols };

std::string_view method_name(MethodTag tag) noexcept;

struct SpdSolution {
  Matrix x;
  double error_value = 0.0;   // E
  double kkt_residual = 0.0;  // ‖XAX − B‖_F / max(1, ‖B‖_F)
  double min_eigenvalue = 0.0;
  MethodTag method = MethodTag::qr;
};

GramPair gram_pair(const ProblemInstance& p);

/// E = tr((DX − T)ᵀ(D − TX⁻¹)); X⁻¹ is applied through its Cholesky factor.
/// Throws NotPositiveDefiniteError if x is not SPD.
double error_trace(const ProblemInstance& p, const Matrix& x);

/// E = ‖DY − TY⁻ᵀ‖²_F with Y the lower Cholesky factor of x.
double error_frobenius(const ProblemInstance& p, const Matrix& x);

double kkt_residual(const GramPair& g, const Matrix& x);

/// Fills error, residual and spectrum fields for an already computed x
/// (symmetrized here). Throws NotPositiveDefiniteError if x is not SPD.
SpdSolution make_solution(const ProblemInstance& p, const GramPair& g, Matrix x, MethodTag method);

}  // namespace pdtls
