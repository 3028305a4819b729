#include "pdtls/model.hpp"

#include <algorithm>
#include <string>

#include "pdtls/errors.hpp"
#include "pdtls/linalg.hpp"

namespace pdtls {

ProblemInstance::ProblemInstance(Matrix d, Matrix t, std::optional<std::size_t> declared_rank)
    : d_(std::move(d)), t_(std::move(t)), declared_rank_(declared_rank) {
  if (d_.rows() != t_.rows() || d_.cols() != t_.cols()) {
    throw DimensionError("ProblemInstance: data is " + std::to_string(d_.rows()) + "x" +
                         std::to_string(d_.cols()) + " but target is " +
                         std::to_string(t_.rows()) + "x" + std::to_string(t_.cols()));
  }
  if (d_.cols() == 0) throw DimensionError("ProblemInstance: matrices have no columns");
  if (d_.rows() < d_.cols()) {
    throw DimensionError("ProblemInstance: need m >= n, got " + std::to_string(d_.rows()) + "x" +
                         std::to_string(d_.cols()));
  }
  if (!all_finite(d_) || !all_finite(t_)) throw InvalidInputError("ProblemInstance: non-finite entry");
  if (declared_rank_ && *declared_rank_ > d_.cols()) {
    throw InvalidInputError("ProblemInstance: declared rank exceeds n");
  }
}

std::string_view method_name(MethodTag tag) noexcept {
  switch (tag) {
    case MethodTag::qr: return "qr";
    case MethodTag::spectral: return "spectral";
    case MethodTag::rankdef_spectral: return "rankdef_spectral";
    case MethodTag::rankdef_cod: return "rankdef_cod";
    case MethodTag::baseline_ols: return "baseline_ols";
  }
  return "unknown";
}

GramPair gram_pair(const ProblemInstance& p) {
  return GramPair{symmetrized(matmul_tn(p.d(), p.d())), symmetrized(matmul_tn(p.t(), p.t()))};
}

namespace {

void require_square_n(const ProblemInstance& p, const Matrix& x) {
  if (x.rows() != p.n() || x.cols() != p.n()) {
    throw DimensionError("solution must be " + std::to_string(p.n()) + "x" + std::to_string(p.n()));
  }
}

}  // namespace

double error_trace(const ProblemInstance& p, const Matrix& x) {
  require_square_n(p, x);
  const auto chol = linalg::cholesky(x);
  // X⁻¹Tᵀ by two triangular solves; X symmetric so T·X⁻¹ = (X⁻¹Tᵀ)ᵀ.
  const Matrix half = linalg::solve_triangular(chol.l, p.t().transpose(), {});
  const Matrix x_inv_tt = linalg::solve_triangular(
      chol.l, half, {linalg::Uplo::lower, linalg::Side::left, linalg::Op::transpose});
  const Matrix residual_t = matmul(p.d(), x) - p.t();
  const Matrix residual_d = p.d() - x_inv_tt.transpose();
  return inner_product(residual_t, residual_d);
}

double error_frobenius(const ProblemInstance& p, const Matrix& x) {
  require_square_n(p, x);
  const auto chol = linalg::cholesky(x);
  // T·Y⁻ᵀ = (Y⁻¹Tᵀ)ᵀ
  const Matrix y_inv_tt = linalg::solve_triangular(chol.l, p.t().transpose(), {});
  const Matrix diff = matmul(p.d(), chol.l) - y_inv_tt.transpose();
  const double norm = frobenius_norm(diff);
  return norm * norm;
}

double kkt_residual(const GramPair& g, const Matrix& x) {
  const Matrix xax = matmul(matmul(x, g.a), x);
  const double b_norm = frobenius_norm(g.b);
  return frobenius_norm(xax - g.b) / std::max(1.0, b_norm);
}

SpdSolution make_solution(const ProblemInstance& p, const GramPair& g, Matrix x, MethodTag method) {
  SpdSolution s;
  s.x = symmetrized(x);
  s.method = method;
  s.error_value = error_trace(p, s.x);
  s.kkt_residual = kkt_residual(g, s.x);
  s.min_eigenvalue = linalg::min_eigenvalue(s.x);
  if (!(s.min_eigenvalue > 0.0)) {
    throw NotPositiveDefiniteError("solution has nonpositive eigenvalue");
  }
  return s;
}

}  // namespace pdtls
