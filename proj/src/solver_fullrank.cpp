#include "pdtls/solver_fullrank.hpp"

#include <cmath>
#include <string>

#include "pdtls/errors.hpp"
#include "pdtls/linalg.hpp"

namespace pdtls {
namespace {

using linalg::Op;
using linalg::Side;
using linalg::Uplo;

void require_full_rank(const ProblemInstance& p) {
  const double tol = linalg::default_rank_tol(p.m(), p.n());
  const std::size_t rank_d = linalg::numeric_rank(p.d(), tol);
  if (rank_d < p.n()) {
    throw RankDeficientError("data matrix has numeric rank " + std::to_string(rank_d) + " < n = " +
                             std::to_string(p.n()) + "; use the rank-deficient solver");
  }
  const std::size_t rank_t = linalg::numeric_rank(p.t(), tol);
  if (rank_t < p.n()) {
    throw NotPositiveDefiniteError("target matrix has numeric rank " + std::to_string(rank_t) +
                                   " < n; no positive definite minimizer");
  }
}

// Columns of u scaled by s̃^{1/2} so that (u·diag(s̃^{1/2}))(…)ᵀ = u·diag(s̃)·uᵀ,
// where s̃² are the eigenvalues of the symmetric input.
Matrix half_root_columns(const Matrix& q_tilde) {
  const auto spec = linalg::spectral_decompose(q_tilde);
  const std::size_t n = spec.eigenvalues.size();
  Matrix g = spec.u;
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = spec.eigenvalues[j];
    if (!(lambda > 0.0)) {
      throw NotPositiveDefiniteError("transformed target Gram matrix has nonpositive eigenvalue " +
                                     std::to_string(lambda));
    }
    const double w = std::sqrt(std::sqrt(lambda));
    for (std::size_t i = 0; i < n; ++i) g(i, j) *= w;
  }
  return g;
}

}  // namespace

namespace detail {

Matrix root_from_upper_factor(const Matrix& r, const Matrix& b) {
  const Matrix q_tilde = symmetrized(matmul_nt(matmul(r, b), r));
  const Matrix g = half_root_columns(q_tilde);
  // h = R⁻¹·U·S̃^{1/2}; X = h·hᵀ
  const Matrix h = linalg::solve_triangular(r, g, {Uplo::upper, Side::left, Op::none});
  return matmul_nt(h, h);
}

}  // namespace detail

SpdSolution solve_qr(const ProblemInstance& p) {
  require_full_rank(p);
  const GramPair g = gram_pair(p);
  const auto qr = linalg::qr_decompose(p.d());
  const Matrix x = detail::root_from_upper_factor(qr.leading_block(), g.b);
  return make_solution(p, g, x, MethodTag::qr);
}

SpdSolution solve_spectral(const ProblemInstance& p) {
  require_full_rank(p);
  const GramPair g = gram_pair(p);
  const auto spec_a = linalg::spectral_decompose(g.a);
  const std::size_t n = p.n();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(spec_a.eigenvalues[i] > 0.0)) {
      throw RankDeficientError("D^T D has nonpositive eigenvalue; use the rank-deficient solver");
    }
    s[i] = std::sqrt(spec_a.eigenvalues[i]);
  }
  // us = U·S, so S·Uᵀ·B·U·S = usᵀ·B·us.
  Matrix us = spec_a.u;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) us(i, j) *= s[j];
  }
  const Matrix q_tilde = symmetrized(matmul_tn(us, matmul(g.b, us)));
  Matrix h = half_root_columns(q_tilde);
  // h = U·S⁻¹·Ū·S̄^{1/2}
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) h(i, j) /= s[i];
  }
  h = matmul(spec_a.u, h);
  return make_solution(p, g, matmul_nt(h, h), MethodTag::spectral);
}

Matrix solve_care_special(const GramPair& g) {
  if (g.a.rows() != g.a.cols() || g.b.rows() != g.b.cols() || g.a.rows() != g.b.rows()) {
    throw DimensionError("solve_care_special: a and b must be square of equal size");
  }
  linalg::cholesky(g.b);  // b must be SPD as well
  const auto chol = linalg::cholesky(g.a);
  return symmetrized(detail::root_from_upper_factor(chol.l.transpose(), g.b));
}

}  // namespace pdtls
