#include <cmath>
#include <string>

#include "pdtls/errors.hpp"
#include "pdtls/linalg.hpp"
#include "pdtls/simd/kernels.hpp"

namespace pdtls::linalg {

CholeskyFactor cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("cholesky: matrix not square");
  const std::size_t n = a.rows();
  const auto& k = simd::kernels();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = l.row(i).data();
    for (std::size_t j = 0; j < i; ++j) {
      const double s = a(i, j) - k.dot(li, l.row(j).data(), j);
      l(i, j) = s / l(j, j);
    }
    const double pivot = a(i, i) - k.sum_squares(li, i);
    if (!(pivot > 0.0)) {
      throw NotPositiveDefiniteError("cholesky: nonpositive pivot at index " + std::to_string(i));
    }
    l(i, i) = std::sqrt(pivot);
  }
  return CholeskyFactor{std::move(l)};
}

namespace {

// Left-side solve op(t)·x = b, overwriting b row by row.
void solve_left(const Matrix& t, Matrix& x, Uplo uplo, Op op) {
  const std::size_t n = t.rows();
  const std::size_t w = x.cols();
  const auto& k = simd::kernels();
  // Effective matrix is lower triangular when (lower, none) or (upper, transpose).
  const bool forward = (uplo == Uplo::lower) == (op == Op::none);
  auto coeff = [&](std::size_t i, std::size_t j) { return op == Op::none ? t(i, j) : t(j, i); };

  if (forward) {
    for (std::size_t i = 0; i < n; ++i) {
      double* xi = x.row(i).data();
      for (std::size_t j = 0; j < i; ++j) {
        const double c = coeff(i, j);
        if (c != 0.0) k.axpy(-c, x.row(j).data(), xi, w);
      }
      k.scale(1.0 / t(i, i), xi, w);
    }
  } else {
    for (std::size_t i = n; i-- > 0;) {
      double* xi = x.row(i).data();
      for (std::size_t j = i + 1; j < n; ++j) {
        const double c = coeff(i, j);
        if (c != 0.0) k.axpy(-c, x.row(j).data(), xi, w);
      }
      k.scale(1.0 / t(i, i), xi, w);
    }
  }
}

}  // namespace

Matrix solve_triangular(const Matrix& t, const Matrix& rhs, TriangularSolve flags) {
  if (t.rows() != t.cols()) throw DimensionError("solve_triangular: factor not square");
  const std::size_t n = t.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (t(i, i) == 0.0) {
      throw SingularTriangularError("solve_triangular: zero diagonal entry at " + std::to_string(i));
    }
  }
  if (flags.side == Side::left) {
    if (rhs.rows() != n) throw DimensionError("solve_triangular: rhs rows differ from factor");
    Matrix x = rhs;
    solve_left(t, x, flags.uplo, flags.op);
    return x;
  }
  // x·op(t) = b  ⇔  op(t)ᵀ·xᵀ = bᵀ
  if (rhs.cols() != n) throw DimensionError("solve_triangular: rhs cols differ from factor");
  Matrix xt = rhs.transpose();
  solve_left(t, xt, flags.uplo, flags.op == Op::none ? Op::transpose : Op::none);
  return xt.transpose();
}

}  // namespace pdtls::linalg
