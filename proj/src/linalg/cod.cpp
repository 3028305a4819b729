#include "householder.hpp"
#include "pdtls/errors.hpp"
#include "pdtls/linalg.hpp"
#include "pdtls/simd/kernels.hpp"

namespace pdtls::linalg {

CodFactors complete_orthogonal_decompose(const Matrix& a, double rank_tol) {
  if (!all_finite(a)) throw InvalidInputError("complete_orthogonal_decompose: non-finite entry");
  const std::size_t n = a.cols();
  const std::size_t r = numeric_rank(a, rank_tol);

  auto qrp = detail::householder_qr(a, true);

  // top = leading r rows of r; reduce to [t 0] by reflectors applied from the
  // right, bottom row first (trapezoidal-to-triangular, as in xTZRZF).
  Matrix top = qrp.r.block(0, 0, r, n);
  Matrix z = Matrix::identity(n);
  const std::size_t tail = n - r;
  if (tail > 0) {
    std::vector<double> v(tail + 1);
    for (std::size_t ii = r; ii-- > 0;) {
      v[0] = top(ii, ii);
      for (std::size_t c = 0; c < tail; ++c) v[c + 1] = top(ii, r + c);
      double alpha = 0.0;
      const double beta = detail::make_reflector(v, alpha);
      if (beta == 0.0) continue;
      auto apply = [&](Matrix& mtx, std::size_t rows) {
        for (std::size_t row = 0; row < rows; ++row) {
          double* x = mtx.row(row).data();
          double dot = x[ii];
          for (std::size_t c = 0; c < tail; ++c) dot += x[r + c] * v[c + 1];
          const double f = beta * dot;
          x[ii] -= f;
          for (std::size_t c = 0; c < tail; ++c) x[r + c] -= f * v[c + 1];
        }
      };
      apply(top, ii + 1);
      apply(z, n);
      for (std::size_t c = 0; c < tail; ++c) top(ii, r + c) = 0.0;
    }
  }

  CodFactors out;
  out.rank = r;
  out.u = std::move(qrp.q);
  out.r_block = top.block(0, 0, r, r);
  // a·P = q·[[t 0],[0 0]]·zᵀ, hence v = P·z.
  out.v = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < n; ++c) out.v(qrp.perm[j], c) = z(j, c);
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (out.r_block(i, i) < 0.0) {
      for (std::size_t row = 0; row <= i; ++row) out.r_block(row, i) = -out.r_block(row, i);
      for (std::size_t row = 0; row < n; ++row) out.v(row, i) = -out.v(row, i);
    }
  }
  return out;
}

}  // namespace pdtls::linalg
