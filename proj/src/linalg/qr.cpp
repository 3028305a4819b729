#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "householder.hpp"
#include "pdtls/errors.hpp"
#include "pdtls/linalg.hpp"
#include "pdtls/simd/kernels.hpp"

namespace pdtls::linalg {
namespace detail {

double make_reflector(std::vector<double>& x, double& alpha) {
  const auto& k = simd::kernels();
  const double x0 = x[0];
  const double tail_sq = x.size() > 1 ? k.sum_squares(x.data() + 1, x.size() - 1) : 0.0;
  if (tail_sq == 0.0) {
    alpha = x0;
    std::fill(x.begin(), x.end(), 0.0);
    x[0] = 1.0;
    return 0.0;
  }
  const double norm = std::sqrt(x0 * x0 + tail_sq);
  alpha = x0 >= 0.0 ? -norm : norm;
  const double v0 = x0 - alpha;
  k.scale(1.0 / v0, x.data() + 1, x.size() - 1);
  x[0] = 1.0;
  return -v0 / alpha;
}

PivotedQr householder_qr(Matrix a, bool pivot) {
  const auto& k = simd::kernels();
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t steps = std::min(m, n);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  std::vector<std::vector<double>> reflectors(steps);
  std::vector<double> betas(steps, 0.0);
  std::vector<double> w(n);

  for (std::size_t j = 0; j < steps; ++j) {
    if (pivot) {
      std::size_t best = j;
      double best_norm = -1.0;
      for (std::size_t c = j; c < n; ++c) {
        double s = 0.0;
        for (std::size_t i = j; i < m; ++i) s += a(i, c) * a(i, c);
        if (s > best_norm) {
          best_norm = s;
          best = c;
        }
      }
      if (best != j) {
        for (std::size_t i = 0; i < m; ++i) std::swap(a(i, j), a(i, best));
        std::swap(perm[j], perm[best]);
      }
    }

    std::vector<double> v(m - j);
    for (std::size_t i = j; i < m; ++i) v[i - j] = a(i, j);
    double alpha = 0.0;
    const double beta = make_reflector(v, alpha);

    if (beta != 0.0) {
      // Trailing columns: w = vᵀ·a[j:, j+1:], a -= beta·v·wᵀ.
      const std::size_t width = n - j - 1;
      if (width > 0) {
        std::fill(w.begin(), w.begin() + width, 0.0);
        for (std::size_t i = j; i < m; ++i) k.axpy(v[i - j], a.row(i).data() + j + 1, w.data(), width);
        for (std::size_t i = j; i < m; ++i) {
          k.axpy(-beta * v[i - j], w.data(), a.row(i).data() + j + 1, width);
        }
      }
    }
    a(j, j) = alpha;
    for (std::size_t i = j + 1; i < m; ++i) a(i, j) = 0.0;
    reflectors[j] = std::move(v);
    betas[j] = beta;
  }

  // q = H_0·H_1·…·H_{steps-1}, accumulated right to left on the identity.
  Matrix q = Matrix::identity(m);
  std::vector<double> qw(m);
  for (std::size_t jj = steps; jj-- > 0;) {
    const double beta = betas[jj];
    if (beta == 0.0) continue;
    const auto& v = reflectors[jj];
    std::fill(qw.begin(), qw.end(), 0.0);
    for (std::size_t i = jj; i < m; ++i) k.axpy(v[i - jj], q.row(i).data(), qw.data(), m);
    for (std::size_t i = jj; i < m; ++i) k.axpy(-beta * v[i - jj], qw.data(), q.row(i).data(), m);
  }

  // Nonnegative diagonal of r.
  for (std::size_t j = 0; j < steps; ++j) {
    if (a(j, j) < 0.0) {
      for (std::size_t c = j; c < n; ++c) a(j, c) = -a(j, c);
      for (std::size_t i = 0; i < m; ++i) q(i, j) = -q(i, j);
    }
  }
  return PivotedQr{std::move(q), std::move(a), std::move(perm)};
}

}  // namespace detail

QrFactors qr_decompose(const Matrix& a) {
  if (a.rows() < a.cols()) {
    throw DimensionError("qr_decompose: need rows >= cols, got " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  auto f = detail::householder_qr(a, false);
  return QrFactors{std::move(f.q), std::move(f.r)};
}

}  // namespace pdtls::linalg
