#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pdtls/errors.hpp"
#include "pdtls/linalg.hpp"
#include "pdtls/simd/kernels.hpp"

namespace pdtls::linalg {
namespace {

constexpr int kMaxSweeps = 100;

// Rotation (c, s) that annihilates the (p, q) entry of a symmetric 2×2 block
// [[app, apq], [apq, aqq]]. Returns t = s/c.
double jacobi_angle(double app, double aqq, double apq, double& c, double& s) {
  const double theta = (aqq - app) / (2.0 * apq);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  c = 1.0 / std::sqrt(t * t + 1.0);
  s = t * c;
  return t;
}

}  // namespace

double default_rank_tol(std::size_t rows, std::size_t cols) noexcept {
  return 1e-10 * static_cast<double>(std::max(rows, cols));
}

SpectralFactors spectral_decompose(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("spectral_decompose: matrix not square");
  if (!all_finite(a)) throw InvalidInputError("spectral_decompose: non-finite entry");
  const double norm = frobenius_norm(a);
  if (asymmetry(a) > 1e-10 * norm) {
    throw SymmetryError("spectral_decompose: input not symmetric within 1e-10*||a||_F");
  }
  const std::size_t n = a.rows();
  const auto& k = simd::kernels();
  Matrix w = symmetrized(a);
  // Row i of vt holds eigenvector i; rotations then touch contiguous rows.
  Matrix vt = Matrix::identity(n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::abs(w(p, q));
    }
    if (off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        const double app = w(p, p);
        const double aqq = w(q, q);
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          w(p, q) = 0.0;
          w(q, p) = 0.0;
          continue;
        }
        double c = 0.0;
        double s = 0.0;
        const double t = jacobi_angle(app, aqq, apq, c, s);
        k.rot(w.row(p).data(), w.row(q).data(), n, c, s);
        for (std::size_t i = 0; i < n; ++i) {
          const double wip = w(i, p);
          const double wiq = w(i, q);
          w(i, p) = c * wip - s * wiq;
          w(i, q) = s * wip + c * wiq;
        }
        w(p, p) = app - t * apq;
        w(q, q) = aqq + t * apq;
        w(p, q) = 0.0;
        w(q, p) = 0.0;
        k.rot(vt.row(p).data(), vt.row(q).data(), n, c, s);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return w(i, i) > w(j, j); });

  SpectralFactors out;
  out.eigenvalues.resize(n);
  out.u = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    out.eigenvalues[c] = w(src, src);
    for (std::size_t i = 0; i < n; ++i) out.u(i, c) = vt(src, i);
  }
  return out;
}

std::vector<double> singular_values(const Matrix& a) {
  if (!all_finite(a)) throw InvalidInputError("singular_values: non-finite entry");
  // Orthogonalize the shorter family of vectors: columns of a when tall,
  // rows when wide. Either way they are rows of g.
  Matrix g = a.rows() >= a.cols() ? a.transpose() : a;
  const std::size_t count = g.rows();
  const std::size_t len = g.cols();
  const auto& k = simd::kernels();
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < count; ++p) {
      for (std::size_t q = p + 1; q < count; ++q) {
        double* gp = g.row(p).data();
        double* gq = g.row(q).data();
        const double alpha = k.sum_squares(gp, len);
        const double beta = k.sum_squares(gq, len);
        const double gamma = k.dot(gp, gq, len);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        double t = 1.0 / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        if (zeta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        k.rot(gp, gq, len, c, c * t);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(count);
  for (std::size_t i = 0; i < count; ++i) sv[i] = std::sqrt(k.sum_squares(g.row(i).data(), len));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

std::size_t numeric_rank(const Matrix& a, double rank_tol) {
  if (!(rank_tol > 0.0)) throw InvalidInputError("numeric_rank: rank_tol must be positive");
  if (a.empty()) return 0;
  const auto sv = singular_values(a);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double cutoff = rank_tol * sv.front();
  return static_cast<std::size_t>(
      std::count_if(sv.begin(), sv.end(), [cutoff](double s) { return s > cutoff; }));
}

double min_eigenvalue(const Matrix& a) {
  const auto f = spectral_decompose(a);
  return f.eigenvalues.empty() ? std::numeric_limits<double>::quiet_NaN() : f.eigenvalues.back();
}

double max_eigenvalue(const Matrix& a) {
  const auto f = spectral_decompose(a);
  return f.eigenvalues.empty() ? std::numeric_limits<double>::quiet_NaN() : f.eigenvalues.front();
}

}  // namespace pdtls::linalg
