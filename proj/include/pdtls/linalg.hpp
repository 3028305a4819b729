#pragma once

// Dense decomposition kernels. Every routine is a pure function of its
// arguments and may be called concurrently.

#include <cstddef>
#include <vector>

#include "pdtls/matrix.hpp"

namespace pdtls::linalg {

/// a = q·r with q (m×m) orthonormal, r (m×n) upper triangular and diag(r) ≥ 0.
struct QrFactors {
  Matrix q;
  Matrix r;

  /// Top n×n block of r.
  Matrix leading_block() const { return r.block(0, 0, r.cols(), r.cols()); }
};

/// a = u·diag(eigenvalues)·uᵀ, eigenvalues sorted descending.
struct SpectralFactors {
  Matrix u;
  std::vector<double> eigenvalues;
};

/// a = l·lᵀ, l lower triangular with positive diagonal.
struct CholeskyFactor {
  Matrix l;
};

/// a = u·[[r_block, 0], [0, 0]]·vᵀ with r_block (rank×rank) upper triangular
/// and nonsingular.
struct CodFactors {
  Matrix u;
  Matrix r_block;
  Matrix v;
  std::size_t rank = 0;
};

/// Relative tolerance used when the caller does not pick one:
/// singular values at or below 1e-10·max(m, n)·σ_max count as zero.
double default_rank_tol(std::size_t rows, std::size_t cols) noexcept;

/// Householder QR. Requires rows ≥ cols.
QrFactors qr_decompose(const Matrix& a);

/// Symmetric eigendecomposition (cyclic Jacobi). The input is symmetrized
/// first; asymmetry above 1e-10·‖a‖_F raises SymmetryError.
SpectralFactors spectral_decompose(const Matrix& a);

/// Throws NotPositiveDefiniteError on the first pivot ≤ 0. Reads the lower
/// triangle only.
CholeskyFactor cholesky(const Matrix& a);

/// Rank from numeric_rank, then column-pivoted QR followed by an orthogonal
/// reduction of the leading rank rows from the right.
CodFactors complete_orthogonal_decompose(const Matrix& a, double rank_tol);

/// Singular values, descending (one-sided Jacobi).
std::vector<double> singular_values(const Matrix& a);

/// Number of singular values σ_i > rank_tol·σ_max.
std::size_t numeric_rank(const Matrix& a, double rank_tol);

enum class Uplo { lower, upper };
enum class Side { left, right };
enum class Op { none, transpose };

struct TriangularSolve {
  Uplo uplo = Uplo::lower;
  Side side = Side::left;
  Op op = Op::none;
};

/// Solves op(t)·x = rhs (Side::left) or x·op(t) = rhs (Side::right) for a
/// triangular t; entries outside the selected triangle are ignored. Throws
/// SingularTriangularError on an exactly zero diagonal entry.
Matrix solve_triangular(const Matrix& t, const Matrix& rhs, TriangularSolve flags);

/// Largest and smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& a);
double max_eigenvalue(const Matrix& a);

}  // namespace pdtls::linalg
