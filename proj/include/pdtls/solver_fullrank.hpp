#pragma once

#include "pdtls/matrix.hpp"
#include "pdtls/model.hpp"

namespace pdtls {

/// Minimizer of tr(AX + X⁻¹B) over SPD X when rank(D) = rank(T) = n, from the
/// QR factorization D = QR: X = R⁻¹·U·S̃·Uᵀ·R⁻ᵀ with R·B·Rᵀ = U·S̃²·Uᵀ.
///
/// Throws RankDeficientError if numeric_rank(D) < n (use solve_rankdef) and
/// NotPositiveDefiniteError if numeric_rank(T) < n.
SpdSolution solve_qr(const ProblemInstance& p);

/// Same minimizer from the spectral decomposition A = U·S²·Uᵀ:
/// X = U·S⁻¹·Ū·S̄·Ūᵀ·S⁻¹·Uᵀ with S·Uᵀ·B·U·S = Ū·S̄²·Ūᵀ.
SpdSolution solve_spectral(const ProblemInstance& p);

/// The unique SPD root of X·A·X = B for SPD a and b, with R taken from the
/// Cholesky factorization A = RᵀR.
Matrix solve_care_special(const GramPair& g);

namespace detail {

/// X = R⁻¹·(R·B·Rᵀ)^{1/2}·R⁻ᵀ for upper triangular nonsingular r. This is
/// the core shared by the QR route, the Gram route and the reduced solve of
/// the rank-deficient pipeline.
Matrix root_from_upper_factor(const Matrix& r, const Matrix& b);

}  // namespace detail

}  // namespace pdtls
