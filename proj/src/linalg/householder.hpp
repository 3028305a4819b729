#pragma once

#include <cstddef>
#include <vector>

#include "pdtls/matrix.hpp"

namespace pdtls::linalg::detail {

struct PivotedQr {
  Matrix q;                       // m×m
  Matrix r;                       // m×n, upper trapezoidal, diag ≥ 0
  std::vector<std::size_t> perm;  // a[:, perm[j]] is column j of q·r
};

/// Householder QR of any m×n matrix, optionally with greedy column pivoting
/// on the largest remaining column norm.
PivotedQr householder_qr(Matrix a, bool pivot);

/// Reflector H = I − beta·v·vᵀ with v[0] = 1 mapping x onto a multiple of e1.
/// Returns beta (0 when x is already a multiple of e1) and overwrites x by v.
double make_reflector(std::vector<double>& x, double& alpha);

}  // namespace pdtls::linalg::detail
