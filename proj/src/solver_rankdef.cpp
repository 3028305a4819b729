#include "pdtls/solver_rankdef.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "pdtls/linalg.hpp"
#include "pdtls/solver_fullrank.hpp"

namespace pdtls {
namespace {

using linalg::Op;
using linalg::Side;
using linalg::Uplo;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const ConsistencyReport& r) {
  std::ostringstream os;
  os << "no positive definite solution: ||F|| = " << r.f_norm << " (delta " << r.delta
     << "), rank(D) = " << r.rank << ", rank(T) = " << r.target_rank;
  return os.str();
}

BlockPartition assemble_partition(const ProblemInstance& p, std::size_t r, Matrix basis,
                                  Matrix reduced_data, double rank_tol) {
  const std::size_t n = p.n();
  const GramPair g = gram_pair(p);
  const Matrix b_tilde = symmetrized(matmul_tn(basis, matmul(g.b, basis)));

  BlockPartition bp;
  bp.r = r;
  bp.target_rank = linalg::numeric_rank(p.t(), rank_tol);
  bp.b_rr = b_tilde.block(0, 0, r, r);
  bp.b_rn = b_tilde.block(0, r, r, n - r);
  bp.b_nn = b_tilde.block(r, r, n - r, n - r);
  bp.s = r > 0 ? linalg::singular_values(reduced_data) : std::vector<double>{};
  bp.basis_u = std::move(basis);
  bp.reduced_data = std::move(reduced_data);
  return bp;
}

Matrix lower_free_block(const CompletionChoice& choice, std::size_t k) {
  if (choice.l_free.empty()) return Matrix::identity(k);
  const Matrix& l = choice.l_free;
  if (l.rows() != k || l.cols() != k) {
    throw DimensionError("free completion block must be " + std::to_string(k) + "x" +
                         std::to_string(k));
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (l(i, i) == 0.0) throw InvalidInputError("free completion block is singular");
    for (std::size_t j = i + 1; j < k; ++j) {
      if (l(i, j) != 0.0) throw InvalidInputError("free completion block is not lower triangular");
    }
  }
  return l;
}

}  // namespace

InconsistentInstanceError::InconsistentInstanceError(const ConsistencyReport& report)
    : NoSolutionError(describe(report)), report_(report) {}

Matrix BlockPartition::b_tilde() const {
  const std::size_t nn = n();
  Matrix out(nn, nn);
  out.set_block(0, 0, b_rr);
  out.set_block(0, r, b_rn);
  out.set_block(r, 0, b_rn.transpose());
  out.set_block(r, r, b_nn);
  return out;
}

double default_delta(const Matrix& b) { return 1e-8 * std::max(1.0, frobenius_norm(b)); }

BlockPartition partition_spectral(const ProblemInstance& p, double rank_tol) {
  const GramPair g = gram_pair(p);
  auto spec = linalg::spectral_decompose(g.a);
  std::size_t r = linalg::numeric_rank(p.d(), rank_tol);
  // Eigenvalues of A are σ², so a σ kept by the rank test is positive here
  // unless it sits at roundoff level; never take a root of a nonpositive one.
  while (r > 0 && !(spec.eigenvalues[r - 1] > 0.0)) --r;
  std::vector<double> s(r);
  for (std::size_t i = 0; i < r; ++i) s[i] = std::sqrt(spec.eigenvalues[i]);
  return assemble_partition(p, r, std::move(spec.u), Matrix::diagonal(s), rank_tol);
}

BlockPartition partition_cod(const ProblemInstance& p, double rank_tol) {
  auto cod = linalg::complete_orthogonal_decompose(p.d(), rank_tol);
  return assemble_partition(p, cod.rank, std::move(cod.v), std::move(cod.r_block), rank_tol);
}

ConsistencyReport check_consistency(const BlockPartition& bp, const Matrix& b, double delta) {
  const std::size_t n = bp.n();
  const std::size_t r = bp.r;
  ConsistencyReport rep;
  rep.delta = delta;
  rep.rank = r;
  rep.target_rank = bp.target_rank;

  if (r == n) {
    rep.f_norm = 0.0;
  } else {
    const Matrix u_r = bp.basis_u.block(0, 0, n, r);
    const Matrix u_n = bp.basis_u.block(0, r, n, n - r);
    Matrix m = -1.0 * b;
    if (r > 0) {
      const Matrix bu_r = matmul(b, u_r);
      const Matrix c = symmetrized(matmul_tn(u_r, bu_r));
      linalg::CholeskyFactor chol;
      try {
        chol = linalg::cholesky(c);
      } catch (const NotPositiveDefiniteError&) {
        rep.f_norm = kInf;
        rep.b_rr_condition = kInf;
        rep.consistent = false;
        return rep;
      }
      // y = C⁻¹·(B·U_r)ᵀ
      const Matrix half = linalg::solve_triangular(chol.l, bu_r.transpose(), {});
      const Matrix y = linalg::solve_triangular(chol.l, half, {Uplo::lower, Side::left, Op::transpose});
      m += matmul(bu_r, y);
    }
    rep.f_norm = frobenius_norm(matmul_tn(u_n, m));
  }

  if (r > 0) {
    const auto ev = linalg::spectral_decompose(bp.b_rr).eigenvalues;
    rep.b_rr_condition = ev.back() > 0.0 ? ev.front() / ev.back() : kInf;
  }
  rep.consistent = rep.f_norm < delta && std::isfinite(rep.b_rr_condition) &&
                   bp.target_rank == r;
  return rep;
}

ProblemInstance reduced_problem(const BlockPartition& bp) {
  const auto chol = linalg::cholesky(bp.b_rr);
  return ProblemInstance(bp.reduced_data, chol.l.transpose());
}

BlockResiduals block_residuals(const BlockPartition& bp, const Matrix& x_tilde) {
  const std::size_t n = bp.n();
  const std::size_t r = bp.r;
  BlockResiduals out;
  if (r == 0) return out;
  const Matrix a_bar = matmul_tn(bp.reduced_data, bp.reduced_data);
  const Matrix x_rr = x_tilde.block(0, 0, r, r);
  const Matrix x_rn = x_tilde.block(0, r, r, n - r);
  const Matrix xa = matmul(x_rr, a_bar);
  out.rr = frobenius_norm(matmul(xa, x_rr) - bp.b_rr) / std::max(frobenius_norm(bp.b_rr), 1e-300);
  if (n > r) {
    out.rn = frobenius_norm(matmul(xa, x_rn) - bp.b_rn) / std::max(frobenius_norm(bp.b_tilde()), 1e-300);
  }
  return out;
}

RankDefSolution solve_rankdef(const ProblemInstance& p, const RankDefOptions& options) {
  const std::size_t n = p.n();
  const double rank_tol = options.rank_tol.value_or(linalg::default_rank_tol(p.m(), n));
  BlockPartition bp = options.route == RankDefRoute::spectral ? partition_spectral(p, rank_tol)
                                                              : partition_cod(p, rank_tol);
  const GramPair g = gram_pair(p);
  const double delta = options.delta.value_or(default_delta(g.b));
  ConsistencyReport report = check_consistency(bp, g.b, delta);
  if (!report.consistent) throw InconsistentInstanceError(report);

  const std::size_t r = bp.r;
  const std::size_t k = n - r;
  const Matrix l_free = lower_free_block(options.choice, k);
  Matrix x_tilde(n, n);

  if (r > 0) {
    // Reduced full-rank problem gives X̃_rr with X̃_rr·Ā·X̃_rr = B̃_rr.
    const ProblemInstance reduced = reduced_problem(bp);
    const auto qr = linalg::qr_decompose(reduced.d());
    const Matrix b_bar = gram_pair(reduced).b;
    const Matrix x_rr = symmetrized(detail::root_from_upper_factor(qr.leading_block(), b_bar));
    const Matrix l_rr = linalg::cholesky(x_rr).l;
    x_tilde.set_block(0, 0, x_rr);

    if (k > 0) {
      // X̃_rr·D̄ᵀD̄·X̃_{r,n−r} = B̃_{r,n−r}: two solves with L_rr, two with D̄.
      Matrix z = linalg::solve_triangular(l_rr, bp.b_rn, {});
      z = linalg::solve_triangular(l_rr, z, {Uplo::lower, Side::left, Op::transpose});
      z = linalg::solve_triangular(bp.reduced_data, z, {Uplo::upper, Side::left, Op::transpose});
      const Matrix x_rn = linalg::solve_triangular(bp.reduced_data, z, {Uplo::upper, Side::left, Op::none});

      // Completion: X̃_{r,n−r} = L_rr·L_{n−r,r}ᵀ, then
      // X̃_{n−r,n−r} = L_{n−r,r}·L_{n−r,r}ᵀ + L_free·L_freeᵀ.
      const Matrix l_nr_t = linalg::solve_triangular(l_rr, x_rn, {});
      const Matrix x_nn = matmul_tn(l_nr_t, l_nr_t) + matmul_nt(l_free, l_free);
      x_tilde.set_block(0, r, x_rn);
      x_tilde.set_block(r, 0, x_rn.transpose());
      x_tilde.set_block(r, r, symmetrized(x_nn));
    }
  } else {
    x_tilde = matmul_nt(l_free, l_free);
  }

  const Matrix x = matmul_nt(matmul(bp.basis_u, x_tilde), bp.basis_u);
  RankDefSolution out;
  out.solution = make_solution(p, g, x, options.route == RankDefRoute::spectral
                                            ? MethodTag::rankdef_spectral
                                            : MethodTag::rankdef_cod);
  out.residuals = block_residuals(bp, x_tilde);
  out.partition = std::move(bp);
  out.consistency = report;
  out.x_tilde = std::move(x_tilde);
  return out;
}

bool has_full_rank(const ProblemInstance& p, double rank_tol) {
  return linalg::numeric_rank(p.d(), rank_tol) == p.n() && linalg::numeric_rank(p.t(), rank_tol) == p.n();
}

SpdSolution solve_auto(const ProblemInstance& p, const RankDefOptions& options) {
  const double tol = options.rank_tol.value_or(linalg::default_rank_tol(p.m(), p.n()));
  if (has_full_rank(p, tol)) return solve_qr(p);
  return solve_rankdef(p, options).solution;
}

}  // namespace pdtls
