#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pdtls/errors.hpp"
#include "pdtls/matrix.hpp"
#include "pdtls/model.hpp"

namespace pdtls {

enum class RankDefRoute { spectral, cod };

/// Blocks of B̃ = UᵀBU split at the numeric rank r of D.
///
/// For the spectral route U holds the eigenvectors of A = DᵀD and
/// reduced_data = diag(s). For the COD route D = W·[[R,0],[0,0]]·Vᵀ, U = V and
/// reduced_data = R. In both cases UᵀAU = [[reduced_dataᵀ·reduced_data, 0], [0, 0]].
struct BlockPartition {
  std::size_t r = 0;
  std::size_t target_rank = 0;  // numeric rank of T at the same tolerance
  Matrix b_rr;
  Matrix b_rn;
  Matrix b_nn;
  std::vector<double> s;  // singular values of reduced_data, descending
  Matrix basis_u;         // n×n, columns [U_r | U_{n−r}]
  Matrix reduced_data;    // r×r upper triangular, the data matrix of the reduced problem

  std::size_t n() const noexcept { return basis_u.rows(); }
  /// [[b_rr, b_rn], [b_rnᵀ, b_nn]]
  Matrix b_tilde() const;
};

struct ConsistencyReport {
  double f_norm = 0.0;          // +inf when U_rᵀBU_r is singular
  double delta = 0.0;
  bool consistent = true;
  double b_rr_condition = 1.0;  // +inf when U_rᵀBU_r is singular
  std::size_t rank = 0;         // numeric rank of D
  std::size_t target_rank = 0;  // numeric rank of T
};

/// Raised by solve_rankdef; carries the failed consistency test.
class InconsistentInstanceError : public NoSolutionError {
 public:
  explicit InconsistentInstanceError(const ConsistencyReport& report);
  const ConsistencyReport& report() const noexcept { return report_; }

 private:
  ConsistencyReport report_;
};

struct BlockResiduals {
  double rr = 0.0;  // ‖X̃_rr·Ā·X̃_rr − B̃_rr‖_F / ‖B̃_rr‖_F
  double rn = 0.0;  // ‖X̃_rr·Ā·X̃_{r,n−r} − B̃_{r,n−r}‖_F / ‖B̃‖_F
};

/// Free block L_{n−r,n−r} of the Cholesky completion. An empty matrix means
/// the identity.
struct CompletionChoice {
  Matrix l_free;
};

struct RankDefOptions {
  RankDefRoute route = RankDefRoute::spectral;
  std::optional<double> delta;     // default: default_delta(B)
  std::optional<double> rank_tol;  // default: linalg::default_rank_tol(m, n)
  CompletionChoice choice;
};

struct RankDefSolution {
  SpdSolution solution;
  BlockPartition partition;
  ConsistencyReport consistency;
  Matrix x_tilde;  // UᵀXU
  BlockResiduals residuals;
};

/// 1e-8·max(1, ‖B‖_F).
double default_delta(const Matrix& b);

BlockPartition partition_spectral(const ProblemInstance& p, double rank_tol);
BlockPartition partition_cod(const ProblemInstance& p, double rank_tol);

/// Evaluates F = U_{n−r}ᵀ(B·U_r·(U_rᵀBU_r)⁻¹·U_rᵀ·B − B) and compares ‖F‖_F to
/// delta. Inconsistency is reported, never thrown. A full-rank partition has
/// f_norm = 0. The instance is consistent iff f_norm < delta, U_rᵀBU_r is
/// nonsingular and rank(T) = rank(D).
ConsistencyReport check_consistency(const BlockPartition& bp, const Matrix& b, double delta);

/// (D̄, T̄) = (reduced_data, upper Cholesky factor of B̃_rr).
ProblemInstance reduced_problem(const BlockPartition& bp);

/// General SPD solution when rank(D) ≤ n. Throws NoSolutionError when the
/// consistency test fails and NotPositiveDefiniteError if B̃_rr is not SPD.
RankDefSolution solve_rankdef(const ProblemInstance& p, const RankDefOptions& options = {});

/// Relative residuals of the two block equations for a given X̃, with
/// Ā = reduced_dataᵀ·reduced_data.
/// True when D and T both have numeric rank n at `rank_tol`.
bool has_full_rank(const ProblemInstance& p, double rank_tol);

/// QR solver when the instance has full rank, otherwise the rank-deficient
/// pipeline configured by `options`.
SpdSolution solve_auto(const ProblemInstance& p, const RankDefOptions& options = {});

BlockResiduals block_residuals(const BlockPartition& bp, const Matrix& x_tilde);

}  // namespace pdtls
