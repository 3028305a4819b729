#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdtls/matrix.hpp"
#include "pdtls/model.hpp"

namespace pdtls::bench {

struct NamedProblem {
  std::string id;
  ProblemInstance problem;
};

struct Solver {
  std::string id;
  std::function<SpdSolution(const ProblemInstance&)> run;
};

enum class RunStatus { ok, failed };

/// One (problem, solver) run. Failed runs keep wall_time; the solution
/// metrics are NaN.
struct RunRecord {
  std::string problem_id;
  std::string solver_id;
  double wall_time = 0.0;  // seconds, minimum over repetitions
  double error_value = 0.0;
  double kkt_residual = 0.0;
  double min_eigenvalue = 0.0;
  std::size_t effective_rank = 0;
  double error_entry_std = 0.0;
  RunStatus status = RunStatus::ok;
};

enum class Metric { time, error };

/// Dolan–Moré profile: rho[s][k] = fraction of problems with ratio r_{p,s} ≤ taus[k].
struct PerformanceProfile {
  std::vector<std::string> solver_ids;
  std::vector<double> taus;  // ascending, starts at 1
  std::vector<std::vector<double>> rho;
  std::vector<std::vector<double>> ratios;  // ratios[s][p]; +inf for failures
  std::vector<std::string> problem_ids;

  /// ρ_s(τ) for an arbitrary τ (right-continuous step function).
  double rho_at(std::size_t solver, double tau) const;
};

/// Relative eigenvalue cutoff of effective_rank.
inline constexpr double kEffectiveRankTol = 1e-8;

/// Number of eigenvalues of symmetric x above 1e-8·λ_max.
std::size_t effective_rank(const Matrix& x);

/// Population standard deviation of the entries of D·X − T.
double error_entry_std(const ProblemInstance& p, const Matrix& x);

/// Unconstrained least squares A·X = DᵀT, symmetrized, then projected onto the
/// SPD cone by clipping eigenvalues at 1e-8·λ_max. Throws RankDeficientError
/// when A is singular.
SpdSolution baseline_ols_projection(const ProblemInstance& p);

/// "qr", "spectral", "rankdef-spectral", "rankdef-cod", "baseline-ols".
Solver builtin_solver(const std::string& id);
std::vector<std::string> builtin_solver_ids();

struct SuiteOptions {
  std::size_t repetitions = 3;
  std::size_t threads = 1;
};

/// One record per (problem, solver), sorted by (problem_id, solver_id).
/// Library errors become failed records; they are never rethrown.
std::vector<RunRecord> run_suite(const std::vector<NamedProblem>& problems,
                                 const std::vector<Solver>& solvers, const SuiteOptions& options = {});

/// Performance values below these floors are raised to them before ratios
/// are formed, so exact fits (E ≈ 0) tie instead of dividing by zero.
inline constexpr double kTimeFloor = 1e-9;
inline constexpr double kErrorFloor = 1e-12;

/// Throws InvalidInputError on empty input.
PerformanceProfile dolan_more_profile(const std::vector<RunRecord>& records, Metric metric);

Metric parse_metric(const std::string& name);

/// CSV schema (header mandatory):
/// problem_id,solver_id,status,wall_time,error_value,kkt_residual,min_eigenvalue,effective_rank,error_entry_std
/// Failed rows leave the five solution-metric fields empty.
void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(std::istream& in);

/// tau,<solver_1>,…,<solver_k>; one row per breakpoint.
void write_profile_csv(std::ostream& out, const PerformanceProfile& profile);

}  // namespace pdtls::bench
