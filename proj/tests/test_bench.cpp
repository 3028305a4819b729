#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "pdtls/bench.hpp"
#include "pdtls/errors.hpp"
#include "pdtls/linalg.hpp"
#include "pdtls/probgen.hpp"
#include "pdtls/solver_fullrank.hpp"
#include "support.hpp"

using namespace pdtls;
using namespace pdtls::bench;

namespace {

RunRecord timed(const std::string& p, const std::string& s, double t) {
  RunRecord r;
  r.problem_id = p;
  r.solver_id = s;
  r.wall_time = t;
  r.error_value = t;
  return r;
}

std::vector<RunRecord> hand_suite() {
  return {timed("p1", "s1", 1), timed("p1", "s2", 2), timed("p2", "s1", 2),
          timed("p2", "s2", 2), timed("p3", "s1", 4), timed("p3", "s2", 1)};
}

void expect_nondecreasing_to(const PerformanceProfile& prof, std::size_t s, double final_value) {
  for (std::size_t k = 1; k < prof.taus.size(); ++k) EXPECT_GE(prof.rho[s][k], prof.rho[s][k - 1]);
  EXPECT_DOUBLE_EQ(prof.rho[s].back(), final_value);
}

}  // namespace

TEST(Profile, HandSuite) {
  const auto prof = dolan_more_profile(hand_suite(), Metric::time);
  ASSERT_EQ(prof.solver_ids, (std::vector<std::string>{"s1", "s2"}));
  EXPECT_EQ(prof.rho_at(0, 1.0), 2.0 / 3.0);
  EXPECT_EQ(prof.rho_at(1, 1.0), 2.0 / 3.0);
  EXPECT_EQ(prof.rho_at(1, 2.0), 1.0);
  EXPECT_EQ(prof.rho_at(0, 4.0), 1.0);
  EXPECT_EQ(prof.rho_at(0, 3.999), 2.0 / 3.0);
  EXPECT_EQ(prof.rho_at(0, 0.5), 0.0);
  expect_nondecreasing_to(prof, 0, 1.0);
  expect_nondecreasing_to(prof, 1, 1.0);
  // Every problem has a winner.
  EXPECT_GE(prof.rho_at(0, 1.0) + prof.rho_at(1, 1.0), 1.0);
}

TEST(Profile, SingleSolverAndFailures) {
  auto prof = dolan_more_profile({timed("a", "x", 3), timed("b", "x", 5)}, Metric::time);
  EXPECT_EQ(prof.rho_at(0, 1.0), 1.0);

  auto recs = hand_suite();
  for (auto& r : recs) {
    if (r.solver_id == "s2") {
      r.status = RunStatus::failed;
      r.wall_time = std::numeric_limits<double>::quiet_NaN();
    }
  }
  prof = dolan_more_profile(recs, Metric::time);
  EXPECT_EQ(prof.rho_at(1, 1e300), 0.0);
  EXPECT_EQ(prof.rho_at(0, 1.0), 1.0);
  EXPECT_TRUE(std::isinf(prof.ratios[1][0]));

  recs[2].status = RunStatus::failed;  // p2/s1: both fail on p2
  prof = dolan_more_profile(recs, Metric::time);
  expect_nondecreasing_to(prof, 0, 2.0 / 3.0);
  EXPECT_THROW(dolan_more_profile({}, Metric::time), InvalidInputError);
}

TEST(Profile, ErrorMetricFloorsZeros) {
  auto a = timed("p", "s1", 1), b = timed("p", "s2", 1);
  a.error_value = 0.0;
  b.error_value = 1e-13;
  const auto prof = dolan_more_profile({a, b}, Metric::error);
  EXPECT_EQ(prof.ratios[0][0], 1.0);
  EXPECT_EQ(prof.ratios[1][0], 1.0);
  EXPECT_EQ(parse_metric("error"), Metric::error);
  EXPECT_THROW(parse_metric("memory"), InvalidInputError);
}

TEST(Metrics, EffectiveRankAndStd) {
  EXPECT_EQ(effective_rank(Matrix{{1, 0, 0}, {0, 1e-3, 0}, {0, 0, 1e-9}}), 2u);
  EXPECT_EQ(effective_rank(Matrix::identity(4)), 4u);
  const ProblemInstance p(Matrix::identity(2), Matrix{{1, 1}, {0, 1}});
  // DX − T = [[0,-1],[0,0]]: mean −1/4, population variance 3/16.
  EXPECT_NEAR(error_entry_std(p, Matrix::identity(2)), std::sqrt(3.0) / 4, 1e-15);
}

TEST(Baseline, ExactDataAndIdentity) {
  const auto g = probgen::gen_full_rank(probgen::make_spec(20, 5, 5, 3));
  const auto s = baseline_ols_projection(g.problem);
  EXPECT_LE(frobenius_norm(s.x - *g.x0), 1e-8 * frobenius_norm(*g.x0));
  EXPECT_EQ(s.method, MethodTag::baseline_ols);

  const Matrix t{{2, 1}, {3, -1}};
  const auto id = baseline_ols_projection(ProblemInstance(Matrix::identity(2), t));
  // Oracle: eigen-clip of (T+Tᵀ)/2.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::to_eigen(symmetrized(t)));
  Eigen::VectorXd ev = es.eigenvalues();
  const double floor = 1e-8 * ev.maxCoeff();
  for (auto& v : ev) v = std::max(v, floor);
  const Eigen::MatrixXd oracle = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  EXPECT_LT(oracle::rel_diff(id.x, oracle::from_eigen(oracle)), 1e-12);
  EXPECT_THROW(baseline_ols_projection(ProblemInstance(Matrix{{1, 0}, {0, 0}}, Matrix::identity(2))),
               RankDeficientError);
}

TEST(Baseline, PdtlsErrorNeverWorse) {
  int wins = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto spec = probgen::make_spec(30, 6, 6, probgen::derive_seed(11, i), 0.05);
    const auto p = probgen::generate(spec).problem;
    wins += solve_qr(p).error_value <= baseline_ols_projection(p).error_value + 1e-12;
  }
  EXPECT_GE(wins, 90);
}

TEST(Suite, RecordsAndDeterminism) {
  std::vector<NamedProblem> problems;
  for (std::uint64_t i = 0; i < 10; ++i)
    problems.push_back({"p" + std::to_string(i), probgen::generate(probgen::make_spec(15, 4, 4, i, 0.01)).problem});
  problems.push_back({"bad", ProblemInstance(Matrix{{1, 0}, {0, 0}}, Matrix{{2, 0}, {0, 1}})});
  std::vector<Solver> solvers;
  for (const auto& id : {"qr", "rankdef-spectral"}) solvers.push_back(builtin_solver(id));
  const auto a = run_suite(problems, solvers, {2, 1});
  const auto b = run_suite(problems, solvers, {1, 3});
  ASSERT_EQ(a.size(), 22u);
  ASSERT_EQ(b.size(), 22u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].problem_id, b[k].problem_id);
    EXPECT_EQ(a[k].solver_id, b[k].solver_id);
    EXPECT_EQ(a[k].status, b[k].status);
    if (a[k].status == RunStatus::ok) {
      EXPECT_EQ(a[k].error_value, b[k].error_value);
      EXPECT_EQ(a[k].kkt_residual, b[k].kkt_residual);
      EXPECT_EQ(a[k].effective_rank, b[k].effective_rank);
      EXPECT_EQ(a[k].error_entry_std, b[k].error_entry_std);
      EXPECT_GT(a[k].wall_time, 0.0);
    }
    if (a[k].problem_id == "bad") {
      EXPECT_EQ(a[k].status, RunStatus::failed);
    }
  }
  EXPECT_THROW(builtin_solver("nope"), InvalidInputError);
  EXPECT_EQ(builtin_solver_ids().size(), 6u);
}

TEST(Suite, SingleRecord) {
  const auto recs = run_suite({{"only", ProblemInstance(Matrix::identity(2), Matrix::identity(2))}},
                              {builtin_solver("spectral")});
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].status, RunStatus::ok);
}

TEST(Csv, RecordsRoundTrip) {
  auto recs = hand_suite();
  recs[1].status = RunStatus::failed;
  recs[0].effective_rank = 3;
  recs[0].error_entry_std = 0.125;
  std::stringstream ss;
  write_records_csv(ss, recs);
  const auto back = read_records_csv(ss);
  ASSERT_EQ(back.size(), recs.size());
  EXPECT_EQ(back[0].effective_rank, 3u);
  EXPECT_EQ(back[0].error_entry_std, 0.125);
  EXPECT_EQ(back[1].status, RunStatus::failed);
  EXPECT_EQ(back[2].wall_time, 2.0);
  std::stringstream bad("nonsense,header\n");
  EXPECT_THROW(read_records_csv(bad), InvalidInputError);
}

TEST(Csv, ProfileHeader) {
  std::stringstream ss;
  write_profile_csv(ss, dolan_more_profile(hand_suite(), Metric::time));
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "tau,s1,s2");
}
