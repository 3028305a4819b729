#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pdtls/cli.hpp"
#include "pdtls/matrix_io.hpp"

using namespace pdtls;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("pdtls_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const Matrix& m) const {
    io::write_matrix(path(name), m);
    return path(name);
  }
  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SolveGeneratedFullRank) {
  ASSERT_EQ(run({"generate", "--m", "20", "--n", "5", "--seed", "3", "--out-dir", dir_.string()}).code, 0);
  const auto r = run({"solve", "--data", path("D.mtx"), "--target", path("T.mtx"), "--out", path("X.mtx")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = json::parse(r.out);
  EXPECT_EQ(rep["method"], "qr");
  EXPECT_LE(rep["kkt_residual"].get<double>(), 1e-9);
  EXPECT_FALSE(rep.contains("x"));
  const Matrix x = io::read_matrix(fs::path(path("X.mtx")));
  const Matrix x0 = io::read_matrix(fs::path(path("X0.mtx")));
  EXPECT_LE(frobenius_norm(x - x0), 1e-8 * frobenius_norm(x0));
}

TEST_F(CliTest, SolveEmbedsSolutionAndWritesReport) {
  const auto d = write("D.csv", Matrix::identity(2));
  const auto t = write("T.csv", Matrix{{1, 1}, {0, 1}});
  const auto r = run({"solve", "--data", d, "--target", t, "--method", "spectral", "--report", path("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = json::parse(slurp(path("r.json")));
  EXPECT_EQ(rep["method"], "spectral");
  EXPECT_NEAR(rep["x"][0][1].get<double>(), 1 / std::sqrt(5.0), 1e-12);
}

TEST_F(CliTest, SolveRankDeficientWithFreeBlock) {
  const auto d = write("D.csv", Matrix{{1, 0}, {0, 0}});
  const auto t = write("T.csv", Matrix{{2, 0}, {0, 0}});
  const auto l = write("L.csv", Matrix{{3}});
  for (const char* method : {"auto", "rankdef-spectral", "rankdef-cod"}) {
    const auto r = run({"solve", "--data", d, "--target", t, "--l-free", l, "--method", method});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rep = json::parse(r.out);
    EXPECT_EQ(rep["rank_r"], 1);
    EXPECT_NEAR(rep["x"][1][1].get<double>(), 9.0, 1e-12);
  }
}

TEST_F(CliTest, InconsistentExitsTwo) {
  const auto d = write("D.csv", Matrix{{1, 0}, {0, 0}});
  const auto t = write("T.csv", Matrix{{2, 0}, {0, 1}});
  auto r = run({"solve", "--data", d, "--target", t});
  EXPECT_EQ(r.code, 2);
  const auto rep = json::parse(r.out);
  EXPECT_FALSE(rep["consistent"].get<bool>());
  EXPECT_GE(rep["f_norm"].get<double>(), rep["delta"].get<double>());
  r = run({"check", "--data", d, "--target", t});
  EXPECT_EQ(r.code, 2);
  // Full-rank methods refuse rank-deficient data as invalid input.
  EXPECT_EQ(run({"solve", "--data", d, "--target", t, "--method", "qr"}).code, 3);
}

TEST_F(CliTest, InputErrorsExitThree) {
  const auto d = write("D.csv", Matrix::identity(2));
  const auto t = write("T.csv", Matrix::identity(3));
  EXPECT_EQ(run({"solve", "--data", d, "--target", t}).code, 3);
  EXPECT_EQ(run({"solve", "--data", path("missing.mtx"), "--target", t}).code, 3);
  EXPECT_EQ(run({"solve", "--data", d}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  EXPECT_EQ(run({"generate", "--m", "2", "--n", "5"}).code, 3);
  EXPECT_EQ(run({"bench", "--suite-dir", dir_.string()}).code, 3);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST_F(CliTest, GenerateCheckRoundTripAndDeterminism) {
  const std::vector<std::string> gen = {"generate", "--m", "20", "--n", "5", "--rank", "3", "--seed", "7"};
  auto a = gen, b = gen;
  a.insert(a.end(), {"--out-dir", path("a")});
  b.insert(b.end(), {"--out-dir", path("b")});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  EXPECT_EQ(slurp(path("a/D.mtx")), slurp(path("b/D.mtx")));
  EXPECT_EQ(slurp(path("a/T.mtx")), slurp(path("b/T.mtx")));
  EXPECT_FALSE(fs::exists(path("a/X0.mtx")));
  for (const char* route : {"spectral", "cod"}) {
    const auto r = run({"check", "--data", path("a/D.mtx"), "--target", path("a/T.mtx"), "--route", route});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(json::parse(r.out)["rank_r"], 3);
  }
  const auto full = run({"check", "--data", write("I.csv", Matrix::identity(2)), "--target", path("I.csv")});
  EXPECT_EQ(full.code, 0);
  EXPECT_EQ(json::parse(full.out)["f_norm"].get<double>(), 0.0);
}

TEST_F(CliTest, GenerateCustomSpectrum) {
  ASSERT_EQ(run({"generate", "--m", "6", "--n", "3", "--seed", "1", "--spectrum-a", "1,1,1", "--format", "csv",
                 "--prefix", "q_", "--out-dir", dir_.string()})
                .code,
            0);
  const Matrix d = io::read_matrix(fs::path(path("q_D.csv")));
  EXPECT_LT(frobenius_norm(matmul_tn(d, d) - Matrix::identity(3)), 1e-13);
  EXPECT_EQ(run({"generate", "--m", "6", "--n", "3", "--spectrum-a", "1,x,1", "--out-dir", dir_.string()}).code, 3);
}

TEST_F(CliTest, BenchAndProfile) {
  const std::vector<std::string> base = {"bench", "--count", "4", "--m", "12", "--n", "3", "--seed", "5",
                                         "--noise", "0.01", "--repetitions", "1"};
  auto a = base, b = base;
  a.insert(a.end(), {"--records", path("ra.csv"), "--profile", path("pa.csv")});
  b.insert(b.end(), {"--records", path("rb.csv"), "--threads", "2"});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  std::ifstream pa(path("pa.csv"));
  std::string header;
  std::getline(pa, header);
  EXPECT_EQ(header, "tau,baseline-ols,qr,spectral");
  const auto prof = run({"profile", "--records", path("rb.csv"), "--metric", "error"});
  ASSERT_EQ(prof.code, 0) << prof.err;
  EXPECT_EQ(prof.out.substr(0, 4), "tau,");

  // Suite directory: pairs of <id>_D / <id>_T files.
  fs::create_directories(path("suite"));
  ASSERT_EQ(run({"generate", "--m", "10", "--n", "3", "--seed", "1", "--prefix", "one_", "--out-dir", path("suite")}).code, 0);
  const auto r = run({"bench", "--suite-dir", path("suite"), "--solvers", "qr", "--repetitions", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\none,qr,ok,"), std::string::npos) << r.out;
}
