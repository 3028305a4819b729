#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "pdtls/errors.hpp"
#include "pdtls/matrix_io.hpp"
#include "support.hpp"

using namespace pdtls;
using namespace pdtls::io;

TEST(MatrixIo, RoundTripBothFormats) {
  std::mt19937_64 rng(1);
  const Matrix m = oracle::gaussian(4, 3, rng);
  for (auto fmt : {MatrixFormat::mtx, MatrixFormat::csv}) {
    std::stringstream ss;
    write_matrix(ss, m, fmt);
    EXPECT_EQ(read_matrix(ss, fmt), m);
  }
}

TEST(MatrixIo, MatrixMarketIsColumnMajor) {
  std::stringstream ss("%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n3\n2\n4\n");
  EXPECT_EQ(read_matrix(ss, MatrixFormat::mtx), (Matrix{{1, 2}, {3, 4}}));
}

TEST(MatrixIo, Rejections) {
  std::stringstream no_header("2 2\n1\n2\n3\n4\n");
  EXPECT_THROW(read_matrix(no_header, MatrixFormat::mtx), InvalidInputError);
  std::stringstream short_body("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n");
  EXPECT_THROW(read_matrix(short_body, MatrixFormat::mtx), InvalidInputError);
  std::stringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_matrix(ragged, MatrixFormat::csv), InvalidInputError);
  std::stringstream nan_cell("1,nan\n3,4\n");
  EXPECT_THROW(read_matrix(nan_cell, MatrixFormat::csv), InvalidInputError);
  std::stringstream junk("1,x\n");
  EXPECT_THROW(read_matrix(junk, MatrixFormat::csv), InvalidInputError);
  EXPECT_THROW(read_matrix(std::filesystem::path("/nonexistent/m.mtx")), InvalidInputError);
  EXPECT_THROW(format_from_path("m.txt"), InvalidInputError);
  EXPECT_THROW(parse_format("json"), InvalidInputError);
}

TEST(MatrixIo, FormatDetection) {
  EXPECT_EQ(format_from_path("a/b.mtx"), MatrixFormat::mtx);
  EXPECT_EQ(format_from_path("b.csv"), MatrixFormat::csv);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}
