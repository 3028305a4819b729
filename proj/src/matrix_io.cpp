#include "pdtls/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pdtls/errors.hpp"

namespace pdtls::io {
namespace {

constexpr std::string_view kMtxBanner = "%%MatrixMarket matrix array real general";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
    throw InvalidInputError("line " + std::to_string(line) + ": cannot parse number '" +
                            std::string(token) + "'");
  }
  if (!std::isfinite(v)) throw InvalidInputError("line " + std::to_string(line) + ": non-finite value");
  return v;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Matrix read_mtx(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw InvalidInputError("empty MatrixMarket file");
  ++lineno;
  {
    std::istringstream banner(lower(line));
    std::string tag, object, layout, field, symmetry;
    banner >> tag >> object >> layout >> field >> symmetry;
    if (tag != "%%matrixmarket" || object != "matrix" || layout != "array" ||
        (field != "real" && field != "double") || symmetry != "general") {
      throw InvalidInputError("unsupported MatrixMarket header: '" + line +
                              "' (expected dense array real general)");
    }
  }
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool have_size = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '%') continue;
    if (!have_size) {
      std::istringstream dims{std::string(t)};
      long long r = -1;
      long long c = -1;
      std::string extra;
      if (!(dims >> r >> c) || (dims >> extra) || r < 0 || c < 0) {
        throw InvalidInputError("line " + std::to_string(lineno) + ": bad size line");
      }
      rows = static_cast<std::size_t>(r);
      cols = static_cast<std::size_t>(c);
      values.reserve(rows * cols);
      have_size = true;
      continue;
    }
    values.push_back(parse_double(t, lineno));
  }
  if (!have_size) throw InvalidInputError("MatrixMarket file has no size line");
  if (values.size() != rows * cols) {
    throw InvalidInputError("MatrixMarket file declares " + std::to_string(rows * cols) +
                            " values but holds " + std::to_string(values.size()));
  }
  Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = values[j * rows + i];
  }
  return m;
}

Matrix read_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) continue;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = t.find(',', start);
      const auto token = t.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      values.push_back(parse_double(token, lineno));
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw InvalidInputError("line " + std::to_string(lineno) + ": expected " + std::to_string(cols) +
                              " columns, found " + std::to_string(count));
    }
    ++rows;
  }
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MatrixFormat parse_format(std::string_view name) {
  if (name == "mtx") return MatrixFormat::mtx;
  if (name == "csv") return MatrixFormat::csv;
  throw InvalidInputError("unknown matrix format '" + std::string(name) + "' (mtx or csv)");
}

MatrixFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".mtx") return MatrixFormat::mtx;
  if (ext == ".csv") return MatrixFormat::csv;
  throw InvalidInputError("cannot infer matrix format from '" + path.string() +
                          "'; use .mtx/.csv or --format");
}

Matrix read_matrix(std::istream& in, MatrixFormat format) {
  return format == MatrixFormat::mtx ? read_mtx(in) : read_csv(in);
}

Matrix read_matrix(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open '" + path.string() + "'");
  return read_matrix(in, format);
}

Matrix read_matrix(const std::filesystem::path& path) { return read_matrix(path, format_from_path(path)); }

void write_matrix(std::ostream& out, const Matrix& m, MatrixFormat format) {
  if (format == MatrixFormat::mtx) {
    out << kMtxBanner << '\n' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      for (std::size_t i = 0; i < m.rows(); ++i) out << format_double(m(i, j)) << '\n';
    }
    return;
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInputError("cannot write '" + path.string() + "'");
  write_matrix(out, m, format);
  if (!out) throw InvalidInputError("write failed for '" + path.string() + "'");
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  write_matrix(path, m, format_from_path(path));
}

}  // namespace pdtls::io
