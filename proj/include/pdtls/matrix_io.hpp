#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "pdtls/matrix.hpp"

namespace pdtls::io {

/// mtx: MatrixMarket dense array ("%%MatrixMarket matrix array real general",
/// values column-major, one per line). csv: headerless, one row per line.
enum class MatrixFormat { mtx, csv };

/// From the file extension (.mtx / .csv); InvalidInputError otherwise.
MatrixFormat format_from_path(const std::filesystem::path& path);
MatrixFormat parse_format(std::string_view name);

Matrix read_matrix(std::istream& in, MatrixFormat format);
Matrix read_matrix(const std::filesystem::path& path, MatrixFormat format);
Matrix read_matrix(const std::filesystem::path& path);

/// Values are printed with 17 significant digits so that reading back yields
/// the identical doubles.
void write_matrix(std::ostream& out, const Matrix& m, MatrixFormat format);
void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

/// Shortest round-trip text of a double ("%.17g").
std::string format_double(double v);

}  // namespace pdtls::io
