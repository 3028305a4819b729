#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "pdtls/matrix.hpp"

namespace pdtls::oracle {

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline Matrix from_eigen(const Eigen::MatrixXd& e) {
  Matrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

inline Matrix gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

// Well conditioned SPD matrix: GGᵀ/n + I.
inline Matrix random_spd(std::size_t n, std::mt19937_64& rng) {
  const Eigen::MatrixXd g = to_eigen(gaussian(n, n, rng));
  Eigen::MatrixXd s = g * g.transpose() / double(n) + Eigen::MatrixXd::Identity(n, n);
  return from_eigen(s);
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
  const Eigen::MatrixXd ea = to_eigen(a), eb = to_eigen(b);
  return (ea - eb).norm() / std::max(1.0, eb.norm());
}

// Oracle for the KKT minimizer: X = A^{-1/2} (A^{1/2} B A^{1/2})^{1/2} A^{-1/2}.
inline Eigen::MatrixXd geometric_mean_oracle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(a);
  const Eigen::MatrixXd a_half = ea.operatorSqrt();
  const Eigen::MatrixXd a_inv_half = ea.operatorInverseSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mid(a_half * b * a_half);
  return a_inv_half * mid.operatorSqrt() * a_inv_half;
}

}  // namespace pdtls::oracle
