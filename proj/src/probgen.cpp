#include "pdtls/probgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "pdtls/errors.hpp"
#include "pdtls/linalg.hpp"

namespace pdtls::probgen {
namespace {

// Child-seed slots. Fixed so that the same spec reproduces the same matrices.
enum Stream : std::uint64_t {
  kSpectrumA = 1,
  kSpectrumB = 2,
  kDataLeft = 3,
  kBasis = 4,
  kRotationQ = 5,
  kRotationP = 6,
  kTargetLeft = 7,
  kSolutionBasis = 8,
  kNoise = 9,
};

std::vector<double> log_uniform_descending(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(-1.0, 1.0);
  std::vector<double> v(k);
  for (auto& x : v) x = std::pow(10.0, expo(rng));
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

void check_spectrum(const std::vector<double>& s, std::size_t r, const char* name) {
  if (s.size() != r) {
    throw InvalidInputError(std::string(name) + " must have " + std::to_string(r) + " entries");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0) || !std::isfinite(s[i])) {
      throw InvalidInputError(std::string(name) + " entries must be positive and finite");
    }
    if (i > 0 && s[i] > s[i - 1]) throw InvalidInputError(std::string(name) + " must be descending");
  }
}

// First `cols` columns of `q`, each scaled by sqrt(spectrum[j]).
Matrix scaled_columns(const Matrix& q, const std::vector<double>& spectrum) {
  Matrix out = q.block(0, 0, q.rows(), spectrum.size());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= std::sqrt(spectrum[j]);
  }
  return out;
}

// Gaussian elimination with partial pivoting.
double determinant(Matrix a) {
  const std::size_t k = a.rows();
  double det = 1.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < k; ++i) {
      if (std::abs(a(i, c)) > std::abs(a(piv, c))) piv = i;
    }
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t j = 0; j < k; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < k; ++i) {
      const double f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < k; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + index * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GeneratorSpec make_spec(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed,
                        double noise_level) {
  GeneratorSpec spec{m, n, r, seed, noise_level, {}, {}};
  spec.spectrum_a = log_uniform_descending(r, derive_seed(seed, kSpectrumA));
  spec.spectrum_b = log_uniform_descending(r, derive_seed(seed, kSpectrumB));
  validate(spec);
  return spec;
}

void validate(const GeneratorSpec& spec) {
  if (spec.r < 1 || spec.n < spec.r || spec.m < spec.n) {
    throw InvalidInputError("generator spec needs m >= n >= r >= 1, got m=" + std::to_string(spec.m) +
                            " n=" + std::to_string(spec.n) + " r=" + std::to_string(spec.r));
  }
  if (!(spec.noise_level >= 0.0) || !std::isfinite(spec.noise_level)) {
    throw InvalidInputError("noise level must be a finite nonnegative number");
  }
  check_spectrum(spec.spectrum_a, spec.r, "spectrum_a");
  check_spectrum(spec.spectrum_b, spec.r, "spectrum_b");
}

Matrix standard_normal(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

Matrix random_orthonormal(std::size_t k, std::uint64_t seed) {
  if (k == 0) return Matrix{};
  return linalg::qr_decompose(standard_normal(k, k, seed)).q;
}

Matrix random_rotation(std::size_t k, std::uint64_t seed) {
  if (k < 1) throw InvalidInputError("random_rotation: k must be >= 1");
  Matrix q = random_orthonormal(k, seed);
  if (determinant(q) < 0.0) {
    for (std::size_t i = 0; i < k; ++i) q(i, k - 1) = -q(i, k - 1);
  }
  return q;
}

GeneratedProblem gen_full_rank(const GeneratorSpec& spec) {
  validate(spec);
  if (spec.r != spec.n) throw InvalidInputError("gen_full_rank requires r = n");
  const std::size_t m = spec.m;
  const std::size_t n = spec.n;
  const Matrix left = random_orthonormal(m, derive_seed(spec.seed, kDataLeft));
  const Matrix basis = random_orthonormal(n, derive_seed(spec.seed, kBasis));
  const Matrix d = matmul_nt(scaled_columns(left, spec.spectrum_a), basis);

  const Matrix w = random_orthonormal(n, derive_seed(spec.seed, kSolutionBasis));
  // x0 = W·diag(spectrum_b)·Wᵀ = (W·diag(√λ))(…)ᵀ
  const Matrix half = scaled_columns(w, spec.spectrum_b);
  Matrix x0 = symmetrized(matmul_nt(half, half));

  Matrix t = matmul(d, x0);
  if (spec.noise_level > 0.0) {
    const Matrix noise = standard_normal(m, n, derive_seed(spec.seed, kNoise));
    t += (spec.noise_level * frobenius_norm(t) / frobenius_norm(noise)) * noise;
  }
  return GeneratedProblem{ProblemInstance(d, std::move(t), n), std::move(x0)};
}

ProblemInstance gen_consistent_rankdef(const GeneratorSpec& spec) {
  validate(spec);
  if (spec.r >= spec.n) throw InvalidInputError("gen_consistent_rankdef requires r < n");
  const std::size_t m = spec.m;
  const std::size_t n = spec.n;
  const std::size_t r = spec.r;

  const Matrix u = random_orthonormal(n, derive_seed(spec.seed, kBasis));
  const Matrix left_d = random_orthonormal(m, derive_seed(spec.seed, kDataLeft));
  const Matrix d = matmul_nt(scaled_columns(left_d, spec.spectrum_a), u.block(0, 0, n, r));

  // V = U·diag(Q, P); only V_r = U_r·Q enters T.
  const Matrix q = random_rotation(r, derive_seed(spec.seed, kRotationQ));
  const Matrix p = random_rotation(n - r, derive_seed(spec.seed, kRotationP));
  Matrix rot(n, n);
  rot.set_block(0, 0, q);
  rot.set_block(r, r, p);
  const Matrix v = matmul(u, rot);

  const Matrix left_t = random_orthonormal(m, derive_seed(spec.seed, kTargetLeft));
  const Matrix t = matmul_nt(scaled_columns(left_t, spec.spectrum_b), v.block(0, 0, n, r));

  ProblemInstance out(d, t, r);
  if (spec.noise_level > 0.0) return inject_noise(out, spec.noise_level, derive_seed(spec.seed, kNoise));
  return out;
}

ProblemInstance inject_noise(const ProblemInstance& p, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw InvalidInputError("inject_noise: epsilon must be >= 0");
  if (epsilon == 0.0) return p;
  auto perturb = [epsilon](const Matrix& a, std::uint64_t s) {
    const double norm = frobenius_norm(a);
    if (norm == 0.0) return a;
    const Matrix noise = standard_normal(a.rows(), a.cols(), s);
    return a + (epsilon * norm / frobenius_norm(noise)) * noise;
  };
  return ProblemInstance(perturb(p.d(), derive_seed(seed, 0)), perturb(p.t(), derive_seed(seed, 1)),
                         p.declared_rank());
}

GeneratedProblem generate(const GeneratorSpec& spec) {
  if (spec.r == spec.n) return gen_full_rank(spec);
  return GeneratedProblem{gen_consistent_rankdef(spec), std::nullopt};
}

}  // namespace pdtls::probgen
