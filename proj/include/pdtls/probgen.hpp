#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pdtls/matrix.hpp"
#include "pdtls/model.hpp"

namespace pdtls::probgen {

/// Parameters of a generated instance.
///
/// spectrum_a holds the r nonzero eigenvalues of A = DᵀD. For rank-deficient
/// instances spectrum_b holds the r nonzero eigenvalues of B = TᵀT; for
/// full-rank instances it holds the eigenvalues of the planted solution x₀.
/// Both are strictly positive and descending.
struct GeneratorSpec {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t r = 0;
  std::uint64_t seed = 0;
  double noise_level = 0.0;
  std::vector<double> spectrum_a;
  std::vector<double> spectrum_b;
};

/// Spec with spectra drawn log-uniformly from [0.1, 10] (sorted descending),
/// seeded by `seed`.
GeneratorSpec make_spec(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed,
                        double noise_level = 0.0);

/// Throws InvalidInputError unless m ≥ n ≥ r ≥ 1, noise ≥ 0 and both spectra
/// have r strictly positive descending entries.
void validate(const GeneratorSpec& spec);

struct GeneratedProblem {
  ProblemInstance problem;
  std::optional<Matrix> x0;  // planted SPD solution (full-rank instances)
};

/// splitmix64 step: the documented rule for deriving independent child seeds.
/// Child i of seed s is splitmix64(s + i·0x9E3779B97F4A7C15).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// m×n matrix of independent N(0, 1) entries.
Matrix standard_normal(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Orthonormal k×k matrix from the QR factorization (nonnegative diagonal
/// convention) of a seeded Gaussian matrix.
Matrix random_orthonormal(std::size_t k, std::uint64_t seed);

/// Random rotation: orthonormal with determinant +1.
Matrix random_rotation(std::size_t k, std::uint64_t seed);

/// D with eigenvalues of DᵀD equal to spectrum_a and a random SPD x₀ with
/// eigenvalues spectrum_b; T = D·x₀, then relative noise of size noise_level on T.
GeneratedProblem gen_full_rank(const GeneratorSpec& spec);

/// Rank-r instance satisfying the sufficient consistency condition:
/// D = Ū_d·[[diag(√spectrum_a), 0], [0, 0]]·Uᵀ, V = U·diag(Q, P) with random
/// rotations Q, P, and T = Ū·[[diag(√spectrum_b), 0], [0, 0]]·Vᵀ. Nonzero
/// noise_level is applied afterwards through inject_noise.
ProblemInstance gen_consistent_rankdef(const GeneratorSpec& spec);

/// d' = d + ε·‖d‖_F·N_d/‖N_d‖_F, and likewise for t.
ProblemInstance inject_noise(const ProblemInstance& p, double epsilon, std::uint64_t seed);

/// Dispatches to gen_full_rank (r = n) or gen_consistent_rankdef (r < n).
GeneratedProblem generate(const GeneratorSpec& spec);

}  // namespace pdtls::probgen
