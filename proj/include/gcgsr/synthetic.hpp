#pragma once

#include <cstdint>

#include "gcgsr/graph.hpp"

namespace gcgsr {

// 3x3 seed used for the 81-node benchmark graph.
Matrix default_seed_matrix();

struct KroneckerConfig {
  Matrix seed_matrix = default_seed_matrix();
  int order = 4;
  std::uint64_t rng_seed = 1;
};

Matrix kronecker_product(const Matrix& a, const Matrix& b);

// seed_matrix^(x order). N = rows(seed)^order.
Matrix kronecker_probability(const KroneckerConfig& cfg);

struct AdjacencyOptions {
  // When false an edgeless draw is rejected with ValidationError.
  bool allow_empty = false;
  // Redraw (with a derived seed) while isolated nodes remain.
  int max_attempts = 10;
};

struct AdjacencyReport {
  int attempts = 0;
  std::size_t isolated_nodes = 0;
};

// One Bernoulli(max(P_ij, P_ji)) draw per unordered pair i < j, mirrored,
// zero diagonal.
GraphModel sample_adjacency(const Matrix& probabilities, std::uint64_t rng_seed,
                            const AdjacencyOptions& opts = {},
                            AdjacencyReport* report = nullptr);

struct BandlimitedConfig {
  std::size_t bandwidth = 25;
  std::uint64_t rng_seed = 1;
};

struct BandlimitedSignal {
  Vector x;
  Vector coefficients;  // standard normal, one per basis vector
  Vector eigenvalues;   // of the basis vectors used
};

// x = sum_{i < bandwidth} c_i u_i over the smallest-eigenvalue Laplacian
// eigenvectors u_i, c_i ~ N(0, 1).
BandlimitedSignal bandlimited_signal(const GraphModel& g,
                                     const BandlimitedConfig& cfg);
// Same, reusing a precomputed basis (at least `bandwidth` columns).
BandlimitedSignal bandlimited_signal(const EigenPairs& basis,
                                     const BandlimitedConfig& cfg);

// Uniform m-subset of {0..n-1}.
SamplingMask choose_mask(std::size_t n, std::size_t m, std::uint64_t rng_seed);

}  // namespace gcgsr
