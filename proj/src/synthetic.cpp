#include "gcgsr/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "gcgsr/errors.hpp"
#include "gcgsr/noise.hpp"

namespace gcgsr {

Matrix default_seed_matrix() {
  Matrix p(3, 3);
  p << 0.6, 0.1, 0.7,
       0.3, 0.1, 0.5,
       0.0, 1.0, 0.1;
  return p;
}

Matrix kronecker_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix kronecker_probability(const KroneckerConfig& cfg) {
  if (cfg.order < 1) throw ValidationError("kronecker order must be >= 1");
  const Matrix& seed = cfg.seed_matrix;
  if (seed.rows() == 0 || seed.rows() != seed.cols()) {
    throw ValidationError("kronecker seed matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < seed.rows(); ++i) {
    for (Eigen::Index j = 0; j < seed.cols(); ++j) {
      if (!(seed(i, j) >= 0.0 && seed(i, j) <= 1.0)) {
        throw ValidationError("kronecker seed entries must lie in [0, 1]",
                              static_cast<std::size_t>(i),
                              static_cast<std::size_t>(j));
      }
    }
  }
  Matrix p = seed;
  for (int k = 1; k < cfg.order; ++k) p = kronecker_product(p, seed);
  return p;
}

namespace {

Matrix draw_symmetric(const Matrix& p, std::uint64_t seed) {
  const Eigen::Index n = p.rows();
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Matrix w = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double q = std::max(p(i, j), p(j, i));
      if (uniform(engine) < q) {
        w(i, j) = 1.0;
        w(j, i) = 1.0;
      }
    }
  }
  return w;
}

}  // namespace

GraphModel sample_adjacency(const Matrix& probabilities, std::uint64_t rng_seed,
                            const AdjacencyOptions& opts,
                            AdjacencyReport* report) {
  if (probabilities.rows() != probabilities.cols() || probabilities.rows() == 0) {
    throw ValidationError("probability matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < probabilities.rows(); ++i) {
    for (Eigen::Index j = 0; j < probabilities.cols(); ++j) {
      const double q = probabilities(i, j);
      if (!(q >= 0.0 && q <= 1.0)) {
        throw ValidationError("probabilities must lie in [0, 1]",
                              static_cast<std::size_t>(i),
                              static_cast<std::size_t>(j));
      }
    }
  }
  const int attempts = std::max(1, opts.max_attempts);
  std::optional<GraphModel> g;
  int used = 0;
  for (int a = 0; a < attempts; ++a) {
    const std::uint64_t seed = a == 0 ? rng_seed : derive_seed(rng_seed, 1000 + a);
    g = build_graph(draw_symmetric(probabilities, seed));
    used = a + 1;
    if (g->isolated_count() == 0) break;
  }
  if (!g->has_edges() && !opts.allow_empty) {
    throw ValidationError("sampled graph has no edges");
  }
  if (report) {
    report->attempts = used;
    report->isolated_nodes = g->isolated_count();
  }
  return *std::move(g);
}

BandlimitedSignal bandlimited_signal(const EigenPairs& basis,
                                     const BandlimitedConfig& cfg) {
  const auto available = static_cast<std::size_t>(basis.vectors.cols());
  if (cfg.bandwidth < 1 || cfg.bandwidth > available) {
    throw ValidationError("bandwidth must lie in [1, " +
                          std::to_string(available) + "]");
  }
  const auto w = static_cast<Eigen::Index>(cfg.bandwidth);
  std::mt19937_64 engine(cfg.rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  BandlimitedSignal out;
  out.coefficients.resize(w);
  for (Eigen::Index i = 0; i < w; ++i) out.coefficients[i] = normal(engine);
  out.eigenvalues = basis.values.head(w);
  out.x = basis.vectors.leftCols(w) * out.coefficients;
  return out;
}

BandlimitedSignal bandlimited_signal(const GraphModel& g,
                                     const BandlimitedConfig& cfg) {
  if (cfg.bandwidth < 1 || cfg.bandwidth > g.n_nodes()) {
    throw ValidationError("bandwidth must lie in [1, " +
                          std::to_string(g.n_nodes()) + "]");
  }
  return bandlimited_signal(smallest_eigenvectors(g, cfg.bandwidth), cfg);
}

SamplingMask choose_mask(std::size_t n, std::size_t m, std::uint64_t rng_seed) {
  if (m < 1 || m > n) {
    throw ValidationError("mask size must lie in [1, " + std::to_string(n) + "]");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 engine(rng_seed);
  std::shuffle(idx.begin(), idx.end(), engine);
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return SamplingMask(n, idx);
}

}  // namespace gcgsr
