#include <doctest.h>

#include <random>

#include "gcgsr/errors.hpp"
#include "gcgsr/synthetic.hpp"
#include "oracles.hpp"

using namespace gcgsr;

TEST_CASE("default seed matrix") {
  Matrix p0(3, 3);
  p0 << 0.6, 0.1, 0.7, 0.3, 0.1, 0.5, 0.0, 1.0, 0.1;
  CHECK(default_seed_matrix() == p0);
}

TEST_CASE("kronecker probability") {
  KroneckerConfig one;
  one.order = 1;
  CHECK(kronecker_probability(one) == default_seed_matrix());
  const Matrix p = kronecker_probability({default_seed_matrix(), 4, 1});
  CHECK(p.rows() == 81);
  CHECK(p.cols() == 81);
  CHECK(p(0, 0) == doctest::Approx(0.1296).epsilon(1e-14));
  // Entry (i, j) is the product of seed entries over base-3 digits.
  const Matrix p0 = default_seed_matrix();
  for (int i : {5, 17, 80}) {
    for (int j : {0, 33, 79}) {
      double prod = 1.0;
      int a = i;
      int b = j;
      for (int d = 0; d < 4; ++d) {
        prod *= p0(a % 3, b % 3);
        a /= 3;
        b /= 3;
      }
      CHECK(p(i, j) == doctest::Approx(prod).epsilon(1e-14));
    }
  }
  KroneckerConfig bad;
  bad.order = 0;
  CHECK_THROWS_AS(kronecker_probability(bad), ValidationError);
  bad.order = 2;
  bad.seed_matrix = Matrix::Constant(3, 3, 1.5);
  CHECK_THROWS_AS(kronecker_probability(bad), ValidationError);
}

TEST_CASE("adjacency sampling extremes") {
  const GraphModel g = sample_adjacency(Matrix::Ones(6, 6), 1);
  CHECK(g.edge_count() == 15);
  CHECK_THROWS_AS(sample_adjacency(Matrix::Zero(4, 4), 1), ValidationError);
  AdjacencyOptions allow;
  allow.allow_empty = true;
  AdjacencyReport report;
  const GraphModel e = sample_adjacency(Matrix::Zero(4, 4), 1, allow, &report);
  CHECK_FALSE(e.has_edges());
  CHECK(report.attempts == 10);
  CHECK(report.isolated_nodes == 4);
  CHECK_THROWS_AS(sample_adjacency(Matrix::Constant(3, 3, -0.1), 1), ValidationError);
}

TEST_CASE("edge density tracks the symmetrised probabilities") {
  const Matrix p = kronecker_probability({default_seed_matrix(), 4, 1});
  // Oracle: mean over i < j of max(P_ij, P_ji).
  double expected = 0.0;
  int pairs = 0;
  for (int i = 0; i < 81; ++i) {
    for (int j = i + 1; j < 81; ++j) {
      expected += std::max(p(i, j), p(j, i));
      ++pairs;
    }
  }
  expected /= pairs;
  for (std::uint64_t seed : {1, 2, 3}) {
    const GraphModel g = sample_adjacency(p, seed);
    const double density = static_cast<double>(g.edge_count()) / pairs;
    CHECK(density >= 0.75 * expected);
    CHECK(density <= 1.25 * expected);
  }
}

TEST_CASE("property: sampled graphs satisfy graph invariants") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + static_cast<int>(rng() % 30);
    Matrix p(n, n);
    for (int i = 0; i < n; ++i) for (int j = 0; j < n; ++j) p(i, j) = u(rng);
    const GraphModel g = sample_adjacency(p, rng());
    const Matrix& w = g.adjacency();
    CHECK(w == w.transpose());
    CHECK(w.diagonal().isZero(0.0));
    CHECK((w.array() == 0.0 || w.array() == 1.0).all());
    CHECK((g.laplacian() * Vector::Ones(n)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("isolated nodes trigger a redraw") {
  // Node 2 is connected with probability 0.05 only.
  Matrix p = Matrix::Constant(3, 3, 0.05);
  p(0, 1) = p(1, 0) = 1.0;
  AdjacencyReport report;
  sample_adjacency(p, 5, {}, &report);
  CHECK(report.attempts >= 1);
  CHECK(report.attempts <= 10);
  if (report.attempts < 10) CHECK(report.isolated_nodes == 0);
}

TEST_CASE("bandlimited signal examples") {
  // Seed 5 draws a connected graph on the first attempt.
  const GraphModel g = sample_adjacency(kronecker_probability({default_seed_matrix(), 4, 1}), 5);
  REQUIRE(g.isolated_count() == 0);
  REQUIRE(smallest_eigenvectors(g, 2).values[1] > 1e-8);
  const BandlimitedSignal one = bandlimited_signal(g, {1, 3});
  CHECK((one.x.array() - one.x[0]).abs().maxCoeff() <= 1e-10 * std::abs(one.x[0]));
  const EigenPairs all = smallest_eigenvectors(g, 81);
  const BandlimitedSignal s = bandlimited_signal(all, {25, 4});
  const Vector outside = all.vectors.rightCols(81 - 25).transpose() * s.x;
  CHECK(outside.norm() <= 1e-8 * s.x.norm());
  const BandlimitedSignal full = bandlimited_signal(all, {81, 4});
  CHECK(full.coefficients.size() == 81);
  CHECK((all.vectors.transpose() * full.x - full.coefficients).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK_THROWS_AS(bandlimited_signal(g, {0, 1}), ValidationError);
  CHECK_THROWS_AS(bandlimited_signal(g, {82, 1}), ValidationError);
}

TEST_CASE("property: spectral identity of bandlimited signals") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GraphModel g = sample_adjacency(kronecker_probability({default_seed_matrix(), 4, seed}), seed);
    const BandlimitedSignal s = bandlimited_signal(g, {25, seed + 100});
    const double lhs = oracle::edge_sum(g.adjacency(), s.x);
    const double rhs = (s.eigenvalues.array() * s.coefficients.array().square()).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("mask selection") {
  CHECK(choose_mask(10, 10, 1).m() == 10);
  CHECK(choose_mask(10, 1, 1).m() == 1);
  CHECK(choose_mask(81, 70, 9).indices() == choose_mask(81, 70, 9).indices());
  CHECK(choose_mask(81, 70, 9).indices() != choose_mask(81, 70, 10).indices());
  CHECK_THROWS_AS(choose_mask(5, 0, 1), ValidationError);
  CHECK_THROWS_AS(choose_mask(5, 6, 1), ValidationError);
  // Roughly uniform inclusion frequencies.
  std::vector<int> counts(20, 0);
  for (std::uint64_t s = 0; s < 2000; ++s) {
    for (std::size_t i : choose_mask(20, 5, s).indices()) ++counts[i];
  }
  for (int c : counts) CHECK(std::abs(c - 500) < 100);
}
