#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <vector>

namespace gcgsr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Undirected weighted graph with its degree vector and combinatorial
// Laplacian L = D - W. Immutable once built; all invariants are checked in
// build_graph.
class GraphModel {
 public:
  std::size_t n_nodes() const { return static_cast<std::size_t>(w_.rows()); }
  const Matrix& adjacency() const { return w_; }
  const Vector& degree() const { return d_; }
  const Matrix& laplacian() const { return l_; }
  // Number of undirected edges (pairs i < j with W_ij > 0).
  std::size_t edge_count() const { return edges_; }
  bool has_edges() const { return edges_ > 0; }
  std::size_t isolated_count() const;

 private:
  friend GraphModel build_graph(const Matrix& adjacency);
  GraphModel() = default;

  Matrix w_;
  Vector d_;
  Matrix l_;
  std::size_t edges_ = 0;
};

// Symmetry is checked to 1e-12 absolute; the stored adjacency is (W + W^T)/2.
// Throws ValidationError naming the offending (row, col).
GraphModel build_graph(const Matrix& adjacency);

// x^T L x.
double smoothness(const GraphModel& g, const Vector& x);

// Largest Laplacian eigenvalue by power iteration from the deterministic
// start vector 1 + 0.5 e_0. Throws ValidationError on an edgeless graph and
// ConvergenceError after max_iter iterations.
double spectral_radius(const GraphModel& g, double tol = 1e-12,
                       int max_iter = 200000);

struct EigenPairs {
  Vector values;   // ascending
  Matrix vectors;  // columns; first nonzero entry of each is positive
};

// The k algebraically smallest eigenpairs of L (dense decomposition).
EigenPairs smallest_eigenvectors(const GraphModel& g, std::size_t k);

// Diagonal of the sampling operator: which nodes are observed.
class SamplingMask {
 public:
  SamplingMask(std::size_t n_nodes, const std::vector<std::size_t>& sampled);
  static SamplingMask full(std::size_t n_nodes);

  std::size_t n_nodes() const { return static_cast<std::size_t>(diag_.size()); }
  std::size_t m() const { return m_; }
  bool sampled(std::size_t i) const { return diag_[static_cast<Eigen::Index>(i)] != 0.0; }
  // 0/1 vector, usable directly as Phi's diagonal.
  const Vector& diagonal() const { return diag_; }
  std::vector<std::size_t> indices() const;

 private:
  Vector diag_;
  std::size_t m_ = 0;
};

// Plain N x N comma separated reals, no header.
Matrix load_matrix_csv(const std::filesystem::path& path);
void save_matrix_csv(const std::filesystem::path& path, const Matrix& m);

}  // namespace gcgsr
