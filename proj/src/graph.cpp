#include "gcgsr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "gcgsr/errors.hpp"

namespace gcgsr {

namespace {
constexpr double kSymmetryTol = 1e-12;
}

std::size_t GraphModel::isolated_count() const {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < d_.size(); ++i) {
    if (d_[i] == 0.0) ++count;
  }
  return count;
}

GraphModel build_graph(const Matrix& adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw ValidationError("adjacency must be square, got " +
                          std::to_string(adjacency.rows()) + "x" +
                          std::to_string(adjacency.cols()));
  }
  const Eigen::Index n = adjacency.rows();
  if (n == 0) throw ValidationError("adjacency must have at least one node");

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double wij = adjacency(i, j);
      const auto r = static_cast<std::size_t>(i);
      const auto c = static_cast<std::size_t>(j);
      if (!std::isfinite(wij)) {
        throw ValidationError("adjacency entry is not finite", r, c);
      }
      if (wij < 0.0) {
        throw ValidationError("adjacency entry is negative", r, c);
      }
      if (i == j && wij != 0.0) {
        throw ValidationError("adjacency diagonal must be zero", r, c);
      }
      if (j > i && std::abs(wij - adjacency(j, i)) > kSymmetryTol) {
        throw ValidationError("adjacency is not symmetric", r, c);
      }
    }
  }

  GraphModel g;
  g.w_ = 0.5 * (adjacency + adjacency.transpose());
  g.d_ = g.w_.rowwise().sum();
  g.l_ = -g.w_;
  g.l_.diagonal() += g.d_;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (g.w_(i, j) > 0.0) ++g.edges_;
    }
  }
  return g;
}

double smoothness(const GraphModel& g, const Vector& x) {
  require_same_size(g.n_nodes(), static_cast<std::size_t>(x.size()),
                    "smoothness");
  return x.dot(g.laplacian() * x);
}

double spectral_radius(const GraphModel& g, double tol, int max_iter) {
  if (!g.has_edges()) {
    throw ValidationError("spectral_radius: graph has no edges");
  }
  const Matrix& l = g.laplacian();
  const Eigen::Index n = l.rows();

  // Rayleigh quotients of power iterates on a PSD matrix never decrease, and
  // e_i^T L e_i = D_i, so a result below max degree means the start vector
  // missed the top eigenspace.
  const double max_degree = g.degree().maxCoeff();

  auto iterate = [&](Vector v) {
    v.normalize();
    Vector w(n);
    double rq = 0.0;
    int stable = 0;
    for (int it = 0; it < max_iter; ++it) {
      w.noalias() = l * v;
      const double next = v.dot(w);
      const double norm = w.norm();
      if (norm == 0.0) return 0.0;
      v = w / norm;
      if (std::abs(next - rq) <= tol * std::abs(next)) {
        if (++stable >= 2) return next;
      } else {
        stable = 0;
      }
      rq = next;
    }
    throw ConvergenceError("spectral_radius: power iteration did not converge",
                           rq);
  };

  Vector start = Vector::Ones(n);
  start[0] += 0.5;
  double lambda = iterate(start);
  if (lambda < max_degree * (1.0 - 1e-9)) {
    Eigen::Index top = 0;
    g.degree().maxCoeff(&top);
    Vector alt = Vector::Zero(n);
    alt[top] = 1.0;
    lambda = iterate(alt);
  }
  return lambda;
}

EigenPairs smallest_eigenvectors(const GraphModel& g, std::size_t k) {
  const std::size_t n = g.n_nodes();
  if (k < 1 || k > n) {
    throw ValidationError("smallest_eigenvectors: k must lie in [1, " +
                          std::to_string(n) + "], got " + std::to_string(k));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g.laplacian());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("smallest_eigenvectors: eigensolver failed");
  }
  const auto kk = static_cast<Eigen::Index>(k);
  EigenPairs out{solver.eigenvalues().head(kk),
                 solver.eigenvectors().leftCols(kk)};
  for (Eigen::Index c = 0; c < kk; ++c) {
    for (Eigen::Index r = 0; r < out.vectors.rows(); ++r) {
      const double v = out.vectors(r, c);
      if (std::abs(v) > 1e-12) {
        if (v < 0.0) out.vectors.col(c) *= -1.0;
        break;
      }
    }
  }
  return out;
}

SamplingMask::SamplingMask(std::size_t n_nodes,
                           const std::vector<std::size_t>& sampled)
    : diag_(Vector::Zero(static_cast<Eigen::Index>(n_nodes))) {
  if (n_nodes == 0) throw ValidationError("SamplingMask: n_nodes must be >= 1");
  for (std::size_t i : sampled) {
    if (i >= n_nodes) {
      throw ValidationError("SamplingMask: index out of range", i);
    }
    diag_[static_cast<Eigen::Index>(i)] = 1.0;
  }
  m_ = static_cast<std::size_t>(diag_.sum());
  if (m_ == 0) throw ValidationError("SamplingMask: at least one node must be sampled");
}

SamplingMask SamplingMask::full(std::size_t n_nodes) {
  std::vector<std::size_t> all(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) all[i] = i;
  return SamplingMask(n_nodes, all);
}

std::vector<std::size_t> SamplingMask::indices() const {
  std::vector<std::size_t> out;
  out.reserve(m_);
  for (Eigen::Index i = 0; i < diag_.size(); ++i) {
    if (diag_[i] != 0.0) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
          throw std::invalid_argument(cell);
        }
      } catch (const std::exception&) {
        throw ValidationError(path.string() + ": bad number '" + cell +
                                  "' on line " + std::to_string(line_no),
                              line_no - 1);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(path.string() + ": empty matrix");
  const std::size_t cols = rows.front().size();
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw ValidationError(path.string() + ": ragged row " + std::to_string(r + 1),
                            r);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
}

}  // namespace gcgsr
