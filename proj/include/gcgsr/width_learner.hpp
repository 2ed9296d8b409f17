#pragma once

#include "gcgsr/graph.hpp"
#include "gcgsr/kernel.hpp"

namespace gcgsr {

// MAP estimate of per-node inverse kernel widths theta_i = 1 / beta_i under
// a generalized Gamma prior, refreshed by one EM step per call.
struct WidthLearnerState {
  double alpha = 2.0;
  double d0 = 1e-6;
  double a0 = 1e-6;
  double d = 0.0;  // 0 until the first update
  Vector a;
  Vector theta;
  Vector beta;

  std::size_t size() const { return static_cast<std::size_t>(beta.size()); }
  PerNodeKernel kernel() const { return PerNodeKernel(alpha, beta); }
};

inline constexpr double kDefaultD0 = 1e-6;
inline constexpr double kDefaultA0 = 1e-6;

// theta = beta = initial_beta^-1 / initial_beta before the first update.
// Throws ValidationError on nonpositive parameters or when a0^-alpha is not
// representable.
WidthLearnerState init_learner(std::size_t n_nodes, double alpha,
                               double d0 = kDefaultD0, double a0 = kDefaultA0,
                               double initial_beta = 1.0);

// d <- d0 + 1
// a_i <- (|e_i|^alpha + a0^-alpha)^(-1/alpha)
// theta_i <- a_i Gamma((d + 1)/alpha) / Gamma(d/alpha), beta_i <- 1/theta_i
WidthLearnerState update_widths(const WidthLearnerState& s, const Vector& e);

// In-place form used inside the solver loop.
void update_widths_inplace(WidthLearnerState& s, const Vector& e);

}  // namespace gcgsr
