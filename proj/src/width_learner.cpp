#include "gcgsr/width_learner.hpp"

#include <cmath>

#include "gcgsr/errors.hpp"
#include "gcgsr/special_functions.hpp"

namespace gcgsr {

WidthLearnerState init_learner(std::size_t n_nodes, double alpha, double d0,
                               double a0, double initial_beta) {
  if (n_nodes < 1) throw ValidationError("init_learner: n_nodes must be >= 1");
  if (!(alpha > 0.0)) throw ValidationError("init_learner: alpha must be positive");
  if (!(d0 > 0.0)) throw ValidationError("init_learner: d0 must be positive");
  if (!(a0 > 0.0)) throw ValidationError("init_learner: a0 must be positive");
  if (!(initial_beta > 0.0)) {
    throw ValidationError("init_learner: initial beta must be positive");
  }
  const double prior_term = std::pow(a0, -alpha);
  if (!std::isfinite(prior_term)) {
    throw ValidationError("init_learner: a0^-alpha overflows");
  }
  const auto n = static_cast<Eigen::Index>(n_nodes);
  WidthLearnerState s;
  s.alpha = alpha;
  s.d0 = d0;
  s.a0 = a0;
  s.d = 0.0;
  s.a = Vector::Zero(n);
  s.beta = Vector::Constant(n, initial_beta);
  s.theta = Vector::Constant(n, 1.0 / initial_beta);
  return s;
}

void update_widths_inplace(WidthLearnerState& s, const Vector& e) {
  require_same_size(s.size(), static_cast<std::size_t>(e.size()), "update_widths");
  const double alpha = s.alpha;
  const double prior_term = std::pow(s.a0, -alpha);
  s.d = s.d0 + 1.0;
  const double ratio = gamma_ratio((s.d + 1.0) / alpha, s.d / alpha);
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double ai =
        std::pow(1.0 / (std::pow(std::abs(e[i]), alpha) + prior_term), 1.0 / alpha);
    s.a[i] = ai;
    s.theta[i] = ai * ratio;
    s.beta[i] = 1.0 / s.theta[i];
  }
}

WidthLearnerState update_widths(const WidthLearnerState& s, const Vector& e) {
  WidthLearnerState next = s;
  update_widths_inplace(next, e);
  return next;
}

}  // namespace gcgsr
