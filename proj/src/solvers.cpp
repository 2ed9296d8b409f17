#include "gcgsr/solvers.hpp"

#include <cmath>
#include <sstream>

#include "gcgsr/errors.hpp"

namespace gcgsr {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::gc_gsr:
      return "gc-gsr";
    case Algorithm::lms:
      return "lms";
    case Algorithm::lmp:
      return "lmp";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "gc-gsr" || name == "gc_gsr") return Algorithm::gc_gsr;
  if (name == "lms") return Algorithm::lms;
  if (name == "lmp") return Algorithm::lmp;
  throw ValidationError("unknown algorithm '" + name + "'");
}

void SolverConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw ValidationError("step_size must be positive and finite");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("gamma must be nonnegative and finite");
  }
  if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (!(stop_tol >= 0.0)) throw ValidationError("stop_tol must be >= 0");
  if (!(divergence_limit > 0.0)) {
    throw ValidationError("divergence_limit must be positive");
  }
  if (algorithm == Algorithm::lmp && !(lmp_p > 1.0 && lmp_p <= 2.0)) {
    throw ValidationError("lmp_p must lie in (1, 2]");
  }
  if (algorithm == Algorithm::gc_gsr) {
    if (learned) {
      // init_learner performs the remaining checks.
      (void)init_learner(1, alpha, learned->d0, learned->a0,
                         learned->initial_beta);
    } else {
      (void)KernelParams(alpha, beta);
    }
  }
}

RecoveryState initial_state(std::size_t n_nodes, const SolverConfig& cfg,
                            const std::optional<Vector>& x0) {
  const auto n = static_cast<Eigen::Index>(n_nodes);
  RecoveryState s;
  if (x0) {
    require_same_size(n_nodes, static_cast<std::size_t>(x0->size()), "x0");
    s.x = *x0;
    s.divergence_scale = std::max(1.0, x0->lpNorm<Eigen::Infinity>());
  } else {
    s.x = Vector::Zero(n);
  }
  s.e = Vector::Zero(n);
  s.iter = 0;
  if (cfg.algorithm == Algorithm::gc_gsr && cfg.learned) {
    s.widths = init_learner(n_nodes, cfg.alpha, cfg.learned->d0,
                            cfg.learned->a0, cfg.learned->initial_beta);
  }
  return s;
}

Recursion::Recursion(const GraphModel& g, const SolverConfig& cfg)
    : g_(g), cfg_(cfg) {
  cfg_.validate();
  if (cfg_.algorithm == Algorithm::gc_gsr && !cfg_.learned) {
    fixed_kernel_.emplace(cfg_.alpha, cfg_.beta);
  }
  const auto n = static_cast<Eigen::Index>(g.n_nodes());
  e_.resize(n);
  force_.resize(n);
  lx_.resize(n);
  x_next_.resize(n);
}

void Recursion::advance(const SamplingMask& mask, const Vector& y,
                        RecoveryState& s) {
  const std::size_t n = g_.n_nodes();
  require_same_size(n, static_cast<std::size_t>(s.x.size()), "state");
  require_same_size(n, static_cast<std::size_t>(y.size()), "observation");
  require_same_size(n, mask.n_nodes(), "mask");
  const Vector& phi = mask.diagonal();

  e_.noalias() = y - phi.cwiseProduct(s.x);

  switch (cfg_.algorithm) {
    case Algorithm::gc_gsr:
      if (fixed_kernel_) {
        data_force(*fixed_kernel_, cfg_.gamma, mask, e_, force_);
      } else {
        if (!s.widths) {
          s.widths = init_learner(n, cfg_.alpha, cfg_.learned->d0,
                                  cfg_.learned->a0, cfg_.learned->initial_beta);
        }
        // Widths come from the previous step's error; the first step runs
        // on the initial widths.
        if (s.iter > 0) update_widths_inplace(*s.widths, s.e);
        data_force(s.widths->kernel(), cfg_.gamma, mask, e_, force_);
      }
      break;
    case Algorithm::lms:
      force_.noalias() = cfg_.gamma * phi.cwiseProduct(e_);
      break;
    case Algorithm::lmp: {
      const double pm1 = cfg_.lmp_p - 1.0;
      for (Eigen::Index i = 0; i < e_.size(); ++i) {
        const double ei = e_[i];
        if (phi[i] == 0.0 || ei == 0.0) {
          force_[i] = 0.0;
        } else {
          const double mag = cfg_.gamma * std::pow(std::abs(ei), pm1);
          force_[i] = ei < 0.0 ? -mag : mag;
        }
      }
      break;
    }
  }

  lx_.noalias() = g_.laplacian() * s.x;
  x_next_ = s.x + cfg_.step_size * (force_ - lx_);

  const double sup = x_next_.lpNorm<Eigen::Infinity>();
  const double limit = cfg_.divergence_limit *
                       std::max(s.divergence_scale, y.lpNorm<Eigen::Infinity>());
  if (!std::isfinite(sup) || sup > limit) {
    std::ostringstream msg;
    msg << to_string(cfg_.algorithm) << " diverged at iteration " << s.iter + 1
        << " (|x|_inf = " << sup << ")";
    throw DivergenceError(msg.str(), s.iter + 1);
  }

  s.x.swap(x_next_);
  s.e.noalias() = y - phi.cwiseProduct(s.x);
  ++s.iter;
}

namespace {

RecoveryState step_as(Algorithm algo, const GraphModel& g,
                      const SolverConfig& cfg, const SamplingMask& mask,
                      const Vector& y, const RecoveryState& s) {
  SolverConfig c = cfg;
  c.algorithm = algo;
  RecoveryState next = s;
  Recursion(g, c).advance(mask, y, next);
  return next;
}

double lambda_for_warning(const GraphModel& g, const RunOptions& opts) {
  if (opts.lambda_max) return *opts.lambda_max;
  if (!g.has_edges()) return 0.0;
  return spectral_radius(g);
}

template <class NextObservation>
RunResult run_impl(const GraphModel& g, const SolverConfig& cfg,
                   NextObservation&& next, const RunOptions& opts) {
  Recursion rec(g, cfg);
  RunResult out;
  out.state = initial_state(g.n_nodes(), cfg, opts.x0);

  const double lambda = lambda_for_warning(g, opts);
  if (lambda > 0.0 && cfg.step_size >= 2.0 / lambda) {
    std::ostringstream msg;
    msg << "step size " << cfg.step_size << " is at or above the stability bound "
        << 2.0 / lambda;
    out.warnings.push_back(msg.str());
  }
  if (opts.x_true) out.nmsd_db.reserve(static_cast<std::size_t>(cfg.max_iters));

  Vector previous;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Observation obs = next(out.state.iter);
    previous = out.state.x;
    rec.advance(obs.mask, obs.y, out.state);
    ++out.iterations;
    if (opts.x_true) out.nmsd_db.push_back(nmsd(*opts.x_true, out.state.x));
    if (opts.observer) opts.observer(out.state);
    if ((out.state.x - previous).lpNorm<Eigen::Infinity>() < cfg.stop_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

RecoveryState gc_gsr_step(const GraphModel& g, const SolverConfig& cfg,
                          const SamplingMask& mask, const Vector& y,
                          const RecoveryState& s) {
  return step_as(Algorithm::gc_gsr, g, cfg, mask, y, s);
}

RecoveryState lms_step(const GraphModel& g, const SolverConfig& cfg,
                       const SamplingMask& mask, const Vector& y,
                       const RecoveryState& s) {
  return step_as(Algorithm::lms, g, cfg, mask, y, s);
}

RecoveryState lmp_step(const GraphModel& g, const SolverConfig& cfg,
                       const SamplingMask& mask, const Vector& y,
                       const RecoveryState& s) {
  return step_as(Algorithm::lmp, g, cfg, mask, y, s);
}

RecoveryState solver_step(const GraphModel& g, const SolverConfig& cfg,
                          const SamplingMask& mask, const Vector& y,
                          const RecoveryState& s) {
  return step_as(cfg.algorithm, g, cfg, mask, y, s);
}

RunResult run(const GraphModel& g, const SolverConfig& cfg,
              const SamplingMask& mask, const Vector& y,
              const RunOptions& opts) {
  return run_impl(
      g, cfg, [&](long) { return Observation{mask, y}; }, opts);
}

RunResult run_streaming(const GraphModel& g, const SolverConfig& cfg,
                        const ObservationStream& stream,
                        const RunOptions& opts) {
  return run_impl(g, cfg, stream, opts);
}

double stability_bound(const GraphModel& g) { return 2.0 / spectral_radius(g); }

double mean_bound(const GraphModel& g) { return 1.0 / spectral_radius(g); }

}  // namespace gcgsr
