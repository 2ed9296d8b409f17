#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gcgsr/graph.hpp"
#include "gcgsr/kernel.hpp"
#include "gcgsr/metrics.hpp"
#include "gcgsr/width_learner.hpp"

namespace gcgsr {

enum class Algorithm { gc_gsr, lms, lmp };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

// EM-learned per-node widths in place of a fixed beta.
struct LearnedWidth {
  double d0 = kDefaultD0;
  double a0 = kDefaultA0;
  double initial_beta = 1.0;
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::gc_gsr;
  double step_size = 0.01;  // xi
  double gamma = 1.0;
  double alpha = 2.0;
  double beta = 1.0;  // ignored when `learned` is set
  std::optional<LearnedWidth> learned;
  int max_iters = 1000;
  double stop_tol = 0.0;  // on ||x[n+1] - x[n]||_inf; 0 disables
  double lmp_p = 1.3;
  // Iterates whose sup-norm exceeds this multiple of the data scale count as
  // diverged.
  double divergence_limit = 1e12;

  void validate() const;
};

struct RecoveryState {
  Vector x;
  Vector e;
  long iter = 0;
  std::optional<WidthLearnerState> widths;
  double divergence_scale = 1.0;
};

// x = x0 (zero when absent), e = 0, iter = 0, widths initialised in learned
// mode.
RecoveryState initial_state(std::size_t n_nodes, const SolverConfig& cfg,
                            const std::optional<Vector>& x0 = std::nullopt);

// Reusable workspace for the recursion; advance() updates a state in place.
// The update is x <- x - xi L x + xi psi(e), where psi is the data-term pull
// of the configured algorithm and e = y - Phi x.
class Recursion {
 public:
  Recursion(const GraphModel& g, const SolverConfig& cfg);

  void advance(const SamplingMask& mask, const Vector& y, RecoveryState& s);

  const SolverConfig& config() const { return cfg_; }

 private:
  const GraphModel& g_;
  SolverConfig cfg_;
  std::optional<KernelParams> fixed_kernel_;
  Vector e_;
  Vector force_;
  Vector lx_;
  Vector x_next_;
};

RecoveryState gc_gsr_step(const GraphModel& g, const SolverConfig& cfg,
                          const SamplingMask& mask, const Vector& y,
                          const RecoveryState& s);
RecoveryState lms_step(const GraphModel& g, const SolverConfig& cfg,
                       const SamplingMask& mask, const Vector& y,
                       const RecoveryState& s);
RecoveryState lmp_step(const GraphModel& g, const SolverConfig& cfg,
                       const SamplingMask& mask, const Vector& y,
                       const RecoveryState& s);
// Dispatches on cfg.algorithm.
RecoveryState solver_step(const GraphModel& g, const SolverConfig& cfg,
                          const SamplingMask& mask, const Vector& y,
                          const RecoveryState& s);

struct RunOptions {
  std::optional<Vector> x_true;
  std::optional<Vector> x0;
  // Skips the power iteration behind the step-size warning when known.
  std::optional<double> lambda_max;
  // Called after every step.
  std::function<void(const RecoveryState&)> observer;
};

struct RunResult {
  RecoveryState state;
  NmsdTrace nmsd_db;  // empty unless x_true was given
  long iterations = 0;
  bool converged = false;  // stopped on stop_tol before max_iters
  std::vector<std::string> warnings;
};

// One observation per iteration: the mask and samples seen at step n.
struct Observation {
  const SamplingMask& mask;
  const Vector& y;
};
using ObservationStream = std::function<Observation(long iteration)>;

// Fixed mask and observation for every iteration.
RunResult run(const GraphModel& g, const SolverConfig& cfg,
              const SamplingMask& mask, const Vector& y,
              const RunOptions& opts = {});

// Fresh observations each iteration (streaming measurement model).
RunResult run_streaming(const GraphModel& g, const SolverConfig& cfg,
                        const ObservationStream& stream,
                        const RunOptions& opts = {});

// 2 / lambda_max(L): sufficient step-size bound for monotone cost descent.
double stability_bound(const GraphModel& g);
// 1 / lambda_max(L): step-size bound for convergence in the mean.
double mean_bound(const GraphModel& g);

}  // namespace gcgsr
