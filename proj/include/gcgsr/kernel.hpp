#pragma once

#include <optional>

#include "gcgsr/graph.hpp"

namespace gcgsr {

// Generalized Gaussian kernel z * exp(-rho |e|^alpha) with
// rho = beta^-alpha and z = alpha / (2 beta Gamma(1/alpha)).
class KernelParams {
 public:
  KernelParams(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double rho() const { return rho_; }
  double z() const { return z_; }

 private:
  double alpha_;
  double beta_;
  double rho_;
  double z_;
};

// Shared shape, one width per node.
class PerNodeKernel {
 public:
  PerNodeKernel(double alpha, Vector beta);
  static PerNodeKernel uniform(const KernelParams& k, std::size_t n_nodes);

  std::size_t size() const { return static_cast<std::size_t>(beta_.size()); }
  double alpha() const { return alpha_; }
  const Vector& beta() const { return beta_; }
  const Vector& rho() const { return rho_; }
  const Vector& z() const { return z_; }

 private:
  double alpha_;
  Vector beta_;
  Vector rho_;
  Vector z_;
};

double kernel_rho(double alpha, double beta);
double kernel_z(double alpha, double beta);

double ggd_kernel(const KernelParams& k, double e);

// z (1 - mean_i exp(-rho |e_i|^alpha)); per-node form averages
// z_i (1 - exp(-rho_i |e_i|^alpha)).
double tgc_loss(const KernelParams& k, const Vector& e);
double tgc_loss(const PerNodeKernel& k, const Vector& e);

// e = y - Phi x.
Vector residual(const SamplingMask& mask, const Vector& y, const Vector& x);

// (1/2) x^T L x + (gamma/2) tgc_loss(e), e = y - Phi x.
double cost(const GraphModel& g, const KernelParams& k, double gamma,
            const SamplingMask& mask, const Vector& y, const Vector& x);
double cost(const GraphModel& g, const PerNodeKernel& k, double gamma,
            const SamplingMask& mask, const Vector& y, const Vector& x);

// Weighted error vector: component i is
// (1/N) exp(-rho_i |e_i|^alpha) |e_i|^(alpha-1) sign(e_i) at sampled nodes,
// exactly 0 at unsampled nodes and wherever e_i == 0.
Vector influence(const KernelParams& k, const SamplingMask& mask,
                 const Vector& e);
Vector influence(const PerNodeKernel& k, const SamplingMask& mask,
                 const Vector& e);

// Data-term pull (gamma alpha / 2) rho_i z_i Phi g(e), written into `out`
// (resized as needed). The cost gradient is L x minus this vector.
void data_force(const KernelParams& k, double gamma, const SamplingMask& mask,
                const Vector& e, Vector& out);
void data_force(const PerNodeKernel& k, double gamma, const SamplingMask& mask,
                const Vector& e, Vector& out);

// Gradient of cost() with respect to x: L x - (gamma rho alpha z / 2) Phi g(e).
Vector gradient(const GraphModel& g, const KernelParams& k, double gamma,
                const SamplingMask& mask, const Vector& y, const Vector& x);
Vector gradient(const GraphModel& g, const PerNodeKernel& k, double gamma,
                const SamplingMask& mask, const Vector& y, const Vector& x);

// ((alpha - 1) / (rho alpha))^(1/alpha) for alpha > 1: below this |e| the
// loss term is locally convex. Empty for alpha <= 1.
std::optional<double> convexity_threshold(const KernelParams& k);

enum class Curvature { negative, zero, positive };

// d^2/de^2 of z (1 - exp(-rho |e|^alpha)):
// rho z alpha (alpha - 1 - rho alpha |e|^alpha) |e|^(alpha-2) exp(-rho |e|^alpha).
double loss_second_derivative(const KernelParams& k, double e);

// Sign of loss_second_derivative. Rejects e == 0.
Curvature hessian_sign_check(const KernelParams& k, double e);

}  // namespace gcgsr
