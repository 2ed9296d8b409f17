#include "gcgsr/kernel.hpp"

#include <cmath>

#include "gcgsr/errors.hpp"
#include "gcgsr/special_functions.hpp"

namespace gcgsr {

namespace {

void check_shape_width(double alpha, double beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("kernel shape alpha must be positive");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ValidationError("kernel width beta must be positive");
  }
}

// Both kernel flavours go through these templates so that a per-node kernel
// with equal widths reproduces the shared-width results exactly.
struct SharedView {
  const KernelParams& k;
  double rho(Eigen::Index) const { return k.rho(); }
  double z(Eigen::Index) const { return k.z(); }
  double alpha() const { return k.alpha(); }
};

struct PerNodeView {
  const PerNodeKernel& k;
  double rho(Eigen::Index i) const { return k.rho()[i]; }
  double z(Eigen::Index i) const { return k.z()[i]; }
  double alpha() const { return k.alpha(); }
};

template <class View>
double tgc_loss_impl(const View& v, const Vector& e) {
  if (e.size() == 0) throw DimensionError("tgc_loss: empty error vector");
  const double alpha = v.alpha();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    acc += v.z(i) * (1.0 - std::exp(-v.rho(i) * std::pow(std::abs(e[i]), alpha)));
  }
  return acc / static_cast<double>(e.size());
}

// out_i = scale_i * (1/N) exp(-rho_i |e_i|^a) |e_i|^(a-1) sign(e_i) * Phi_ii,
// where scale_i is 1 (plain influence) or (gamma alpha / 2) rho_i z_i.
template <class View, bool kWithGain>
void weighted_error_impl(const View& v, double gamma, const SamplingMask& mask,
                         const Vector& e, Vector& out) {
  const Eigen::Index n = e.size();
  require_same_size(mask.n_nodes(), static_cast<std::size_t>(n), "influence");
  out.resize(n);
  const double alpha = v.alpha();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Vector& phi = mask.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ei = e[i];
    if (phi[i] == 0.0 || ei == 0.0) {
      out[i] = 0.0;
      continue;
    }
    const double a = std::abs(ei);
    const double pow_m1 = std::pow(a, alpha - 1.0);
    const double rho = v.rho(i);
    double gi = inv_n * std::exp(-rho * pow_m1 * a) * pow_m1;
    if (ei < 0.0) gi = -gi;
    if constexpr (kWithGain) {
      gi *= 0.5 * gamma * alpha * rho * v.z(i);
    }
    out[i] = gi;
  }
}

template <class View>
double cost_impl(const GraphModel& g, const View& v, double gamma,
                 const SamplingMask& mask, const Vector& y, const Vector& x) {
  const Vector e = residual(mask, y, x);
  require_same_size(g.n_nodes(), static_cast<std::size_t>(x.size()), "cost");
  return 0.5 * smoothness(g, x) + 0.5 * gamma * tgc_loss_impl(v, e);
}

template <class View>
Vector gradient_impl(const GraphModel& g, const View& v, double gamma,
                     const SamplingMask& mask, const Vector& y,
                     const Vector& x) {
  require_same_size(g.n_nodes(), static_cast<std::size_t>(x.size()), "gradient");
  const Vector e = residual(mask, y, x);
  Vector force;
  weighted_error_impl<View, true>(v, gamma, mask, e, force);
  return g.laplacian() * x - force;
}

}  // namespace

double kernel_rho(double alpha, double beta) { return std::pow(beta, -alpha); }

double kernel_z(double alpha, double beta) {
  return alpha / (2.0 * beta * gamma_fn(1.0 / alpha));
}

KernelParams::KernelParams(double alpha, double beta)
    : alpha_(alpha), beta_(beta) {
  check_shape_width(alpha, beta);
  rho_ = kernel_rho(alpha, beta);
  z_ = kernel_z(alpha, beta);
}

PerNodeKernel::PerNodeKernel(double alpha, Vector beta)
    : alpha_(alpha), beta_(std::move(beta)) {
  if (beta_.size() == 0) throw ValidationError("PerNodeKernel: no widths");
  rho_.resize(beta_.size());
  z_.resize(beta_.size());
  for (Eigen::Index i = 0; i < beta_.size(); ++i) {
    check_shape_width(alpha_, beta_[i]);
    rho_[i] = kernel_rho(alpha_, beta_[i]);
    z_[i] = kernel_z(alpha_, beta_[i]);
  }
}

PerNodeKernel PerNodeKernel::uniform(const KernelParams& k, std::size_t n_nodes) {
  return PerNodeKernel(k.alpha(),
                       Vector::Constant(static_cast<Eigen::Index>(n_nodes), k.beta()));
}

double ggd_kernel(const KernelParams& k, double e) {
  return k.z() * std::exp(-k.rho() * std::pow(std::abs(e), k.alpha()));
}

double tgc_loss(const KernelParams& k, const Vector& e) {
  return tgc_loss_impl(SharedView{k}, e);
}

double tgc_loss(const PerNodeKernel& k, const Vector& e) {
  require_same_size(k.size(), static_cast<std::size_t>(e.size()), "tgc_loss");
  return tgc_loss_impl(PerNodeView{k}, e);
}

Vector residual(const SamplingMask& mask, const Vector& y, const Vector& x) {
  require_same_size(mask.n_nodes(), static_cast<std::size_t>(y.size()), "observation");
  require_same_size(mask.n_nodes(), static_cast<std::size_t>(x.size()), "estimate");
  return y - mask.diagonal().cwiseProduct(x);
}

double cost(const GraphModel& g, const KernelParams& k, double gamma,
            const SamplingMask& mask, const Vector& y, const Vector& x) {
  return cost_impl(g, SharedView{k}, gamma, mask, y, x);
}

double cost(const GraphModel& g, const PerNodeKernel& k, double gamma,
            const SamplingMask& mask, const Vector& y, const Vector& x) {
  require_same_size(k.size(), static_cast<std::size_t>(x.size()), "cost");
  return cost_impl(g, PerNodeView{k}, gamma, mask, y, x);
}

Vector influence(const KernelParams& k, const SamplingMask& mask,
                 const Vector& e) {
  Vector out;
  weighted_error_impl<SharedView, false>(SharedView{k}, 0.0, mask, e, out);
  return out;
}

Vector influence(const PerNodeKernel& k, const SamplingMask& mask,
                 const Vector& e) {
  require_same_size(k.size(), static_cast<std::size_t>(e.size()), "influence");
  Vector out;
  weighted_error_impl<PerNodeView, false>(PerNodeView{k}, 0.0, mask, e, out);
  return out;
}

void data_force(const KernelParams& k, double gamma, const SamplingMask& mask,
                const Vector& e, Vector& out) {
  weighted_error_impl<SharedView, true>(SharedView{k}, gamma, mask, e, out);
}

void data_force(const PerNodeKernel& k, double gamma, const SamplingMask& mask,
                const Vector& e, Vector& out) {
  require_same_size(k.size(), static_cast<std::size_t>(e.size()), "data_force");
  weighted_error_impl<PerNodeView, true>(PerNodeView{k}, gamma, mask, e, out);
}

Vector gradient(const GraphModel& g, const KernelParams& k, double gamma,
                const SamplingMask& mask, const Vector& y, const Vector& x) {
  return gradient_impl(g, SharedView{k}, gamma, mask, y, x);
}

Vector gradient(const GraphModel& g, const PerNodeKernel& k, double gamma,
                const SamplingMask& mask, const Vector& y, const Vector& x) {
  require_same_size(k.size(), static_cast<std::size_t>(x.size()), "gradient");
  return gradient_impl(g, PerNodeView{k}, gamma, mask, y, x);
}

std::optional<double> convexity_threshold(const KernelParams& k) {
  const double a = k.alpha();
  if (a <= 1.0) return std::nullopt;
  return std::pow((a - 1.0) / (k.rho() * a), 1.0 / a);
}

double loss_second_derivative(const KernelParams& k, double e) {
  const double a = k.alpha();
  const double abs_e = std::abs(e);
  const double pow_a = std::pow(abs_e, a);
  const double t = a - 1.0 - k.rho() * a * pow_a;
  return k.rho() * k.z() * a * t * std::pow(abs_e, a - 2.0) *
         std::exp(-k.rho() * pow_a);
}

Curvature hessian_sign_check(const KernelParams& k, double e) {
  if (e == 0.0 || !std::isfinite(e)) {
    throw ValidationError("hessian_sign_check: e must be finite and nonzero");
  }
  // The sign is carried entirely by T(e) = alpha - 1 - rho alpha |e|^alpha;
  // the remaining factors are positive.
  const double a = k.alpha();
  const double t = a - 1.0 - k.rho() * a * std::pow(std::abs(e), a);
  if (t > 0.0) return Curvature::positive;
  if (t < 0.0) return Curvature::negative;
  return Curvature::zero;
}

}  // namespace gcgsr
