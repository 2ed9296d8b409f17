#include "gcgsr/noise.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gcgsr/errors.hpp"
#include "gcgsr/special_functions.hpp"

namespace gcgsr {

void validate(const GgdNoise& m) {
  if (!(m.nu > 0.0)) throw ValidationError("GGD shape nu must be positive");
  if (!(m.eta > 0.0)) throw ValidationError("GGD scale eta must be positive");
}

void validate(const AlphaStableNoise& m) {
  if (!(m.p > 0.0 && m.p <= 2.0)) {
    throw ValidationError("alpha-stable p must lie in (0, 2]");
  }
  if (!(m.tau > 0.0)) throw ValidationError("alpha-stable tau must be positive");
  if (!std::isfinite(m.mu)) throw ValidationError("alpha-stable mu must be finite");
}

std::string describe(const NoiseModel& m) {
  std::ostringstream os;
  if (const auto* g = std::get_if<GgdNoise>(&m)) {
    os << "ggd(nu=" << g->nu << ", eta=" << g->eta << ")";
  } else if (const auto* s = std::get_if<AlphaStableNoise>(&m)) {
    os << "alpha-stable(p=" << s->p << ", mu=" << s->mu << ", tau=" << s->tau
       << ")";
  } else {
    os << "none";
  }
  return os.str();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

NoiseSampler::NoiseSampler(NoiseModel model, std::uint64_t seed)
    : model_(std::move(model)), engine_(seed) {
  if (const auto* g = std::get_if<GgdNoise>(&model_)) {
    validate(*g);
    gamma_ = std::gamma_distribution<double>(1.0 / g->nu, 1.0);
  } else if (const auto* s = std::get_if<AlphaStableNoise>(&model_)) {
    validate(*s);
  }
}

double NoiseSampler::draw_ggd(const GgdNoise& m) {
  const double mag = m.eta * std::pow(gamma_(engine_), 1.0 / m.nu);
  return uniform_(engine_) < 0.5 ? -mag : mag;
}

double NoiseSampler::draw_stable(const AlphaStableNoise& m) {
  constexpr double pi = std::numbers::pi;
  double u = 0.0;
  do {
    u = uniform_(engine_);
  } while (u == 0.0);
  double w = 0.0;
  do {
    w = exponential_(engine_);
  } while (w == 0.0);
  const double v = pi * (u - 0.5);
  const double p = m.p;
  double x = 0.0;
  if (p == 1.0) {
    x = std::tan(v);
  } else {
    x = std::sin(p * v) / std::pow(std::cos(v), 1.0 / p) *
        std::pow(std::cos(v - p * v) / w, (1.0 - p) / p);
  }
  return m.mu + std::pow(m.tau, 1.0 / p) * x;
}

void NoiseSampler::fill(Vector& out) {
  if (const auto* g = std::get_if<GgdNoise>(&model_)) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = draw_ggd(*g);
  } else if (const auto* s = std::get_if<AlphaStableNoise>(&model_)) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = draw_stable(*s);
  } else {
    out.setZero();
  }
}

Vector NoiseSampler::draw(std::size_t n) {
  Vector out(static_cast<Eigen::Index>(n));
  fill(out);
  return out;
}

Vector sample_ggd(const GgdNoise& m, std::size_t n, std::uint64_t rng_seed) {
  return NoiseSampler(m, rng_seed).draw(n);
}

Vector sample_alpha_stable(const AlphaStableNoise& m, std::size_t n,
                           std::uint64_t rng_seed) {
  return NoiseSampler(m, rng_seed).draw(n);
}

double snr_scale_factor(const Vector& signal, const Vector& noise,
                        double snr_db) {
  require_same_size(static_cast<std::size_t>(signal.size()),
                    static_cast<std::size_t>(noise.size()), "noise");
  const double noise_energy = noise.squaredNorm();
  if (!(noise_energy > 0.0)) {
    throw ValidationError("scale_to_snr: noise vector is all zero");
  }
  const double target = signal.squaredNorm() / std::pow(10.0, snr_db / 10.0);
  return std::sqrt(target / noise_energy);
}

Vector scale_to_snr(const Vector& signal, const Vector& noise, double snr_db) {
  return snr_scale_factor(signal, noise, snr_db) * noise;
}

double ggd_abs_moment(const GgdNoise& m, double r) {
  return std::pow(m.eta, r) * gamma_ratio((r + 1.0) / m.nu, 1.0 / m.nu);
}

double empirical_cf(const Vector& samples, double t) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) acc += std::cos(t * samples[i]);
  return acc / static_cast<double>(samples.size());
}

}  // namespace gcgsr
