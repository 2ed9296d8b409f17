#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>

#include "gcgsr/graph.hpp"

namespace gcgsr {

// Generalized Gaussian: density nu / (2 eta Gamma(1/nu)) exp(-|v/eta|^nu).
struct GgdNoise {
  double nu = 2.0;
  double eta = 1.0;
};

// Symmetric alpha-stable with characteristic function
// exp(j mu t - tau |t|^p).
struct AlphaStableNoise {
  double p = 2.0;
  double mu = 0.0;
  double tau = 1.0;
};

// monostate means noiseless.
using NoiseModel = std::variant<std::monostate, GgdNoise, AlphaStableNoise>;

void validate(const GgdNoise& m);
void validate(const AlphaStableNoise& m);
std::string describe(const NoiseModel& m);

// splitmix64 finaliser; used to derive independent stream seeds from a run
// seed and a stream tag.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Stateful sampler for one noise model; successive fill() calls continue the
// same stream.
class NoiseSampler {
 public:
  NoiseSampler(NoiseModel model, std::uint64_t seed);

  void fill(Vector& out);
  Vector draw(std::size_t n);
  const NoiseModel& model() const { return model_; }

 private:
  double draw_ggd(const GgdNoise& m);
  double draw_stable(const AlphaStableNoise& m);

  NoiseModel model_;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::exponential_distribution<double> exponential_{1.0};
  std::gamma_distribution<double> gamma_{1.0, 1.0};
};

// |v| = eta G^(1/nu), G ~ Gamma(1/nu, 1), with an independent fair sign.
Vector sample_ggd(const GgdNoise& m, std::size_t n, std::uint64_t rng_seed);

// Chambers-Mallows-Stuck with scale tau^(1/p) and shift mu.
Vector sample_alpha_stable(const AlphaStableNoise& m, std::size_t n,
                           std::uint64_t rng_seed);

// c such that 10 log10(||signal||^2 / ||c noise||^2) = snr_db.
double snr_scale_factor(const Vector& signal, const Vector& noise, double snr_db);
Vector scale_to_snr(const Vector& signal, const Vector& noise, double snr_db);

// E|v|^r for GGD(nu, eta): eta^r Gamma((r + 1)/nu) / Gamma(1/nu).
double ggd_abs_moment(const GgdNoise& m, double r);
// (1/n) sum cos(t v_k): real part of the empirical characteristic function.
double empirical_cf(const Vector& samples, double t);

}  // namespace gcgsr
