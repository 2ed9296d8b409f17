#include "gcgsr/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "gcgsr/errors.hpp"

namespace gcgsr {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Series part of the Lanczos formula for Gamma(x + 1).
double lanczos_sum(double x) {
  double a = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    a += kLanczosCoeffs[i] / (x + static_cast<double>(i));
  }
  return a;
}

}  // namespace

double gamma_fn(double x) {
  constexpr double pi = std::numbers::pi;
  if (x < 0.5) {
    return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
  }
  const double xm = x - 1.0;
  const double t = xm + kLanczosG + 0.5;
  return std::sqrt(2.0 * pi) * std::pow(t, xm + 0.5) * std::exp(-t) *
         lanczos_sum(xm);
}

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw ValidationError("log_gamma: argument must be positive");
  }
  constexpr double pi = std::numbers::pi;
  if (x < 0.5) {
    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x)), sin(pi x) > 0 on (0, 0.5).
    return std::log(pi / std::sin(pi * x)) - log_gamma(1.0 - x);
  }
  const double xm = x - 1.0;
  const double t = xm + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * pi) + (xm + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(xm));
}

double gamma_ratio(double a, double b) {
  return std::exp(log_gamma(a) - log_gamma(b));
}

}  // namespace gcgsr
