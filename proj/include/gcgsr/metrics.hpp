#pragma once

#include <vector>

#include "gcgsr/graph.hpp"

namespace gcgsr {

inline constexpr double kNmsdFloorDb = -300.0;

// ||x_true - x_est||^2 / ||x_true||^2 (linear). Throws on zero ground truth.
double nmsd_linear(const Vector& x_true, const Vector& x_est);

// 10 log10 of nmsd_linear, floored at -300 dB.
double nmsd(const Vector& x_true, const Vector& x_est);

double to_db(double linear);

// Per-iteration NMSD (dB) of one solver run.
using NmsdTrace = std::vector<double>;

}  // namespace gcgsr
