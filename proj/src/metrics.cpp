#include "gcgsr/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gcgsr/errors.hpp"

namespace gcgsr {

double nmsd_linear(const Vector& x_true, const Vector& x_est) {
  require_same_size(static_cast<std::size_t>(x_true.size()),
                    static_cast<std::size_t>(x_est.size()), "nmsd");
  const double denom = x_true.squaredNorm();
  if (!(denom > 0.0)) throw ValidationError("nmsd: ground truth is all zero");
  return (x_true - x_est).squaredNorm() / denom;
}

double to_db(double linear) {
  if (!(linear > 0.0)) return kNmsdFloorDb;
  return std::max(kNmsdFloorDb, 10.0 * std::log10(linear));
}

double nmsd(const Vector& x_true, const Vector& x_est) {
  return to_db(nmsd_linear(x_true, x_est));
}

}  // namespace gcgsr
