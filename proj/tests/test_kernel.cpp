#include <doctest.h>

#include <random>

#include "gcgsr/errors.hpp"
#include "gcgsr/kernel.hpp"
#include "oracles.hpp"

using namespace gcgsr;

namespace {

const double kPi = std::acos(-1.0);

GraphModel single_edge() {
  Matrix w(2, 2);
  w << 0, 1, 1, 0;
  return build_graph(w);
}

}  // namespace

TEST_CASE("kernel parameters derive rho and z") {
  for (double alpha : {0.5, 1.0, 1.3, 2.0, 4.0}) {
    for (double beta : {0.1, 1.0, 7.5}) {
      const KernelParams k(alpha, beta);
      CHECK(k.rho() == doctest::Approx(std::pow(beta, -alpha)).epsilon(1e-12));
      CHECK(k.z() == doctest::Approx(oracle::kernel_z(alpha, beta)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(KernelParams(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(KernelParams(2.0, -1.0), ValidationError);
  CHECK_THROWS_AS(PerNodeKernel(2.0, Vector::Constant(2, 0.0)), ValidationError);
}

TEST_CASE("ggd kernel examples") {
  const KernelParams k(2.0, 1.0);
  CHECK(ggd_kernel(k, 0.0) == k.z());
  CHECK(ggd_kernel(k, 1.0) == doctest::Approx(std::exp(-1.0) / std::sqrt(kPi)).epsilon(1e-13));
  CHECK(ggd_kernel(k, 1.0) == doctest::Approx(0.20755).epsilon(1e-4));
  // alpha = 2 is the Gaussian shape with sigma^2 = beta^2 / 2.
  const KernelParams g(2.0, 1.7);
  const double sigma = 1.7 / std::sqrt(2.0);
  for (double e : {-2.0, -0.3, 0.0, 0.8, 3.0}) {
    const double gauss = std::exp(-e * e / (2 * sigma * sigma)) / (std::sqrt(2 * kPi) * sigma);
    CHECK(ggd_kernel(g, e) == doctest::Approx(gauss).epsilon(1e-12));
  }
}

TEST_CASE("property: kernel is even, peaked at zero and decreasing in |e|") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int t = 0; t < 500; ++t) {
    const KernelParams k(0.3 + u(rng), 0.1 + u(rng));
    const double e = u(rng);
    const double e2 = e + 0.01 + u(rng);
    CHECK(ggd_kernel(k, e) == ggd_kernel(k, -e));
    CHECK(ggd_kernel(k, e) <= k.z());
    CHECK(ggd_kernel(k, e2) <= ggd_kernel(k, e));
    CHECK(ggd_kernel(k, e) == doctest::Approx(oracle::kernel_value(k.alpha(), k.beta(), e)).epsilon(1e-10));
  }
}

TEST_CASE("tgc loss examples") {
  const KernelParams k(2.0, 1.0);
  CHECK(tgc_loss(k, Vector::Zero(4)) == 0.0);
  CHECK(tgc_loss(k, Vector::Constant(3, 1e6)) == doctest::Approx(k.z()).epsilon(1e-14));
  Vector e(2);
  e << 1, -1;
  CHECK(tgc_loss(k, e) == doctest::Approx((1 - std::exp(-1.0)) / std::sqrt(kPi)).epsilon(1e-13));
  CHECK(tgc_loss(k, e) == doctest::Approx(0.35662).epsilon(1e-4));
  CHECK_THROWS_AS(tgc_loss(k, Vector()), std::invalid_argument);
}

TEST_CASE("property: tgc loss ignores signs and order") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const KernelParams k(0.5 + 3.0 * (rng() % 1000) / 1000.0, 0.2 + (rng() % 1000) / 300.0);
    Vector e = oracle::random_vector(rng, n, -3, 3);
    const double base = tgc_loss(k, e);
    CHECK(base >= 0.0);
    CHECK(base < k.z());
    Vector flipped = e;
    for (int i = 0; i < n; ++i) if (rng() % 2) flipped[i] = -flipped[i];
    CHECK(tgc_loss(k, flipped) == doctest::Approx(base).epsilon(1e-14));
    std::vector<double> perm(e.data(), e.data() + n);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(tgc_loss(k, Eigen::Map<Vector>(perm.data(), n)) == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("cost examples") {
  const GraphModel g = single_edge();
  const KernelParams k(2.0, 1.0);
  const SamplingMask full = SamplingMask::full(2);
  const Vector c = Vector::Constant(2, 0.7);
  CHECK(cost(g, k, 3.0, full, c, c) == doctest::Approx(0.0));
  Vector x(2);
  x << 0, 1;
  const Vector y = Vector::Zero(2);
  CHECK(cost(g, k, 0.0, full, y, x) == 0.5 * smoothness(g, x));
  // Term-by-term: 0.5 * 1 + (2/2) * z (1 - (1 + e^-1)/2).
  const double expected = oracle::cost(g.adjacency(), 2.0, Vector::Ones(2), 2.0, Vector::Ones(2), y, x);
  CHECK(expected == doctest::Approx(0.5 + (1 - (1 + std::exp(-1.0)) / 2) / std::sqrt(kPi)).epsilon(1e-14));
  CHECK(cost(g, k, 2.0, full, y, x) == doctest::Approx(expected).epsilon(1e-13));
  CHECK(cost(g, k, 2.0, full, y, x) == doctest::Approx(0.678318).epsilon(1e-6));
  CHECK_THROWS_AS(cost(g, k, 2.0, full, Vector::Zero(3), x), DimensionError);
}

TEST_CASE("influence examples") {
  const KernelParams k(2.0, 1.0);
  CHECK(influence(k, SamplingMask::full(3), Vector::Zero(3)).isZero(0.0));
  Vector e(1);
  e << 0.5;
  CHECK(influence(k, SamplingMask::full(1), e)[0] == doctest::Approx(std::exp(-0.25) * 0.5).epsilon(1e-14));
  CHECK(influence(k, SamplingMask::full(1), e)[0] == doctest::Approx(0.38940).epsilon(1e-4));
  Vector e3(3);
  e3 << 0.4, -1.2, 0.9;
  const Vector g = influence(k, SamplingMask(3, {0, 2}), e3);
  CHECK(g[1] == 0.0);
  CHECK(g[0] != 0.0);
  // alpha < 2 is singular at zero; the convention is an exact zero.
  Vector z(2);
  z << 0.0, 0.3;
  CHECK(influence(KernelParams(1.3, 1.0), SamplingMask::full(2), z)[0] == 0.0);
  CHECK(influence(KernelParams(0.5, 1.0), SamplingMask::full(2), z)[0] == 0.0);
}

TEST_CASE("property: influence is odd") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const KernelParams k(0.5 + 3.5 * (rng() % 1000) / 1000.0, 0.3 + (rng() % 1000) / 400.0);
    const Vector e = oracle::random_vector(rng, n, -2, 2);
    const SamplingMask m = SamplingMask::full(static_cast<std::size_t>(n));
    CHECK(influence(k, m, -e) == -influence(k, m, e));
  }
}

TEST_CASE("gradient examples") {
  const GraphModel g = single_edge();
  const KernelParams k(1.5, 0.8);
  Vector x(2);
  x << 0.3, -0.4;
  Vector y(2);
  y << 1.0, 2.0;
  const SamplingMask full = SamplingMask::full(2);
  CHECK(gradient(g, k, 0.0, full, y, x) == g.laplacian() * x);
  const Vector c = Vector::Constant(2, 1.1);
  CHECK(gradient(g, k, 5.0, full, c, c).isZero(1e-15));
}

TEST_CASE("property: gradient matches central differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double alphas[] = {1.3, 1.5, 2.0, 4.0};
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + static_cast<int>(rng() % 10);
    const double alpha = alphas[t % 4];
    const Matrix w = n > 1 ? oracle::random_adjacency(rng, n, 0.4) : Matrix::Zero(1, 1);
    const GraphModel g = build_graph(w);
    std::vector<std::size_t> idx;
    for (int i = 0; i < n; ++i) if (u(rng) < 0.7 || i == 0) idx.push_back(static_cast<std::size_t>(i));
    const SamplingMask mask(static_cast<std::size_t>(n), idx);
    const Vector x = oracle::random_vector(rng, n, -1, 1);
    Vector y = Vector::Zero(n);
    for (std::size_t i : idx) {
      const double mag = 0.05 + 1.95 * u(rng);
      y[static_cast<Eigen::Index>(i)] = x[static_cast<Eigen::Index>(i)] + (u(rng) < 0.5 ? -mag : mag);
    }
    const double gamma = 0.5 + 4.0 * u(rng);
    Vector beta(n);
    for (int i = 0; i < n; ++i) beta[i] = 0.5 + 2.5 * u(rng);
    const PerNodeKernel pk(alpha, beta);
    const KernelParams k(alpha, beta[0]);

    auto check = [&](const Vector& analytic, const Vector& b) {
      const auto f = [&](const Vector& v) {
        return oracle::cost(w, alpha, b, gamma, mask.diagonal(), y, v);
      };
      const Vector fd = oracle::central_difference(f, x, 1e-6);
      const double scale = std::max(analytic.cwiseAbs().maxCoeff(), 1e-3);
      CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-6 * scale);
    };
    check(gradient(g, k, gamma, mask, y, x), Vector::Constant(n, beta[0]));
    check(gradient(g, pk, gamma, mask, y, x), beta);
  }
}

TEST_CASE("property: equal per-node widths are bit-identical to the shared kernel") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const GraphModel g = build_graph(oracle::random_adjacency(rng, n));
    const KernelParams k(0.5 + (rng() % 400) / 100.0, 0.2 + (rng() % 500) / 100.0);
    const PerNodeKernel pk = PerNodeKernel::uniform(k, static_cast<std::size_t>(n));
    const SamplingMask mask(static_cast<std::size_t>(n), {0, static_cast<std::size_t>(n - 1)});
    const Vector x = oracle::random_vector(rng, n);
    const Vector y = mask.diagonal().cwiseProduct(oracle::random_vector(rng, n, -2, 2));
    const Vector e = residual(mask, y, x);
    CHECK(cost(g, k, 1.7, mask, y, x) == cost(g, pk, 1.7, mask, y, x));
    CHECK(influence(k, mask, e) == influence(pk, mask, e));
    CHECK(gradient(g, k, 1.7, mask, y, x) == gradient(g, pk, 1.7, mask, y, x));
    CHECK(tgc_loss(k, e) == tgc_loss(pk, e));
  }
}

TEST_CASE("convexity threshold examples") {
  CHECK(*convexity_threshold(KernelParams(2.0, std::pow(0.5, -0.5))) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*convexity_threshold(KernelParams(2.0, 1.0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK_FALSE(convexity_threshold(KernelParams(0.5, 1.0)).has_value());
  CHECK_FALSE(convexity_threshold(KernelParams(1.0, 1.0)).has_value());
}

TEST_CASE("hessian sign examples") {
  const KernelParams k(2.0, std::pow(0.5, -0.5));  // rho = 0.5
  CHECK(k.rho() == doctest::Approx(0.5));
  CHECK(hessian_sign_check(k, 0.5) == Curvature::positive);
  CHECK(hessian_sign_check(k, 2.0) == Curvature::negative);
  CHECK(hessian_sign_check(k, -2.0) == Curvature::negative);
  for (double e : {0.01, 0.3, 1.0, 5.0}) {
    CHECK(hessian_sign_check(KernelParams(0.5, 1.0), e) == Curvature::negative);
  }
  CHECK_THROWS_AS(hessian_sign_check(k, 0.0), ValidationError);
}

TEST_CASE("property: second derivative matches finite differences") {
  for (double alpha : {0.5, 1.5, 2.0, 4.0}) {
    for (double rho : {0.1, 1.0, 10.0}) {
      const KernelParams k(alpha, std::pow(rho, -1.0 / alpha));
      const auto f = [&](double e) { return k.z() * (1.0 - std::exp(-k.rho() * std::pow(std::abs(e), alpha))); };
      for (double e = 0.05; e <= 3.0; e *= 1.3) {
        const double fd = oracle::second_difference(f, e, 1e-3 * e);
        const double an = loss_second_derivative(k, e);
        CHECK(std::abs(an - fd) <= 1e-4 * std::abs(an) + 1e-6 * k.z() / (e * e));
      }
    }
  }
}
