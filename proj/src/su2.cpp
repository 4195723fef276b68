#include "liegauss/su2.hpp"

#include <cmath>
#include <numbers>

namespace liegauss::su2 {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cxd kI(0.0, 1.0);
}  // namespace

EulerAngles EulerAngles::normalized() const {
  EulerAngles g = *this;
  auto wrap = [](double x, double period) {
    x = std::fmod(x, period);
    return x < 0 ? x + period : x;
  };
  g.beta = wrap(g.beta, kTwoPi);
  if (g.beta > kPi) {
    // (alpha, beta, gamma) and (alpha+pi, 2*pi-beta, gamma+pi) give rotations
    // related by the same axis flip
    g.beta = kTwoPi - g.beta;
    g.alpha += kPi;
    g.gamma += kPi;
  }
  g.alpha = wrap(g.alpha, kTwoPi);
  g.gamma = wrap(g.gamma, kTwoPi);
  return g;
}

std::array<Mat, 3> generators(Spin s) {
  if (s == Spin::Half) {
    Mat lx(2, 2), ly(2, 2), lz(2, 2);
    lx << 0, 0.5, 0.5, 0;
    ly << 0, -0.5 * kI, 0.5 * kI, 0;
    lz << 0.5, 0, 0, -0.5;
    return {lx, ly, lz};
  }
  const double r = 1.0 / std::sqrt(2.0);
  Mat lx(3, 3), ly(3, 3), lz(3, 3);
  lx << 0, r, 0, r, 0, r, 0, r, 0;
  ly << 0, -r * kI, 0, r * kI, 0, -r * kI, 0, r * kI, 0;
  lz << 1, 0, 0, 0, 0, 0, 0, 0, -1;
  return {lx, ly, lz};
}

Mat wigner_d(Spin s, const EulerAngles& g) {
  if (s == Spin::Half) {
    const double c = std::cos(g.beta / 2), sn = std::sin(g.beta / 2);
    Mat d(2, 2);
    d << std::exp(-kI * (g.alpha + g.gamma) / 2.0) * c,
        -std::exp(-kI * (g.alpha - g.gamma) / 2.0) * sn,
        std::exp(kI * (g.alpha - g.gamma) / 2.0) * sn,
        std::exp(kI * (g.alpha + g.gamma) / 2.0) * c;
    return d;
  }
  return exp_map(Vec3(0, 0, g.alpha), s) * exp_map(Vec3(0, g.beta, 0), s) *
         exp_map(Vec3(0, 0, g.gamma), s);
}

Mat exp_map(const Vec3& n, Spin s) {
  const int d = dimension(s);
  const double theta = n.norm();
  if (theta < 1e-300) return Mat::Identity(d, d);
  const Vec3 axis = n / theta;
  const auto ls = generators(s);
  const Mat k = axis.x() * ls[0] + axis.y() * ls[1] + axis.z() * ls[2];
  if (s == Spin::Half) {
    // exp(-i theta K) with K^2 = 1/4
    return std::cos(theta / 2) * Mat::Identity(2, 2) - kI * (2.0 * std::sin(theta / 2)) * k;
  }
  // spin 1: K^3 = K
  return Mat::Identity(3, 3) - kI * std::sin(theta) * k - (1.0 - std::cos(theta)) * (k * k);
}

Vec3 sample_step(const Mat3& covariance, const Vec3& mean, rng::Philox& gen) {
  rng::GaussianSampler sampler(covariance, mean);
  return sampler.sample(gen);
}

EulerAngles haar_sample(rng::Philox& gen) {
  EulerAngles g;
  g.alpha = kTwoPi * gen.next_double();
  g.beta = std::acos(1.0 - 2.0 * gen.next_double());  // density ~ sin(beta)
  g.gamma = 2.0 * kTwoPi * gen.next_double();
  return g;
}

}  // namespace liegauss::su2
