#include "liegauss/rng.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace liegauss::rng {

namespace {
constexpr uint32_t kMult0 = 0xD2511F53u;
constexpr uint32_t kMult1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;
}  // namespace

std::array<uint32_t, 4> Philox::block(std::array<uint32_t, 4> c, std::array<uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const uint64_t p0 = static_cast<uint64_t>(kMult0) * c[0];
    const uint64_t p1 = static_cast<uint64_t>(kMult1) * c[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

Philox::Philox(uint64_t seed, uint64_t stream)
    : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
      counter_{0, 0, static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)} {}

void Philox::refill() {
  buffer_ = block(counter_, key_);
  index_ = 0;
  if (++counter_[0] == 0) ++counter_[1];  // 2^64 blocks per stream
}

uint32_t Philox::next_u32() {
  if (index_ >= 4) refill();
  return buffer_[index_++];
}

uint64_t Philox::next_u64() {
  const uint64_t lo = next_u32();
  const uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double Philox::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::next_gaussian() {
  if (has_cached_gaussian_) {
    has_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  // u1 in (0,1] so the log is finite
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_double();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = radius * std::sin(angle);
  has_cached_gaussian_ = true;
  return radius * std::cos(angle);
}

GaussianSampler::GaussianSampler(const Eigen::MatrixXd& covariance, const Eigen::VectorXd& mean)
    : mean_(mean) {
  if (covariance.rows() != covariance.cols() || covariance.rows() != mean.size()) {
    throw std::invalid_argument("GaussianSampler: covariance/mean dimension mismatch");
  }
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("GaussianSampler: covariance not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance);
  Eigen::VectorXd evals = es.eigenvalues();
  if (evals.minCoeff() < -1e-12) {
    throw std::invalid_argument("GaussianSampler: covariance not positive semidefinite (min eig " +
                                std::to_string(evals.minCoeff()) + ")");
  }
  factor_ = es.eigenvectors() * evals.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Eigen::VectorXd GaussianSampler::sample(Philox& gen) const {
  Eigen::VectorXd z(mean_.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = gen.next_gaussian();
  return mean_ + factor_ * z;
}

}  // namespace liegauss::rng
