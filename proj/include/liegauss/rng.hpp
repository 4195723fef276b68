#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

namespace liegauss::rng {

/// Philox4x32-10 counter-based pseudo-random generator (Salmon et al.,
/// "Parallel random numbers: as easy as 1, 2, 3", SC'11).
///
/// State is (key, counter); the key is derived from the 64-bit seed and the
/// stream id occupies the upper counter words. Distinct (seed, stream) pairs
/// give statistically independent sequences, which makes per-sample streams
/// in Monte-Carlo loops reproducible regardless of how work is split across
/// threads.
class Philox {
public:
  explicit Philox(uint64_t seed, uint64_t stream = 0);

  uint32_t next_u32();
  uint64_t next_u64();

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double();

  /// Standard normal deviate (Box-Muller, second value cached).
  double next_gaussian();

  /// One 4x32 output block for the given counter and key (10 rounds).
  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> counter,
                                       std::array<uint32_t, 2> key);

private:
  void refill();

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> counter_;
  std::array<uint32_t, 4> buffer_;
  int index_ = 4;
  bool has_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

/// Draws from N(mean, C) for positive-semidefinite C.
///
/// The factor is built from the eigendecomposition with eigenvalues clipped
/// at zero; eigenvalues below -1e-12 are rejected as non-PSD. Rank-deficient
/// covariances (e.g. a diagonal with zero entries) are fine.
class GaussianSampler {
public:
  GaussianSampler(const Eigen::MatrixXd& covariance, const Eigen::VectorXd& mean);

  Eigen::VectorXd sample(Philox& gen) const;
  Eigen::Index dim() const { return mean_.size(); }

private:
  Eigen::MatrixXd factor_;
  Eigen::VectorXd mean_;
};

}  // namespace liegauss::rng
