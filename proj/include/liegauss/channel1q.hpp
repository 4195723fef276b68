#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "liegauss/linalg.hpp"
#include "liegauss/su2.hpp"

namespace liegauss::channel1q {

/// Diffusion matrix A (3x3 real symmetric PSD) and drift vector b; the
/// parameters of one normal distribution on SU(2), hence of one normal
/// channel.
struct NormalParams1Q {
  Mat3 a = Mat3::Zero();
  Vec3 b = Vec3::Zero();

  NormalParams1Q() = default;
  /// Validates symmetry (1e-12) and positive semidefiniteness; eigenvalues in
  /// [-1e-10, 0) are clipped to zero.
  NormalParams1Q(const Mat3& a_in, const Vec3& b_in);
};

/// Probabilities of a diagonal Pauli channel: rho -> (1-p1-p2-p3) rho
/// + sum_j p_j sigma_j rho sigma_j.
///
/// Constructor enforces p_j >= 0 and p1+p2+p3 <= 1. Channels produced from
/// isotropic diffusion additionally satisfy p_j < 1/4 (the depolarizing
/// limit), but anisotropic diffusion can exceed 1/4 legitimately, so that
/// bound is not enforced here.
struct PauliChannelParams {
  double p1 = 0.0, p2 = 0.0, p3 = 0.0;

  PauliChannelParams() = default;
  PauliChannelParams(double p1_in, double p2_in, double p3_in);
};

/// Action of a unital qubit channel on Bloch coordinates: n' = R n.
struct PauliTransferMatrix1Q {
  Mat3 r = Mat3::Identity();

  double max_singular_value() const { return linalg::spectral_norm(r); }
};

/// Choi matrix C = sum_ij |i><j| (x) Lambda[|i><j|], row index (i*d + k) for
/// input index i and output index k.
struct ChoiMatrix {
  Mat c;

  explicit ChoiMatrix(Mat m) : c(std::move(m)) {}
  Eigen::Index dim() const { return c.rows(); }

  double hermiticity_error() const;
  double min_eigenvalue() const;
  /// Partial trace over the output factor; identity iff trace preserving.
  Mat input_marginal() const;
  /// Lambda[identity]; identity iff unital.
  Mat output_of_identity() const;
};

/// Generator of the channel in Bloch coordinates:
/// L = (A - tr(A) 1)/2 + [b]_x, so that the transfer matrix is exp(L).
Mat3 generator(const NormalParams1Q& params);

/// Generator of the spin-1 Fourier coefficient: the coefficient matrix of the
/// distribution is exp(-fourier_generator(params)). Assembled entrywise; the
/// generic quadratic form over the spin-1 generators gives the same matrix.
Mat fourier_generator(const NormalParams1Q& params);

/// The explicit unitary with u * (-fourier_generator) * u^dag == generator.
Mat bloch_from_spin1_unitary();

PauliTransferMatrix1Q ptm(const NormalParams1Q& params);

/// Choi matrix of the unital channel with Bloch action r.
ChoiMatrix choi_from_ptm(const PauliTransferMatrix1Q& r);

/// Inverse basis change: recovers the Bloch action from a Choi matrix.
Mat3 ptm_from_choi(const ChoiMatrix& choi);

/// Choi matrix assembled from the five independent elements of the spin-1
/// Fourier coefficient, completed by Hermiticity, trace preservation and
/// unitality. Independent construction from choi_from_ptm(ptm(params)).
ChoiMatrix choi_from_fourier(const NormalParams1Q& params);

/// Pauli probabilities of the channel with diagonal diffusion and no drift.
PauliChannelParams pauli_probs(const Vec3& a_diag);

/// Diagonal diffusion reproducing the given Pauli probabilities. Throws if
/// the probabilities are not realizable by a normal channel (recovered
/// diagonal entry below -1e-10).
Vec3 diffusion_from_pauli_probs(const PauliChannelParams& p);

struct EquivalenceClass {
  std::vector<NormalParams1Q> members;  // input params always included
  /// True when the class is an infinite family (branch increments are pure
  /// rotations); members then hold the |k| <= k_max truncation.
  bool infinite = false;
  /// True when every branch candidate up to |k| = k_max was accepted, so the
  /// enumeration may not have exhausted the family.
  bool truncated = false;
};

/// All normal distributions generating the same channel as params, found by
/// enumerating real logarithms of the transfer matrix with branch index
/// |k| <= k_max and keeping PSD solutions. Throws ExceptionalPointError when
/// the generator is defective.
EquivalenceClass equivalence_class(const NormalParams1Q& params, int k_max);

struct EigenvalueTrace {
  std::vector<double> magnitudes;
  std::vector<std::array<cxd, 3>> eigenvalues;  // sorted by (re, im)
  /// First magnitude at which a complex-conjugate pair is present.
  std::optional<double> pair_formation;
};

/// Level dynamics of the generator eigenvalues as the drift magnitude grows
/// along b_dir (normalized internally).
EigenvalueTrace eigenvalue_trace(const Mat3& a, const Vec3& b_dir,
                                 const std::vector<double>& magnitudes);

struct PtmEstimate {
  Mat3 mean = Mat3::Zero();
  Mat3 std_error = Mat3::Zero();
  long n_samples = 0;
};

/// Monte-Carlo estimate of the transfer matrix from the diffusive random
/// walk: n_samples products of n_steps group elements with tangent steps
/// drawn from N(b/n_steps, A/n_steps). Deterministic for a fixed seed and
/// independent of thread count (per-sample counter streams).
PtmEstimate random_walk_ptm(const NormalParams1Q& params, int n_steps, long n_samples,
                            uint64_t seed);

}  // namespace liegauss::channel1q
