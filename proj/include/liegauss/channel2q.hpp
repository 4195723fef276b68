#pragma once

#include <cstdint>

#include "liegauss/channel1q.hpp"

namespace liegauss::channel2q {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat16 = Eigen::Matrix<double, 16, 16>;

/// 6x6 diffusion matrix and 6-vector drift of a normal distribution on
/// SU(2) (x) SU(2), with block views
///   A = [ A1  F ]      b = [ b1 ]
///       [ F^T A2 ]         [ b2 ]
struct NormalParams2Q {
  Mat6 a = Mat6::Zero();
  Vec6 b = Vec6::Zero();

  NormalParams2Q() = default;
  NormalParams2Q(const Mat6& a_in, const Vec6& b_in);
  static NormalParams2Q from_blocks(const Mat3& a1, const Mat3& a2, const Mat3& f,
                                    const Vec3& b1, const Vec3& b2);

  Mat3 a1() const { return a.topLeftCorner<3, 3>(); }
  Mat3 a2() const { return a.bottomRightCorner<3, 3>(); }
  Mat3 f() const { return a.topRightCorner<3, 3>(); }
  Vec3 b1() const { return b.head<3>(); }
  Vec3 b2() const { return b.tail<3>(); }
};

/// Correlated isotropic model: A1 = a1*1, A2 = a2*1, F = rho*sqrt(a1*a2)*1,
/// no drift.
struct IsotropicNormalParams {
  double a1 = 0.0, a2 = 0.0, rho = 0.0;

  IsotropicNormalParams() = default;
  IsotropicNormalParams(double a1_in, double a2_in, double rho_in);
  NormalParams2Q to_normal() const;
};

/// Two-qubit Pauli error mixture: with probability m the same Pauli error
/// acts on both qubits, otherwise independent isotropic errors of strength
/// p and q.
struct CorrelatedPauliParams {
  double p = 0.0, q = 0.0, m = 0.0;

  CorrelatedPauliParams() = default;
  CorrelatedPauliParams(double p_in, double q_in, double m_in);
  /// The induced 4x4 probability table p_ij.
  Eigen::Matrix4d table() const;
};

/// Transfer matrix in the two-qubit Pauli basis, block form
/// 1 (+) R1 (+) R2 (+) W. full() assembles the 16x16 matrix in lexicographic
/// Pauli-pair order, index (j,k) -> 4*j + k with j the first-qubit label; the
/// blocks sit at indices {0}, {4,8,12}, {1,2,3} and {4j+k : j,k >= 1}.
struct PauliTransferMatrix2Q {
  Mat3 r1 = Mat3::Identity();
  Mat3 r2 = Mat3::Identity();
  Mat9 w = Mat9::Identity();

  Mat16 full() const;
  static PauliTransferMatrix2Q from_full(const Mat16& m);
};

/// Generator of the two-qubit channel in the same block form; the transfer
/// matrix is the blockwise exponential.
struct Generator2Q {
  Mat3 l1 = Mat3::Zero();
  Mat3 l2 = Mat3::Zero();
  Mat9 m = Mat9::Zero();

  Mat16 full() const;
};

/// Block generator: 0 (+) L(A1,b1) (+) L(A2,b2) (+) M. The 3x3 blocks of M
/// couple the two qubits through the cross-covariance F: block (i,j), i != j,
/// is L(A1,b1)_ij * 1 + s_ij [f_n]_x with n = 6-i-j (1-based), s_ij the
/// checkerboard sign, and f_n the n'th row of F.
Generator2Q generator2(const NormalParams2Q& params);

PauliTransferMatrix2Q ptm2(const NormalParams2Q& params);

/// Closed form of the correlated isotropic channel (single-qubit blocks
/// e^{-a} 1 and the four-coefficient W matrix).
PauliTransferMatrix2Q correlated_normal_ptm(const IsotropicNormalParams& params);

PauliTransferMatrix2Q correlated_pauli_ptm(const CorrelatedPauliParams& params);

/// Transfer matrix of an arbitrary Pauli-product mixture, computed by
/// conjugation sums; diagonal in the Pauli-pair basis.
PauliTransferMatrix2Q general_pauli_ptm(const Eigen::Matrix4d& p_table);

/// Fourier coefficient exp(-M_{s1,s2}) of the distribution, for
/// (s1, s2) in {(0,1), (1,0), (1,1)} (spin labels 0 and 1).
Mat fourier_coeff2(const NormalParams2Q& params, int s1, int s2);

/// Choi matrix (16x16) of the channel with the given transfer matrix.
channel1q::ChoiMatrix choi2(const PauliTransferMatrix2Q& ptm);

/// Isotropic error-probability p of the single-qubit marginal with
/// diffusion a, and its inverse. p >= 1/4 - 1e-12 is capped at a = 50
/// (numerically depolarizing).
double error_prob_from_a(double a);
double a_from_error_prob(double p);

struct Ptm2Estimate {
  Mat16 mean = Mat16::Identity();
  Mat16 std_error = Mat16::Zero();
  long n_samples = 0;
};

/// Monte-Carlo transfer-matrix estimate from the six-dimensional diffusive
/// random walk (tangent steps N(b/n_steps, A/n_steps), factorized group
/// elements u1 (x) u2).
Ptm2Estimate random_walk_ptm2(const NormalParams2Q& params, int n_steps, long n_samples,
                              uint64_t seed);

}  // namespace liegauss::channel2q
