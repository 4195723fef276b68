#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace liegauss {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3d;

/// Generator has (numerically) coalescing eigenvectors; branch extraction is
/// meaningless there.
class ExceptionalPointError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Iterative numeric routine failed to converge to the requested tolerance.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Post-selection removed all probability mass.
class DegenerateOutcomeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace linalg {

/// Eigenvector-matrix condition number above which a matrix is treated as
/// defective (exceptional point).
inline constexpr double kDefectiveCond = 1e8;

/// Two eigenvalues count as a conjugate pair within this tolerance times
/// the Frobenius norm of the matrix.
inline constexpr double kPairTolScale = 1e-8;

bool all_finite(const Mat& m);
bool all_finite(const RMat& m);

void require_square(const Mat& m, const char* where);

/// Matrix exponential, fixed-order (13,13) Pade approximant with
/// scaling and squaring.
Mat expm(const Mat& m);

/// Real-input convenience overload; exp of a real matrix is real.
RMat expm(const RMat& m);

struct EigenDecomposition {
  Eigen::VectorXcd values;  // sorted by (real, imag)
  Mat vectors;              // columns are right eigenvectors, unit norm
  double condition = 0.0;   // condition number of the eigenvector matrix
};

/// Dense eigendecomposition for square matrices of dimension <= 16.
/// Eigenvalues are sorted by (real part, imaginary part) so results are
/// deterministic across runs.
EigenDecomposition eig(const Mat& m);

Mat kron(const Mat& a, const Mat& b);
RMat kron(const RMat& a, const RMat& b);

/// Cross-product matrix: cross_matrix(b) * v == b x v.
Mat3 cross_matrix(const Vec3& b);

struct RealLogBranch {
  int k = 0;     // branch index; 0 is the principal logarithm
  Mat3 value;    // real matrix with expm(value) == R
};

/// All real logarithms of a real 3x3 matrix R with branch index |k| <= k_max.
///
/// R must be invertible with spectrum either all real-positive or one
/// real-positive eigenvalue plus a complex-conjugate pair; anything else
/// (negative or zero real eigenvalues) yields an empty list. A repeated
/// positive eigenvalue is handled through the canonical conjugate-pair basis
/// of its eigenplane. Throws ExceptionalPointError when the eigenvector
/// matrix is ill-conditioned beyond kDefectiveCond.
std::vector<RealLogBranch> logm_real_branches(const Mat3& r, int k_max);

inline Mat3 symmetric_part(const Mat3& m) { return 0.5 * (m + m.transpose()); }
inline Mat3 antisymmetric_part(const Mat3& m) { return 0.5 * (m - m.transpose()); }

/// Largest singular value.
double spectral_norm(const RMat& m);

}  // namespace linalg
}  // namespace liegauss
