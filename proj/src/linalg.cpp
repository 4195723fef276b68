#include "liegauss/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace liegauss::linalg {

bool all_finite(const Mat& m) { return m.allFinite(); }
bool all_finite(const RMat& m) { return m.allFinite(); }

void require_square(const Mat& m, const char* where) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(where) + ": matrix must be square, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(where) + ": matrix has non-finite entries");
  }
}

namespace {

// Order-13 Pade coefficients for exp.
constexpr double kPade13[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                              1187353796428800.,  129060195264000.,   10559470521600.,
                              670442572800.,      33522128640.,       1323241920.,
                              40840800.,          960960.,            16380.,
                              182.,               1.};

// Norm bound below which the (13,13) approximant reaches double precision.
constexpr double kPade13Theta = 5.371920351148152;

Mat expm_pade13(const Mat& a) {
  const auto n = a.rows();
  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat u = a * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
                     kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 + kPade13[1] * ident);
  const Mat v = a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) +
                kPade13[6] * a6 + kPade13[4] * a4 + kPade13[2] * a2 + kPade13[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Mat expm(const Mat& m) {
  require_square(m, "expm");
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();  // induced inf-norm
  if (norm == 0.0) return Mat::Identity(m.rows(), m.cols());
  int squarings = 0;
  if (norm > kPade13Theta) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kPade13Theta)));
  }
  Mat result = expm_pade13(m / std::pow(2.0, squarings));
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

RMat expm(const RMat& m) {
  return expm(Mat(m.cast<cxd>())).real();
}

EigenDecomposition eig(const Mat& m) {
  require_square(m, "eig");
  if (m.rows() > 16) {
    throw std::invalid_argument("eig: dimension " + std::to_string(m.rows()) +
                                " exceeds supported maximum of 16");
  }
  Eigen::ComplexEigenSolver<Mat> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eig: iteration failed to converge");
  }
  const auto n = m.rows();
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  const auto& vals = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (vals[a].real() != vals[b].real()) return vals[a].real() < vals[b].real();
    return vals[a].imag() < vals[b].imag();
  });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = vals[order[static_cast<size_t>(i)]];
    out.vectors.col(i) = solver.eigenvectors().col(order[static_cast<size_t>(i)]);
  }
  Eigen::JacobiSVD<Mat> svd(out.vectors);
  const double smin = svd.singularValues()(n - 1);
  out.condition = smin > 0 ? svd.singularValues()(0) / smin
                           : std::numeric_limits<double>::infinity();

  // residual check against the type contract
  const double scale = std::max(1.0, m.norm());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double resid = (m * out.vectors.col(i) - out.values[i] * out.vectors.col(i)).norm();
    if (resid > 1e-10 * scale) {
      throw NumericError("eig: residual " + std::to_string(resid) + " exceeds 1e-10*|M| for eigenvalue " +
                         std::to_string(i));
    }
  }
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

RMat kron(const RMat& a, const RMat& b) {
  RMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat3 cross_matrix(const Vec3& b) {
  Mat3 m;
  m << 0, -b.z(), b.y(),
       b.z(), 0, -b.x(),
       -b.y(), b.x(), 0;
  return m;
}

double spectral_norm(const RMat& m) {
  Eigen::JacobiSVD<RMat> svd(m);
  return svd.singularValues()(0);
}

namespace {

// L = P diag(d) P^{-1}, realness enforced by construction (conjugate columns).
Mat3 similarity_real(const Mat3c& p, const Eigen::Vector3cd& d) {
  Mat3c l = p * d.asDiagonal() * p.inverse();
  return l.real();
}

}  // namespace

std::vector<RealLogBranch> logm_real_branches(const Mat3& r, int k_max) {
  if (k_max < 0) throw std::invalid_argument("logm_real_branches: k_max must be >= 0");
  if (!r.allFinite()) throw std::invalid_argument("logm_real_branches: non-finite input");

  const double norm = r.norm();
  if (norm == 0.0 || std::abs(r.determinant()) < 1e-300) return {};
  const double pair_tol = kPairTolScale * std::max(1.0, norm);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  Eigen::EigenSolver<Mat3> solver(r, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) throw NumericError("logm_real_branches: eig failed");
  Eigen::Vector3cd w = solver.eigenvalues();
  Mat3c v = solver.eigenvectors();

  {
    Eigen::JacobiSVD<Mat3c> svd(v);
    const double smin = svd.singularValues()(2);
    const double cond = smin > 0 ? svd.singularValues()(0) / smin
                                 : std::numeric_limits<double>::infinity();
    if (cond > kDefectiveCond) {
      throw ExceptionalPointError(
          "logm_real_branches: eigenvector condition " + std::to_string(cond) +
          " indicates an exceptional point (coalescing branches)");
    }
  }

  const auto round_trip_ok = [&](const Mat3& l) {
    return (expm(RMat(l)) - r).norm() <= 1e-9 * std::max(1.0, norm);
  };

  std::vector<RealLogBranch> out;
  const bool all_real = (w.imag().cwiseAbs().maxCoeff() <= pair_tol);

  if (all_real) {
    Eigen::Vector3d wr = w.real();
    if (wr.minCoeff() <= 0.0) return {};

    // ascending order
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return wr[a] < wr[b]; });
    Eigen::Vector3d ws(wr[idx[0]], wr[idx[1]], wr[idx[2]]);
    Mat3c vs;
    for (int i = 0; i < 3; ++i) vs.col(i) = v.col(idx[i]);

    // locate a repeated pair, if any
    int pi = -1, pj = -1, ps = -1;
    double best = pair_tol;
    const std::array<std::array<int, 3>, 3> combos = {{{0, 1, 2}, {1, 2, 0}, {0, 2, 1}}};
    for (const auto& c : combos) {
      const double gap = std::abs(ws[c[0]] - ws[c[1]]);
      if (gap <= best) { best = gap; pi = c[0]; pj = c[1]; ps = c[2]; }
    }

    if (pi < 0) {
      // distinct positive spectrum: unique real logarithm
      Eigen::Vector3cd d(std::log(ws[0]), std::log(ws[1]), std::log(ws[2]));
      Mat3 l = similarity_real(vs, d);
      if (round_trip_ok(l)) out.push_back({0, l});
      return out;
    }

    // repeated positive pair: rotations by 2*pi*k in the eigenplane stay real
    const double rep = 0.5 * (ws[pi] + ws[pj]);
    Eigen::Vector3cd u = (vs.col(pi) - cxd(0, 1) * vs.col(pj)) / std::sqrt(2.0);
    Mat3c p;
    p.col(0) = u;
    p.col(1) = u.conjugate();
    p.col(2) = vs.col(ps);
    for (int k = -k_max; k <= k_max; ++k) {
      Eigen::Vector3cd d(cxd(std::log(rep), kTwoPi * k), cxd(std::log(rep), -kTwoPi * k),
                         std::log(ws[ps]));
      Mat3 l = similarity_real(p, d);
      if (round_trip_ok(l)) out.push_back({k, l});
    }
    return out;
  }

  // one real eigenvalue plus a complex-conjugate pair
  int real_idx = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(w[i].imag()) < std::abs(w[real_idx].imag())) real_idx = i;
  if (std::abs(w[real_idx].imag()) > pair_tol) return {};
  if (w[real_idx].real() <= 0.0) return {};

  const std::array<int, 2> pair = {real_idx == 0 ? 1 : 0, real_idx == 2 ? 1 : 2};
  if (std::abs(w[pair[0]] - std::conj(w[pair[1]])) > pair_tol) return {};
  const int ip = (w[pair[0]].imag() > 0) ? pair[0] : pair[1];

  const cxd lambda = w[ip];
  Mat3c p;
  p.col(0) = v.col(ip);
  p.col(1) = v.col(ip).conjugate();
  p.col(2) = v.col(real_idx);
  const cxd principal = std::log(lambda);
  const double d3 = std::log(w[real_idx].real());
  for (int k = -k_max; k <= k_max; ++k) {
    const cxd l1 = principal + cxd(0, kTwoPi * k);
    Eigen::Vector3cd d(l1, std::conj(l1), d3);
    Mat3 l = similarity_real(p, d);
    if (round_trip_ok(l)) out.push_back({k, l});
  }
  return out;
}

}  // namespace liegauss::linalg
