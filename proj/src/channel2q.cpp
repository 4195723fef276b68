#include "liegauss/channel2q.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "liegauss/parallel.hpp"
#include "liegauss/pauli.hpp"

namespace liegauss::channel2q {

namespace {
constexpr double kPsdTol = 1e-10;

// lexicographic 16 indices of the (+) blocks
constexpr int kIdxR1[3] = {4, 8, 12};
constexpr int kIdxR2[3] = {1, 2, 3};
constexpr int kIdxW[9] = {5, 6, 7, 9, 10, 11, 13, 14, 15};

Mat16 assemble_full(double unit, const Mat3& r1, const Mat3& r2, const Mat9& w) {
  Mat16 full = Mat16::Zero();
  full(0, 0) = unit;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      full(kIdxR1[i], kIdxR1[j]) = r1(i, j);
      full(kIdxR2[i], kIdxR2[j]) = r2(i, j);
    }
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) full(kIdxW[i], kIdxW[j]) = w(i, j);
  return full;
}
}  // namespace

NormalParams2Q::NormalParams2Q(const Mat6& a_in, const Vec6& b_in) : a(a_in), b(b_in) {
  if (!a.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("NormalParams2Q: non-finite entries");
  }
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("NormalParams2Q: diffusion matrix not symmetric");
  }
  a = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Mat6> es(a, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("NormalParams2Q: diffusion matrix not PSD (min eig " +
                                std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
}

NormalParams2Q NormalParams2Q::from_blocks(const Mat3& a1, const Mat3& a2, const Mat3& f,
                                           const Vec3& b1, const Vec3& b2) {
  Mat6 a;
  a.topLeftCorner<3, 3>() = a1;
  a.bottomRightCorner<3, 3>() = a2;
  a.topRightCorner<3, 3>() = f;
  a.bottomLeftCorner<3, 3>() = f.transpose();
  Vec6 b;
  b << b1, b2;
  return NormalParams2Q(a, b);
}

IsotropicNormalParams::IsotropicNormalParams(double a1_in, double a2_in, double rho_in)
    : a1(a1_in), a2(a2_in), rho(rho_in) {
  if (a1 < 0 || a2 < 0) throw std::invalid_argument("IsotropicNormalParams: a1, a2 must be >= 0");
  if (rho < -1.0 || rho > 1.0) throw std::invalid_argument("IsotropicNormalParams: |rho| <= 1");
}

NormalParams2Q IsotropicNormalParams::to_normal() const {
  const double a12 = rho * std::sqrt(a1 * a2);
  return NormalParams2Q::from_blocks(a1 * Mat3::Identity(), a2 * Mat3::Identity(),
                                     a12 * Mat3::Identity(), Vec3::Zero(), Vec3::Zero());
}

CorrelatedPauliParams::CorrelatedPauliParams(double p_in, double q_in, double m_in)
    : p(p_in), q(q_in), m(m_in) {
  if (p < 0 || p > 0.25 + 1e-12 || q < 0 || q > 0.25 + 1e-12) {
    throw std::invalid_argument("CorrelatedPauliParams: p, q must lie in [0, 1/4]");
  }
  if (m < 0 || m > 1) throw std::invalid_argument("CorrelatedPauliParams: m must lie in [0, 1]");
}

Eigen::Matrix4d CorrelatedPauliParams::table() const {
  Eigen::Vector4d pv(1 - 3 * p, p, p, p), qv(1 - 3 * q, q, q, q);
  Eigen::Matrix4d t = (1 - m) * pv * qv.transpose();
  for (int i = 0; i < 4; ++i) t(i, i) += m * 0.5 * (pv[i] + qv[i]);
  return t;
}

Mat16 PauliTransferMatrix2Q::full() const { return assemble_full(1.0, r1, r2, w); }

PauliTransferMatrix2Q PauliTransferMatrix2Q::from_full(const Mat16& m) {
  PauliTransferMatrix2Q out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out.r1(i, j) = m(kIdxR1[i], kIdxR1[j]);
      out.r2(i, j) = m(kIdxR2[i], kIdxR2[j]);
    }
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) out.w(i, j) = m(kIdxW[i], kIdxW[j]);
  return out;
}

Mat16 Generator2Q::full() const { return assemble_full(0.0, l1, l2, m); }

Generator2Q generator2(const NormalParams2Q& params) {
  Generator2Q gen;
  gen.l1 = channel1q::generator(channel1q::NormalParams1Q(params.a1(), params.b1()));
  gen.l2 = channel1q::generator(channel1q::NormalParams1Q(params.a2(), params.b2()));
  const Mat3 f = params.f();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Mat3 block = gen.l1(i, j) * Mat3::Identity();
      if (i == j) {
        block += gen.l2;
      } else {
        const int n = 6 - (i + 1) - (j + 1);              // 1-based third index
        const Vec3 row = f.row(n - 1).transpose();
        const int sign = ((i + j) % 2 == 0) ? 1 : -1;     // (-1)^{i+j} with 1-based i+j even
        // i > j carries the opposite sign of i < j
        block += (i > j ? -sign : sign) * linalg::cross_matrix(row);
      }
      gen.m.block<3, 3>(3 * i, 3 * j) = block;
    }
  }
  return gen;
}

PauliTransferMatrix2Q ptm2(const NormalParams2Q& params) {
  const Generator2Q gen = generator2(params);
  PauliTransferMatrix2Q out;
  out.r1 = linalg::expm(RMat(gen.l1));
  out.r2 = linalg::expm(RMat(gen.l2));
  out.w = linalg::expm(RMat(gen.m));
  return out;
}

PauliTransferMatrix2Q correlated_normal_ptm(const IsotropicNormalParams& params) {
  const double a12 = params.rho * std::sqrt(params.a1 * params.a2);
  const double e0 = std::exp(-params.a1 - params.a2);
  const double e1 = e0 * (std::exp(2 * a12) + 2 * std::exp(-a12)) / 3.0;
  const double e2 = e0 * (std::exp(2 * a12) - std::exp(-a12)) / 3.0;
  const double e3 = e0 * (std::exp(a12) + std::exp(-a12)) / 2.0;
  const double e4 = e0 * (std::exp(-a12) - std::exp(a12)) / 2.0;

  PauliTransferMatrix2Q out;
  out.r1 = std::exp(-params.a1) * Mat3::Identity();
  out.r2 = std::exp(-params.a2) * Mat3::Identity();
  out.w = Mat9::Zero();
  const int diag3[3] = {0, 4, 8};  // composite indices (1,1),(2,2),(3,3)
  for (int a : diag3)
    for (int b : diag3) out.w(a, b) = (a == b) ? e1 : e2;
  const int pairs[3][2] = {{1, 3}, {2, 6}, {5, 7}};  // (1,2)-(2,1), (1,3)-(3,1), (2,3)-(3,2)
  for (const auto& pr : pairs) {
    out.w(pr[0], pr[0]) = e3;
    out.w(pr[1], pr[1]) = e3;
    out.w(pr[0], pr[1]) = e4;
    out.w(pr[1], pr[0]) = e4;
  }
  return out;
}

PauliTransferMatrix2Q correlated_pauli_ptm(const CorrelatedPauliParams& params) {
  const double w1 = 1 + 4 * (params.m - 1) * (params.p + params.q * (1 - 4 * params.p));
  const double w2 = w1 - 2 * params.m * (params.p + params.q);
  const double shift = 2 * params.m * (params.p - params.q);
  PauliTransferMatrix2Q out;
  out.r1 = (1 - 4 * params.p + shift) * Mat3::Identity();
  out.r2 = (1 - 4 * params.q - shift) * Mat3::Identity();
  Eigen::Matrix<double, 9, 1> wd;
  wd << w1, w2, w2, w2, w1, w2, w2, w2, w1;
  out.w = wd.asDiagonal();
  return out;
}

PauliTransferMatrix2Q general_pauli_ptm(const Eigen::Matrix4d& p_table) {
  if (p_table.minCoeff() < -1e-12 || std::abs(p_table.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("general_pauli_ptm: table entries must be >= 0 and sum to 1");
  }
  // sigma_i sigma_j sigma_i = s(i,j) sigma_j with s = +1 iff i or j is 0 or i == j
  auto sgn = [](int i, int j) { return (i == 0 || j == 0 || i == j) ? 1.0 : -1.0; };
  Mat16 full = Mat16::Zero();
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      double d = 0;
      for (int i1 = 0; i1 < 4; ++i1)
        for (int i2 = 0; i2 < 4; ++i2) d += p_table(i1, i2) * sgn(i1, j) * sgn(i2, k);
      full(4 * j + k, 4 * j + k) = d;
    }
  }
  return PauliTransferMatrix2Q::from_full(full);
}

Mat fourier_coeff2(const NormalParams2Q& params, int s1, int s2) {
  if (s1 == 0 && s2 == 1) {
    return linalg::expm(
        Mat(-channel1q::fourier_generator(channel1q::NormalParams1Q(params.a2(), params.b2()))));
  }
  if (s1 == 1 && s2 == 0) {
    return linalg::expm(
        Mat(-channel1q::fourier_generator(channel1q::NormalParams1Q(params.a1(), params.b1()))));
  }
  if (s1 == 1 && s2 == 1) {
    const auto spin1 = su2::generators(su2::Spin::One);
    const Mat id3 = Mat::Identity(3, 3);
    std::array<Mat, 6> ls;
    for (int i = 0; i < 3; ++i) {
      ls[static_cast<size_t>(i)] = linalg::kron(spin1[static_cast<size_t>(i)], id3);
      ls[static_cast<size_t>(i + 3)] = linalg::kron(id3, spin1[static_cast<size_t>(i)]);
    }
    Mat gen = Mat::Zero(9, 9);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        gen += 0.5 * params.a(i, j) * ls[static_cast<size_t>(i)] * ls[static_cast<size_t>(j)];
      }
      gen += cxd(0, params.b[i]) * ls[static_cast<size_t>(i)];
    }
    return linalg::expm(Mat(-gen));
  }
  throw std::invalid_argument("fourier_coeff2: (s1, s2) must be (0,1), (1,0) or (1,1)");
}

channel1q::ChoiMatrix choi2(const PauliTransferMatrix2Q& ptm) {
  const Mat16 r = ptm.full();
  Mat c = Mat::Zero(16, 16);
  for (int mu = 0; mu < 16; ++mu) {
    const Mat pm = pauli2(mu / 4, mu % 4);
    for (int nu = 0; nu < 16; ++nu) {
      if (r(nu, mu) == 0.0) continue;
      c += 0.25 * r(nu, mu) * linalg::kron(Mat(pm.transpose()), pauli2(nu / 4, nu % 4));
    }
  }
  return channel1q::ChoiMatrix(std::move(c));
}

double error_prob_from_a(double a) {
  if (a < 0) throw std::invalid_argument("error_prob_from_a: a must be >= 0");
  return (1.0 - std::exp(-a)) / 4.0;
}

double a_from_error_prob(double p) {
  if (p < 0 || p > 0.25 + 1e-12) {
    throw std::invalid_argument("a_from_error_prob: p must lie in [0, 1/4]");
  }
  if (p >= 0.25 - 1e-12) return 50.0;  // numerically depolarizing
  return -std::log(1.0 - 4.0 * p);
}

Ptm2Estimate random_walk_ptm2(const NormalParams2Q& params, int n_steps, long n_samples,
                              uint64_t seed) {
  if (n_steps < 50) throw std::invalid_argument("random_walk_ptm2: need n_steps >= 50");
  if (n_samples < 1000) throw std::invalid_argument("random_walk_ptm2: need n_samples >= 1000");

  const rng::GaussianSampler sampler(params.a / n_steps, params.b / n_steps);
  constexpr long kBlock = 512;
  const long n_blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<Mat16> sums(static_cast<size_t>(n_blocks), Mat16::Zero());
  std::vector<Mat16> sqsums(static_cast<size_t>(n_blocks), Mat16::Zero());

  parallel_for_blocks(n_samples, kBlock, [&](long ib, long begin, long end) {
    Mat16 sum = Mat16::Zero(), sq = Mat16::Zero();
    for (long s = begin; s < end; ++s) {
      rng::Philox gen(seed, static_cast<uint64_t>(s));
      Eigen::Matrix2cd u1 = Eigen::Matrix2cd::Identity();
      Eigen::Matrix2cd u2 = Eigen::Matrix2cd::Identity();
      for (int t = 0; t < n_steps; ++t) {
        const Eigen::VectorXd n = sampler.sample(gen);
        for (int half = 0; half < 2; ++half) {
          const Vec3 v = n.segment<3>(3 * half);
          const double theta = v.norm();
          if (theta <= 1e-300) continue;
          const double c = std::cos(theta / 2), sn = std::sin(theta / 2) / theta;
          Eigen::Matrix2cd step;
          step << cxd(c, -sn * v[2]), cxd(-sn * v[1], -sn * v[0]),
                  cxd(sn * v[1], -sn * v[0]), cxd(c, sn * v[2]);
          if (half == 0) u1 = step * u1; else u2 = step * u2;
        }
      }
      // per-sample transfer matrix factorizes: R = R(u1) (x) R(u2) over the
      // 4x4 Pauli labels (identity row/column included)
      Eigen::Matrix4d r1 = Eigen::Matrix4d::Zero(), r2 = Eigen::Matrix4d::Zero();
      r1(0, 0) = r2(0, 0) = 1.0;
      for (int j = 0; j < 3; ++j) {
        const Eigen::Matrix2cd c1 = u1 * Eigen::Matrix2cd(pauli(j + 1)) * u1.adjoint();
        const Eigen::Matrix2cd c2 = u2 * Eigen::Matrix2cd(pauli(j + 1)) * u2.adjoint();
        r1(1, j + 1) = 0.5 * (c1(0, 1).real() + c1(1, 0).real());
        r1(2, j + 1) = 0.5 * (c1(1, 0).imag() - c1(0, 1).imag());
        r1(3, j + 1) = 0.5 * (c1(0, 0).real() - c1(1, 1).real());
        r2(1, j + 1) = 0.5 * (c2(0, 1).real() + c2(1, 0).real());
        r2(2, j + 1) = 0.5 * (c2(1, 0).imag() - c2(0, 1).imag());
        r2(3, j + 1) = 0.5 * (c2(0, 0).real() - c2(1, 1).real());
      }
      Mat16 r;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          r.block<4, 4>(4 * a, 4 * b) = r1(a, b) * r2;
      sum += r;
      sq += r.cwiseProduct(r);
    }
    sums[static_cast<size_t>(ib)] = sum;
    sqsums[static_cast<size_t>(ib)] = sq;
  });

  Mat16 total = Mat16::Zero(), total_sq = Mat16::Zero();
  for (long ib = 0; ib < n_blocks; ++ib) {
    total += sums[static_cast<size_t>(ib)];
    total_sq += sqsums[static_cast<size_t>(ib)];
  }
  Ptm2Estimate est;
  est.n_samples = n_samples;
  est.mean = total / double(n_samples);
  const Mat16 var = (total_sq / double(n_samples) - est.mean.cwiseProduct(est.mean)).cwiseMax(0.0);
  est.std_error = (var / double(n_samples)).cwiseSqrt();
  return est;
}

}  // namespace liegauss::channel2q
