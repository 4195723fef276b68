#include "liegauss/channel1q.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "liegauss/parallel.hpp"
#include "liegauss/pauli.hpp"

namespace liegauss::channel1q {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPsdTol = 1e-10;
constexpr double kDedupTol = 1e-8;
const cxd kI(0.0, 1.0);

Mat3 clip_psd(const Mat3& a) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(a);
  if (es.eigenvalues().minCoeff() >= 0.0) return a;
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
         es.eigenvectors().transpose();
}
}  // namespace

NormalParams1Q::NormalParams1Q(const Mat3& a_in, const Vec3& b_in) : a(a_in), b(b_in) {
  if (!a.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("NormalParams1Q: non-finite entries");
  }
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("NormalParams1Q: diffusion matrix not symmetric");
  }
  a = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Mat3> es(a, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("NormalParams1Q: diffusion matrix not PSD (min eig " +
                                std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  a = clip_psd(a);
}

PauliChannelParams::PauliChannelParams(double p1_in, double p2_in, double p3_in)
    : p1(p1_in), p2(p2_in), p3(p3_in) {
  if (p1 < 0 || p2 < 0 || p3 < 0 || p1 + p2 + p3 > 1.0 + 1e-12) {
    throw std::invalid_argument("PauliChannelParams: probabilities must be >= 0 with sum <= 1");
  }
}

double ChoiMatrix::hermiticity_error() const {
  return (c - c.adjoint()).cwiseAbs().maxCoeff();
}

double ChoiMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Mat ChoiMatrix::input_marginal() const {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(c.rows()))));
  Mat out = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out(i, j) = c.block(i * d, j * d, d, d).trace();
  return out;
}

Mat ChoiMatrix::output_of_identity() const {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(c.rows()))));
  Mat out = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) out += c.block(i * d, i * d, d, d);
  return out;
}

Mat3 generator(const NormalParams1Q& params) {
  return 0.5 * (params.a - params.a.trace() * Mat3::Identity()) + linalg::cross_matrix(params.b);
}

Mat fourier_generator(const NormalParams1Q& params) {
  const Mat3& a = params.a;
  const Vec3& b = params.b;
  const double r2 = std::sqrt(2.0);
  Mat diffusion(3, 3);
  diffusion << a(2, 2) + (a(0, 0) + a(1, 1)) / 2, (a(0, 2) - kI * a(1, 2)) / r2,
      -kI * a(0, 1) + (a(0, 0) - a(1, 1)) / 2,
      (a(0, 2) + kI * a(1, 2)) / r2, a(0, 0) + a(1, 1), (-a(0, 2) + kI * a(1, 2)) / r2,
      kI * a(0, 1) + (a(0, 0) - a(1, 1)) / 2, (-a(0, 2) - kI * a(1, 2)) / r2,
      a(2, 2) + (a(0, 0) + a(1, 1)) / 2;
  Mat drift(3, 3);
  drift << -kI * b.z(), -(b.y() + kI * b.x()) / r2, 0,
      (b.y() - kI * b.x()) / r2, 0, -(b.y() + kI * b.x()) / r2,
      0, (b.y() - kI * b.x()) / r2, kI * b.z();
  return 0.5 * diffusion - drift;
}

Mat bloch_from_spin1_unitary() {
  Mat u(3, 3);
  const double r = 1.0 / std::sqrt(2.0);
  u << -kI * r, 0, kI * r,
       r, 0, r,
       0, kI, 0;
  return u;
}

PauliTransferMatrix1Q ptm(const NormalParams1Q& params) {
  return PauliTransferMatrix1Q{linalg::expm(RMat(generator(params)))};
}

ChoiMatrix choi_from_ptm(const PauliTransferMatrix1Q& r) {
  Mat c = 0.5 * linalg::kron(pauli(0), pauli(0));
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      if (r.r(i, j) == 0.0) continue;
      c += 0.5 * r.r(i, j) * linalg::kron(pauli(j + 1).transpose(), pauli(i + 1));
    }
  }
  return ChoiMatrix(std::move(c));
}

Mat3 ptm_from_choi(const ChoiMatrix& choi) {
  if (choi.dim() != 4) throw std::invalid_argument("ptm_from_choi: expected a 4x4 Choi matrix");
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = 0.5 * (choi.c * linalg::kron(pauli(j + 1).transpose(), pauli(i + 1))).trace().real();
  return r;
}

ChoiMatrix choi_from_fourier(const NormalParams1Q& params) {
  const Mat f = linalg::expm(Mat(-fourier_generator(params)));
  // spin-1 basis rows/cols ordered m = +1, 0, -1
  const cxd a00 = 0.5 + 0.5 * f(1, 1);            // Lambda[0,0]_00
  const cxd a10 = f(2, 1) / std::sqrt(2.0);       // Lambda[0,0]_10
  const cxd g00 = f(1, 2) / std::sqrt(2.0);       // Lambda[1,0]_00
  const cxd g10 = f(2, 2);                        // Lambda[1,0]_10
  const cxd g01 = -f(0, 2);                       // Lambda[1,0]_01
  Mat c(4, 4);
  c << a00, std::conj(a10), std::conj(g00), std::conj(g10),
       a10, 1.0 - a00, std::conj(g01), -std::conj(g00),
       g00, g01, 1.0 - a00, -std::conj(a10),
       g10, -g00, -a10, a00;
  return ChoiMatrix(std::move(c));
}

PauliChannelParams pauli_probs(const Vec3& a_diag) {
  if (a_diag.minCoeff() < -kPsdTol) {
    throw std::invalid_argument("pauli_probs: diagonal diffusion entries must be nonnegative");
  }
  const double tr = a_diag.sum();
  double p[3];
  for (int j = 0; j < 3; ++j) {
    double s = 0;
    for (int k = 0; k < 3; ++k) s += (j == k ? -1.0 : 1.0) * std::exp(a_diag[k] / 2);
    p[j] = (1.0 - std::exp(-tr / 2) * s) / 4.0;
  }
  return PauliChannelParams(p[0], p[1], p[2]);
}

Vec3 diffusion_from_pauli_probs(const PauliChannelParams& p) {
  const double pv[3] = {p.p1, p.p2, p.p3};
  double v[3];
  for (int j = 0; j < 3; ++j) {
    const double off = pv[(j + 1) % 3] + pv[(j + 2) % 3];
    const double rjj = 1.0 - 2.0 * off;
    if (rjj <= 0.0) {
      throw std::invalid_argument("diffusion_from_pauli_probs: transfer diagonal not positive");
    }
    v[j] = -2.0 * std::log(rjj);
  }
  const double tr = 0.5 * (v[0] + v[1] + v[2]);
  Vec3 a(tr - v[0], tr - v[1], tr - v[2]);
  if (a.minCoeff() < -kPsdTol) {
    throw std::invalid_argument(
        "diffusion_from_pauli_probs: probabilities not realizable by a normal channel (A_" +
        std::to_string(int(std::min_element(a.data(), a.data() + 3) - a.data()) + 1) + " < 0)");
  }
  return a.cwiseMax(0.0);
}

namespace {

std::optional<NormalParams1Q> params_from_log(const Mat3& l) {
  const Mat3 s = linalg::symmetric_part(l);
  const Mat3 a = 2.0 * s - s.trace() * Mat3::Identity();
  Eigen::SelfAdjointEigenSolver<Mat3> es(a, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol) return std::nullopt;
  const Mat3 k = linalg::antisymmetric_part(l);
  const Vec3 b(k(2, 1), k(0, 2), k(1, 0));
  return NormalParams1Q(a, b);
}

bool same_params(const NormalParams1Q& x, const NormalParams1Q& y) {
  return (x.a - y.a).norm() + (x.b - y.b).norm() < kDedupTol;
}

}  // namespace

EquivalenceClass equivalence_class(const NormalParams1Q& params, int k_max) {
  const Mat3 r = ptm(params).r;
  std::vector<linalg::RealLogBranch> branches;
  try {
    branches = linalg::logm_real_branches(r, k_max);
  } catch (const ExceptionalPointError& e) {
    throw ExceptionalPointError(std::string("equivalence_class: ") + e.what());
  }

  EquivalenceClass out;
  long accepted = 0;
  for (const auto& br : branches) {
    if (auto p = params_from_log(br.value)) {
      ++accepted;
      if (std::none_of(out.members.begin(), out.members.end(),
                       [&](const NormalParams1Q& m) { return same_params(m, *p); })) {
        out.members.push_back(std::move(*p));
      }
    }
  }
  out.truncated = (k_max > 0 && accepted == 2L * k_max + 1);
  if (std::none_of(out.members.begin(), out.members.end(),
                   [&](const NormalParams1Q& m) { return same_params(m, params); })) {
    out.members.push_back(params);
  }

  // The family is infinite exactly when the branch step is a pure rotation
  // generator, i.e. the increment between consecutive branches is
  // antisymmetric (drift and diffusion commute).
  for (size_t i = 0; i + 1 < branches.size(); ++i) {
    if (branches[i + 1].k == branches[i].k + 1) {
      const Mat3 inc = (branches[i + 1].value - branches[i].value) / kTwoPi;
      if ((inc + inc.transpose()).norm() <= 1e-9 * std::max(1.0, inc.norm())) {
        out.infinite = true;
      }
      break;
    }
  }
  return out;
}

EigenvalueTrace eigenvalue_trace(const Mat3& a, const Vec3& b_dir,
                                 const std::vector<double>& magnitudes) {
  const double norm = b_dir.norm();
  if (norm < 1e-14) throw std::invalid_argument("eigenvalue_trace: drift direction is zero");
  const Vec3 dir = b_dir / norm;

  EigenvalueTrace out;
  out.magnitudes = magnitudes;
  out.eigenvalues.reserve(magnitudes.size());
  for (const double m : magnitudes) {
    const Mat3 l = generator(NormalParams1Q(a, m * dir));
    const auto ed = linalg::eig(l.cast<cxd>());
    out.eigenvalues.push_back({ed.values[0], ed.values[1], ed.values[2]});
    if (!out.pair_formation) {
      // significance floor sits above the sqrt(eps) eigenvalue noise of a
      // near-defective generator
      const double tol = std::max(1e-7, linalg::kPairTolScale * l.norm());
      for (int i = 0; i < 3 && !out.pair_formation; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          if (std::abs(ed.values[i].imag()) > tol &&
              std::abs(ed.values[i] - std::conj(ed.values[j])) <= tol) {
            out.pair_formation = m;
            break;
          }
        }
      }
    }
  }
  return out;
}

PtmEstimate random_walk_ptm(const NormalParams1Q& params, int n_steps, long n_samples,
                            uint64_t seed) {
  if (n_steps < 50) throw std::invalid_argument("random_walk_ptm: need n_steps >= 50");
  if (n_samples < 1000) throw std::invalid_argument("random_walk_ptm: need n_samples >= 1000");

  const rng::GaussianSampler sampler(params.a / n_steps, params.b / n_steps);
  constexpr long kBlock = 1024;
  const long n_blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<Mat3> sums(static_cast<size_t>(n_blocks), Mat3::Zero());
  std::vector<Mat3> sqsums(static_cast<size_t>(n_blocks), Mat3::Zero());

  parallel_for_blocks(n_samples, kBlock, [&](long ib, long begin, long end) {
    Mat3 sum = Mat3::Zero(), sq = Mat3::Zero();
    for (long s = begin; s < end; ++s) {
      rng::Philox gen(seed, static_cast<uint64_t>(s));
      Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
      for (int t = 0; t < n_steps; ++t) {
        const Eigen::VectorXd n = sampler.sample(gen);
        const double theta = n.norm();
        if (theta > 1e-300) {
          const double c = std::cos(theta / 2), sn = std::sin(theta / 2) / theta;
          Eigen::Matrix2cd step;
          step << cxd(c, -sn * n[2]), cxd(-sn * n[1], -sn * n[0]),
                  cxd(sn * n[1], -sn * n[0]), cxd(c, sn * n[2]);
          u = step * u;
        }
      }
      Mat3 r;
      for (int j = 0; j < 3; ++j) {
        const Eigen::Matrix2cd conj = u * Eigen::Matrix2cd(pauli(j + 1)) * u.adjoint();
        r(0, j) = conj(0, 1).real() + conj(1, 0).real();
        r(1, j) = conj(1, 0).imag() - conj(0, 1).imag();
        r(2, j) = conj(0, 0).real() - conj(1, 1).real();
        // each row is (1/2) tr(sigma_i conj), written out
      }
      r *= 0.5;
      sum += r;
      sq += r.cwiseProduct(r);
    }
    sums[static_cast<size_t>(ib)] = sum;
    sqsums[static_cast<size_t>(ib)] = sq;
  });

  Mat3 total = Mat3::Zero(), total_sq = Mat3::Zero();
  for (long ib = 0; ib < n_blocks; ++ib) {
    total += sums[static_cast<size_t>(ib)];
    total_sq += sqsums[static_cast<size_t>(ib)];
  }
  PtmEstimate est;
  est.n_samples = n_samples;
  est.mean = total / double(n_samples);
  const Mat3 var = (total_sq / double(n_samples) - est.mean.cwiseProduct(est.mean)).cwiseMax(0.0);
  est.std_error = (var / double(n_samples)).cwiseSqrt();
  return est;
}

}  // namespace liegauss::channel1q
