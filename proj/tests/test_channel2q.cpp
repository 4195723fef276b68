#include <doctest.h>

#include "liegauss/channel2q.hpp"
#include "oracles.hpp"

using namespace liegauss;
using namespace liegauss::channel2q;

namespace {

NormalParams2Q random_params2(rng::Philox& gen, double a_scale = 1.0, double b_scale = 1.0) {
  Mat6 a = oracles::random_psd(6, a_scale, gen);
  Vec6 b;
  for (int i = 0; i < 6; ++i) b[i] = b_scale * gen.next_gaussian();
  return NormalParams2Q(a, b);
}

void check_choi_invariants(const channel1q::ChoiMatrix& choi) {
  CHECK(choi.hermiticity_error() < 1e-10);
  CHECK(choi.min_eigenvalue() > -1e-9);
  const Mat id = Mat::Identity(4, 4);
  CHECK((choi.input_marginal() - id).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((choi.output_of_identity() - id).cwiseAbs().maxCoeff() < 1e-10);
}

// swap of tensor factors 2 and 3 in a 2x2x2x2 structure (16x16 permutation)
Mat swap_middle_factors() {
  Mat p = Mat::Zero(16, 16);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          p(8 * a + 4 * c + 2 * b + d, 8 * a + 4 * b + 2 * c + d) = 1.0;
        }
  return p;
}

}  // namespace

TEST_SUITE("channel2q") {

TEST_CASE("block views and validation") {
  rng::Philox gen(401);
  const Mat3 a1 = oracles::random_psd(3, 1.0, gen) + Mat3::Identity();
  const Mat3 a2 = oracles::random_psd(3, 1.0, gen) + Mat3::Identity();
  const Mat3 f = 0.1 * Mat3::Identity();
  const NormalParams2Q p = NormalParams2Q::from_blocks(a1, a2, f, Vec3(1, 2, 3), Vec3(4, 5, 6));
  CHECK((p.a1() - a1).norm() == 0.0);
  CHECK((p.a2() - a2).norm() == 0.0);
  CHECK((p.f() - f).norm() == 0.0);
  CHECK((p.b1() - Vec3(1, 2, 3)).norm() == 0.0);
  CHECK((p.b2() - Vec3(4, 5, 6)).norm() == 0.0);

  // cross block too large for PSD
  CHECK_THROWS_AS(NormalParams2Q::from_blocks(0.1 * Mat3::Identity(), 0.1 * Mat3::Identity(),
                                              Mat3::Identity(), Vec3::Zero(), Vec3::Zero()),
                  std::invalid_argument);
}

TEST_CASE("generator2: zero parameters give the zero generator") {
  const Generator2Q gen2 = generator2(NormalParams2Q());
  CHECK(gen2.full().norm() == doctest::Approx(0.0));
}

TEST_CASE("generator2 matches the master-equation superoperator oracle") {
  rng::Philox gen(402);
  for (int trial = 0; trial < 12; ++trial) {
    const NormalParams2Q params = random_params2(gen, 0.8, 0.8);
    const Mat16 oracle = oracles::generator2q_superop(params.a, params.b);
    CHECK((generator2(params).full() - oracle).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("generator2 blocks without cross covariance factorize as a tensor product") {
  rng::Philox gen(403);
  const Mat3 a1 = oracles::random_psd(3, 0.7, gen);
  const Mat3 a2 = oracles::random_psd(3, 0.5, gen);
  const NormalParams2Q params =
      NormalParams2Q::from_blocks(a1, a2, Mat3::Zero(), Vec3::Zero(), Vec3::Zero());
  const PauliTransferMatrix2Q r = ptm2(params);
  // W block of a product channel is the Kronecker product of the one-qubit blocks
  CHECK((r.w - linalg::kron(RMat(r.r1), RMat(r.r2))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("correlated_normal_ptm equals the exponential of the assembled generator") {
  for (const double a1 : {0.1, 0.5, 1.0}) {
    for (const double a2 : {0.1, 0.5, 1.0}) {
      for (const double rho : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const IsotropicNormalParams iso(a1, a2, rho);
        const PauliTransferMatrix2Q closed = correlated_normal_ptm(iso);
        const PauliTransferMatrix2Q direct = ptm2(iso.to_normal());
        CHECK((closed.full() - direct.full()).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("correlated_normal_ptm: uncorrelated and identity cases") {
  const PauliTransferMatrix2Q r = correlated_normal_ptm(IsotropicNormalParams(0.4, 0.7, 0.0));
  CHECK((r.w - std::exp(-1.1) * Mat9::Identity()).cwiseAbs().maxCoeff() < 1e-14);

  const PauliTransferMatrix2Q id = correlated_normal_ptm(IsotropicNormalParams(0, 0, 0.3));
  CHECK((id.full() - Mat16::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("E coefficient identities") {
  for (const double rho : {-1.0, -0.3, 0.4, 1.0}) {
    const double a1 = 0.6, a2 = 0.3;
    const double a12 = rho * std::sqrt(a1 * a2), e0 = std::exp(-a1 - a2);
    const Mat9 w = correlated_normal_ptm(IsotropicNormalParams(a1, a2, rho)).w;
    const double e1 = w(0, 0), e2 = w(0, 4), e3 = w(1, 1), e4 = w(1, 3);
    CHECK(e1 + 2 * e2 == doctest::Approx(e0 * std::exp(2 * a12)).epsilon(1e-13));
    CHECK(e3 + e4 == doctest::Approx(e0 * std::exp(-a12)).epsilon(1e-13));
  }
}

TEST_CASE("W of the isotropic channel is symmetric and swap-invariant when a1 == a2") {
  const Mat9 w = correlated_normal_ptm(IsotropicNormalParams(0.5, 0.5, 0.7)).w;
  CHECK((w - w.transpose()).norm() < 1e-14);
  // swap of the two qubits permutes composite index (j,k) -> (k,j)
  Mat9 perm = Mat9::Zero();
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) perm(3 * k + j, 3 * j + k) = 1.0;
  CHECK((perm * w * perm.transpose() - w).norm() < 1e-14);
}

TEST_CASE("correlated_pauli_ptm: identity, factorization at m = 0") {
  CHECK((correlated_pauli_ptm(CorrelatedPauliParams(0, 0, 0.7)).full() - Mat16::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  const double p = 0.08, q = 0.15;
  const PauliTransferMatrix2Q r = correlated_pauli_ptm(CorrelatedPauliParams(p, q, 0.0));
  const double w_expected = (1 - 4 * p) * (1 - 4 * q);
  for (int i = 0; i < 9; ++i) CHECK(r.w(i, i) == doctest::Approx(w_expected).epsilon(1e-14));
  CHECK((r.r1 - (1 - 4 * p) * Mat3::Identity()).norm() < 1e-14);
  CHECK((r.r2 - (1 - 4 * q) * Mat3::Identity()).norm() < 1e-14);
}

TEST_CASE("correlated Pauli at m = 0 equals the uncorrelated normal channel") {
  const double p = 0.07, q = 0.12;
  const PauliTransferMatrix2Q pauli = correlated_pauli_ptm(CorrelatedPauliParams(p, q, 0.0));
  const PauliTransferMatrix2Q normal = correlated_normal_ptm(
      IsotropicNormalParams(a_from_error_prob(p), a_from_error_prob(q), 0.0));
  CHECK((pauli.full() - normal.full()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("maximally correlated Pauli and normal channels differ") {
  const double p = 0.1;
  const double a = a_from_error_prob(p);
  const Mat9 w_pauli = correlated_pauli_ptm(CorrelatedPauliParams(p, p, 1.0)).w;
  const Mat9 w_normal = correlated_normal_ptm(IsotropicNormalParams(a, a, 1.0)).w;
  CHECK((w_pauli - w_normal).norm() > 1e-3);
}

TEST_CASE("general_pauli_ptm: point mass, isotropic table, entry bounds") {
  Eigen::Matrix4d point = Eigen::Matrix4d::Zero();
  point(0, 0) = 1.0;
  CHECK((general_pauli_ptm(point).full() - Mat16::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  for (const double m : {0.0, 0.35, 1.0}) {
    const CorrelatedPauliParams params(0.06, 0.11, m);
    const PauliTransferMatrix2Q via_table = general_pauli_ptm(params.table());
    const PauliTransferMatrix2Q closed = correlated_pauli_ptm(params);
    CHECK((via_table.full() - closed.full()).cwiseAbs().maxCoeff() < 1e-12);
  }

  rng::Philox gen(404);
  Eigen::Matrix4d table;
  double sum = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      table(i, j) = gen.next_double();
      sum += table(i, j);
    }
  table /= sum;
  const Mat16 full = general_pauli_ptm(table).full();
  CHECK(full.maxCoeff() <= 1.0 + 1e-12);
  CHECK(full.minCoeff() >= -1.0 - 1e-12);

  Eigen::Matrix4d bad = table;
  bad(0, 0) += 0.5;
  CHECK_THROWS_AS(general_pauli_ptm(bad), std::invalid_argument);
}

TEST_CASE("fourier_coeff2 marginals reduce to the single-qubit moment matrices") {
  rng::Philox gen(405);
  const NormalParams2Q params = random_params2(gen, 0.8, 0.8);

  const Mat f01 = fourier_coeff2(params, 0, 1);
  const Mat expected01 = linalg::expm(Mat(-channel1q::fourier_generator(
      channel1q::NormalParams1Q(params.a2(), params.b2()))));
  CHECK((f01 - expected01).cwiseAbs().maxCoeff() < 1e-13);

  const Mat f10 = fourier_coeff2(params, 1, 0);
  const Mat expected10 = linalg::expm(Mat(-channel1q::fourier_generator(
      channel1q::NormalParams1Q(params.a1(), params.b1()))));
  CHECK((f10 - expected10).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS(fourier_coeff2(params, 0, 0), std::invalid_argument);
}

TEST_CASE("fourier_coeff2 identity case and basis change to the W block") {
  CHECK((fourier_coeff2(NormalParams2Q(), 1, 1) - Mat::Identity(9, 9)).cwiseAbs().maxCoeff() <
        1e-15);

  // (U x U) exp(-M_{1,1}) (U x U)^dag equals the W block of the transfer matrix
  rng::Philox gen(406);
  const Mat u = channel1q::bloch_from_spin1_unitary();
  const Mat uu = linalg::kron(u, u);
  for (int trial = 0; trial < 8; ++trial) {
    const NormalParams2Q params = random_params2(gen, 0.6, 0.6);
    const Mat w_via_fourier = uu * fourier_coeff2(params, 1, 1) * uu.adjoint();
    const Mat9 w = ptm2(params).w;
    CHECK((w_via_fourier - w.cast<cxd>()).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("choi2: identity PTM gives the maximally entangled Choi") {
  const channel1q::ChoiMatrix choi = choi2(PauliTransferMatrix2Q{});
  Mat expected = Mat::Zero(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) expected(5 * i, 5 * j) = 1.0;  // 4 |Omega><Omega|
  CHECK((choi.c - expected).cwiseAbs().maxCoeff() < 1e-13);
  check_choi_invariants(choi);
}

TEST_CASE("choi2 of a product channel is the swap-reordered Kronecker product") {
  rng::Philox gen(407);
  const channel1q::NormalParams1Q p1(oracles::random_psd(3, 0.8, gen),
                                     oracles::random_vec3(0.8, gen));
  const channel1q::NormalParams1Q p2(oracles::random_psd(3, 0.8, gen),
                                     oracles::random_vec3(0.8, gen));
  const NormalParams2Q joint = NormalParams2Q::from_blocks(p1.a, p2.a, Mat3::Zero(), p1.b, p2.b);

  const Mat lhs = choi2(ptm2(joint)).c;
  const Mat swap = swap_middle_factors();
  const Mat rhs = swap *
                  linalg::kron(channel1q::choi_from_ptm(channel1q::ptm(p1)).c,
                               channel1q::choi_from_ptm(channel1q::ptm(p2)).c) *
                  swap.transpose();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("choi2 in the depolarizing limit") {
  const channel1q::ChoiMatrix choi =
      choi2(correlated_normal_ptm(IsotropicNormalParams(40, 40, 0.5)));
  CHECK((choi.c - 0.25 * Mat::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("all isotropic and Pauli channels produce CPTP Choi matrices") {
  for (const double rho : {-1.0, 0.0, 0.6, 1.0}) {
    check_choi_invariants(choi2(correlated_normal_ptm(IsotropicNormalParams(0.5, 0.2, rho))));
  }
  for (const double m : {0.0, 0.4, 1.0}) {
    check_choi_invariants(choi2(correlated_pauli_ptm(CorrelatedPauliParams(0.1, 0.2, m))));
  }
}

TEST_CASE("ptm2 singular values stay below one") {
  rng::Philox gen(408);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat16 full = ptm2(random_params2(gen, 1.0, 1.5)).full();
    CHECK(linalg::spectral_norm(full) <= 1.0 + 1e-10);
  }
}

TEST_CASE("a <-> p conversions") {
  CHECK(a_from_error_prob(0.0) == doctest::Approx(0.0));
  CHECK(error_prob_from_a(a_from_error_prob(0.12)) == doctest::Approx(0.12).epsilon(1e-14));
  CHECK(a_from_error_prob(0.25) == doctest::Approx(50.0));  // capped depolarizing
  CHECK_THROWS_AS(a_from_error_prob(0.3), std::invalid_argument);
}

TEST_CASE("random_walk_ptm2: frozen walk is exactly the identity") {
  const auto est = random_walk_ptm2(NormalParams2Q(), 50, 1000, 2);
  CHECK((est.mean - Mat16::Identity()).norm() == doctest::Approx(0.0));
  CHECK(est.std_error.norm() == doctest::Approx(0.0));
}

TEST_CASE("random_walk_ptm2 matches the maximally correlated closed form within 3 sigma") {
  const IsotropicNormalParams iso(0.4, 0.4, 1.0);
  const auto est = random_walk_ptm2(iso.to_normal(), 100, 10000, 44);
  const Mat16 exact = correlated_normal_ptm(iso).full();
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double se = std::max(est.std_error(i, j), 1e-12);
      CHECK(std::abs(est.mean(i, j) - exact(i, j)) < 3.0 * se + 1e-3);
    }
}

TEST_CASE("random_walk_ptm2 agrees with the generator on a generic cross covariance") {
  // asymmetric F: the walk samples the actual distribution, so this pins the
  // row convention of the cross blocks independently of any generator oracle
  rng::Philox gen(410);
  const NormalParams2Q params = random_params2(gen, 0.5, 0.4);
  REQUIRE((params.f() - params.f().transpose()).norm() > 1e-3);
  const auto est = random_walk_ptm2(params, 100, 10000, 46);
  const Mat16 exact = ptm2(params).full();
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double se = std::max(est.std_error(i, j), 1e-12);
      CHECK(std::abs(est.mean(i, j) - exact(i, j)) < 3.0 * se + 1e-3);
    }
}

TEST_CASE("random_walk_ptm2 on a block-diagonal draw factorizes within 3 sigma") {
  rng::Philox gen(409);
  const Mat3 a1 = oracles::random_psd(3, 0.4, gen);
  const Mat3 a2 = oracles::random_psd(3, 0.3, gen);
  const NormalParams2Q params =
      NormalParams2Q::from_blocks(a1, a2, Mat3::Zero(), Vec3::Zero(), Vec3::Zero());
  const auto est = random_walk_ptm2(params, 100, 10000, 45);
  const Mat16 exact = ptm2(params).full();
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double se = std::max(est.std_error(i, j), 1e-12);
      CHECK(std::abs(est.mean(i, j) - exact(i, j)) < 3.0 * se + 1e-3);
    }
}

}  // TEST_SUITE
