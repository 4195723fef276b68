#include "liegauss/distill.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "liegauss/parallel.hpp"
#include "liegauss/pauli.hpp"

namespace liegauss::distill {

namespace {

constexpr double kTraceTol = 1e-12;
constexpr double kDegenerateProb = 1e-14;

Eigen::Index dim_of(int n_qubits) { return Eigen::Index(1) << n_qubits; }

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(linalg::kron(a.rho, b.rho), a.n_qubits + b.n_qubits);
}

// Post-select on equal z outcomes of qubits qa, qb; unnormalized.
std::pair<Mat, double> project_equal_outcomes(const Mat& rho, int qa, int qb, int n) {
  Mat p0(2, 2), p1(2, 2);
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const Mat& p : {p0, p1}) {
    const Mat proj = embed(linalg::kron(p, p), {qa, qb}, n);
    out += proj * rho * proj;
  }
  return {out, out.trace().real()};
}

Mat partial_trace_keep_front(const Mat& rho, int keep, int n) {
  // traces out the trailing n-keep qubits
  const Eigen::Index dk = dim_of(keep), dt = dim_of(n - keep);
  Mat out = Mat::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j)
      out(i, j) = rho.block(i * dt, j * dt, dt, dt).trace();
  return out;
}

// CNOTs from the pair-1 qubits onto the pair-2 qubits, measure pair 2,
// post-select equal outcomes, return the renormalized pair-1 state.
// Qubit order: [1.1, 1.2, 2.1, 2.2].
std::pair<DensityMatrix, double> distill_round(const DensityMatrix& state) {
  const int n = 4;
  const Mat alice = embed(cnot_gate(), {0, 2}, n);
  const Mat bob = embed(cnot_gate(), {1, 3}, n);
  Mat rho = bob * (alice * state.rho * alice.adjoint()) * bob.adjoint();
  auto [projected, prob] = project_equal_outcomes(rho, 2, 3, n);
  if (prob < kDegenerateProb) {
    throw DegenerateOutcomeError("distill: post-selection removed all probability mass");
  }
  DensityMatrix kept(partial_trace_keep_front(projected, 2, n) / prob, 2);
  kept.validate();
  return {kept, prob};
}

}  // namespace

DensityMatrix::DensityMatrix(Mat m, int n) : rho(std::move(m)), n_qubits(n) {
  if (n < 1 || n > 8) throw std::invalid_argument("DensityMatrix: qubit count must be in [1, 8]");
  if (rho.rows() != dim_of(n) || rho.cols() != dim_of(n)) {
    throw std::invalid_argument("DensityMatrix: dimension does not match qubit count");
  }
}

void DensityMatrix::validate() const {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > kTraceTol || std::abs(rho.trace().imag()) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace != 1");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("DensityMatrix: not positive semidefinite");
  }
}

DensityMatrix bell_pair() {
  Mat rho = Mat::Zero(4, 4);
  rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
  return DensityMatrix(std::move(rho), 2);
}

Mat embed(const Mat& op, const std::vector<int>& targets, int n_qubits) {
  const int k = static_cast<int>(targets.size());
  if (op.rows() != dim_of(k) || op.cols() != dim_of(k)) {
    throw std::invalid_argument("embed: operator dimension does not match target count");
  }
  for (size_t a = 0; a < targets.size(); ++a) {
    if (targets[a] < 0 || targets[a] >= n_qubits) throw std::invalid_argument("embed: target out of range");
    for (size_t b = a + 1; b < targets.size(); ++b) {
      if (targets[a] == targets[b]) throw std::invalid_argument("embed: duplicate target");
    }
  }
  const Eigen::Index d = dim_of(n_qubits);
  const Eigen::Index dk = dim_of(k);
  Mat out = Mat::Zero(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    Eigen::Index rt = 0;
    for (int a = 0; a < k; ++a) rt = (rt << 1) | ((r >> (n_qubits - 1 - targets[size_t(a)])) & 1);
    for (Eigen::Index ct = 0; ct < dk; ++ct) {
      if (op(rt, ct) == cxd(0, 0)) continue;
      Eigen::Index c = r;
      for (int a = 0; a < k; ++a) {
        const Eigen::Index bit = (ct >> (k - 1 - a)) & 1;
        const Eigen::Index pos = n_qubits - 1 - targets[size_t(a)];
        c = (c & ~(Eigen::Index(1) << pos)) | (bit << pos);
      }
      out(r, c) = op(rt, ct);
    }
  }
  return out;
}

Mat hadamard_gate() {
  Mat h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  return h;
}

Mat cnot_gate() {
  Mat c = Mat::Zero(4, 4);
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1;
  return c;
}

std::vector<Mat> kraus_from_choi(const channel1q::ChoiMatrix& choi) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(choi.dim()))));
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (choi.c + choi.c.adjoint()));
  std::vector<Mat> kraus;
  for (Eigen::Index i = 0; i < choi.dim(); ++i) {
    const double w = es.eigenvalues()[i];
    if (w < -1e-9) {
      throw std::invalid_argument("kraus_from_choi: Choi matrix is not PSD (eig " +
                                  std::to_string(w) + ")");
    }
    if (w <= 1e-12) continue;
    Mat k(d, d);
    for (Eigen::Index in = 0; in < d; ++in)
      for (Eigen::Index out = 0; out < d; ++out) k(out, in) = es.eigenvectors()(in * d + out, i);
    kraus.push_back(std::sqrt(w) * k);
  }
  return kraus;
}

DensityMatrix apply_channel(const DensityMatrix& state, const channel1q::ChoiMatrix& choi,
                            const std::vector<int>& targets) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(choi.dim()))));
  if (dim_of(static_cast<int>(targets.size())) != d) {
    throw std::invalid_argument("apply_channel: channel arity does not match target count");
  }
  Mat out = Mat::Zero(state.rho.rows(), state.rho.cols());
  for (const Mat& k : kraus_from_choi(choi)) {
    const Mat ke = embed(k, targets, state.n_qubits);
    out += ke * state.rho * ke.adjoint();
  }
  const double tr = out.trace().real();
  if (std::abs(tr - state.rho.trace().real()) > 1e-10) {
    throw NumericError("apply_channel: trace not preserved (channel not trace preserving?)");
  }
  return DensityMatrix(std::move(out), state.n_qubits);
}

DensityMatrix apply_channel(const DensityMatrix& state,
                            const channel1q::PauliTransferMatrix1Q& ptm,
                            const std::vector<int>& targets) {
  return apply_channel(state, channel1q::choi_from_ptm(ptm), targets);
}

DensityMatrix apply_channel(const DensityMatrix& state,
                            const channel2q::PauliTransferMatrix2Q& ptm,
                            const std::vector<int>& targets) {
  return apply_channel(state, channel2q::choi2(ptm), targets);
}

double bell_fidelity(const DensityMatrix& pair) {
  if (pair.n_qubits != 2) throw std::invalid_argument("bell_fidelity: expected a two-qubit state");
  // <Phi+| rho |Phi+>
  return 0.5 * (pair.rho(0, 0) + pair.rho(0, 3) + pair.rho(3, 0) + pair.rho(3, 3)).real();
}

DistillOutcome basic_distill(const channel1q::ChoiMatrix& channel) {
  if (channel.dim() != 16) {
    throw std::invalid_argument("basic_distill: expected a two-qubit (16x16) channel");
  }
  DensityMatrix state = tensor(bell_pair(), bell_pair());  // [1.1, 1.2, 2.1, 2.2]
  state = apply_channel(state, channel, {1, 3});           // transmitted qubits 1.2, 2.2
  auto [kept, prob] = distill_round(state);
  return DistillOutcome{kept, prob, bell_fidelity(kept)};
}

DistillOutcome full_distill(const channel1q::ChoiMatrix& channel1,
                            const channel1q::ChoiMatrix& channel2) {
  const DistillOutcome first = basic_distill(channel1);
  const DistillOutcome second = basic_distill(channel2);
  DensityMatrix state = tensor(first.state, second.state);
  Mat h_all = Mat::Identity(16, 16);
  for (int q = 0; q < 4; ++q) h_all = embed(hadamard_gate(), {q}, 4) * h_all;
  state = DensityMatrix(h_all * state.rho * h_all.adjoint(), 4);
  auto [kept, prob] = distill_round(state);
  return DistillOutcome{kept, first.success_prob * second.success_prob * prob,
                        bell_fidelity(kept)};
}

channel1q::ChoiMatrix sweep_channel(ErrorModel model, double p, double correlation) {
  if (model == ErrorModel::CorrelatedPauli) {
    return channel2q::choi2(
        channel2q::correlated_pauli_ptm(channel2q::CorrelatedPauliParams(p, p, correlation)));
  }
  const double a = channel2q::a_from_error_prob(p);
  return channel2q::choi2(
      channel2q::correlated_normal_ptm(channel2q::IsotropicNormalParams(a, a, correlation)));
}

std::vector<SweepRow> fidelity_sweep(ErrorModel model, const std::vector<double>& p_values,
                                     const std::vector<double>& corr_values) {
  const long total = static_cast<long>(p_values.size() * corr_values.size());
  std::vector<SweepRow> rows(static_cast<size_t>(total));
  parallel_for_blocks(total, 1, [&](long ib, long begin, long) {
    (void)ib;
    const size_t idx = static_cast<size_t>(begin);
    const double p = p_values[idx / corr_values.size()];
    const double corr = corr_values[idx % corr_values.size()];

    SweepRow row;
    row.p = p;
    row.correlation = corr;

    // single transmitted pair: both models reduce to the isotropic
    // single-qubit Pauli channel
    DensityMatrix pair = bell_pair();
    const Mat3 r_single = (1.0 - 4.0 * p) * Mat3::Identity();
    pair = apply_channel(pair, channel1q::choi_from_ptm({r_single}), {1});
    row.f_n = bell_fidelity(pair);

    const auto choi = sweep_channel(model, p, corr);
    try {
      const DistillOutcome out = full_distill(choi, choi);
      row.f_u = out.fidelity;
      row.success_prob = out.success_prob;
    } catch (const DegenerateOutcomeError&) {
      row.degenerate = true;
    }
    rows[idx] = row;
  });
  return rows;
}

}  // namespace liegauss::distill
