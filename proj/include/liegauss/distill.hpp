#pragma once

#include <vector>

#include "liegauss/channel2q.hpp"

namespace liegauss::distill {

/// n-qubit density matrix (n <= 8). Qubit 0 is the most significant bit of
/// the computational-basis index.
struct DensityMatrix {
  Mat rho;
  int n_qubits = 0;

  DensityMatrix(Mat m, int n);
  /// Throws unless Hermitian (1e-12), unit trace (1e-12) and PSD (-1e-10).
  void validate() const;
};

struct DistillOutcome {
  DensityMatrix state;        // post-selected, renormalized pair
  double success_prob = 0.0;  // probability that every post-selection succeeds
  double fidelity = 0.0;      // overlap with |Phi+>
};

/// |Phi+><Phi+| on two qubits.
DensityMatrix bell_pair();

/// op (2^k x 2^k) acting on the given target qubits, identity elsewhere.
/// targets[0] is op's most significant qubit.
Mat embed(const Mat& op, const std::vector<int>& targets, int n_qubits);

Mat hadamard_gate();
Mat cnot_gate();  // 4x4, control = first qubit

/// Kraus operators of a channel from its Choi matrix (eigendecomposition,
/// eigenvalues below 1e-12 dropped).
std::vector<Mat> kraus_from_choi(const channel1q::ChoiMatrix& choi);

/// Applies a 1- or 2-qubit channel (given as its Choi matrix) on the target
/// qubits; channel qubit order follows targets.
DensityMatrix apply_channel(const DensityMatrix& state, const channel1q::ChoiMatrix& choi,
                            const std::vector<int>& targets);
DensityMatrix apply_channel(const DensityMatrix& state,
                            const channel1q::PauliTransferMatrix1Q& ptm,
                            const std::vector<int>& targets);
DensityMatrix apply_channel(const DensityMatrix& state,
                            const channel2q::PauliTransferMatrix2Q& ptm,
                            const std::vector<int>& targets);

/// Overlap with |Phi+> of the designated pair (the full state must be two
/// qubits here).
double bell_fidelity(const DensityMatrix& pair);

/// One round of the basic protocol: two Bell pairs, the error channel on the
/// transmitted qubits, bilateral CNOTs (pair-1 qubits control pair-2
/// qubits), z-measurement of the pair-2 qubits and post-selection on equal
/// outcomes. Throws DegenerateOutcomeError if no probability mass survives.
DistillOutcome basic_distill(const channel1q::ChoiMatrix& channel);

/// Doubled protocol with post-processing: basic_distill under channel1 and
/// channel2, Hadamards on all four remaining qubits, then one more
/// CNOT/measure/post-select round. success_prob is the joint probability of
/// all three post-selections.
DistillOutcome full_distill(const channel1q::ChoiMatrix& channel1,
                            const channel1q::ChoiMatrix& channel2);

enum class ErrorModel { CorrelatedPauli, CorrelatedNormal };

struct SweepRow {
  double p = 0.0;
  double correlation = 0.0;
  double f_n = 0.0;           // single transmitted pair, no distillation
  double f_u = 0.0;           // after the doubled protocol
  double success_prob = 0.0;
  bool degenerate = false;    // post-selection lost all probability mass
};

/// Fidelity table over an error-probability grid and a correlation grid
/// (m for the Pauli model, rho for the normal model), p = q.
std::vector<SweepRow> fidelity_sweep(ErrorModel model, const std::vector<double>& p_values,
                                     const std::vector<double>& corr_values);

/// Two-qubit error channel of the sweep models at (p, correlation).
channel1q::ChoiMatrix sweep_channel(ErrorModel model, double p, double correlation);

}  // namespace liegauss::distill
