#pragma once
// Dense state-vector simulation of small qubit registers.
//
// Qubits are numbered 1..num_qubits and qubit 1 is the most significant bit
// of the basis-state index, so a printed ket like |10110> reads directly as
// the binary index of its amplitude. This convention is fixed across the
// whole library and documented in every serialized dump.

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qtr {

using Rng = std::mt19937_64;
using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 24;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kMeasureFloor = 1e-14;

// Guard violations (register too large, walk frontier over the cap, ...).
// The CLI maps these to their own exit code, distinct from usage errors.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StateVector {
  int num_qubits = 0;
  Eigen::VectorXcd amplitudes;
};

enum class GateKind { H, X, Z, RY, CNOT, CH, CCNOT };

// Gate on 1-based qubit indices, controls listed before the target.
struct GateOp {
  GateKind kind;
  std::vector<int> qubits;
  double angle = 0.0; // RY only
};

GateOp h(int q);
GateOp x(int q);
GateOp z(int q);
GateOp ry(double angle, int q);
GateOp cnot(int control, int target);
GateOp ch(int control, int target);
GateOp ccnot(int control1, int control2, int target);

std::string gate_name(const GateOp& g);

// |0...0> on num_qubits qubits. Guard: 1 <= num_qubits <= 24.
StateVector new_register(int num_qubits);

// Single qubit cos(theta/4)|0> + sin(theta/4)|1>.
StateVector prepare_qubit(double theta);

StateVector apply_gate(const StateVector& s, const GateOp& g);
StateVector apply_circuit(const StateVector& s, const std::vector<GateOp>& ops);

// Kronecker product; a's qubits become the high-order block.
StateVector tensor(const StateVector& a, const StateVector& b);

struct MeasureResult {
  int outcome = 0;
  StateVector collapsed;
  double probability = 0.0;
};

// Born-rule measurement of one qubit with collapse and renormalization.
// Throws if both outcome probabilities are below 1e-14 (corrupt state).
MeasureResult measure_qubit(const StateVector& s, int qubit, Rng& rng);

// Deterministic projection onto a chosen outcome. probability is the Born
// weight of that branch; collapsed is renormalized and only meaningful when
// probability is nonzero. Used by exhaustive branch enumeration.
struct Projection {
  double probability = 0.0;
  StateVector collapsed;
};
Projection project_qubit(const StateVector& s, int qubit, int outcome);

// Multinomial sample of the full-register Born distribution; does not
// collapse. Keys are bitstrings, qubit 1 first. Counts sum to shots.
std::map<std::string, long long> sample_all(const StateVector& s,
                                            long long shots, Rng& rng);

// Exact Born probabilities indexed by basis state.
std::vector<double> probabilities(const StateVector& s);

// |<ideal|actual>|^2 for pure states of equal size.
double fidelity(const StateVector& ideal, const StateVector& actual);

// Partial trace down to the chosen qubit: Hermitian, trace-1, PSD.
Eigen::Matrix2cd reduced_single_qubit(const StateVector& s, int qubit);

// <psi|rho|psi> for a single-qubit pure reference against a 2x2 marginal.
double fidelity_against(const Eigen::Matrix2cd& rho, const StateVector& psi_1q);

std::string basis_label(std::uint64_t index, int num_qubits);

// JSON dump {"qubit_order": ..., "num_qubits": n, "amplitudes": [[re,im],...]}.
std::string state_json(const StateVector& s);

} // namespace qtr
