#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qteleroute/channels.hpp"

namespace qtr {

// Two-way teleportation: Alice's payload qubit A carries a state
// prepare_qubit(theta_a) that must land on Bob's receiving wire, and Bob's
// payload B carries prepare_qubit(theta_b) for Alice's receiving wire.
// Measurement outcomes select a Pauli correction word per side.

constexpr double kTeleportTol = 1e-9;

struct StepRecord {
  std::string label;
  std::vector<GateOp> gates; // gates applied in this step (may be empty)
  StateVector snapshot;      // state after the step
};

struct CorrectionPair {
  std::string alice_word; // applied by Alice on her receiving wire
  std::string bob_word;   // applied by Bob on his receiving wire
};

struct CorrectionTable {
  ChannelKind channel;
  // full measurement outcome vector -> correction words
  std::map<std::vector<int>, CorrectionPair> entries;
};

struct ProtocolTrace {
  ChannelKind channel;
  double theta_a = 0.0;
  double theta_b = 0.0;
  std::vector<StepRecord> steps;
  std::vector<int> outcomes;
  CorrectionPair corrections;
  double fidelity_a_to_b = 0.0;
  double fidelity_b_to_a = 0.0;
};

struct TeleportResult {
  ProtocolTrace trace;
  bool success = false;    // both fidelities >= 1 - kTeleportTol
  StateVector received_a;  // single-qubit state recovered on Alice's side
  StateVector received_b;  // single-qubit state recovered on Bob's side
};

// Wire plan for one run: payload wires, receiving wires, the labeled gate
// program, and the measurement schedule. Channel wires come first (1-based),
// payloads are appended after them.
struct ProtocolLayout {
  ChannelKind channel;
  int total_qubits = 0;
  int payload_a = 0;
  int payload_b = 0;       // 0 when the run carries no B payload
  int receiver_for_a = 0;  // wire that ends up holding payload A's state
  int receiver_for_b = 0;  // 0 when absent
  std::vector<std::pair<std::string, std::vector<GateOp>>> steps;
  std::string early_measure_label; // "" when there is no early measurement
  int early_measure_wire = 0;
  std::string final_measure_label;
  std::vector<int> final_measure_wires; // measured in this order
};

// Layouts exist for Bell (one-way only) and the three composite channels.
ProtocolLayout protocol_layout(ChannelKind kind);

// The four correction words, in search order: I, X, Z, ZX. "ZX" means X
// first, then Z.
const std::vector<std::string>& correction_words();
std::vector<GateOp> correction_word_gates(const std::string& word, int qubit);

// Exhaustively derives the outcome -> correction-word table for a channel by
// enumerating every measurement branch over a fixed grid of payload
// preparations and searching the word set. Deterministic (no RNG). Throws
// std::runtime_error if any reachable outcome admits no unique word pair.
CorrectionTable derive_correction_table(ChannelKind kind);

// Two-way run over WBell5, GHZBell5 or ClusterBell6. Throws
// std::invalid_argument for other kinds and std::runtime_error when the
// sampled outcome has no table entry.
TeleportResult run_bqt(ChannelKind kind, double theta_a, double theta_b,
                       const CorrectionTable& table, Rng& rng);

// One-way run: payload B is |0> and fidelity_b_to_a is reported as 1 by
// convention. Supports Bell plus the composite kinds.
TeleportResult run_uqt(ChannelKind kind, double theta_a,
                       const CorrectionTable& table, Rng& rng);

// Replays the channel-side gate program in its published order (H on 2,
// CCNOT, H on 3, CNOT 3->4, then both branches of the qubit-4 measurement
// for the five-qubit channels) and reports, per step, the largest
// amplitude difference between the simulated state and the published
// amplitude table for that step (both sides renormalized and phase-fixed
// before comparing). Supported kinds: WBell5, GHZBell5.
struct StepDeviation {
  std::string label;
  double max_amplitude_deviation;
};
std::vector<StepDeviation> verify_printed_steps(ChannelKind kind);

// Measurement-gadget reading of the step-2 CCNOT: the input state must have
// two ancilla wires appended in |1> and |0>. Applies CCNOT with qubit 2 and
// the first ancilla as controls and the second ancilla as target, measures
// the target ancilla (outcome 0 whenever it has any support, deterministic),
// and slices both ancillas back out. Returns the post-gadget payload state
// and the ancilla outcome.
std::pair<StateVector, int> step2_ccnot_semantics(const StateVector& s);

// CSV / JSON emission for traces.
std::string trace_csv_header();
std::string trace_csv_row(const TeleportResult& r, std::uint64_t seed);
std::string trace_json(const TeleportResult& r);

} // namespace qtr
