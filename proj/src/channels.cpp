#include "qteleroute/channels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace qtr {

namespace {

StateVector zeros(int n) {
  StateVector s;
  s.num_qubits = n;
  s.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << n);
  return s;
}

StateVector bell_pair() {
  StateVector s = zeros(2);
  const double r = 1.0 / std::sqrt(2.0);
  s.amplitudes[0b00] = r;
  s.amplitudes[0b11] = r;
  return s;
}

StateVector ghz3_state() {
  StateVector s = zeros(3);
  const double r = 1.0 / std::sqrt(2.0);
  s.amplitudes[0b000] = r;
  s.amplitudes[0b111] = r;
  return s;
}

std::vector<GateOp> bell_circuit(int q) {
  return {h(q), cnot(q, q + 1)};
}

} // namespace

std::string channel_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Bell: return "bell";
    case ChannelKind::GHZ3: return "ghz3";
    case ChannelKind::W3: return "w3";
    case ChannelKind::Wn: return "wn";
    case ChannelKind::ClusterN: return "clustern";
    case ChannelKind::WBell5: return "wbell5";
    case ChannelKind::GHZBell5: return "ghzbell5";
    case ChannelKind::ClusterBell6: return "clusterbell6";
  }
  throw std::logic_error("unknown channel kind");
}

ChannelKind parse_channel(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "bell") return ChannelKind::Bell;
  if (s == "ghz3" || s == "ghz") return ChannelKind::GHZ3;
  if (s == "w3" || s == "w") return ChannelKind::W3;
  if (s == "wbell5" || s == "wbell") return ChannelKind::WBell5;
  if (s == "ghzbell5" || s == "ghzbell") return ChannelKind::GHZBell5;
  if (s == "clusterbell6" || s == "clusterbell") return ChannelKind::ClusterBell6;
  throw std::invalid_argument("unknown channel name: " + name);
}

StateVector make_wn(double n, double beta, double eta) {
  if (n < 0.0) throw std::invalid_argument("make_wn: n must be >= 0");
  StateVector s = zeros(3);
  const double norm = std::sqrt(2.0 + 2.0 * n);
  const Complex i(0.0, 1.0);
  s.amplitudes[0b100] = 1.0 / norm;
  s.amplitudes[0b010] = std::sqrt(n) * std::exp(i * beta) / norm;
  s.amplitudes[0b001] = std::sqrt(n + 1.0) * std::exp(i * eta) / norm;
  return s;
}

StateVector make_cluster(int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("make_cluster: n must be even and >= 2");
  StateVector s = bell_pair();
  for (int pair = 1; pair < n / 2; ++pair) s = tensor(s, bell_pair());
  return s;
}

ChannelState make_channel(ChannelKind kind) {
  ChannelState c;
  c.kind = kind;
  switch (kind) {
    case ChannelKind::Bell:
      c.state = bell_pair();
      c.holder_map = {{"Alice", {1}}, {"Bob", {2}}};
      return c;
    case ChannelKind::GHZ3:
      c.state = ghz3_state();
      c.holder_map = {{"Alice", {1}}, {"Bob", {2, 3}}};
      return c;
    case ChannelKind::W3:
      c.state = make_wn(1.0, 0.0, 0.0);
      c.holder_map = {{"Alice", {1}}, {"Bob", {2, 3}}};
      return c;
    case ChannelKind::WBell5:
      c.state = tensor(make_wn(1.0, 0.0, 0.0), bell_pair());
      c.holder_map = {{"Alice", {1, 5}}, {"Bob", {2, 3, 4}}};
      return c;
    case ChannelKind::GHZBell5:
      c.state = tensor(ghz3_state(), bell_pair());
      c.holder_map = {{"Alice", {1, 5}}, {"Bob", {2, 3, 4}}};
      return c;
    case ChannelKind::ClusterBell6:
      c.state = tensor(make_cluster(4), bell_pair());
      c.holder_map = {{"Alice", {1, 6}}, {"Bob", {2, 3, 4, 5}}};
      return c;
    case ChannelKind::Wn:
    case ChannelKind::ClusterN:
      throw std::invalid_argument(
          "make_channel: parametric kinds need make_wn/make_cluster");
  }
  throw std::logic_error("unknown channel kind");
}

std::vector<GateOp> circuit_prepare(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Bell:
      return bell_circuit(1);
    case ChannelKind::GHZ3:
      return {h(1), cnot(1, 2), cnot(2, 3)};
    case ChannelKind::W3:
      return {ry(M_PI / 2, 1), ch(1, 2), cnot(2, 3), x(3)};
    case ChannelKind::WBell5: {
      std::vector<GateOp> ops = circuit_prepare(ChannelKind::W3);
      for (const GateOp& g : bell_circuit(4)) ops.push_back(g);
      return ops;
    }
    case ChannelKind::GHZBell5: {
      std::vector<GateOp> ops = circuit_prepare(ChannelKind::GHZ3);
      for (const GateOp& g : bell_circuit(4)) ops.push_back(g);
      return ops;
    }
    case ChannelKind::ClusterBell6: {
      std::vector<GateOp> ops;
      for (int q : {1, 3, 5})
        for (const GateOp& g : bell_circuit(q)) ops.push_back(g);
      return ops;
    }
    case ChannelKind::Wn:
    case ChannelKind::ClusterN:
      throw std::invalid_argument(
          "circuit_prepare: no fixed circuit for parametric kinds");
  }
  throw std::logic_error("unknown channel kind");
}

ChannelVerification verify_channel(ChannelKind kind) {
  ChannelState c = make_channel(kind);

  // Explicit amplitude tables, independent of the tensor-built construction.
  const double r2 = std::sqrt(2.0);
  StateVector table = zeros(c.state.num_qubits);
  switch (kind) {
    case ChannelKind::Bell:
      table.amplitudes[0b00] = 1.0 / r2;
      table.amplitudes[0b11] = 1.0 / r2;
      break;
    case ChannelKind::GHZ3:
      table.amplitudes[0b000] = 1.0 / r2;
      table.amplitudes[0b111] = 1.0 / r2;
      break;
    case ChannelKind::W3:
      table.amplitudes[0b100] = 0.5;
      table.amplitudes[0b010] = 0.5;
      table.amplitudes[0b001] = r2 / 2.0;
      break;
    case ChannelKind::WBell5: {
      const double c8 = 1.0 / (2.0 * r2);
      table.amplitudes[0b10000] = c8;
      table.amplitudes[0b01000] = c8;
      table.amplitudes[0b00100] = r2 * c8;
      table.amplitudes[0b10011] = c8;
      table.amplitudes[0b01011] = c8;
      table.amplitudes[0b00111] = r2 * c8;
      break;
    }
    case ChannelKind::GHZBell5:
      for (int idx : {0b00000, 0b00011, 0b11100, 0b11111})
        table.amplitudes[idx] = 0.5;
      break;
    case ChannelKind::ClusterBell6: {
      const double c8 = 1.0 / (2.0 * r2);
      for (int idx : {0b000000, 0b000011, 0b001100, 0b001111, 0b110000,
                      0b110011, 0b111100, 0b111111})
        table.amplitudes[idx] = c8;
      break;
    }
    case ChannelKind::Wn:
    case ChannelKind::ClusterN:
      throw std::invalid_argument("verify_channel: unsupported kind");
  }

  ChannelVerification v;
  v.max_amplitude_error =
      (c.state.amplitudes - table.amplitudes).cwiseAbs().maxCoeff();
  StateVector circ = apply_circuit(new_register(c.state.num_qubits),
                                   circuit_prepare(kind));
  v.circuit_fidelity = fidelity(c.state, circ);
  return v;
}

} // namespace qtr
