#include "qteleroute/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace qtr {

namespace {

void check_qubit(const StateVector& s, int q, const char* who) {
  if (q < 1 || q > s.num_qubits) {
    std::ostringstream msg;
    msg << who << ": qubit index " << q << " outside 1.." << s.num_qubits;
    throw std::invalid_argument(msg.str());
  }
}

std::uint64_t qubit_mask(const StateVector& s, int q) {
  return std::uint64_t{1} << (s.num_qubits - q);
}

void check_norm(const StateVector& s, const char* who) {
  double n2 = s.amplitudes.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTol) {
    std::ostringstream msg;
    msg << who << ": state norm^2 drifted to " << n2;
    throw std::runtime_error(msg.str());
  }
}

// In-place 2x2 update on the target qubit, restricted to indices where all
// control bits are set.
void apply_2x2(StateVector& s, int target, std::uint64_t control_mask,
               const Eigen::Matrix2cd& m) {
  const std::uint64_t tmask = qubit_mask(s, target);
  const std::uint64_t dim = s.amplitudes.size();
  for (std::uint64_t i = 0; i < dim; ++i) {
    if ((i & tmask) != 0) continue;
    if ((i & control_mask) != control_mask) continue;
    const std::uint64_t j = i | tmask;
    const Complex a0 = s.amplitudes[i];
    const Complex a1 = s.amplitudes[j];
    s.amplitudes[i] = m(0, 0) * a0 + m(0, 1) * a1;
    s.amplitudes[j] = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

Eigen::Matrix2cd mat_h() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << r, r, r, -r;
  return m;
}

Eigen::Matrix2cd mat_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd mat_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix2cd mat_ry(double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return m;
}

void apply_gate_inplace(StateVector& s, const GateOp& g) {
  const auto& q = g.qubits;
  auto expect_arity = [&](std::size_t k) {
    if (q.size() != k)
      throw std::invalid_argument(gate_name(g) + ": wrong qubit count");
    for (std::size_t i = 0; i < k; ++i) {
      check_qubit(s, q[i], gate_name(g).c_str());
      for (std::size_t j = i + 1; j < k; ++j)
        if (q[i] == q[j])
          throw std::invalid_argument(gate_name(g) + ": duplicate qubit index");
    }
  };
  switch (g.kind) {
    case GateKind::H:
      expect_arity(1);
      apply_2x2(s, q[0], 0, mat_h());
      break;
    case GateKind::X:
      expect_arity(1);
      apply_2x2(s, q[0], 0, mat_x());
      break;
    case GateKind::Z:
      expect_arity(1);
      apply_2x2(s, q[0], 0, mat_z());
      break;
    case GateKind::RY:
      if (!std::isfinite(g.angle))
        throw std::invalid_argument("RY: non-finite angle");
      expect_arity(1);
      apply_2x2(s, q[0], 0, mat_ry(g.angle));
      break;
    case GateKind::CNOT:
      expect_arity(2);
      apply_2x2(s, q[1], qubit_mask(s, q[0]), mat_x());
      break;
    case GateKind::CH:
      expect_arity(2);
      apply_2x2(s, q[1], qubit_mask(s, q[0]), mat_h());
      break;
    case GateKind::CCNOT:
      expect_arity(3);
      apply_2x2(s, q[2], qubit_mask(s, q[0]) | qubit_mask(s, q[1]), mat_x());
      break;
  }
}

} // namespace

GateOp h(int q) { return {GateKind::H, {q}, 0.0}; }
GateOp x(int q) { return {GateKind::X, {q}, 0.0}; }
GateOp z(int q) { return {GateKind::Z, {q}, 0.0}; }
GateOp ry(double angle, int q) { return {GateKind::RY, {q}, angle}; }
GateOp cnot(int control, int target) {
  return {GateKind::CNOT, {control, target}, 0.0};
}
GateOp ch(int control, int target) {
  return {GateKind::CH, {control, target}, 0.0};
}
GateOp ccnot(int control1, int control2, int target) {
  return {GateKind::CCNOT, {control1, control2, target}, 0.0};
}

std::string gate_name(const GateOp& g) {
  std::ostringstream out;
  switch (g.kind) {
    case GateKind::H: out << "H"; break;
    case GateKind::X: out << "X"; break;
    case GateKind::Z: out << "Z"; break;
    case GateKind::RY: out << "RY(" << g.angle << ")"; break;
    case GateKind::CNOT: out << "CNOT"; break;
    case GateKind::CH: out << "CH"; break;
    case GateKind::CCNOT: out << "CCNOT"; break;
  }
  out << "[";
  for (std::size_t i = 0; i < g.qubits.size(); ++i)
    out << (i ? "," : "") << g.qubits[i];
  out << "]";
  return out.str();
}

StateVector new_register(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    std::ostringstream msg;
    msg << "new_register: qubit count " << num_qubits << " outside 1.."
        << kMaxQubits;
    throw GuardError(msg.str());
  }
  StateVector s;
  s.num_qubits = num_qubits;
  s.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << num_qubits);
  s.amplitudes[0] = 1.0;
  return s;
}

StateVector prepare_qubit(double theta) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("prepare_qubit: non-finite theta");
  StateVector s;
  s.num_qubits = 1;
  s.amplitudes = Eigen::VectorXcd(2);
  s.amplitudes[0] = std::cos(theta / 4.0);
  s.amplitudes[1] = std::sin(theta / 4.0);
  return s;
}

StateVector apply_gate(const StateVector& s, const GateOp& g) {
  StateVector out = s;
  apply_gate_inplace(out, g);
  check_norm(out, "apply_gate");
  return out;
}

StateVector apply_circuit(const StateVector& s, const std::vector<GateOp>& ops) {
  StateVector out = s;
  for (const GateOp& g : ops) apply_gate_inplace(out, g);
  check_norm(out, "apply_circuit");
  return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const int n = a.num_qubits + b.num_qubits;
  if (n > kMaxQubits) {
    std::ostringstream msg;
    msg << "tensor: combined register of " << n << " qubits exceeds "
        << kMaxQubits;
    throw GuardError(msg.str());
  }
  StateVector out;
  out.num_qubits = n;
  out.amplitudes = Eigen::VectorXcd(std::int64_t{1} << n);
  const std::uint64_t db = std::uint64_t{1} << b.num_qubits;
  for (std::uint64_t ia = 0; ia < std::uint64_t(a.amplitudes.size()); ++ia)
    for (std::uint64_t ib = 0; ib < db; ++ib)
      out.amplitudes[(ia << b.num_qubits) | ib] =
          a.amplitudes[ia] * b.amplitudes[ib];
  return out;
}

Projection project_qubit(const StateVector& s, int qubit, int outcome) {
  check_qubit(s, qubit, "project_qubit");
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("project_qubit: outcome must be 0 or 1");
  const std::uint64_t mask = qubit_mask(s, qubit);
  Projection p;
  p.collapsed.num_qubits = s.num_qubits;
  p.collapsed.amplitudes = Eigen::VectorXcd::Zero(s.amplitudes.size());
  double prob = 0.0;
  for (std::uint64_t i = 0; i < std::uint64_t(s.amplitudes.size()); ++i) {
    const bool bit = (i & mask) != 0;
    if (bit == (outcome == 1)) {
      prob += std::norm(s.amplitudes[i]);
      p.collapsed.amplitudes[i] = s.amplitudes[i];
    }
  }
  p.probability = prob;
  if (prob > 0.0) p.collapsed.amplitudes /= std::sqrt(prob);
  return p;
}

MeasureResult measure_qubit(const StateVector& s, int qubit, Rng& rng) {
  check_qubit(s, qubit, "measure_qubit");
  Projection p0 = project_qubit(s, qubit, 0);
  Projection p1 = project_qubit(s, qubit, 1);
  if (p0.probability < kMeasureFloor && p1.probability < kMeasureFloor)
    throw std::runtime_error(
        "measure_qubit: both outcome probabilities below 1e-14");
  MeasureResult r;
  if (p1.probability < kMeasureFloor) {
    r.outcome = 0;
  } else if (p0.probability < kMeasureFloor) {
    r.outcome = 1;
  } else {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    r.outcome = u(rng) < p0.probability ? 0 : 1;
  }
  Projection& chosen = r.outcome == 0 ? p0 : p1;
  r.probability = chosen.probability;
  r.collapsed = std::move(chosen.collapsed);
  check_norm(r.collapsed, "measure_qubit");
  return r;
}

std::vector<double> probabilities(const StateVector& s) {
  std::vector<double> p(s.amplitudes.size());
  for (std::uint64_t i = 0; i < p.size(); ++i)
    p[i] = std::norm(s.amplitudes[i]);
  return p;
}

std::map<std::string, long long> sample_all(const StateVector& s,
                                            long long shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("sample_all: shots must be >= 1");
  std::vector<double> cdf = probabilities(s);
  for (std::size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];
  std::map<std::string, long long> hist;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (long long k = 0; k < shots; ++k) {
    const double r = u(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    std::uint64_t idx = std::min<std::uint64_t>(
        std::distance(cdf.begin(), it), cdf.size() - 1);
    ++hist[basis_label(idx, s.num_qubits)];
  }
  return hist;
}

double fidelity(const StateVector& ideal, const StateVector& actual) {
  if (ideal.num_qubits != actual.num_qubits)
    throw std::invalid_argument("fidelity: qubit counts differ");
  return std::norm(ideal.amplitudes.dot(actual.amplitudes));
}

Eigen::Matrix2cd reduced_single_qubit(const StateVector& s, int qubit) {
  check_qubit(s, qubit, "reduced_single_qubit");
  const std::uint64_t mask = qubit_mask(s, qubit);
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (std::uint64_t i = 0; i < std::uint64_t(s.amplitudes.size()); ++i) {
    if ((i & mask) != 0) continue;
    const Complex a0 = s.amplitudes[i];
    const Complex a1 = s.amplitudes[i | mask];
    rho(0, 0) += a0 * std::conj(a0);
    rho(0, 1) += a0 * std::conj(a1);
    rho(1, 0) += a1 * std::conj(a0);
    rho(1, 1) += a1 * std::conj(a1);
  }
  return rho;
}

double fidelity_against(const Eigen::Matrix2cd& rho, const StateVector& psi_1q) {
  if (psi_1q.num_qubits != 1)
    throw std::invalid_argument("fidelity_against: reference must be 1 qubit");
  Eigen::Vector2cd v(psi_1q.amplitudes[0], psi_1q.amplitudes[1]);
  return std::real(v.dot(rho * v));
}

std::string basis_label(std::uint64_t index, int num_qubits) {
  std::string s(num_qubits, '0');
  for (int q = 0; q < num_qubits; ++q)
    if (index & (std::uint64_t{1} << (num_qubits - 1 - q))) s[q] = '1';
  return s;
}

std::string state_json(const StateVector& s) {
  nlohmann::ordered_json j;
  j["qubit_order"] = "qubit 1 = most significant bit of the basis index";
  j["num_qubits"] = s.num_qubits;
  nlohmann::ordered_json amps = nlohmann::ordered_json::array();
  for (std::int64_t i = 0; i < s.amplitudes.size(); ++i)
    amps.push_back({s.amplitudes[i].real(), s.amplitudes[i].imag()});
  j["amplitudes"] = std::move(amps);
  return j.dump(2);
}

} // namespace qtr
