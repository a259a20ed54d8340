#pragma once

#include <cstdint>
#include <vector>

#include "qccilc/bits.hpp"
#include "qccilc/optimize.hpp"
#include "qccilc/pauli.hpp"

namespace qccilc {

/// Product of single-qubit coherent states
/// cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>.
struct QmfState {
  std::vector<double> thetas;
  std::vector<double> phis;

  QmfState() = default;
  /// All qubits in |0>.
  explicit QmfState(std::size_t n) : thetas(n, 0.0), phis(n, 0.0) {}
  QmfState(std::vector<double> t, std::vector<double> p);

  /// theta in {0, pi} per bit, phi = 0.
  static QmfState from_bits(const BitVec& bits);

  std::size_t num_qubits() const noexcept { return thetas.size(); }

  /// Maps every angle pair into theta in [0, pi], phi in [0, 2 pi) without
  /// changing the physical state.
  void canonicalize();
};

/// Sum of c * prod_l f_l with f = cos(theta) for Z, sin(theta)cos(phi) for X,
/// sin(theta)sin(phi) for Y. Throws ContractError for non-Hermitian `op`.
double qmf_expectation(const SparsePauliOp& op, const QmfState& s);
/// Same sum without the Hermiticity requirement.
Complex qmf_expectation_complex(const SparsePauliOp& op, const QmfState& s);
/// Energy and its derivatives; grad layout is (thetas..., phis...).
double qmf_energy_and_gradient(const SparsePauliOp& op, const QmfState& s, std::vector<double>* grad);

struct QmfOptions {
  int random_restarts = 4;
  std::uint64_t seed = 0;
  LbfgsOptions lbfgs;
};

struct QmfResult {
  QmfState state;
  double energy = 0.0;
  bool converged = false;
  int best_start = 0;  // 0 is the supplied initial state
};

/// Multi-start local minimization of qmf_expectation. The result never lies
/// above the initial energy.
QmfResult optimize_qmf(const SparsePauliOp& op, const QmfState& initial, const QmfOptions& options = {});

/// Bit l set iff theta_l > pi/2 (pi/2 itself resolves to 0).
BitVec nearest_basis_state(const QmfState& s);

/// <phi|op|phi>: only diagonal words contribute.
double basis_expectation(const SparsePauliOp& op, const BitVec& phi);
Complex basis_expectation_complex(const SparsePauliOp& op, const BitVec& phi);

/// <bra|op|ket> for computational basis states.
Complex basis_matrix_element(const SparsePauliOp& op, const BitVec& bra, const BitVec& ket);

}  // namespace qccilc
