#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qccilc/mean_field.hpp"
#include "qccilc/optimize.hpp"
#include "qccilc/pauli.hpp"

namespace qccilc {

inline constexpr std::size_t kStatevectorCap = 20;
inline constexpr std::size_t kDenseCap = 12;
/// ground_state switches from dense diagonalization to Lanczos above this.
inline constexpr std::size_t kDenseGroundStateMax = 10;

/// Dense state; qubit l is bit l of the basis index.
class Statevector {
 public:
  Statevector() = default;
  explicit Statevector(std::size_t n_qubits, std::size_t cap = kStatevectorCap);
  static Statevector basis(const BitVec& bits, std::size_t cap = kStatevectorCap);
  static Statevector from_amplitudes(std::size_t n_qubits, std::vector<Complex> amps);

  std::size_t num_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const noexcept { return amps_; }
  std::vector<Complex>& amplitudes() noexcept { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }
  double norm() const;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> amps_;
};

Statevector prepare_qmf(const QmfState& s, std::size_t cap = kStatevectorCap);

/// out = t |v>.
void apply_pauli(const PauliWord& t, const Statevector& v, Statevector& out);
/// exp(-i angle t / 2)|v> = cos(angle/2)|v> - i sin(angle/2) t|v>.
Statevector apply_pauli_exp(const Statevector& v, const PauliWord& t, double angle);
void apply_pauli_exp_inplace(Statevector& v, const PauliWord& t, double angle, Statevector& scratch);

/// h|v>, matrix-free.
Statevector apply_operator(const SparsePauliOp& h, const Statevector& v);

Complex overlap(const Statevector& a, const Statevector& b);
Complex expectation_complex(const Statevector& v, const SparsePauliOp& h);
/// Real part of <v|h|v>; throws NumericalError if the imaginary residual exceeds 1e-9.
double expectation(const Statevector& v, const SparsePauliOp& h);

/// prod_k exp(-i taus[k] ents[k] / 2)|omega>, taus[0] applied first.
Statevector qcc_state(const QmfState& s, const std::vector<PauliWord>& ents, const std::vector<double>& taus);
double qcc_energy(const SparsePauliOp& h, const QmfState& s, const std::vector<PauliWord>& ents,
                  const std::vector<double>& taus);
/// Energy with analytic gradients; grad layout (taus..., thetas..., phis...).
double qcc_energy_and_gradient(const SparsePauliOp& h, const QmfState& s, const std::vector<PauliWord>& ents,
                               const std::vector<double>& taus, std::vector<double>* grad,
                               bool with_angle_gradient = true);

struct QccOptions {
  bool optimize_angles = true;
  int restarts = 1;
  std::uint64_t seed = 0;
  LbfgsOptions lbfgs;
};

struct QccResult {
  double energy = 0.0;
  std::vector<double> taus;
  QmfState state;
  bool converged = false;
};

/// Minimizes qcc_energy from zero amplitudes at `s`; later restarts draw
/// amplitudes uniformly in [-pi, pi).
QccResult optimize_qcc(const SparsePauliOp& h, const QmfState& s, const std::vector<PauliWord>& ents,
                       const QccOptions& options = {});

Eigen::MatrixXcd dense_matrix(const SparsePauliOp& h, std::size_t cap = kDenseCap);
/// Ascending eigenvalues of the dense matrix.
Eigen::VectorXd spectrum(const SparsePauliOp& h, std::size_t cap = kDenseCap);

struct GroundStateOptions {
  std::size_t dense_max = kDenseGroundStateMax;
  std::size_t cap = kStatevectorCap;
  int krylov_dim = 40;
  int max_restarts = 500;
  double residual_tolerance = 1e-9;
  std::uint64_t seed = 0;
};

struct GroundState {
  double energy = 0.0;
  Statevector state;
  double residual = 0.0;
  std::string method;
};

GroundState ground_state(const SparsePauliOp& h, const GroundStateOptions& options = {});

}  // namespace qccilc
