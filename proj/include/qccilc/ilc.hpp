#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qccilc/bits.hpp"
#include "qccilc/mean_field.hpp"
#include "qccilc/pauli.hpp"

namespace qccilc {

/// exp(-i tau sum_k alphas[k] entanglers[k]); the entanglers pairwise
/// anticommute, so the generator squares to the identity.
struct IlcAnsatz {
  std::vector<PauliWord> entanglers;
  double tau = 0.0;
  std::vector<double> alphas;

  std::size_t size() const noexcept { return entanglers.size(); }
  /// Throws ContractError unless the entanglers form an odd-Y anticommuting
  /// set on a common qubit count and sum alphas^2 = 1 within `tol`.
  void validate(double tol = 1e-12) const;
  /// sum_k alphas[k] entanglers[k].
  SparsePauliOp generator() const;
};

/// Matrices over the basis {|ref>, T_1|ref>, ..., T_N|ref>} with the
/// phase mask M = [[1, -i], [i, 1]] applied, so that a real coefficient
/// vector c describes c_0|ref> - i sum_j c_j T_j|ref>.
struct SubspaceProblem {
  Eigen::MatrixXcd hbar;
  Eigen::MatrixXcd sbar;
  QmfState reference;
  std::vector<PauliWord> entanglers;
  bool orthonormal = false;  // basis-state reference, sbar is exactly I
};

SubspaceProblem build_subspace(const SparsePauliOp& h, const BitVec& ref, const std::vector<PauliWord>& ents);
SubspaceProblem build_subspace(const SparsePauliOp& h, const QmfState& ref, const std::vector<PauliWord>& ents);

struct SubspaceSolution {
  double energy = 0.0;
  Eigen::VectorXcd c;
  /// Directions of sbar below cond_cap^-1 times its largest eigenvalue were dropped.
  bool reduced = false;
};

/// Lowest root of hbar c = E sbar c by canonical orthogonalization.
/// c is normalized to c^H sbar c = 1 and its first component above 1e-12 in
/// magnitude is made real and positive.
SubspaceSolution solve_ground(const SubspaceProblem& p, double cond_cap = 1e12);

/// Same generalized problem restricted to real c, i.e. with Re(hbar) and
/// Re(sbar). This is the exact minimum over (tau, alphas).
SubspaceSolution solve_ground_real(const SubspaceProblem& p, double cond_cap = 1e12);

/// tau = arccos(c_0), alphas = c_j / sin(tau) renormalized. Throws
/// NumericalError when |sin tau| < 1e-10 or c is not real.
std::pair<double, std::vector<double>> extract_parameters(const Eigen::VectorXcd& c);

/// Inverse of extract_parameters: (cos tau, sin tau alphas).
Eigen::VectorXd ilc_coefficients(double tau, const std::vector<double>& alphas);

struct IlcOptions {
  bool relax_qmf = false;
  int max_outer = 50;
  double energy_tolerance = 1e-9;
  double cond_cap = 1e12;
  /// Bloch-angle step of the relaxation loop; restarts default to none so
  /// the loop stays a local descent.
  QmfOptions qmf{0, 0, {}};
};

struct IlcResult {
  IlcAnsatz ansatz;
  double energy = 0.0;
  double reference_energy = 0.0;  // <ref|h|ref> of the input reference
  QmfState reference;             // relaxed when relax_qmf is set
  int iterations = 0;
  bool converged = true;
  /// hbar or sbar had imaginary entries, so the real-restricted problem was solved.
  bool real_restricted = false;
  /// The optimum is the reference itself (sin tau ~ 0); tau is set to 0.
  bool reference_dominated = false;
  std::vector<double> history;  // energy after each outer iteration
};

IlcResult optimize_ilc(const SparsePauliOp& h, const QmfState& ref, const std::vector<PauliWord>& ents,
                       const IlcOptions& options = {});
IlcResult optimize_ilc(const SparsePauliOp& h, const BitVec& ref, const std::vector<PauliWord>& ents,
                       const IlcOptions& options = {});

/// <ref|U^H h U|ref> for the given parameters, via the subspace matrices.
double ilc_energy(const SubspaceProblem& p, double tau, const std::vector<double>& alphas);

/// Dense U = cos(tau) - i sin(tau) sum alphas T.
Eigen::MatrixXcd ilc_unitary(const IlcAnsatz& a, std::size_t cap = 12);

}  // namespace qccilc
