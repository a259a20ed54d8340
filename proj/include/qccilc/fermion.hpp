#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qccilc/bits.hpp"
#include "qccilc/pauli.hpp"

namespace qccilc {

/// Spin-orbital layout. Blocked puts every alpha orbital before every beta
/// orbital (mode p is alpha p, mode n+p is beta p); interleaved alternates.
enum class OrbitalOrdering { kBlocked, kInterleaved };
enum class QubitMapping { kJordanWigner, kParity };

OrbitalOrdering parse_ordering(std::string_view s);
QubitMapping parse_mapping(std::string_view s);
std::string to_string(OrbitalOrdering o);
std::string to_string(QubitMapping m);

/// Spatial-orbital integrals in chemists' notation, stored densely.
struct FermionIntegrals {
  int n_orbitals = 0;
  int n_electrons = 0;
  int ms2 = 0;
  double core_energy = 0.0;
  std::vector<double> one_body;  // n*n, row-major h[p*n+q]
  std::vector<double> two_body;  // n^4, g[((p*n+q)*n+r)*n+s] = (pq|rs)

  FermionIntegrals() = default;
  FermionIntegrals(int n_orbitals, int n_electrons, int ms2 = 0);

  double h(int p, int q) const { return one_body[static_cast<std::size_t>(p * n_orbitals + q)]; }
  double g(int p, int q, int r, int s) const { return two_body[index4(p, q, r, s)]; }
  /// Sets h_pq and h_qp.
  void set_h(int p, int q, double v);
  /// Sets all eight symmetry-equivalent entries.
  void set_g(int p, int q, int r, int s, double v);

  int n_modes() const noexcept { return 2 * n_orbitals; }
  int n_alpha() const noexcept { return (n_electrons + ms2) / 2; }
  int n_beta() const noexcept { return (n_electrons - ms2) / 2; }

  /// Throws ContractError on broken symmetry or inconsistent electron counts.
  void validate(double tol = 1e-12) const;

 private:
  std::size_t index4(int p, int q, int r, int s) const {
    const auto n = static_cast<std::size_t>(n_orbitals);
    return ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
  }
};

FermionIntegrals parse_fcidump(std::string_view text);
FermionIntegrals read_fcidump(const std::filesystem::path& path);

/// Mode index of spatial orbital p with spin 0 (alpha) or 1 (beta).
int spin_orbital(int p, int spin, int n_orbitals, OrbitalOrdering ordering);

/// Product of ladder operators. Each entry is +(mode+1) for a creation
/// operator and -(mode+1) for an annihilation operator, read left to right.
using LadderString = std::vector<int>;

inline int create(int mode) { return mode + 1; }
inline int annihilate(int mode) { return -(mode + 1); }

/// Second-quantized operator kept in normal order: creators first in
/// ascending mode order, then annihilators in descending mode order.
class FermionOp {
 public:
  using TermMap = std::map<LadderString, Complex>;

  FermionOp() = default;
  explicit FermionOp(int n_modes) : n_modes_(n_modes) {}

  static FermionOp constant(int n_modes, Complex c);

  /// Adds c times the (arbitrary-order) product, normal ordering it first.
  void add(const LadderString& ops, Complex c);
  void accumulate(const FermionOp& other, Complex scale = 1.0);

  int n_modes() const noexcept { return n_modes_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  Complex coeff(const LadderString& normal_ordered) const;

  /// Removes coefficients with |c| <= tol.
  void prune(double tol = 1e-14);

  FermionOp adjoint() const;

  friend FermionOp operator*(const FermionOp& a, const FermionOp& b);
  friend FermionOp operator+(const FermionOp& a, const FermionOp& b);
  friend FermionOp operator*(Complex s, const FermionOp& a);

 private:
  int n_modes_ = 0;
  TermMap terms_;
};

/// E_core + sum h_pq a+_p a_q + 1/2 sum g_pqrs a+_p a+_r a_s a_q, spin-summed.
FermionOp build_fermion_hamiltonian(const FermionIntegrals& fi,
                                    OrbitalOrdering ordering = OrbitalOrdering::kBlocked);

SparsePauliOp jordan_wigner(const FermionOp& f, int n_modes, double prune_threshold = kDefaultPruneThreshold);
SparsePauliOp parity_map(const FermionOp& f, int n_modes, double prune_threshold = kDefaultPruneThreshold);
SparsePauliOp map_to_qubits(const FermionOp& f, int n_modes, QubitMapping mapping,
                            double prune_threshold = kDefaultPruneThreshold);

/// Total spin S^2 = S-S+ + Sz^2 + Sz over 2*n_orbitals modes.
FermionOp s_squared(int n_orbitals, OrbitalOrdering ordering = OrbitalOrdering::kBlocked);
/// S_z over 2*n_orbitals modes.
FermionOp s_z(int n_orbitals, OrbitalOrdering ordering = OrbitalOrdering::kBlocked);
FermionOp number_operator(int n_modes);

/// h + (mu/2) s2.
SparsePauliOp add_spin_penalty(const SparsePauliOp& h, const SparsePauliOp& s2, double mu);

/// Occupations of the aufbau determinant (lowest n_alpha alpha and n_beta
/// beta orbitals), converted to prefix parities under the parity mapping.
BitVec hartree_fock_bitstring(const FermionIntegrals& fi, OrbitalOrdering ordering, QubitMapping mapping);

/// Occupation-number vector to qubit basis state under `mapping`.
BitVec occupations_to_qubits(const BitVec& occupations, QubitMapping mapping);

/// Determinant energy of the aufbau state evaluated from the integrals.
double hartree_fock_energy(const FermionIntegrals& fi);

struct MappedHamiltonian {
  SparsePauliOp hamiltonian;
  BitVec reference;
  int n_qubits = 0;
};

struct MappingOptions {
  QubitMapping mapping = QubitMapping::kJordanWigner;
  OrbitalOrdering ordering = OrbitalOrdering::kBlocked;
  double spin_penalty = 0.0;
  double prune_threshold = kDefaultPruneThreshold;
};

/// Integrals to qubit Hamiltonian plus its Hartree-Fock reference.
MappedHamiltonian map_hamiltonian(const FermionIntegrals& fi, const MappingOptions& opts);

}  // namespace qccilc
