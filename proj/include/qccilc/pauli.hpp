#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qccilc/bits.hpp"

namespace qccilc {

using Complex = std::complex<double>;

/// Magnitude below which coefficients are dropped when operators are built.
inline constexpr double kDefaultPruneThreshold = 1e-8;

/// A power of i, i^k with k in {0,1,2,3}.
struct FourthRootPhase {
  std::uint8_t k = 0;

  constexpr FourthRootPhase() = default;
  constexpr explicit FourthRootPhase(int exponent) : k(static_cast<std::uint8_t>(((exponent % 4) + 4) % 4)) {}

  Complex value() const noexcept {
    constexpr double re[4] = {1, 0, -1, 0};
    constexpr double im[4] = {0, 1, 0, -1};
    return {re[k], im[k]};
  }

  friend constexpr FourthRootPhase operator*(FourthRootPhase a, FourthRootPhase b) {
    return FourthRootPhase(a.k + b.k);
  }
  friend constexpr bool operator==(FourthRootPhase, FourthRootPhase) = default;
};

/// Phase-free tensor product of single-qubit Paulis in binary symplectic form.
/// Per qubit (x, z): (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z.
class PauliWord {
 public:
  PauliWord() = default;
  /// Identity on `n` qubits.
  explicit PauliWord(std::size_t n) : x_(n), z_(n) {}
  PauliWord(BitVec x, BitVec z);

  /// Sparse label such as "X0 Y3 Z4" or "I".
  static PauliWord parse(std::string_view label, std::size_t n);
  /// Dense label where character i is the operator on qubit i, e.g. "XIZY".
  static PauliWord from_dense(std::string_view label);

  std::size_t num_qubits() const noexcept { return x_.size(); }
  const BitVec& x() const noexcept { return x_; }
  const BitVec& z() const noexcept { return z_; }

  /// 'I', 'X', 'Y' or 'Z' on qubit q.
  char op(std::size_t q) const noexcept;
  std::size_t weight() const noexcept { return (x_ | z_).popcount(); }
  std::size_t y_count() const noexcept { return and_popcount(x_, z_); }
  bool is_identity() const noexcept { return !x_.any() && !z_.any(); }
  bool is_diagonal() const noexcept { return !x_.any(); }

  /// Sparse label, "I" for the identity.
  std::string to_string() const;
  std::string to_dense() const;

  friend bool operator==(const PauliWord&, const PauliWord&) = default;
  /// Lexicographic on (x, z), each compared as an unsigned integer.
  friend std::strong_ordering operator<=>(const PauliWord& a, const PauliWord& b) noexcept {
    if (auto c = a.x_ <=> b.x_; c != 0) return c;
    return a.z_ <=> b.z_;
  }

 private:
  BitVec x_;
  BitVec z_;
};

/// a·b = phase · c.
std::pair<FourthRootPhase, PauliWord> word_multiply(const PauliWord& a, const PauliWord& b);

bool commutes(const PauliWord& a, const PauliWord& b);
int y_parity(const PauliWord& w) noexcept;
int x_parity(const PauliWord& w) noexcept;

/// Number of n-qubit Pauli words with an even count of Y factors.
std::uint64_t count_even_y_words(int n_qubits);

/// Linear combination of Pauli words with complex coefficients.
///
/// Immutable after construction: every operation returns a new operator whose
/// terms are merged exactly and then pruned once against `prune_threshold()`.
/// Iteration is in canonical word order.
class SparsePauliOp {
 public:
  using TermMap = std::map<PauliWord, Complex>;
  using const_iterator = TermMap::const_iterator;

  SparsePauliOp() = default;
  explicit SparsePauliOp(std::size_t n_qubits, double prune_threshold = kDefaultPruneThreshold);
  SparsePauliOp(std::size_t n_qubits, const std::vector<std::pair<PauliWord, Complex>>& terms,
                double prune_threshold = kDefaultPruneThreshold);

  /// Builds from sparse labels, e.g. {{"X0 X1", 0.5}, {"Z0", -1.0}}.
  static SparsePauliOp from_labels(std::size_t n_qubits,
                                   std::initializer_list<std::pair<std::string_view, Complex>> terms,
                                   double prune_threshold = kDefaultPruneThreshold);
  static SparsePauliOp identity(std::size_t n_qubits, Complex c = 1.0,
                                double prune_threshold = kDefaultPruneThreshold);

  std::size_t num_qubits() const noexcept { return n_qubits_; }
  double prune_threshold() const noexcept { return prune_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const TermMap& terms() const noexcept { return terms_; }
  const_iterator begin() const noexcept { return terms_.begin(); }
  const_iterator end() const noexcept { return terms_.end(); }

  /// Zero when the word is absent.
  Complex coeff(const PauliWord& w) const;

  /// Every coefficient real to within `tol` (Pauli words are Hermitian).
  bool is_hermitian(double tol = 1e-10) const noexcept;
  /// Largest |Im c| over all terms.
  double max_imag() const noexcept;

  SparsePauliOp with_prune_threshold(double threshold) const;

  friend bool operator==(const SparsePauliOp&, const SparsePauliOp&) = default;

 private:
  friend class PauliAccumulator;

  std::size_t n_qubits_ = 0;
  double prune_ = kDefaultPruneThreshold;
  TermMap terms_;
};

/// Collects terms with exact complex addition; pruning happens once in
/// `finish()`, so counts do not depend on insertion order.
class PauliAccumulator {
 public:
  explicit PauliAccumulator(std::size_t n_qubits, double prune_threshold = kDefaultPruneThreshold)
      : n_qubits_(n_qubits), prune_(prune_threshold) {}

  void add(const PauliWord& w, Complex c);
  void add(FourthRootPhase phase, const PauliWord& w, Complex c) { add(w, c * phase.value()); }
  void add(const SparsePauliOp& op, Complex scale = 1.0);

  std::size_t size() const noexcept { return terms_.size(); }
  SparsePauliOp finish() &&;

 private:
  std::size_t n_qubits_;
  double prune_;
  SparsePauliOp::TermMap terms_;
};

/// scale_a·a + scale_b·b, pruned with a's threshold.
SparsePauliOp op_combine(const SparsePauliOp& a, const SparsePauliOp& b, Complex scale_a = 1.0,
                         Complex scale_b = 1.0);
SparsePauliOp operator+(const SparsePauliOp& a, const SparsePauliOp& b);
SparsePauliOp operator-(const SparsePauliOp& a, const SparsePauliOp& b);
SparsePauliOp operator*(Complex s, const SparsePauliOp& a);

/// Operator product a·b.
SparsePauliOp multiply(const SparsePauliOp& a, const SparsePauliOp& b);

/// [h, t]. Only words of h anticommuting with t survive, each as 2·c·(P·t).
SparsePauliOp commutator(const SparsePauliOp& h, const PauliWord& t);

/// t1·h·t2 with all phases folded into the coefficients.
SparsePauliOp sandwich(const PauliWord& t1, const SparsePauliOp& h, const PauliWord& t2);

}  // namespace qccilc
