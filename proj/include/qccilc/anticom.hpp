#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qccilc/bits.hpp"
#include "qccilc/dis.hpp"
#include "qccilc/pauli.hpp"

namespace qccilc {

/// Dense matrix over GF(2), one packed BitVec per row.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }
  const BitVec& row(std::size_t r) const { return rows_[r]; }
  BitVec& row(std::size_t r) { return rows_[r]; }
  /// m * z over GF(2).
  BitVec apply(const BitVec& z) const;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVec> rows_;
};

/// One flip vector per requested partition.
struct AnticomRequest {
  std::vector<BitVec> x_vectors;
  std::size_t n_qubits = 0;

  /// Nonempty, consistent lengths, nonzero and pairwise distinct vectors.
  void validate() const;
};

/// Rows: one per pair j<k (x^(k) in block j, x^(j) in block k), in
/// lexicographic pair order, then one odd-Y row per k (x^(k) in block k).
/// Right-hand side all ones. Block k holds the z-vector of word k.
std::pair<BinaryMatrix, BitVec> build_constraint_matrix(const AnticomRequest& req);

/// Gaussian elimination with free variables set to 0; the solution is
/// verified by substitution. nullopt when inconsistent.
std::optional<BitVec> solve_gf2(const BinaryMatrix& m, const BitVec& rhs);

/// Pairwise anticommuting odd-Y words with the requested flip vectors, or
/// nullopt when no such set exists.
std::optional<std::vector<PauliWord>> solve_anticommuting(const AnticomRequest& req);

/// Pairwise anticommuting and odd Y-count.
bool is_anticommuting_set(const std::vector<PauliWord>& words);

struct AnticomOptions {
  /// Try partition combinations in rank order before shrinking N.
  bool exhaustive = false;
  std::uint64_t exhaustive_budget = 100000;
};

struct AnticomResult {
  std::vector<PauliWord> words;
  std::vector<std::size_t> partitions;  // indices into the ranked list
  std::size_t requested = 0;
  std::size_t solves = 0;
  bool reduced() const noexcept { return words.size() < requested; }
};

/// Greedy selection: start from the top n partitions; while infeasible,
/// replace the last selected partition by the next-ranked candidates; when
/// those run out drop it and continue with one fewer. Throws ContractError
/// for n > 2*n_qubits - 1 or n > partitions.size(), InfeasibleError if even
/// a single word cannot be found.
AnticomResult find_anticommuting_set(const std::vector<DisPartition>& partitions, std::size_t n,
                                     const AnticomOptions& options = {});

}  // namespace qccilc
