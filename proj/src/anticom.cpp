#include "qccilc/anticom.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "qccilc/errors.hpp"

namespace qccilc {

BitVec BinaryMatrix::apply(const BitVec& z) const {
  check_same_qubits(cols_, z.size(), "BinaryMatrix::apply");
  BitVec out(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) out.set(r, and_popcount(rows_[r], z) & 1);
  return out;
}

void AnticomRequest::validate() const {
  if (x_vectors.empty()) throw ContractError("anticom request: no flip vectors");
  std::set<BitVec> seen;
  for (const auto& x : x_vectors) {
    if (x.size() != n_qubits) throw DimensionError("anticom request: flip vector length differs from n_qubits");
    if (!x.any()) throw ContractError("anticom request: zero flip vector");
    if (!seen.insert(x).second) throw ContractError("anticom request: duplicate flip vector " + x.to_string());
  }
}

std::pair<BinaryMatrix, BitVec> build_constraint_matrix(const AnticomRequest& req) {
  req.validate();
  const auto n = req.x_vectors.size();
  const auto nq = req.n_qubits;
  BinaryMatrix m(n * (n + 1) / 2, n * nq);
  auto put = [&](std::size_t row, std::size_t block, const BitVec& x) {
    for (auto q : x.set_indices()) m.set(row, block * nq + q);
  };
  std::size_t row = 0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k, ++row) {
      put(row, j, req.x_vectors[k]);
      put(row, k, req.x_vectors[j]);
    }
  for (std::size_t k = 0; k < n; ++k, ++row) put(row, k, req.x_vectors[k]);
  BitVec rhs(m.rows());
  for (std::size_t r = 0; r < rhs.size(); ++r) rhs.set(r);
  return {std::move(m), std::move(rhs)};
}

std::optional<BitVec> solve_gf2(const BinaryMatrix& m, const BitVec& rhs) {
  check_same_qubits(m.rows(), rhs.size(), "solve_gf2");
  const auto rows = m.rows(), cols = m.cols();
  // Augmented rows with the rhs in column `cols`.
  std::vector<BitVec> a(rows, BitVec(cols + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto c : m.row(r).set_indices()) a[r].set(c);
    a[r].set(cols, rhs.get(r));
  }
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && !a[p].get(c)) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && a[r].get(c)) a[r] ^= a[rank];
    pivot_col.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r)
    if (a[r].get(cols)) return std::nullopt;
  BitVec z(cols);
  for (std::size_t r = 0; r < rank; ++r) z.set(pivot_col[r], a[r].get(cols));
  if (m.apply(z) != rhs) throw NumericalError("solve_gf2: solution failed verification");
  return z;
}

bool is_anticommuting_set(const std::vector<PauliWord>& words) {
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (y_parity(words[i]) != 1) return false;
    for (std::size_t j = i + 1; j < words.size(); ++j)
      if (commutes(words[i], words[j])) return false;
  }
  return true;
}

std::optional<std::vector<PauliWord>> solve_anticommuting(const AnticomRequest& req) {
  auto [m, rhs] = build_constraint_matrix(req);
  const auto z = solve_gf2(m, rhs);
  if (!z) return std::nullopt;
  std::vector<PauliWord> words;
  const auto nq = req.n_qubits;
  for (std::size_t k = 0; k < req.x_vectors.size(); ++k) {
    BitVec zk(nq);
    for (std::size_t q = 0; q < nq; ++q) zk.set(q, z->get(k * nq + q));
    words.emplace_back(req.x_vectors[k], zk);
  }
  if (!is_anticommuting_set(words)) throw NumericalError("solve_anticommuting: solution failed verification");
  return words;
}

namespace {

std::optional<std::vector<PauliWord>> try_selection(const std::vector<DisPartition>& parts,
                                                    const std::vector<std::size_t>& sel, std::size_t& solves) {
  AnticomRequest req;
  req.n_qubits = parts[sel[0]].flip_x.size();
  for (auto i : sel) req.x_vectors.push_back(parts[i].flip_x);
  ++solves;
  return solve_anticommuting(req);
}

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const auto k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

AnticomResult find_anticommuting_set(const std::vector<DisPartition>& partitions, std::size_t n,
                                     const AnticomOptions& options) {
  if (n == 0) throw ContractError("find_anticommuting_set: N must be at least 1");
  if (partitions.empty()) throw ContractError("find_anticommuting_set: no partitions");
  const auto nq = partitions[0].flip_x.size();
  if (n > 2 * nq - 1) {
    throw ContractError("find_anticommuting_set: N = " + std::to_string(n) + " exceeds 2*n_q - 1 = " +
                        std::to_string(2 * nq - 1));
  }
  if (n > partitions.size()) {
    throw ContractError("find_anticommuting_set: N = " + std::to_string(n) + " but only " +
                        std::to_string(partitions.size()) + " partitions");
  }

  AnticomResult result;
  result.requested = n;
  for (std::size_t size = n; size >= 1; --size) {
    std::vector<std::size_t> sel(size);
    for (std::size_t i = 0; i < size; ++i) sel[i] = i;
    if (auto w = try_selection(partitions, sel, result.solves)) {
      result.words = std::move(*w);
      result.partitions = sel;
      return result;
    }
    // Greedy: walk the last slot down the ranking.
    for (std::size_t cand = size; cand < partitions.size(); ++cand) {
      sel.back() = cand;
      if (auto w = try_selection(partitions, sel, result.solves)) {
        result.words = std::move(*w);
        result.partitions = sel;
        return result;
      }
    }
    if (options.exhaustive) {
      std::vector<std::size_t> c(size);
      for (std::size_t i = 0; i < size; ++i) c[i] = i;
      std::uint64_t tried = 0;
      do {
        if (tried++ >= options.exhaustive_budget) break;
        if (auto w = try_selection(partitions, c, result.solves)) {
          result.words = std::move(*w);
          result.partitions = c;
          return result;
        }
      } while (next_combination(c, partitions.size()));
    }
  }
  std::string names;
  for (const auto& p : partitions) names += (names.empty() ? "" : ",") + p.flip_x.to_string();
  throw InfeasibleError("no anticommuting odd-Y set found; tried partitions " + names);
}

}  // namespace qccilc
