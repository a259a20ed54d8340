#include "qccilc/dis.hpp"

#include <algorithm>
#include <cmath>

#include "qccilc/errors.hpp"
#include "qccilc/parallel.hpp"

namespace qccilc {

namespace {

// <phi|P|phi'> phase for P|phi> = i^{|x&z|} (-1)^{z.phi} |phi^x>.
Complex diag_value(const PauliWord& w, const BitVec& phi) {
  return FourthRootPhase(static_cast<int>(w.y_count() & 3) + 2 * static_cast<int>(and_popcount(w.z(), phi) & 1))
      .value();
}

// Sum over the contiguous block of terms whose x equals t.x().
double gradient_in_group(SparsePauliOp::const_iterator first, SparsePauliOp::const_iterator last,
                         const PauliWord& t, const BitVec& phi) {
  Complex acc = 0.0;
  for (auto it = first; it != last; ++it) {
    const auto& [w, c] = *it;
    if (commutes(w, t)) continue;
    auto [phase, d] = word_multiply(w, t);  // d is diagonal
    acc += 2.0 * c * phase.value() * diag_value(d, phi);
  }
  return (Complex(0, -0.5) * acc).real();
}

SparsePauliOp::const_iterator group_begin(const SparsePauliOp& h, const BitVec& x) {
  return h.terms().lower_bound(PauliWord(x, BitVec(x.size())));
}

SparsePauliOp::const_iterator group_end(const SparsePauliOp& h, SparsePauliOp::const_iterator it, const BitVec& x) {
  while (it != h.end() && it->first.x() == x) ++it;
  return it;
}

}  // namespace

double gradient(const SparsePauliOp& h, const PauliWord& t, const BitVec& phi) {
  check_same_qubits(h.num_qubits(), t.num_qubits(), "gradient");
  check_same_qubits(h.num_qubits(), phi.size(), "gradient");
  // Only words with the same flip vector as t connect phi to itself.
  const auto first = group_begin(h, t.x());
  return gradient_in_group(first, group_end(h, first, t.x()), t, phi);
}

PauliWord representative(const BitVec& flip_x) {
  const auto low = flip_x.lowest_set();
  if (!low) throw ContractError("representative: flip vector is zero");
  BitVec z(flip_x.size());
  z.set(*low);
  return PauliWord(flip_x, z);
}

std::vector<DisPartition> build_dis(const SparsePauliOp& h, const BitVec& phi, const DisOptions& options) {
  check_same_qubits(h.num_qubits(), phi.size(), "build_dis");
  if (!h.is_hermitian(1e-10)) throw ContractError("build_dis: operator is not Hermitian");

  struct Group {
    SparsePauliOp::const_iterator first, last;
  };
  std::vector<Group> groups;
  for (auto it = h.begin(); it != h.end();) {
    const auto& x = it->first.x();
    const auto last = group_end(h, it, x);
    if (x.any()) groups.push_back({it, last});
    it = last;
  }

  std::vector<DisPartition> parts(groups.size());
  parallel_for(groups.size(), [&](std::size_t k) {
    const BitVec& x = groups[k].first->first.x();
    auto& p = parts[k];
    p.flip_x = x;
    p.representative = representative(x);
    p.gradient_magnitude = std::abs(gradient_in_group(groups[k].first, groups[k].last, p.representative, phi));
    p.single_qubit = x.popcount() == 1;
  });

  std::erase_if(parts, [&](const DisPartition& p) {
    return p.gradient_magnitude <= options.gradient_cutoff || (options.exclude_single_qubit && p.single_qubit);
  });
  std::stable_sort(parts.begin(), parts.end(), [](const DisPartition& a, const DisPartition& b) {
    if (a.gradient_magnitude != b.gradient_magnitude) return a.gradient_magnitude > b.gradient_magnitude;
    return a.flip_x < b.flip_x;
  });
  return parts;
}

namespace {

// Advances a strictly increasing index combination over [0, n); false when done.
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

std::vector<PauliWord> expand_entanglers(const std::vector<DisPartition>& partitions, std::size_t m) {
  std::vector<PauliWord> out;
  for (const auto& p : partitions) {
    if (out.size() >= m) return out;
    out.push_back(p.representative);
  }
  for (const auto& p : partitions) {
    const auto& parent = p.representative;
    std::vector<std::size_t> xs;  // X positions of the parent
    for (auto q : parent.x().set_indices())
      if (!parent.z().get(q)) xs.push_back(q);
    for (std::size_t k = 2; k <= xs.size(); k += 2) {
      std::vector<std::size_t> pick(k);
      for (std::size_t i = 0; i < k; ++i) pick[i] = i;
      do {
        if (out.size() >= m) return out;
        BitVec z = parent.z();
        for (auto i : pick) z.set(xs[i]);
        out.emplace_back(parent.x(), z);
      } while (next_combination(pick, xs.size()));
    }
  }
  return out;
}

}  // namespace qccilc
