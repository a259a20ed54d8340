#pragma once

#include <vector>

#include "qccilc/bits.hpp"
#include "qccilc/pauli.hpp"

namespace qccilc {

/// All odd-Y words sharing one flip vector have the same |gradient| at a
/// basis state; one representative stands for the whole partition.
struct DisPartition {
  BitVec flip_x;
  double gradient_magnitude = 0.0;
  PauliWord representative;
  bool single_qubit = false;
};

/// -(i/2) <phi|[h, t]|phi>, the derivative of <phi|e^{i tau t/2} h e^{-i tau t/2}|phi> at tau = 0.
double gradient(const SparsePauliOp& h, const PauliWord& t, const BitVec& phi);

/// Y on the lowest set bit of flip_x, X on the others.
PauliWord representative(const BitVec& flip_x);

struct DisOptions {
  double gradient_cutoff = 1e-12;
  bool exclude_single_qubit = false;
};

/// Partitions of the distinct nonzero x-vectors of h with |gradient| above
/// the cutoff, sorted by descending magnitude, ties by ascending flip_x.
std::vector<DisPartition> build_dis(const SparsePauliOp& h, const BitVec& phi, const DisOptions& options = {});

/// Partition representatives in rank order; when more than the partition
/// count are requested, variants that swap pairs of X for Y in each parent
/// follow (parents in rank order, then by number of swapped pairs, then
/// lexicographic positions).
std::vector<PauliWord> expand_entanglers(const std::vector<DisPartition>& partitions, std::size_t m);

}  // namespace qccilc
