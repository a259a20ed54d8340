#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qccilc/anticom.hpp"
#include "qccilc/dis.hpp"
#include "qccilc/ilc.hpp"
#include "qccilc/mean_field.hpp"
#include "qccilc/pauli.hpp"
#include "qccilc/random.hpp"
#include "qccilc/sim.hpp"

namespace qccilc {

/// exp(i tau t/2) h exp(-i tau t/2)
///   = h + sin(tau) (-i/2)[h, t] + (1 - cos tau)/2 (t h t - h).
SparsePauliOp dress_qcc(const SparsePauliOp& h, const PauliWord& t, double tau);

/// U^H h U for U = prod_k exp(-i taus[k] ents[k] / 2) with taus[0] applied
/// first, so <ref|result|ref> equals qcc_energy(h, ref, ents, taus).
SparsePauliOp dress_qcc_sequence(const SparsePauliOp& h, const std::vector<PauliWord>& ents,
                                 const std::vector<double>& taus);

enum class DressDirection {
  kForward,  // U h U^H
  kInverse,  // U^H h U, so that <ref|result|ref> is the ILC energy
};

/// Exact ILC similarity transform. Pair terms t_i h t_j + t_j h t_i are
/// summed before they reach the output, so cancelling pairs never appear.
/// The result is pruned with h's threshold unless `prune_threshold` >= 0.
SparsePauliOp dress_ilc(const SparsePauliOp& h, const IlcAnsatz& a, DressDirection direction = DressDirection::kInverse,
                        double prune_threshold = -1.0);

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// (N^2 + N + 2)/2.
Fraction growth_worst(std::int64_t n);
/// (N^2 + N + 4)/4.
Fraction growth_avg(std::int64_t n);

struct DressingReport {
  std::size_t input_terms = 0;
  std::size_t output_terms = 0;
  double growth_factor = 0.0;
  double predicted_avg = 0.0;
  double predicted_worst = 0.0;
  double wall_time = 0.0;  // seconds
};

struct QccTransform {
  PauliWord word;
  double tau = 0.0;
};

/// N uniformly drawn odd-Y words with angles uniform in [0, 2 pi).
std::vector<QccTransform> random_qcc_transform(std::size_t n_qubits, std::size_t n, Rng& rng);
/// N distinct nonzero flip vectors completed to an anticommuting set, tau
/// uniform in [0, 2 pi), alphas uniform on the unit sphere. Infeasible draws
/// are redrawn up to 100 times, then InfeasibleError.
IlcAnsatz random_ilc_transform(std::size_t n_qubits, std::size_t n, Rng& rng);

/// Uniform draw from the DIS partition of `flip_x`: X or Y on the flipped
/// qubits with an odd number of Y, I or Z elsewhere.
PauliWord sample_partition_word(const BitVec& flip_x, Rng& rng);

/// Real coefficients uniform in [-1, 1] on m distinct uniformly drawn words.
SparsePauliOp random_hamiltonian(std::size_t n_qubits, std::size_t m, Rng& rng);

struct PipelineConfig {
  int d = 1;
  std::size_t n = 4;
  std::size_t m = 0;
  bool relax_qmf = false;
  double energy_threshold = 1e-6;
  double gradient_threshold = 1e-6;
  double prune_threshold = kDefaultPruneThreshold;
  std::uint64_t seed = 0;
  bool exclude_single_qubit = false;
  AnticomOptions anticom;

  void validate() const;
};

struct PipelineStep {
  std::vector<std::size_t> partitions;  // DIS ranks used
  IlcResult ilc;
  DressingReport report;
};

struct PipelineResult {
  std::vector<SparsePauliOp> hamiltonians;  // input first, then one per dressing
  /// energies[0] is <ref|h|ref>; energies[k] is the ILC energy of step k.
  std::vector<double> energies;
  std::vector<PipelineStep> steps;
  QmfState reference;  // reference for the last Hamiltonian
  std::string stop_reason;
  /// Product of the predicted average growth factors, i.e. G_avg^d for fixed N.
  double predicted_avg_growth = 1.0;
};

/// Repeated DIS -> anticommuting set -> ILC optimization -> U^H h U.
/// Stops after cfg.d dressings, when the ILC energy improves by less than
/// energy_threshold, or when the DIS maximum falls below gradient_threshold.
/// The DIS is taken at the basis state nearest the current reference.
PipelineResult run_pipeline(const SparsePauliOp& h, const QmfState& ref, const PipelineConfig& cfg);

/// Pipeline followed by a QCC optimization with cfg.m entanglers from the
/// final Hamiltonian's DIS (ascending gradient, so the largest acts first on
/// the reference).
struct WorkflowResult {
  PipelineResult pipeline;
  std::vector<PauliWord> qcc_entanglers;  // in application order
  QccResult qcc;
  double final_energy = 0.0;
};

/// Entanglers in application order for a QCC ansatz of size m built from
/// the DIS of h at phi.
std::vector<PauliWord> select_qcc_entanglers(const SparsePauliOp& h, const BitVec& phi, std::size_t m,
                                             bool exclude_single_qubit = false);

WorkflowResult run_workflow(const SparsePauliOp& h, const QmfState& ref, const PipelineConfig& cfg,
                            const QccOptions& qcc = {});

struct ScanPoint {
  double reference_energy = 0.0;
  double ilc_energy = 0.0;  // after the last dressing
  double final_energy = 0.0;
  std::size_t terms = 0;
  std::vector<double> energies;
};

struct ScanResult {
  /// Entangler sets fixed at the selected point, one per dressing.
  std::vector<std::vector<PauliWord>> ilc_entanglers;
  std::vector<PauliWord> qcc_entanglers;
  std::vector<ScanPoint> points;
};

/// Entanglers are selected once, at h_list[select_index]; every point then
/// re-optimizes amplitudes and re-applies the dressings with them.
ScanResult freeze_ansatz_scan(const std::vector<SparsePauliOp>& h_list, const std::vector<QmfState>& refs,
                              const PipelineConfig& cfg, std::size_t select_index, const QccOptions& qcc = {});

}  // namespace qccilc
