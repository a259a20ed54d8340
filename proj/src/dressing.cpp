#include "qccilc/dressing.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "qccilc/errors.hpp"
#include "qccilc/parallel.hpp"

namespace qccilc {

namespace {

constexpr Complex kI{0.0, 1.0};
// Fixed chunking keeps the floating-point merge order independent of the
// worker count.
constexpr std::size_t kChunks = 64;

using TermMap = SparsePauliOp::TermMap;

template <class PerTerm>
SparsePauliOp dress_terms(const SparsePauliOp& h, double prune, PerTerm per_term) {
  std::vector<std::pair<PauliWord, Complex>> terms(h.begin(), h.end());
  const std::size_t chunks = std::min(kChunks, std::max<std::size_t>(terms.size(), 1));
  std::vector<TermMap> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t lo = terms.size() * c / chunks;
    const std::size_t hi = terms.size() * (c + 1) / chunks;
    auto& out = partial[c];
    auto add = [&out](const PauliWord& w, Complex v) {
      if (v == 0.0) return;
      auto [it, inserted] = out.try_emplace(w, v);
      if (!inserted) it->second += v;
    };
    for (std::size_t k = lo; k < hi; ++k) per_term(terms[k].first, terms[k].second, add);
  });
  PauliAccumulator acc(h.num_qubits(), prune);
  for (const auto& part : partial)
    for (const auto& [w, v] : part) acc.add(w, v);
  return std::move(acc).finish();
}

Fraction reduced(std::int64_t num, std::int64_t den) {
  const auto g = std::gcd(num, den);
  return {num / g, den / g};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PauliWord random_word(std::size_t n, Rng& rng) {
  BitVec x(n), z(n);
  for (std::size_t q = 0; q < n; ++q) {
    x.set(q, rng.coin());
    z.set(q, rng.coin());
  }
  return PauliWord(std::move(x), std::move(z));
}

}  // namespace

SparsePauliOp dress_qcc(const SparsePauliOp& h, const PauliWord& t, double tau) {
  check_same_qubits(h.num_qubits(), t.num_qubits(), "dress_qcc");
  const double c = std::cos(tau);
  const double s = std::sin(tau);
  return dress_terms(h, h.prune_threshold(), [&](const PauliWord& p, Complex v, auto&& add) {
    if (commutes(p, t)) {
      add(p, v);
      return;
    }
    add(p, c * v);
    const auto [phase, pt] = word_multiply(p, t);
    add(pt, -kI * s * v * phase.value());
  });
}

SparsePauliOp dress_qcc_sequence(const SparsePauliOp& h, const std::vector<PauliWord>& ents,
                                 const std::vector<double>& taus) {
  if (ents.size() != taus.size()) throw ContractError("dress_qcc_sequence: one amplitude per entangler required");
  // The factor applied last sits next to h.
  SparsePauliOp out = h;
  for (std::size_t k = ents.size(); k-- > 0;) out = dress_qcc(out, ents[k], taus[k]);
  return out;
}

SparsePauliOp dress_ilc(const SparsePauliOp& h, const IlcAnsatz& a, DressDirection direction, double prune_threshold) {
  a.validate(1e-10);
  for (const auto& t : a.entanglers) check_same_qubits(h.num_qubits(), t.num_qubits(), "dress_ilc");
  const double prune = prune_threshold >= 0.0 ? prune_threshold : h.prune_threshold();
  if (a.entanglers.empty()) return h.with_prune_threshold(prune);
  const double c = std::cos(a.tau);
  const double s = std::sin(a.tau);
  // U^H h U = c^2 h - i s c [h, A] + s^2 A h A, with A the generator; the
  // forward direction flips the commutator sign.
  const Complex comm = (direction == DressDirection::kInverse ? -kI : kI) * s * c;
  const double s2 = s * s;
  const auto& ts = a.entanglers;
  const auto& al = a.alphas;
  const std::size_t n = ts.size();

  return dress_terms(h, prune, [&](const PauliWord& p, Complex v, auto&& add) {
    std::vector<char> anti(n);
    double diag = c * c;
    for (std::size_t i = 0; i < n; ++i) {
      anti[i] = !commutes(p, ts[i]);
      // T P T = -P when they anticommute.
      diag += s2 * al[i] * al[i] * (anti[i] ? -1.0 : 1.0);
    }
    add(p, diag * v);
    for (std::size_t i = 0; i < n; ++i) {
      if (!anti[i]) continue;
      const auto [phase, pt] = word_multiply(p, ts[i]);
      add(pt, 2.0 * comm * al[i] * v * phase.value());
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto [pi, tip] = word_multiply(ts[i], p);
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto [pj, tjp] = word_multiply(ts[j], p);
        const auto [pij, w] = word_multiply(tip, ts[j]);
        const auto [pji, w2] = word_multiply(tjp, ts[i]);
        // Both orderings land on the same word; they either double or cancel.
        const Complex sum = (pi * pij).value() + (pj * pji).value();
        if (sum == 0.0) continue;
        add(w, s2 * al[i] * al[j] * v * sum);
      }
    }
  });
}

Fraction growth_worst(std::int64_t n) {
  if (n < 0) throw ContractError("growth_worst: N must be non-negative");
  return reduced(n * n + n + 2, 2);
}

Fraction growth_avg(std::int64_t n) {
  if (n < 0) throw ContractError("growth_avg: N must be non-negative");
  return reduced(n * n + n + 4, 4);
}

std::vector<QccTransform> random_qcc_transform(std::size_t n_qubits, std::size_t n, Rng& rng) {
  if (n_qubits == 0) throw ContractError("random_qcc_transform: zero qubits");
  std::vector<QccTransform> out;
  out.reserve(n);
  while (out.size() < n) {
    auto w = random_word(n_qubits, rng);
    if (y_parity(w) != 1) continue;
    out.push_back({std::move(w), rng.uniform(0.0, 2.0 * std::numbers::pi)});
  }
  return out;
}

IlcAnsatz random_ilc_transform(std::size_t n_qubits, std::size_t n, Rng& rng) {
  if (n_qubits == 0 || n == 0) throw ContractError("random_ilc_transform: need at least one qubit and one entangler");
  if (n > 2 * n_qubits - 1) throw ContractError("random_ilc_transform: N exceeds 2 n_q - 1");
  if (n_qubits < 64 && n > (std::uint64_t{1} << n_qubits) - 1) {
    throw ContractError("random_ilc_transform: more entanglers than nonzero flip vectors");
  }
  for (int attempt = 0; attempt < 100; ++attempt) {
    AnticomRequest req;
    req.n_qubits = n_qubits;
    std::set<BitVec> seen;
    while (req.x_vectors.size() < n) {
      BitVec x(n_qubits);
      for (std::size_t q = 0; q < n_qubits; ++q) x.set(q, rng.coin());
      if (!x.any() || !seen.insert(x).second) continue;
      req.x_vectors.push_back(std::move(x));
    }
    auto words = solve_anticommuting(req);
    if (!words) continue;
    IlcAnsatz a;
    a.entanglers = std::move(*words);
    a.tau = rng.uniform(0.0, 2.0 * std::numbers::pi);
    a.alphas.resize(n);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : a.alphas) {
        v = rng.normal();
        norm += v * v;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto& v : a.alphas) v /= norm;
    return a;
  }
  throw InfeasibleError("random_ilc_transform: no anticommuting set after 100 draws");
}

PauliWord sample_partition_word(const BitVec& flip_x, Rng& rng) {
  if (!flip_x.any()) throw ContractError("sample_partition_word: zero flip vector");
  const auto n = flip_x.size();
  while (true) {
    BitVec z(n);
    for (std::size_t q = 0; q < n; ++q) z.set(q, rng.coin());
    PauliWord w(flip_x, z);
    if (y_parity(w) == 1) return w;
  }
}

SparsePauliOp random_hamiltonian(std::size_t n_qubits, std::size_t m, Rng& rng) {
  if (n_qubits == 0) throw ContractError("random_hamiltonian: zero qubits");
  if (n_qubits < 32 && m > (std::uint64_t{1} << (2 * n_qubits))) {
    throw ContractError("random_hamiltonian: more terms than Pauli words");
  }
  std::set<PauliWord> seen;
  std::vector<std::pair<PauliWord, Complex>> terms;
  while (terms.size() < m) {
    auto w = random_word(n_qubits, rng);
    if (!seen.insert(w).second) continue;
    terms.emplace_back(std::move(w), rng.uniform(-1.0, 1.0));
  }
  return SparsePauliOp(n_qubits, terms, 0.0);
}

void PipelineConfig::validate() const {
  if (d < 0) throw ContractError("PipelineConfig: d must be non-negative");
  if (n < 1) throw ContractError("PipelineConfig: N must be at least 1");
  if (!(energy_threshold > 0.0) || !(gradient_threshold > 0.0)) {
    throw ContractError("PipelineConfig: thresholds must be positive");
  }
  if (!(prune_threshold >= 0.0)) throw ContractError("PipelineConfig: prune threshold must be non-negative");
}

namespace {

IlcOptions ilc_options(const PipelineConfig& cfg) {
  IlcOptions o;
  o.relax_qmf = cfg.relax_qmf;
  o.qmf.seed = cfg.seed;
  return o;
}

DressingReport make_report(std::size_t in, std::size_t out, std::size_t n, double seconds) {
  DressingReport r;
  r.input_terms = in;
  r.output_terms = out;
  r.growth_factor = in == 0 ? 0.0 : static_cast<double>(out) / static_cast<double>(in);
  r.predicted_avg = growth_avg(static_cast<std::int64_t>(n)).value();
  r.predicted_worst = growth_worst(static_cast<std::int64_t>(n)).value();
  r.wall_time = seconds;
  return r;
}

}  // namespace

PipelineResult run_pipeline(const SparsePauliOp& h, const QmfState& ref, const PipelineConfig& cfg) {
  cfg.validate();
  check_same_qubits(h.num_qubits(), ref.num_qubits(), "run_pipeline");
  PipelineResult out;
  out.hamiltonians.push_back(h.with_prune_threshold(cfg.prune_threshold));
  out.reference = ref;
  out.energies.push_back(qmf_expectation(h, ref));
  out.stop_reason = "completed " + std::to_string(cfg.d) + " dressings";
  const std::size_t max_n = 2 * h.num_qubits() - 1;

  for (int step = 0; step < cfg.d; ++step) {
    const auto& cur = out.hamiltonians.back();
    const auto phi = nearest_basis_state(out.reference);
    const auto dis = build_dis(cur, phi, {1e-12, cfg.exclude_single_qubit});
    if (dis.empty()) {
      out.stop_reason = "empty DIS";
      break;
    }
    if (dis.front().gradient_magnitude < cfg.gradient_threshold) {
      out.stop_reason = "DIS gradient below threshold";
      break;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t want = std::min({cfg.n, dis.size(), max_n});
    auto anti = find_anticommuting_set(dis, want, cfg.anticom);

    PipelineStep st;
    st.partitions = anti.partitions;
    st.ilc = optimize_ilc(cur, out.reference, anti.words, ilc_options(cfg));
    auto dressed = dress_ilc(cur, st.ilc.ansatz, DressDirection::kInverse, cfg.prune_threshold);
    st.report = make_report(cur.size(), dressed.size(), anti.words.size(), seconds_since(t0));
    out.predicted_avg_growth *= st.report.predicted_avg;

    const double previous = out.energies.back();
    out.energies.push_back(st.ilc.energy);
    out.reference = st.ilc.reference;
    out.hamiltonians.push_back(std::move(dressed));
    out.steps.push_back(std::move(st));
    if (previous - out.energies.back() < cfg.energy_threshold) {
      out.stop_reason = "energy change below threshold";
      break;
    }
  }
  return out;
}

std::vector<PauliWord> select_qcc_entanglers(const SparsePauliOp& h, const BitVec& phi, std::size_t m,
                                             bool exclude_single_qubit) {
  if (m == 0) return {};
  const auto dis = build_dis(h, phi, {1e-12, exclude_single_qubit});
  // Rank order puts the largest gradient first, and taus[0] acts first on
  // the reference.
  return expand_entanglers(dis, m);
}

WorkflowResult run_workflow(const SparsePauliOp& h, const QmfState& ref, const PipelineConfig& cfg,
                            const QccOptions& qcc) {
  WorkflowResult out;
  out.pipeline = run_pipeline(h, ref, cfg);
  const auto& last = out.pipeline.hamiltonians.back();
  out.qcc_entanglers = select_qcc_entanglers(last, nearest_basis_state(out.pipeline.reference), cfg.m,
                                             cfg.exclude_single_qubit);
  out.qcc = optimize_qcc(last, out.pipeline.reference, out.qcc_entanglers, qcc);
  out.final_energy = out.qcc.energy;
  return out;
}

ScanResult freeze_ansatz_scan(const std::vector<SparsePauliOp>& h_list, const std::vector<QmfState>& refs,
                              const PipelineConfig& cfg, std::size_t select_index, const QccOptions& qcc) {
  if (h_list.empty()) throw ContractError("freeze_ansatz_scan: no Hamiltonians");
  if (refs.size() != h_list.size()) throw ContractError("freeze_ansatz_scan: one reference per Hamiltonian required");
  if (select_index >= h_list.size()) throw ContractError("freeze_ansatz_scan: select index out of range");
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    check_same_qubits(h_list[select_index].num_qubits(), h_list[i].num_qubits(), "freeze_ansatz_scan");
  }

  ScanResult out;
  const auto selected = run_workflow(h_list[select_index], refs[select_index], cfg, qcc);
  for (const auto& st : selected.pipeline.steps) out.ilc_entanglers.push_back(st.ilc.ansatz.entanglers);
  out.qcc_entanglers = selected.qcc_entanglers;

  const auto opts = ilc_options(cfg);
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    ScanPoint pt;
    auto cur = h_list[i].with_prune_threshold(cfg.prune_threshold);
    QmfState ref = refs[i];
    pt.reference_energy = qmf_expectation(cur, ref);
    pt.energies.push_back(pt.reference_energy);
    for (const auto& ents : out.ilc_entanglers) {
      const auto r = optimize_ilc(cur, ref, ents, opts);
      cur = dress_ilc(cur, r.ansatz, DressDirection::kInverse, cfg.prune_threshold);
      ref = r.reference;
      pt.energies.push_back(r.energy);
    }
    pt.ilc_energy = pt.energies.back();
    pt.final_energy = optimize_qcc(cur, ref, out.qcc_entanglers, qcc).energy;
    pt.terms = cur.size();
    out.points.push_back(std::move(pt));
  }
  return out;
}

}  // namespace qccilc
