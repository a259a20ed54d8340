// qccilc command-line driver. Every subcommand writes its primary output to
// --out (or stdout) and a manifest sidecar when an output path is known.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "qccilc/anticom.hpp"
#include "qccilc/dis.hpp"
#include "qccilc/dressing.hpp"
#include "qccilc/errors.hpp"
#include "qccilc/fermion.hpp"
#include "qccilc/ilc.hpp"
#include "qccilc/mean_field.hpp"
#include "qccilc/parallel.hpp"
#include "qccilc/pauli.hpp"
#include "qccilc/pauli_io.hpp"
#include "qccilc/random.hpp"
#include "qccilc/sim.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace qccilc;
using qccilc::cli::RunManifest;

namespace {

struct Global {
  std::string out;
  std::string manifest;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct Input {
  SparsePauliOp h;
  std::optional<BitVec> hint;
};

Input load_pauli(const std::string& path, double prune, RunManifest& m) {
  const auto text = read_text_file(path);
  m.add_input(path, text);
  return {parse_pauli_text(text, prune), find_reference_hint(text)};
}

// --reference, else the "# reference" line of the file, else all zeros.
BitVec resolve_reference(const std::string& bits, const Input& in) {
  const auto nq = in.h.num_qubits();
  BitVec ref = !bits.empty() ? BitVec::from_string(bits) : in.hint ? *in.hint : BitVec(nq);
  check_same_qubits(ref.size(), nq, "reference");
  return ref;
}

// Dense labels ("XIZY") when the string is exactly n Pauli letters, sparse
// labels ("X0 Z3") otherwise.
PauliWord parse_word(const std::string& label, std::size_t nq) {
  const bool dense = label.size() == nq && std::all_of(label.begin(), label.end(), [](char c) {
                       return c == 'I' || c == 'X' || c == 'Y' || c == 'Z';
                     });
  return dense ? PauliWord::from_dense(label) : PauliWord::parse(label, nq);
}

json words_json(const std::vector<PauliWord>& ws) {
  json a = json::array();
  for (const auto& w : ws) a.push_back(w.to_string());
  return a;
}

void echo_options(const CLI::App* sub, RunManifest& m) {
  auto& cfg = m.config();
  for (const CLI::Option* opt : sub->get_options()) {
    const auto& name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "version") continue;
    if (opt->count() > 0) {
      const auto& r = opt->results();
      cfg[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
}

class Emitter {
 public:
  Emitter(const Global& g, RunManifest& m) : g_(g), m_(m) {}

  void emit(const std::string& text) {
    if (g_.out.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream f(g_.out, std::ios::binary);
    if (!f) throw ContractError("cannot write " + g_.out);
    f << text;
    m_.add_output(g_.out);
  }

  void finish() const {
    if (!g_.out.empty() || !g_.manifest.empty()) m_.write(g_.manifest);
  }

 private:
  const Global& g_;
  RunManifest& m_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Ground state energy and vector when the register fits the exact solver.
std::optional<GroundState> exact_ground(const SparsePauliOp& h, std::size_t max_qubits, std::uint64_t seed) {
  if (h.num_qubits() > max_qubits) return std::nullopt;
  GroundStateOptions o;
  o.seed = seed;
  return ground_state(h, o);
}

// U v with U = cos(tau) - i sin(tau) A.
Statevector apply_ilc(const IlcAnsatz& a, const Statevector& v) {
  const auto av = apply_operator(a.generator(), v);
  std::vector<Complex> amps(v.dim());
  const double c = std::cos(a.tau), s = std::sin(a.tau);
  for (std::size_t i = 0; i < v.dim(); ++i) amps[i] = c * v[i] - Complex(0.0, s) * av[i];
  return Statevector::from_amplitudes(v.num_qubits(), std::move(amps));
}

// ---------------------------------------------------------------- map

struct MapArgs {
  std::string fcidump;
  std::string mapping = "jw";
  std::string ordering = "blocked";
  double spin_penalty = 0.0;
  double prune = kDefaultPruneThreshold;
};

int run_map(const MapArgs& a, Emitter& e, RunManifest& m) {
  const auto text = read_text_file(a.fcidump);
  m.add_input(a.fcidump, text);
  const auto fi = parse_fcidump(text);
  MappingOptions o;
  o.mapping = parse_mapping(a.mapping);
  o.ordering = parse_ordering(a.ordering);
  o.spin_penalty = a.spin_penalty;
  o.prune_threshold = a.prune;
  const auto mapped = map_hamiltonian(fi, o);
  m.add_note("n_qubits", mapped.n_qubits);
  m.add_note("terms", mapped.hamiltonian.size());
  m.add_note("hartree_fock_energy", hartree_fock_energy(fi));
  e.emit(to_pauli_text(mapped.hamiltonian, mapped.reference));
  return 0;
}

// ---------------------------------------------------------------- qmf-opt

struct QmfArgs {
  std::string pauli;
  std::string reference;
  int restarts = 4;
  double prune = kDefaultPruneThreshold;
};

int run_qmf(const QmfArgs& a, const Global& g, Emitter& e, RunManifest& m) {
  const auto in = load_pauli(a.pauli, a.prune, m);
  const auto ref = resolve_reference(a.reference, in);
  QmfOptions o;
  o.random_restarts = a.restarts;
  o.seed = g.seed;
  const auto r = optimize_qmf(in.h, QmfState::from_bits(ref), o);
  json j;
  j["n_qubits"] = in.h.num_qubits();
  j["reference"] = ref.to_string();
  j["reference_energy"] = basis_expectation(in.h, ref);
  j["energy"] = r.energy;
  j["converged"] = r.converged;
  j["best_start"] = r.best_start;
  j["angles"] = {{"thetas", r.state.thetas}, {"phis", r.state.phis}};
  j["nearest_basis"] = nearest_basis_state(r.state).to_string();
  e.emit(dump(j));
  return 0;
}

// ---------------------------------------------------------------- dis

struct DisArgs {
  std::string pauli;
  std::string reference;
  std::size_t top = 0;
  bool exclude_single = false;
  double cutoff = 1e-12;
  double prune = kDefaultPruneThreshold;
};

int run_dis(const DisArgs& a, Emitter& e, RunManifest& m) {
  const auto in = load_pauli(a.pauli, a.prune, m);
  const auto ref = resolve_reference(a.reference, in);
  DisOptions o;
  o.gradient_cutoff = a.cutoff;
  o.exclude_single_qubit = a.exclude_single;
  auto dis = build_dis(in.h, ref, o);
  m.add_note("partitions", dis.size());
  if (a.top > 0 && dis.size() > a.top) dis.resize(a.top);
  std::ostringstream out;
  out << "rank,flip_x,flip_indices,gradient,representative,single_qubit\n";
  for (std::size_t k = 0; k < dis.size(); ++k) {
    const auto& p = dis[k];
    std::string idx;
    for (std::size_t i = 0; i < p.flip_x.size(); ++i) {
      if (!p.flip_x.get(i)) continue;
      if (!idx.empty()) idx += ' ';
      idx += std::to_string(i);
    }
    out << k << ',' << p.flip_x.to_string() << ',' << idx << ',' << format_real(p.gradient_magnitude) << ','
        << p.representative.to_string() << ',' << (p.single_qubit ? 1 : 0) << '\n';
  }
  e.emit(out.str());
  return 0;
}

// ---------------------------------------------------------------- anticom

struct AnticomArgs {
  std::vector<std::string> flips;
  std::string hamiltonian;
  std::string reference;
  std::size_t n = 0;
  bool exhaustive = false;
  std::uint64_t budget = 100000;
  bool exclude_single = false;
  bool dense = false;
  double prune = kDefaultPruneThreshold;
};

int run_anticom(const AnticomArgs& a, Emitter& e, RunManifest& m) {
  std::vector<PauliWord> words;
  if (!a.hamiltonian.empty()) {
    if (!a.flips.empty()) throw ContractError("give flip vectors or --hamiltonian, not both");
    if (a.n == 0) throw ContractError("--hamiltonian needs -N");
    const auto in = load_pauli(a.hamiltonian, a.prune, m);
    const auto ref = resolve_reference(a.reference, in);
    DisOptions dopt;
    dopt.exclude_single_qubit = a.exclude_single;
    const auto dis = build_dis(in.h, ref, dopt);
    AnticomOptions o;
    o.exhaustive = a.exhaustive;
    o.exhaustive_budget = a.budget;
    const auto r = find_anticommuting_set(dis, a.n, o);
    if (r.words.empty()) throw InfeasibleError("no anticommuting set found in the DIS");
    if (r.reduced())
      std::cerr << "note: reduced to N=" << r.words.size() << " of " << r.requested << " requested\n";
    json parts = json::array();
    for (auto p : r.partitions) parts.push_back(p);
    m.add_note("partitions", parts);
    m.add_note("solves", r.solves);
    words = r.words;
  } else {
    if (a.flips.empty()) throw ContractError("no flip vectors given");
    AnticomRequest req;
    for (const auto& s : a.flips) req.x_vectors.push_back(BitVec::from_string(s));
    req.n_qubits = req.x_vectors.front().size();
    auto r = solve_anticommuting(req);
    if (!r) throw InfeasibleError("flip vectors admit no anticommuting completion");
    words = std::move(*r);
  }
  std::ostringstream out;
  for (const auto& w : words) out << (a.dense ? w.to_dense() : w.to_string()) << '\n';
  e.emit(out.str());
  return 0;
}

// ---------------------------------------------------------------- ilc-opt

struct IlcArgs {
  std::string pauli;
  std::string reference;
  std::vector<std::string> entanglers;
  std::size_t n = 0;
  bool relax_qmf = false;
  bool exhaustive = false;
  bool exclude_single = false;
  int max_outer = 50;
  double prune = kDefaultPruneThreshold;
};

json ansatz_json(const IlcAnsatz& a) {
  json j;
  j["tau"] = a.tau;
  j["alphas"] = a.alphas;
  j["entanglers"] = words_json(a.entanglers);
  return j;
}

IlcAnsatz ansatz_from_json(const json& j, std::size_t nq) {
  IlcAnsatz a;
  a.tau = j.at("tau").get<double>();
  a.alphas = j.at("alphas").get<std::vector<double>>();
  for (const auto& w : j.at("entanglers")) a.entanglers.push_back(parse_word(w.get<std::string>(), nq));
  return a;
}

int run_ilc(const IlcArgs& a, Emitter& e, RunManifest& m) {
  const auto in = load_pauli(a.pauli, a.prune, m);
  const auto nq = in.h.num_qubits();
  const auto ref = resolve_reference(a.reference, in);
  std::vector<PauliWord> ents;
  json parts = json::array();
  if (!a.entanglers.empty()) {
    for (const auto& s : a.entanglers) ents.push_back(parse_word(s, nq));
  } else {
    if (a.n == 0) throw ContractError("give --entangler words or -N");
    DisOptions dopt;
    dopt.exclude_single_qubit = a.exclude_single;
    AnticomOptions o;
    o.exhaustive = a.exhaustive;
    const auto r = find_anticommuting_set(build_dis(in.h, ref, dopt), a.n, o);
    if (r.words.empty()) throw InfeasibleError("no anticommuting set found in the DIS");
    ents = r.words;
    for (auto p : r.partitions) parts.push_back(p);
  }
  IlcOptions o;
  o.relax_qmf = a.relax_qmf;
  o.max_outer = a.max_outer;
  const auto r = optimize_ilc(in.h, ref, ents, o);
  json j;
  j["energy"] = r.energy;
  j["reference_energy"] = r.reference_energy;
  j.update(ansatz_json(r.ansatz));
  j["partitions"] = parts;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["real_restricted"] = r.real_restricted;
  j["reference_dominated"] = r.reference_dominated;
  j["history"] = r.history;
  if (a.relax_qmf) j["angles"] = {{"thetas", r.reference.thetas}, {"phis", r.reference.phis}};
  e.emit(dump(j));
  return 0;
}

// ---------------------------------------------------------------- dress

struct DressArgs {
  std::string pauli;
  std::string ansatz;
  std::vector<std::string> qcc;
  std::vector<double> taus;
  std::string direction = "inverse";
  double prune = kDefaultPruneThreshold;
};

int run_dress(const DressArgs& a, Emitter& e, RunManifest& m) {
  const auto in = load_pauli(a.pauli, a.prune, m);
  const auto nq = in.h.num_qubits();
  SparsePauliOp out(nq);
  if (!a.ansatz.empty()) {
    if (!a.qcc.empty()) throw ContractError("give --ansatz or --qcc, not both");
    const auto text = read_text_file(a.ansatz);
    m.add_input(a.ansatz, text);
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& ex) {
      throw ParseError(0, a.ansatz + ": " + ex.what());
    }
    DressDirection dir;
    if (a.direction == "inverse") dir = DressDirection::kInverse;
    else if (a.direction == "forward") dir = DressDirection::kForward;
    else throw ContractError("--direction must be forward or inverse");
    out = dress_ilc(in.h, ansatz_from_json(j, nq), dir);
  } else {
    if (a.qcc.empty()) throw ContractError("give --ansatz or at least one --qcc word");
    if (a.qcc.size() != a.taus.size()) throw ContractError("--qcc and --tau counts differ");
    std::vector<PauliWord> ents;
    for (const auto& s : a.qcc) ents.push_back(parse_word(s, nq));
    out = dress_qcc_sequence(in.h, ents, a.taus);
  }
  m.add_note("input_terms", in.h.size());
  m.add_note("output_terms", out.size());
  e.emit(to_pauli_text(out, in.hint));
  return 0;
}

// ---------------------------------------------------------------- pipeline

struct PipelineArgs {
  std::string pauli;
  std::string reference;
  int d = 1;
  std::size_t n = 4;
  std::size_t m = 0;
  bool relax_qmf = false;
  double energy_threshold = 1e-6;
  double gradient_threshold = 1e-6;
  bool exclude_single = false;
  bool exhaustive = false;
  int restarts = 1;
  std::size_t exact_max = 12;
  std::string out_dir;
  double prune = kDefaultPruneThreshold;
};

PipelineConfig pipeline_config(const PipelineArgs& a, std::uint64_t seed) {
  PipelineConfig c;
  c.d = a.d;
  c.n = a.n;
  c.m = a.m;
  c.relax_qmf = a.relax_qmf;
  c.energy_threshold = a.energy_threshold;
  c.gradient_threshold = a.gradient_threshold;
  c.prune_threshold = a.prune;
  c.seed = seed;
  c.exclude_single_qubit = a.exclude_single;
  c.anticom.exhaustive = a.exhaustive;
  c.validate();
  return c;
}

int run_pipeline_cmd(const PipelineArgs& a, const Global& g, Emitter& e, RunManifest& m) {
  const auto in = load_pauli(a.pauli, a.prune, m);
  const auto ref = resolve_reference(a.reference, in);
  const auto cfg = pipeline_config(a, g.seed);
  QccOptions qo;
  qo.restarts = a.restarts;
  qo.seed = g.seed;
  const auto w = run_workflow(in.h, QmfState::from_bits(ref), cfg, qo);
  m.phase("workflow");
  const auto& p = w.pipeline;

  json j;
  j["n_qubits"] = in.h.num_qubits();
  j["reference"] = ref.to_string();
  j["d"] = a.d;
  j["N"] = a.n;
  j["M"] = a.m;
  j["input_terms"] = in.h.size();
  j["reference_energy"] = p.energies.front();
  j["energies"] = p.energies;
  bool monotone = true;
  for (std::size_t k = 1; k < p.energies.size(); ++k) monotone = monotone && p.energies[k] <= p.energies[k - 1] + 1e-12;
  j["energies_non_increasing"] = monotone;
  j["stop_reason"] = p.stop_reason;

  json steps = json::array();
  double predicted = static_cast<double>(in.h.size());
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    const auto& s = p.steps[k];
    predicted *= growth_avg(static_cast<std::int64_t>(s.ilc.ansatz.size())).value();
    json sj;
    sj["step"] = k + 1;
    json parts = json::array();
    for (auto q : s.partitions) parts.push_back(q);
    sj["partitions"] = parts;
    sj["entanglers"] = words_json(s.ilc.ansatz.entanglers);
    sj["tau"] = s.ilc.ansatz.tau;
    sj["alphas"] = s.ilc.ansatz.alphas;
    sj["energy"] = s.ilc.energy;
    sj["iterations"] = s.ilc.iterations;
    sj["input_terms"] = s.report.input_terms;
    sj["terms"] = s.report.output_terms;
    sj["growth_factor"] = s.report.growth_factor;
    sj["predicted_avg"] = s.report.predicted_avg;
    sj["predicted_worst"] = s.report.predicted_worst;
    sj["predicted_terms"] = predicted;
    steps.push_back(sj);
  }
  j["steps"] = steps;
  j["final_terms"] = p.hamiltonians.back().size();
  j["predicted_avg_growth"] = p.predicted_avg_growth;
  j["predicted_terms"] = static_cast<double>(in.h.size()) * p.predicted_avg_growth;
  j["qcc"] = {{"entanglers", words_json(w.qcc_entanglers)},
              {"taus", w.qcc.taus},
              {"energy", w.qcc.energy},
              {"angles", {{"thetas", w.qcc.state.thetas}, {"phis", w.qcc.state.phis}}}};
  j["final_energy"] = w.final_energy;

  if (auto gs = exact_ground(in.h, a.exact_max, g.seed)) {
    // Final state in the frame of the input Hamiltonian: U_1 ... U_d |qcc>.
    auto psi = qcc_state(w.qcc.state, w.qcc_entanglers, w.qcc.taus);
    for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) psi = apply_ilc(it->ilc.ansatz, psi);
    j["exact_energy"] = gs->energy;
    j["overlap_with_fci"] = std::norm(overlap(gs->state, psi));
    j["variational"] = w.final_energy >= gs->energy - 1e-9;
    m.phase("exact");
  }

  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    const auto ref_bits = nearest_basis_state(p.reference);
    for (std::size_t k = 1; k < p.hamiltonians.size(); ++k) {
      const auto path = fs::path(a.out_dir) / ("step_" + std::to_string(k) + ".pauli");
      write_pauli_file(path, p.hamiltonians[k], ref_bits);
      m.add_output(path);
    }
  }
  e.emit(dump(j));
  return 0;
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
  std::vector<std::string> files;
  std::string reference;
  std::size_t select = 0;
  PipelineArgs pipe;
};

std::string csv_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

int run_scan(const ScanArgs& a, const Global& g, Emitter& e, RunManifest& m) {
  std::vector<SparsePauliOp> hs;
  std::vector<QmfState> refs;
  for (const auto& f : a.files) {
    const auto in = load_pauli(f, a.pipe.prune, m);
    refs.push_back(QmfState::from_bits(resolve_reference(a.reference, in)));
    hs.push_back(in.h);
  }
  if (a.select >= hs.size()) throw ContractError("--select out of range");
  const auto cfg = pipeline_config(a.pipe, g.seed);
  QccOptions qo;
  qo.restarts = a.pipe.restarts;
  qo.seed = g.seed;
  const auto r = freeze_ansatz_scan(hs, refs, cfg, a.select, qo);
  m.phase("scan");

  std::vector<std::optional<double>> exact(hs.size());
  parallel_for(hs.size(), [&](std::size_t i) {
    if (auto gs = exact_ground(hs[i], a.pipe.exact_max, g.seed)) exact[i] = gs->energy;
  });
  m.phase("exact");

  json ents = json::array();
  for (const auto& set : r.ilc_entanglers) ents.push_back(words_json(set));
  m.add_note("ilc_entanglers", ents);
  m.add_note("qcc_entanglers", words_json(r.qcc_entanglers));
  m.add_note("files", a.files);
  std::cerr << "entangler sets fixed at point " << a.select << ":";
  for (const auto& set : r.ilc_entanglers) std::cerr << " [" << set.size() << " ILC]";
  std::cerr << " [" << r.qcc_entanglers.size() << " QCC]\n";

  std::ostringstream out;
  out << "point,E_ref,E_ilc,E_final,E_exact,terms\n";
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const auto& pt = r.points[i];
    out << i << ',' << format_real(pt.reference_energy) << ',' << format_real(pt.ilc_energy) << ','
        << format_real(pt.final_energy) << ',' << csv_real(exact[i]) << ',' << pt.terms << '\n';
  }
  e.emit(out.str());
  return 0;
}

// ---------------------------------------------------------------- vqe

struct VqeArgs {
  std::string pauli;
  std::string reference;
  std::vector<std::string> entanglers;
  std::size_t m = 0;
  bool exclude_single = false;
  bool fixed_angles = false;
  int restarts = 1;
  std::size_t exact_max = 12;
  double prune = kDefaultPruneThreshold;
};

int run_vqe(const VqeArgs& a, const Global& g, Emitter& e, RunManifest& m) {
  const auto in = load_pauli(a.pauli, a.prune, m);
  const auto nq = in.h.num_qubits();
  const auto ref = resolve_reference(a.reference, in);
  std::vector<PauliWord> ents;
  if (!a.entanglers.empty()) {
    for (const auto& s : a.entanglers) ents.push_back(parse_word(s, nq));
  } else {
    ents = select_qcc_entanglers(in.h, ref, a.m, a.exclude_single);
  }
  QccOptions o;
  o.optimize_angles = !a.fixed_angles;
  o.restarts = a.restarts;
  o.seed = g.seed;
  const auto r = optimize_qcc(in.h, QmfState::from_bits(ref), ents, o);
  json j;
  j["n_qubits"] = nq;
  j["reference"] = ref.to_string();
  j["reference_energy"] = basis_expectation(in.h, ref);
  j["energy"] = r.energy;
  j["converged"] = r.converged;
  j["entanglers"] = words_json(ents);
  j["taus"] = r.taus;
  j["angles"] = {{"thetas", r.state.thetas}, {"phis", r.state.phis}};
  if (auto gs = exact_ground(in.h, a.exact_max, g.seed)) {
    j["exact_energy"] = gs->energy;
    j["overlap_with_fci"] = std::norm(overlap(gs->state, qcc_state(r.state, ents, r.taus)));
  }
  e.emit(dump(j));
  return 0;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  std::string pauli;
  std::string reference;
  std::size_t count = 1;
  double prune = kDefaultPruneThreshold;
};

int run_spectrum(const SpectrumArgs& a, const Global& g, Emitter& e, RunManifest& m) {
  const auto in = load_pauli(a.pauli, a.prune, m);
  const auto nq = in.h.num_qubits();
  const auto ref = resolve_reference(a.reference, in);
  GroundStateOptions o;
  o.seed = g.seed;
  const auto gs = ground_state(in.h, o);
  json j;
  j["n_qubits"] = nq;
  j["terms"] = in.h.size();
  j["energy"] = gs.energy;
  j["method"] = gs.method;
  j["residual"] = gs.residual;
  if (nq <= kDenseCap && a.count > 1) {
    const auto ev = spectrum(in.h);
    std::vector<double> low(ev.data(), ev.data() + std::min<std::size_t>(a.count, ev.size()));
    j["eigenvalues"] = low;
  }
  j["reference"] = ref.to_string();
  j["reference_energy"] = basis_expectation(in.h, ref);
  j["overlap_with_fci"] = std::norm(overlap(gs.state, Statevector::basis(ref)));
  e.emit(dump(j));
  return 0;
}

// ---------------------------------------------------------------- bench-growth

struct GrowthArgs {
  std::size_t qubits = 12;
  std::size_t terms = 247;
  std::vector<std::size_t> ns{4, 8, 10};
  std::size_t trials = 10;
  std::string kind = "ilc";
  std::string hamiltonian;
  std::string summary;
  double prune = kDefaultPruneThreshold;
};

struct GrowthRow {
  std::string kind;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::size_t input_terms = 0;
  std::size_t terms = 0;
};

int run_bench_growth(const GrowthArgs& a, const Global& g, Emitter& e, RunManifest& m) {
  std::optional<SparsePauliOp> loaded;
  if (!a.hamiltonian.empty()) loaded = load_pauli(a.hamiltonian, a.prune, m).h;
  const auto nq = loaded ? loaded->num_qubits() : a.qubits;
  std::vector<std::string> kinds;
  if (a.kind == "ilc" || a.kind == "both") kinds.push_back("ilc");
  if (a.kind == "qcc" || a.kind == "both") kinds.push_back("qcc");
  if (kinds.empty()) throw ContractError("--kind must be ilc, qcc or both");
  if (a.trials == 0 || a.ns.empty()) throw ContractError("need at least one trial and one N");

  std::vector<GrowthRow> rows;
  for (const auto& k : kinds)
    for (auto n : a.ns)
      for (std::size_t t = 0; t < a.trials; ++t) rows.push_back({k, n, t, 0, 0});

  // Trial t always sees the same Hamiltonian; each (kind, N) gets its own stream.
  parallel_for(rows.size(), [&](std::size_t i) {
    auto& r = rows[i];
    const auto trial_seed = derive_seed(g.seed, r.trial);
    SparsePauliOp h(nq);
    if (loaded) {
      h = *loaded;
    } else {
      Rng hr(trial_seed);
      h = random_hamiltonian(nq, a.terms, hr);
    }
    Rng tr(derive_seed(trial_seed, 1 + (r.kind == "qcc" ? 1024 : 0) + r.n));
    r.input_terms = h.size();
    if (r.kind == "ilc") {
      r.terms = dress_ilc(h, random_ilc_transform(nq, r.n, tr)).size();
    } else {
      const auto tf = random_qcc_transform(nq, r.n, tr);
      std::vector<PauliWord> ws;
      std::vector<double> ts;
      for (const auto& q : tf) {
        ws.push_back(q.word);
        ts.push_back(q.tau);
      }
      r.terms = dress_qcc_sequence(h, ws, ts).size();
    }
  });
  m.phase("trials");

  auto predicted = [](std::size_t in, std::size_t n) {
    const auto ni = static_cast<std::int64_t>(n);
    return std::tuple{in * growth_avg(ni).value(), in * growth_worst(ni).value(), in * std::pow(1.5, double(n))};
  };

  std::ostringstream out;
  out << "kind,N,trial,input_terms,terms,predicted_avg,predicted_worst,predicted_qcc\n";
  for (const auto& r : rows) {
    const auto [pa, pw, pq] = predicted(r.input_terms, r.n);
    out << r.kind << ',' << r.n << ',' << r.trial << ',' << r.input_terms << ',' << r.terms << ','
        << format_real(pa) << ',' << format_real(pw) << ',' << format_real(pq) << '\n';
  }
  e.emit(out.str());

  if (!a.summary.empty()) {
    std::ostringstream s;
    s << "kind,N,trials,mean_input_terms,mean_terms,std_terms,predicted_avg,predicted_worst,predicted_qcc,"
         "mean_over_predicted_avg\n";
    for (std::size_t b = 0; b < rows.size(); b += a.trials) {
      double mi = 0.0, mt = 0.0, var = 0.0;
      for (std::size_t t = 0; t < a.trials; ++t) {
        mi += static_cast<double>(rows[b + t].input_terms);
        mt += static_cast<double>(rows[b + t].terms);
      }
      mi /= double(a.trials);
      mt /= double(a.trials);
      for (std::size_t t = 0; t < a.trials; ++t) var += std::pow(double(rows[b + t].terms) - mt, 2);
      const double sd = a.trials > 1 ? std::sqrt(var / double(a.trials - 1)) : 0.0;
      const auto n = rows[b].n;
      const auto ni = static_cast<std::int64_t>(n);
      const double pa = mi * growth_avg(ni).value();
      s << rows[b].kind << ',' << n << ',' << a.trials << ',' << format_real(mi) << ',' << format_real(mt) << ','
        << format_real(sd) << ',' << format_real(pa) << ',' << format_real(mi * growth_worst(ni).value()) << ','
        << format_real(mi * std::pow(1.5, double(n))) << ',' << format_real(mt / pa) << '\n';
    }
    std::ofstream f(a.summary, std::ios::binary);
    if (!f) throw ContractError("cannot write " + a.summary);
    f << s.str();
    m.add_output(a.summary);
  }
  return 0;
}

// ---------------------------------------------------------------- bench-qcc-sample

struct SampleArgs {
  std::string pauli;
  std::string reference;
  std::vector<std::size_t> ns{4};
  std::size_t samples = 500;
  bool exhaustive = false;
  bool optimize_angles = false;
  int restarts = 1;
  double prune = kDefaultPruneThreshold;
};

struct SampleRow {
  std::string kind;
  std::size_t n = 0;
  std::size_t sample = 0;
  double energy = 0.0;
  std::size_t terms = 0;
};

int run_bench_sample(const SampleArgs& a, const Global& g, Emitter& e, RunManifest& m) {
  const auto in = load_pauli(a.pauli, a.prune, m);
  const auto ref = resolve_reference(a.reference, in);
  const auto dis = build_dis(in.h, ref);
  const auto ref_state = QmfState::from_bits(ref);

  std::vector<SampleRow> rows;
  rows.push_back({"reference", 0, 0, basis_expectation(in.h, ref), in.h.size()});
  json ilc_notes = json::object();
  for (auto n : a.ns) {
    if (n > dis.size()) throw InfeasibleError("N=" + std::to_string(n) + " exceeds the DIS size");
    AnticomOptions ao;
    ao.exhaustive = a.exhaustive;
    const auto set = find_anticommuting_set(dis, n, ao);
    if (set.words.empty()) throw InfeasibleError("no anticommuting set for N=" + std::to_string(n));
    const auto r = optimize_ilc(in.h, ref, set.words);
    rows.push_back({"ilc", set.words.size(), 0, r.energy, dress_ilc(in.h, r.ansatz).size()});
    ilc_notes[std::to_string(n)] = ansatz_json(r.ansatz);
  }
  m.add_note("ilc", ilc_notes);
  const auto first_sample = rows.size();
  for (auto n : a.ns)
    for (std::size_t s = 0; s < a.samples; ++s) rows.push_back({"qcc", n, s, 0.0, 0});

  QccOptions qo;
  qo.optimize_angles = a.optimize_angles;
  qo.restarts = a.restarts;
  parallel_for(rows.size() - first_sample, [&](std::size_t i) {
    auto& r = rows[first_sample + i];
    Rng rng(derive_seed(derive_seed(g.seed, r.n), r.sample));
    std::vector<PauliWord> ws;
    for (std::size_t k = 0; k < r.n; ++k) ws.push_back(sample_partition_word(dis[k].flip_x, rng));
    auto o = qo;
    o.seed = derive_seed(g.seed ^ 0x5A5Aull, first_sample + i);
    const auto q = optimize_qcc(in.h, ref_state, ws, o);
    r.energy = q.energy;
    r.terms = dress_qcc_sequence(in.h, ws, q.taus).size();
  });
  m.phase("samples");

  std::ostringstream out;
  out << "kind,N,sample,energy,terms\n";
  for (const auto& r : rows)
    out << r.kind << ',' << r.n << ',' << r.sample << ',' << format_real(r.energy) << ',' << r.terms << '\n';
  e.emit(out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QCC-ILC Hamiltonian dressing toolkit", "qccilc"};
  app.set_version_flag("--version", std::string(QCCILC_VERSION));
  app.set_config("--config", "", "TOML/INI file with option defaults; sections name subcommands");
  app.require_subcommand(1);

  Global g;
  app.add_option("-o,--out", g.out, "Primary output file (stdout when omitted)");
  app.add_option("--manifest", g.manifest, "Extra path for the run manifest");
  app.add_option("--seed", g.seed, "Master RNG seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (sets QCCILC_THREADS)");

  MapArgs map_a;
  auto* map = app.add_subcommand("map", "FCIDUMP -> qubit Hamiltonian (.pauli)");
  map->add_option("fcidump", map_a.fcidump, "FCIDUMP file")->required();
  map->add_option("--mapping", map_a.mapping, "jw or parity")->capture_default_str();
  map->add_option("--ordering", map_a.ordering, "blocked or interleaved")->capture_default_str();
  map->add_option("--spin-penalty", map_a.spin_penalty, "Weight of the S^2 penalty")->capture_default_str();
  map->add_option("--prune", map_a.prune, "Coefficient prune threshold")->capture_default_str();

  QmfArgs qmf_a;
  auto* qmf = app.add_subcommand("qmf-opt", "Optimize the qubit mean-field reference");
  qmf->add_option("pauli", qmf_a.pauli)->required();
  qmf->add_option("--reference", qmf_a.reference, "Initial basis state bits");
  qmf->add_option("--restarts", qmf_a.restarts)->capture_default_str();
  qmf->add_option("--prune", qmf_a.prune)->capture_default_str();

  DisArgs dis_a;
  auto* dis = app.add_subcommand("dis", "Rank DIS partitions (CSV)");
  dis->add_option("pauli", dis_a.pauli)->required();
  dis->add_option("--reference", dis_a.reference);
  dis->add_option("--top", dis_a.top, "Keep only the top k partitions (0 = all)")->capture_default_str();
  dis->add_flag("--exclude-single-qubit", dis_a.exclude_single);
  dis->add_option("--cutoff", dis_a.cutoff, "Gradient cutoff")->capture_default_str();
  dis->add_option("--prune", dis_a.prune)->capture_default_str();

  AnticomArgs ac_a;
  auto* ac = app.add_subcommand("anticom", "Complete flip vectors to mutually anticommuting words");
  ac->add_option("flips", ac_a.flips, "Flip vectors as bit strings");
  ac->add_option("--hamiltonian", ac_a.hamiltonian, "Pick flip vectors from this Hamiltonian's DIS");
  ac->add_option("--reference", ac_a.reference);
  ac->add_option("-N", ac_a.n, "Set size for --hamiltonian");
  ac->add_flag("--exhaustive", ac_a.exhaustive, "Search partition combinations when the top N fail");
  ac->add_option("--budget", ac_a.budget, "Exhaustive search budget")->capture_default_str();
  ac->add_flag("--exclude-single-qubit", ac_a.exclude_single);
  ac->add_flag("--dense", ac_a.dense, "Print dense labels");
  ac->add_option("--prune", ac_a.prune)->capture_default_str();

  IlcArgs ilc_a;
  auto* ilc = app.add_subcommand("ilc-opt", "Optimize an ILC transformation (JSON)");
  ilc->add_option("pauli", ilc_a.pauli)->required();
  ilc->add_option("--reference", ilc_a.reference);
  ilc->add_option("-e,--entangler", ilc_a.entanglers, "Entangler word (repeatable)");
  ilc->add_option("-N", ilc_a.n, "Take N entanglers from the DIS");
  ilc->add_flag("--relax-qmf", ilc_a.relax_qmf);
  ilc->add_flag("--exhaustive", ilc_a.exhaustive);
  ilc->add_flag("--exclude-single-qubit", ilc_a.exclude_single);
  ilc->add_option("--max-outer", ilc_a.max_outer)->capture_default_str();
  ilc->add_option("--prune", ilc_a.prune)->capture_default_str();

  DressArgs dr_a;
  auto* dr = app.add_subcommand("dress", "Apply an ILC or QCC similarity transform (.pauli)");
  dr->add_option("pauli", dr_a.pauli)->required();
  dr->add_option("--ansatz", dr_a.ansatz, "ILC ansatz JSON as written by ilc-opt");
  dr->add_option("--qcc", dr_a.qcc, "QCC entangler word (repeatable, first acts first)");
  dr->add_option("--tau", dr_a.taus, "QCC angle (one per --qcc)");
  dr->add_option("--direction", dr_a.direction, "inverse (U^H H U) or forward")->capture_default_str();
  dr->add_option("--prune", dr_a.prune)->capture_default_str();

  auto add_pipeline_opts = [](CLI::App* s, PipelineArgs& p) {
    s->add_option("--reference", p.reference);
    s->add_option("-d", p.d, "Number of dressings")->capture_default_str();
    s->add_option("-N", p.n, "Entanglers per ILC")->capture_default_str();
    s->add_option("-M", p.m, "Entanglers in the final QCC")->capture_default_str();
    s->add_flag("--relax-qmf", p.relax_qmf);
    s->add_option("--energy-threshold", p.energy_threshold)->capture_default_str();
    s->add_option("--gradient-threshold", p.gradient_threshold)->capture_default_str();
    s->add_flag("--exclude-single-qubit", p.exclude_single);
    s->add_flag("--exhaustive", p.exhaustive);
    s->add_option("--restarts", p.restarts, "QCC optimizer restarts")->capture_default_str();
    s->add_option("--exact-max-qubits", p.exact_max, "Largest register for exact comparison")
        ->capture_default_str();
    s->add_option("--prune", p.prune)->capture_default_str();
  };

  PipelineArgs pl_a;
  auto* pl = app.add_subcommand("pipeline", "Iterative ILC dressing followed by QCC (JSON)");
  pl->add_option("pauli", pl_a.pauli)->required();
  add_pipeline_opts(pl, pl_a);
  pl->add_option("--out-dir", pl_a.out_dir, "Write the dressed Hamiltonian of each step here");

  ScanArgs sc_a;
  auto* sc = app.add_subcommand("scan", "Fixed-ansatz scan over several Hamiltonians (CSV)");
  sc->add_option("files", sc_a.files, "Hamiltonians in scan order")->required();
  sc->add_option("--select", sc_a.select, "Point at which entanglers are chosen")->capture_default_str();
  add_pipeline_opts(sc, sc_a.pipe);

  VqeArgs vq_a;
  auto* vq = app.add_subcommand("vqe", "QCC energy minimization (JSON)");
  vq->add_option("pauli", vq_a.pauli)->required();
  vq->add_option("--reference", vq_a.reference);
  vq->add_option("-e,--entangler", vq_a.entanglers, "Entangler word (repeatable, first acts first)");
  vq->add_option("-M", vq_a.m, "Take M entanglers from the DIS")->capture_default_str();
  vq->add_flag("--exclude-single-qubit", vq_a.exclude_single);
  vq->add_flag("--fixed-angles", vq_a.fixed_angles, "Keep the mean-field angles frozen");
  vq->add_option("--restarts", vq_a.restarts)->capture_default_str();
  vq->add_option("--exact-max-qubits", vq_a.exact_max)->capture_default_str();
  vq->add_option("--prune", vq_a.prune)->capture_default_str();

  SpectrumArgs sp_a;
  auto* sp = app.add_subcommand("spectrum", "Exact ground state (JSON)");
  sp->add_option("pauli", sp_a.pauli)->required();
  sp->add_option("--reference", sp_a.reference);
  sp->add_option("--count", sp_a.count, "Number of lowest eigenvalues to list")->capture_default_str();
  sp->add_option("--prune", sp_a.prune)->capture_default_str();

  GrowthArgs bg_a;
  auto* bg = app.add_subcommand("bench-growth", "Term growth under random transforms (CSV)");
  bg->add_option("--qubits", bg_a.qubits)->capture_default_str();
  bg->add_option("--terms", bg_a.terms, "Terms in each random Hamiltonian")->capture_default_str();
  bg->add_option("-N", bg_a.ns, "Transform sizes")->capture_default_str()->delimiter(',');
  bg->add_option("--trials", bg_a.trials)->capture_default_str();
  bg->add_option("--kind", bg_a.kind, "ilc, qcc or both")->capture_default_str();
  bg->add_option("--hamiltonian", bg_a.hamiltonian, "Use this Hamiltonian instead of random ones");
  bg->add_option("--summary", bg_a.summary, "Per-(kind, N) mean/std CSV");
  bg->add_option("--prune", bg_a.prune)->capture_default_str();

  SampleArgs bs_a;
  auto* bs = app.add_subcommand("bench-qcc-sample", "ILC(N) against sampled top-gradient QCC(N) (CSV)");
  bs->add_option("pauli", bs_a.pauli)->required();
  bs->add_option("--reference", bs_a.reference);
  bs->add_option("-N", bs_a.ns)->capture_default_str()->delimiter(',');
  bs->add_option("--samples", bs_a.samples)->capture_default_str();
  bs->add_flag("--exhaustive", bs_a.exhaustive);
  bs->add_flag("--optimize-angles", bs_a.optimize_angles, "Also relax the mean-field angles in QCC");
  bs->add_option("--restarts", bs_a.restarts)->capture_default_str();
  bs->add_option("--prune", bs_a.prune)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (g.threads > 0) setenv("QCCILC_THREADS", std::to_string(g.threads).c_str(), 1);

  CLI::App* sub = app.get_subcommands().front();
  RunManifest m(sub->get_name());
  m.set_seed(g.seed);
  echo_options(&app, m);
  echo_options(sub, m);
  Emitter e(g, m);

  try {
    int rc = 0;
    if (map->parsed()) rc = run_map(map_a, e, m);
    else if (qmf->parsed()) rc = run_qmf(qmf_a, g, e, m);
    else if (dis->parsed()) rc = run_dis(dis_a, e, m);
    else if (ac->parsed()) rc = run_anticom(ac_a, e, m);
    else if (ilc->parsed()) rc = run_ilc(ilc_a, e, m);
    else if (dr->parsed()) rc = run_dress(dr_a, e, m);
    else if (pl->parsed()) rc = run_pipeline_cmd(pl_a, g, e, m);
    else if (sc->parsed()) rc = run_scan(sc_a, g, e, m);
    else if (vq->parsed()) rc = run_vqe(vq_a, g, e, m);
    else if (sp->parsed()) rc = run_spectrum(sp_a, g, e, m);
    else if (bg->parsed()) rc = run_bench_growth(bg_a, g, e, m);
    else if (bs->parsed()) rc = run_bench_sample(bs_a, g, e, m);
    e.finish();
    return rc;
  } catch (const InfeasibleError& ex) {
    std::cerr << "infeasible: " << ex.what() << '\n';
    return 3;
  } catch (const NumericalError& ex) {
    std::cerr << "numerical error: " << ex.what() << '\n';
    return 4;
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << '\n';
    return 1;
  }
}
