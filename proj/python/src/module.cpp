#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qccilc/anticom.hpp"
#include "qccilc/dis.hpp"
#include "qccilc/dressing.hpp"
#include "qccilc/errors.hpp"
#include "qccilc/fermion.hpp"
#include "qccilc/ilc.hpp"
#include "qccilc/mean_field.hpp"
#include "qccilc/pauli.hpp"
#include "qccilc/pauli_io.hpp"
#include "qccilc/sim.hpp"

namespace py = pybind11;
using namespace qccilc;

namespace {

// Bit strings cross the boundary as str ("0101", qubit 0 first).
BitVec bits(const std::string& s) { return BitVec::from_string(s); }

std::vector<PauliWord> words(const std::vector<std::string>& labels, std::size_t nq) {
  std::vector<PauliWord> out;
  for (const auto& l : labels) out.push_back(PauliWord::parse(l, nq));
  return out;
}

std::vector<std::string> labels(const std::vector<PauliWord>& ws) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(w.to_string());
  return out;
}

SparsePauliOp op_from_dict(std::size_t nq, const std::map<std::string, Complex>& terms, double prune) {
  std::vector<std::pair<PauliWord, Complex>> t;
  for (const auto& [label, c] : terms) t.emplace_back(PauliWord::parse(label, nq), c);
  return SparsePauliOp(nq, t, prune);
}

std::pair<std::int64_t, std::int64_t> frac(const Fraction& f) { return {f.num, f.den}; }

}  // namespace

PYBIND11_MODULE(_qccilc, m) {
  m.doc() = "QCC-ILC Hamiltonian dressing core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ContractError>(m, "ContractError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.attr("DEFAULT_PRUNE_THRESHOLD") = kDefaultPruneThreshold;

  py::class_<PauliWord>(m, "PauliWord")
      .def(py::init([](const std::string& label, std::size_t n) { return PauliWord::parse(label, n); }),
           py::arg("label"), py::arg("n_qubits"))
      .def_static("from_dense", &PauliWord::from_dense)
      .def_property_readonly("num_qubits", &PauliWord::num_qubits)
      .def_property_readonly("weight", &PauliWord::weight)
      .def_property_readonly("y_count", &PauliWord::y_count)
      .def("to_dense", &PauliWord::to_dense)
      .def("commutes", [](const PauliWord& a, const PauliWord& b) { return commutes(a, b); })
      .def("__str__", &PauliWord::to_string)
      .def("__repr__", [](const PauliWord& w) { return "PauliWord('" + w.to_string() + "')"; })
      .def("__hash__", [](const PauliWord& w) { return py::hash(py::str(w.to_dense())); })
      .def(py::self == py::self);

  py::class_<SparsePauliOp>(m, "SparsePauliOp")
      .def(py::init(&op_from_dict), py::arg("n_qubits"), py::arg("terms"),
           py::arg("prune_threshold") = kDefaultPruneThreshold)
      .def_property_readonly("num_qubits", &SparsePauliOp::num_qubits)
      .def_property_readonly("prune_threshold", &SparsePauliOp::prune_threshold)
      .def("__len__", &SparsePauliOp::size)
      .def("terms",
           [](const SparsePauliOp& op) {
             std::map<std::string, Complex> out;
             for (const auto& [w, c] : op) out[w.to_string()] = c;
             return out;
           })
      .def("coeff", [](const SparsePauliOp& op, const std::string& l) {
        return op.coeff(PauliWord::parse(l, op.num_qubits()));
      })
      .def("is_hermitian", &SparsePauliOp::is_hermitian, py::arg("tol") = 1e-10)
      .def("with_prune_threshold", &SparsePauliOp::with_prune_threshold)
      .def("to_text", [](const SparsePauliOp& op) { return to_pauli_text(op); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self == py::self)
      .def("__rmul__", [](const SparsePauliOp& op, Complex s) { return s * op; })
      .def("__matmul__", &multiply);

  m.def("parse_pauli_text", &parse_pauli_text, py::arg("text"), py::arg("prune_threshold") = kDefaultPruneThreshold);
  m.def("read_pauli_file", &read_pauli_file, py::arg("path"), py::arg("prune_threshold") = kDefaultPruneThreshold);
  m.def("reference_hint", [](const std::string& text) -> std::optional<std::string> {
    auto h = find_reference_hint(text);
    return h ? std::optional<std::string>(h->to_string()) : std::nullopt;
  });
  m.def(
      "write_pauli_file",
      [](const std::filesystem::path& p, const SparsePauliOp& op, std::optional<std::string> ref) {
        write_pauli_file(p, op, ref ? std::optional<BitVec>(bits(*ref)) : std::nullopt);
      },
      py::arg("path"), py::arg("op"), py::arg("reference") = std::nullopt);
  m.def(
      "commutator", [](const SparsePauliOp& h, const PauliWord& t) { return commutator(h, t); }, py::arg("h"),
      py::arg("t"));

  // fermion_map
  py::class_<FermionIntegrals>(m, "FermionIntegrals")
      .def_readonly("n_orbitals", &FermionIntegrals::n_orbitals)
      .def_readonly("n_electrons", &FermionIntegrals::n_electrons)
      .def_readonly("ms2", &FermionIntegrals::ms2)
      .def_readonly("core_energy", &FermionIntegrals::core_energy)
      .def("h", &FermionIntegrals::h)
      .def("g", &FermionIntegrals::g);
  m.def("read_fcidump", &read_fcidump);
  m.def("parse_fcidump", [](const std::string& text) { return parse_fcidump(text); });
  m.def("hartree_fock_energy", &hartree_fock_energy);
  m.def(
      "map_hamiltonian",
      [](const FermionIntegrals& fi, const std::string& mapping, const std::string& ordering, double spin_penalty,
         double prune) {
        MappingOptions o;
        o.mapping = parse_mapping(mapping);
        o.ordering = parse_ordering(ordering);
        o.spin_penalty = spin_penalty;
        o.prune_threshold = prune;
        auto r = map_hamiltonian(fi, o);
        return py::make_tuple(r.hamiltonian, r.reference.to_string());
      },
      py::arg("integrals"), py::arg("mapping") = "jw", py::arg("ordering") = "blocked",
      py::arg("spin_penalty") = 0.0, py::arg("prune_threshold") = kDefaultPruneThreshold,
      "Returns (hamiltonian, hartree-fock reference bits).");

  // mean_field / sim
  py::class_<QmfState>(m, "QmfState")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("thetas"), py::arg("phis"))
      .def_static("from_bits", [](const std::string& s) { return QmfState::from_bits(bits(s)); })
      .def_readwrite("thetas", &QmfState::thetas)
      .def_readwrite("phis", &QmfState::phis)
      .def("nearest_basis", [](const QmfState& s) { return nearest_basis_state(s).to_string(); });
  m.def("qmf_expectation", &qmf_expectation);
  m.def(
      "optimize_qmf",
      [](const SparsePauliOp& h, const QmfState& s, int restarts, std::uint64_t seed) {
        QmfOptions o;
        o.random_restarts = restarts;
        o.seed = seed;
        auto r = optimize_qmf(h, s, o);
        return py::make_tuple(r.energy, r.state);
      },
      py::arg("h"), py::arg("initial"), py::arg("restarts") = 4, py::arg("seed") = 0);
  m.def("basis_expectation", [](const SparsePauliOp& h, const std::string& b) { return basis_expectation(h, bits(b)); });
  m.def("dense_matrix", [](const SparsePauliOp& h) { return dense_matrix(h); });
  m.def("spectrum", [](const SparsePauliOp& h) { return spectrum(h); });
  m.def("ground_energy", [](const SparsePauliOp& h) { return ground_state(h).energy; });
  m.def(
      "qcc_energy",
      [](const SparsePauliOp& h, const QmfState& s, const std::vector<std::string>& ents,
         const std::vector<double>& taus) { return qcc_energy(h, s, words(ents, h.num_qubits()), taus); },
      py::arg("h"), py::arg("state"), py::arg("entanglers"), py::arg("taus"));
  m.def(
      "optimize_qcc",
      [](const SparsePauliOp& h, const QmfState& s, const std::vector<std::string>& ents, bool optimize_angles,
         int restarts, std::uint64_t seed) {
        QccOptions o;
        o.optimize_angles = optimize_angles;
        o.restarts = restarts;
        o.seed = seed;
        auto r = optimize_qcc(h, s, words(ents, h.num_qubits()), o);
        return py::dict(py::arg("energy") = r.energy, py::arg("taus") = r.taus, py::arg("state") = r.state,
                        py::arg("converged") = r.converged);
      },
      py::arg("h"), py::arg("state"), py::arg("entanglers"), py::arg("optimize_angles") = true,
      py::arg("restarts") = 1, py::arg("seed") = 0);

  // dis / anticom
  py::class_<DisPartition>(m, "DisPartition")
      .def_property_readonly("flip_x", [](const DisPartition& p) { return p.flip_x.to_string(); })
      .def_readonly("gradient_magnitude", &DisPartition::gradient_magnitude)
      .def_readonly("representative", &DisPartition::representative)
      .def_readonly("single_qubit", &DisPartition::single_qubit);
  m.def(
      "gradient", [](const SparsePauliOp& h, const PauliWord& t, const std::string& phi) {
        return gradient(h, t, bits(phi));
      });
  m.def(
      "build_dis",
      [](const SparsePauliOp& h, const std::string& phi, bool exclude_single) {
        DisOptions o;
        o.exclude_single_qubit = exclude_single;
        return build_dis(h, bits(phi), o);
      },
      py::arg("h"), py::arg("reference"), py::arg("exclude_single_qubit") = false);
  m.def(
      "solve_anticommuting",
      [](const std::vector<std::string>& flips) -> std::optional<std::vector<PauliWord>> {
        AnticomRequest req;
        for (const auto& f : flips) req.x_vectors.push_back(bits(f));
        req.n_qubits = req.x_vectors.empty() ? 0 : req.x_vectors.front().size();
        return solve_anticommuting(req);
      },
      "Completes flip vectors to mutually anticommuting odd-Y words; None when infeasible.");
  m.def("is_anticommuting_set", &is_anticommuting_set);

  // ilc / dressing
  py::class_<IlcAnsatz>(m, "IlcAnsatz")
      .def(py::init([](std::vector<PauliWord> ents, double tau, std::vector<double> alphas) {
             return IlcAnsatz{std::move(ents), tau, std::move(alphas)};
           }),
           py::arg("entanglers"), py::arg("tau"), py::arg("alphas"))
      .def_readonly("entanglers", &IlcAnsatz::entanglers)
      .def_readonly("tau", &IlcAnsatz::tau)
      .def_readonly("alphas", &IlcAnsatz::alphas)
      .def("validate", &IlcAnsatz::validate, py::arg("tol") = 1e-12)
      .def("generator", &IlcAnsatz::generator);

  py::class_<IlcResult>(m, "IlcResult")
      .def_readonly("ansatz", &IlcResult::ansatz)
      .def_readonly("energy", &IlcResult::energy)
      .def_readonly("reference_energy", &IlcResult::reference_energy)
      .def_readonly("reference", &IlcResult::reference)
      .def_readonly("iterations", &IlcResult::iterations)
      .def_readonly("converged", &IlcResult::converged)
      .def_readonly("real_restricted", &IlcResult::real_restricted)
      .def_readonly("reference_dominated", &IlcResult::reference_dominated)
      .def_readonly("history", &IlcResult::history);
  m.def(
      "optimize_ilc",
      [](const SparsePauliOp& h, const std::string& ref, const std::vector<PauliWord>& ents, bool relax_qmf) {
        IlcOptions o;
        o.relax_qmf = relax_qmf;
        return optimize_ilc(h, bits(ref), ents, o);
      },
      py::arg("h"), py::arg("reference"), py::arg("entanglers"), py::arg("relax_qmf") = false);

  py::enum_<DressDirection>(m, "DressDirection")
      .value("FORWARD", DressDirection::kForward)
      .value("INVERSE", DressDirection::kInverse);
  m.def("dress_ilc", &dress_ilc, py::arg("h"), py::arg("ansatz"), py::arg("direction") = DressDirection::kInverse,
        py::arg("prune_threshold") = -1.0);
  m.def("dress_qcc", &dress_qcc, py::arg("h"), py::arg("t"), py::arg("tau"));
  m.def("dress_qcc_sequence", &dress_qcc_sequence, py::arg("h"), py::arg("entanglers"), py::arg("taus"));
  m.def("_growth_worst", [](std::int64_t n) { return frac(growth_worst(n)); });
  m.def("_growth_avg", [](std::int64_t n) { return frac(growth_avg(n)); });

  py::class_<PipelineStep>(m, "PipelineStep")
      .def_readonly("partitions", &PipelineStep::partitions)
      .def_readonly("ilc", &PipelineStep::ilc)
      .def_property_readonly("terms", [](const PipelineStep& s) { return s.report.output_terms; })
      .def_property_readonly("input_terms", [](const PipelineStep& s) { return s.report.input_terms; });
  py::class_<PipelineResult>(m, "PipelineResult")
      .def_readonly("hamiltonians", &PipelineResult::hamiltonians)
      .def_readonly("energies", &PipelineResult::energies)
      .def_readonly("steps", &PipelineResult::steps)
      .def_readonly("reference", &PipelineResult::reference)
      .def_readonly("stop_reason", &PipelineResult::stop_reason)
      .def_readonly("predicted_avg_growth", &PipelineResult::predicted_avg_growth);
  py::class_<WorkflowResult>(m, "WorkflowResult")
      .def_readonly("pipeline", &WorkflowResult::pipeline)
      .def_property_readonly("qcc_entanglers", [](const WorkflowResult& w) { return labels(w.qcc_entanglers); })
      .def_property_readonly("qcc_taus", [](const WorkflowResult& w) { return w.qcc.taus; })
      .def_readonly("final_energy", &WorkflowResult::final_energy);

  m.def(
      "run_workflow",
      [](const SparsePauliOp& h, const std::string& ref, int d, std::size_t n, std::size_t mm, bool relax_qmf,
         bool exclude_single, double energy_threshold, double gradient_threshold, std::uint64_t seed) {
        PipelineConfig c;
        c.d = d;
        c.n = n;
        c.m = mm;
        c.relax_qmf = relax_qmf;
        c.exclude_single_qubit = exclude_single;
        c.energy_threshold = energy_threshold;
        c.gradient_threshold = gradient_threshold;
        c.prune_threshold = h.prune_threshold();
        c.seed = seed;
        c.validate();
        py::gil_scoped_release release;
        return run_workflow(h, QmfState::from_bits(bits(ref)), c);
      },
      py::arg("h"), py::arg("reference"), py::arg("d") = 1, py::arg("n") = 4, py::arg("m") = 0,
      py::arg("relax_qmf") = false, py::arg("exclude_single_qubit") = false, py::arg("energy_threshold") = 1e-6,
      py::arg("gradient_threshold") = 1e-6, py::arg("seed") = 0,
      "d ILC dressings with n entanglers each, then an m-entangler QCC optimization.");
}
