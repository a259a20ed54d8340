#include "qccilc/ilc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qccilc/anticom.hpp"
#include "qccilc/dressing.hpp"
#include "qccilc/errors.hpp"
#include "qccilc/parallel.hpp"
#include "qccilc/sim.hpp"

namespace qccilc {

void IlcAnsatz::validate(double tol) const {
  if (alphas.size() != entanglers.size()) throw ContractError("IlcAnsatz: alphas and entanglers differ in length");
  if (entanglers.empty()) return;
  const auto n = entanglers.front().num_qubits();
  for (const auto& t : entanglers) check_same_qubits(n, t.num_qubits(), "IlcAnsatz");
  if (!is_anticommuting_set(entanglers)) {
    throw ContractError("IlcAnsatz: entanglers must pairwise anticommute and carry an odd number of Y");
  }
  double norm = 0.0;
  for (double a : alphas) norm += a * a;
  if (std::abs(norm - 1.0) > tol) throw ContractError("IlcAnsatz: sum of squared alphas is not 1");
}

SparsePauliOp IlcAnsatz::generator() const {
  if (entanglers.empty()) return SparsePauliOp();
  std::vector<std::pair<PauliWord, Complex>> terms;
  for (std::size_t k = 0; k < entanglers.size(); ++k) terms.emplace_back(entanglers[k], alphas[k]);
  return SparsePauliOp(entanglers.front().num_qubits(), terms, 0.0);
}

namespace {

constexpr Complex kI{0.0, 1.0};

void check_entanglers(std::size_t n_qubits, const std::vector<PauliWord>& ents) {
  for (const auto& t : ents) check_same_qubits(n_qubits, t.num_qubits(), "build_subspace");
  if (!ents.empty() && !is_anticommuting_set(ents)) {
    throw ContractError("build_subspace: entanglers must pairwise anticommute and carry an odd number of Y");
  }
}

/// P|b> = phase |b ^ x|.
Complex action_phase(const PauliWord& p, const BitVec& b) {
  const int k = static_cast<int>(p.y_count()) + 2 * static_cast<int>(and_popcount(p.z(), b));
  return FourthRootPhase(k).value();
}

void apply_mask(SubspaceProblem& p) {
  const auto dim = p.hbar.rows();
  for (Eigen::Index j = 1; j < dim; ++j) {
    p.hbar(0, j) *= -kI;
    p.hbar(j, 0) *= kI;
    p.sbar(0, j) *= -kI;
    p.sbar(j, 0) *= kI;
  }
}

bool is_basis_state(const QmfState& s) {
  return std::all_of(s.thetas.begin(), s.thetas.end(),
                     [](double t) { return t == 0.0 || t == std::numbers::pi; });
}

double unit_phase(double v, double mag) { return v / mag; }
Complex unit_phase(Complex v, double mag) { return std::conj(v) / mag; }

template <class Mat>
SubspaceSolution solve_generalized(const Mat& h, const Mat& s, double cond_cap) {
  using Vec = Eigen::Matrix<typename Mat::Scalar, Eigen::Dynamic, 1>;
  const auto dim = h.rows();
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  if (es.info() != Eigen::Success) throw NumericalError("solve_ground: overlap diagonalization failed");
  const auto& sv = es.eigenvalues();
  const double smax = sv.maxCoeff();
  if (!(smax > 0.0)) throw NumericalError("solve_ground: overlap matrix is not positive");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (sv(k) > smax / cond_cap) keep.push_back(k);
  }
  Mat x(dim, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    x.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]) / std::sqrt(sv(keep[k]));
  }
  Mat hp = x.adjoint() * h * x;
  hp = (0.5 * (hp + hp.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Mat> eh(hp);
  if (eh.info() != Eigen::Success) throw NumericalError("solve_ground: subspace diagonalization failed");

  SubspaceSolution out;
  out.reduced = static_cast<Eigen::Index>(keep.size()) < dim;
  out.energy = eh.eigenvalues()(0);
  Vec c = x * eh.eigenvectors().col(0);
  const double nrm = std::sqrt(std::abs(std::real(Complex(c.adjoint() * s * c))));
  c /= nrm;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double mag = std::abs(c(k));
    if (mag > 1e-12) {
      c *= unit_phase(c(k), mag);
      break;
    }
  }
  out.c = c.template cast<Complex>();
  return out;
}

struct Solved {
  double tau = 0.0;
  std::vector<double> alphas;
  double energy = 0.0;
  bool real_restricted = false;
  bool reference_dominated = false;
};

double max_imag(const Eigen::MatrixXcd& m) { return m.imag().cwiseAbs().maxCoeff(); }

Solved solve_at(const SparsePauliOp& h, const QmfState& ref, const std::vector<PauliWord>& ents, double cond_cap) {
  const auto p = build_subspace(h, ref, ents);
  Solved out;
  out.real_restricted = max_imag(p.hbar) > 1e-12 || max_imag(p.sbar) > 1e-12;
  const auto sol = out.real_restricted ? solve_ground_real(p, cond_cap) : solve_ground(p, cond_cap);
  out.energy = sol.energy;
  try {
    std::tie(out.tau, out.alphas) = extract_parameters(sol.c);
  } catch (const NumericalError&) {
    // The reference itself is optimal.
    out.reference_dominated = true;
    out.tau = 0.0;
    out.alphas.assign(ents.size(), 0.0);
    out.alphas[0] = 1.0;
    out.energy = p.hbar(0, 0).real();
  }
  return out;
}

}  // namespace

SubspaceProblem build_subspace(const SparsePauliOp& h, const BitVec& ref, const std::vector<PauliWord>& ents) {
  check_same_qubits(h.num_qubits(), ref.size(), "build_subspace");
  check_entanglers(h.num_qubits(), ents);
  const auto dim = static_cast<Eigen::Index>(ents.size() + 1);
  std::vector<BitVec> kets(ents.size() + 1, ref);
  std::vector<Complex> phases(ents.size() + 1, 1.0);
  for (std::size_t j = 0; j < ents.size(); ++j) {
    kets[j + 1] = ref ^ ents[j].x();
    phases[j + 1] = action_phase(ents[j], ref);
  }

  SubspaceProblem p;
  p.hbar = Eigen::MatrixXcd::Zero(dim, dim);
  p.sbar = Eigen::MatrixXcd::Identity(dim, dim);
  p.reference = QmfState::from_bits(ref);
  p.entanglers = ents;
  p.orthonormal = true;
  const auto count = static_cast<std::size_t>(dim * (dim + 1) / 2);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = i; j < dim; ++j) pairs.emplace_back(i, j);
  parallel_for(count, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    p.hbar(i, j) = std::conj(phases[i]) * phases[j] * basis_matrix_element(h, kets[i], kets[j]);
  });
  for (Eigen::Index i = 0; i < dim; ++i) {
    p.hbar(i, i) = p.hbar(i, i).real();
    for (Eigen::Index j = i + 1; j < dim; ++j) p.hbar(j, i) = std::conj(p.hbar(i, j));
  }
  apply_mask(p);
  return p;
}

SubspaceProblem build_subspace(const SparsePauliOp& h, const QmfState& ref, const std::vector<PauliWord>& ents) {
  check_same_qubits(h.num_qubits(), ref.num_qubits(), "build_subspace");
  if (is_basis_state(ref)) {
    auto p = build_subspace(h, nearest_basis_state(ref), ents);
    p.reference = ref;
    return p;
  }
  check_entanglers(h.num_qubits(), ents);
  const auto n = h.num_qubits();
  const auto dim = static_cast<Eigen::Index>(ents.size() + 1);
  std::vector<PauliWord> words{PauliWord(n)};
  words.insert(words.end(), ents.begin(), ents.end());

  SubspaceProblem p;
  p.hbar = Eigen::MatrixXcd::Zero(dim, dim);
  p.sbar = Eigen::MatrixXcd::Zero(dim, dim);
  p.reference = ref;
  p.entanglers = ents;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = i; j < dim; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    p.hbar(i, j) = qmf_expectation_complex(sandwich(words[i], h, words[j]), ref);
    const auto [phase, w] = word_multiply(words[i], words[j]);
    p.sbar(i, j) = phase.value() * qmf_expectation_complex(SparsePauliOp(n, {{w, 1.0}}, 0.0), ref);
  });
  for (Eigen::Index i = 0; i < dim; ++i) {
    p.hbar(i, i) = p.hbar(i, i).real();
    p.sbar(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      p.hbar(j, i) = std::conj(p.hbar(i, j));
      p.sbar(j, i) = std::conj(p.sbar(i, j));
    }
  }
  apply_mask(p);
  return p;
}

SubspaceSolution solve_ground(const SubspaceProblem& p, double cond_cap) {
  if (p.hbar.rows() == 0 || p.hbar.rows() != p.hbar.cols() || p.sbar.rows() != p.hbar.rows() ||
      p.sbar.cols() != p.hbar.cols()) {
    throw DimensionError("solve_ground: malformed subspace matrices");
  }
  return solve_generalized<Eigen::MatrixXcd>(p.hbar, p.sbar, cond_cap);
}

SubspaceSolution solve_ground_real(const SubspaceProblem& p, double cond_cap) {
  if (p.hbar.rows() == 0 || p.hbar.rows() != p.hbar.cols() || p.sbar.rows() != p.hbar.rows() ||
      p.sbar.cols() != p.hbar.cols()) {
    throw DimensionError("solve_ground_real: malformed subspace matrices");
  }
  const Eigen::MatrixXd h = p.hbar.real();
  const Eigen::MatrixXd s = p.sbar.real();
  return solve_generalized<Eigen::MatrixXd>(h, s, cond_cap);
}

std::pair<double, std::vector<double>> extract_parameters(const Eigen::VectorXcd& c_in) {
  if (c_in.size() == 0) throw ContractError("extract_parameters: empty coefficient vector");
  Eigen::VectorXcd c = c_in;
  // Phase-fix so that c_0 is real and non-negative; fall back to the first
  // component large enough to carry a phase.
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double mag = std::abs(c(k));
    if (mag > 1e-12) {
      c *= std::conj(c(k)) / mag;
      break;
    }
  }
  if (c.imag().cwiseAbs().maxCoeff() > 1e-8) {
    throw NumericalError("extract_parameters: coefficient vector has no real representative");
  }
  const double c0 = std::clamp(c(0).real(), -1.0, 1.0);
  const double tau = std::acos(c0);
  const double s = std::sin(tau);
  if (std::abs(s) < 1e-10) throw NumericalError("extract_parameters: reference-dominated solution (sin tau = 0)");
  std::vector<double> alphas(static_cast<std::size_t>(c.size() - 1));
  double norm = 0.0;
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    alphas[j] = c(static_cast<Eigen::Index>(j + 1)).real() / s;
    norm += alphas[j] * alphas[j];
  }
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw NumericalError("extract_parameters: zero entangler amplitudes");
  for (auto& a : alphas) a /= norm;
  return {tau, alphas};
}

Eigen::VectorXd ilc_coefficients(double tau, const std::vector<double>& alphas) {
  Eigen::VectorXd c(static_cast<Eigen::Index>(alphas.size() + 1));
  c(0) = std::cos(tau);
  for (std::size_t j = 0; j < alphas.size(); ++j) c(static_cast<Eigen::Index>(j + 1)) = std::sin(tau) * alphas[j];
  return c;
}

double ilc_energy(const SubspaceProblem& p, double tau, const std::vector<double>& alphas) {
  if (static_cast<Eigen::Index>(alphas.size() + 1) != p.hbar.rows()) {
    throw DimensionError("ilc_energy: amplitude count does not match the subspace");
  }
  const auto c = ilc_coefficients(tau, alphas);
  return c.dot(p.hbar.real() * c);
}

IlcResult optimize_ilc(const SparsePauliOp& h, const QmfState& ref, const std::vector<PauliWord>& ents,
                       const IlcOptions& options) {
  check_same_qubits(h.num_qubits(), ref.num_qubits(), "optimize_ilc");
  check_entanglers(h.num_qubits(), ents);
  IlcResult out;
  out.reference = ref;
  out.reference_energy = qmf_expectation(h, ref);
  out.ansatz.entanglers = ents;

  if (ents.empty()) {
    out.energy = out.reference_energy;
    if (options.relax_qmf) {
      const auto q = optimize_qmf(h, ref, options.qmf);
      out.energy = q.energy;
      out.reference = q.state;
      out.converged = q.converged;
    }
    out.iterations = 1;
    out.history.push_back(out.energy);
    return out;
  }

  auto cur = solve_at(h, ref, ents, options.cond_cap);
  out.real_restricted = cur.real_restricted;
  out.history.push_back(cur.energy);
  out.iterations = 1;
  QmfState omega = ref;

  if (options.relax_qmf) {
    out.converged = false;
    for (int outer = 1; outer < options.max_outer; ++outer) {
      IlcAnsatz a{ents, cur.tau, cur.alphas};
      const auto dressed = dress_ilc(h, a, DressDirection::kInverse, 1e-14);
      const auto q = optimize_qmf(dressed, omega, options.qmf);
      const double relaxed = ilc_energy(build_subspace(h, q.state, ents), cur.tau, cur.alphas);
      if (!(relaxed <= cur.energy + 1e-12)) {
        out.converged = true;
        break;
      }
      auto next = solve_at(h, q.state, ents, options.cond_cap);
      ++out.iterations;
      if (next.energy > relaxed) {
        // Roundoff only; keep the relaxed point with the current amplitudes.
        next.tau = cur.tau;
        next.alphas = cur.alphas;
        next.energy = relaxed;
        next.reference_dominated = cur.reference_dominated;
      }
      const double delta = cur.energy - next.energy;
      omega = q.state;
      out.real_restricted = out.real_restricted || next.real_restricted;
      cur = next;
      out.history.push_back(cur.energy);
      if (std::abs(delta) < options.energy_tolerance) {
        out.converged = true;
        break;
      }
    }
  }

  out.ansatz.tau = cur.tau;
  out.ansatz.alphas = cur.alphas;
  out.energy = cur.energy;
  out.reference = omega;
  out.reference_dominated = cur.reference_dominated;
  return out;
}

IlcResult optimize_ilc(const SparsePauliOp& h, const BitVec& ref, const std::vector<PauliWord>& ents,
                       const IlcOptions& options) {
  return optimize_ilc(h, QmfState::from_bits(ref), ents, options);
}

Eigen::MatrixXcd ilc_unitary(const IlcAnsatz& a, std::size_t cap) {
  if (a.entanglers.empty()) throw ContractError("ilc_unitary: empty ansatz has no qubit count");
  const auto n = a.entanglers.front().num_qubits();
  if (n > cap) throw NumericalError("ilc_unitary: qubit count exceeds the dense cap");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::MatrixXcd u = std::cos(a.tau) * Eigen::MatrixXcd::Identity(dim, dim);
  u += -kI * std::sin(a.tau) * dense_matrix(a.generator(), cap);
  return u;
}

}  // namespace qccilc
