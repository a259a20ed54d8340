#include "qccilc/sim.hpp"

#include <cmath>
#include <numbers>

#include "qccilc/errors.hpp"
#include "qccilc/random.hpp"

namespace qccilc {

namespace {

std::uint64_t low_mask(const BitVec& b) { return b.num_limbs() ? b.limbs()[0] : 0; }

void check_cap(std::size_t n, std::size_t cap, const char* where) {
  if (n > cap || n > 30) {
    throw ContractError(std::string(where) + ": " + std::to_string(n) + " qubits exceeds the cap of " +
                        std::to_string(std::min<std::size_t>(cap, 30)));
  }
}

void check_dims(const Statevector& v, std::size_t n, const char* where) { check_same_qubits(v.num_qubits(), n, where); }

// i^k for k in 0..3
inline Complex ipow(unsigned k) {
  switch (k & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace

Statevector::Statevector(std::size_t n, std::size_t cap) : n_(n) {
  check_cap(n, cap, "Statevector");
  amps_.assign(std::size_t{1} << n, Complex(0.0));
  amps_[0] = 1.0;
}

Statevector Statevector::basis(const BitVec& bits, std::size_t cap) {
  Statevector v(bits.size(), cap);
  v.amps_[0] = 0.0;
  v.amps_[low_mask(bits)] = 1.0;
  return v;
}

Statevector Statevector::from_amplitudes(std::size_t n, std::vector<Complex> amps) {
  if (amps.size() != (std::size_t{1} << n)) throw DimensionError("Statevector: amplitude count is not 2^n");
  Statevector v;
  v.n_ = n;
  v.amps_ = std::move(amps);
  return v;
}

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

Statevector prepare_qmf(const QmfState& s, std::size_t cap) {
  const auto n = s.num_qubits();
  Statevector v(n, cap);
  auto& a = v.amplitudes();
  std::size_t filled = 1;
  for (std::size_t q = 0; q < n; ++q) {
    const Complex c0 = std::cos(s.thetas[q] / 2);
    const Complex c1 = std::polar(1.0, s.phis[q]) * std::sin(s.thetas[q] / 2);
    for (std::size_t b = 0; b < filled; ++b) {
      a[b | filled] = a[b] * c1;
      a[b] *= c0;
    }
    filled <<= 1;
  }
  return v;
}

void apply_pauli(const PauliWord& t, const Statevector& v, Statevector& out) {
  check_dims(v, t.num_qubits(), "apply_pauli");
  const std::uint64_t x = low_mask(t.x()), z = low_mask(t.z());
  const Complex base = ipow(static_cast<unsigned>(std::popcount(x & z)));
  if (out.num_qubits() != v.num_qubits()) out = v;
  auto& o = out.amplitudes();
  const auto& a = v.amplitudes();
  for (std::size_t b = 0; b < a.size(); ++b) {
    const Complex ph = (std::popcount(z & b) & 1) ? -base : base;
    o[b ^ x] = ph * a[b];
  }
}

void apply_pauli_exp_inplace(Statevector& v, const PauliWord& t, double angle, Statevector& scratch) {
  apply_pauli(t, v, scratch);
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  auto& a = v.amplitudes();
  const auto& ta = scratch.amplitudes();
  for (std::size_t b = 0; b < a.size(); ++b) a[b] = c * a[b] + Complex(0, -s) * ta[b];
}

Statevector apply_pauli_exp(const Statevector& v, const PauliWord& t, double angle) {
  Statevector out = v, scratch;
  apply_pauli_exp_inplace(out, t, angle, scratch);
  return out;
}

Statevector apply_operator(const SparsePauliOp& h, const Statevector& v) {
  check_dims(v, h.num_qubits(), "apply_operator");
  Statevector out = v;
  auto& o = out.amplitudes();
  std::fill(o.begin(), o.end(), Complex(0.0));
  const auto& a = v.amplitudes();
  for (const auto& [w, c] : h) {
    const std::uint64_t x = low_mask(w.x()), z = low_mask(w.z());
    const Complex base = c * ipow(static_cast<unsigned>(std::popcount(x & z)));
    for (std::size_t b = 0; b < a.size(); ++b) {
      o[b ^ x] += ((std::popcount(z & b) & 1) ? -base : base) * a[b];
    }
  }
  return out;
}

Complex overlap(const Statevector& a, const Statevector& b) {
  check_same_qubits(a.num_qubits(), b.num_qubits(), "overlap");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

Complex expectation_complex(const Statevector& v, const SparsePauliOp& h) { return overlap(v, apply_operator(h, v)); }

double expectation(const Statevector& v, const SparsePauliOp& h) {
  const auto e = expectation_complex(v, h);
  if (std::abs(e.imag()) > 1e-9) throw NumericalError("expectation: imaginary residual " + std::to_string(e.imag()));
  return e.real();
}

Statevector qcc_state(const QmfState& s, const std::vector<PauliWord>& ents, const std::vector<double>& taus) {
  if (ents.size() != taus.size()) throw DimensionError("qcc_state: entangler and amplitude counts differ");
  Statevector v = prepare_qmf(s), scratch;
  for (std::size_t k = 0; k < ents.size(); ++k) apply_pauli_exp_inplace(v, ents[k], taus[k], scratch);
  return v;
}

double qcc_energy(const SparsePauliOp& h, const QmfState& s, const std::vector<PauliWord>& ents,
                  const std::vector<double>& taus) {
  check_same_qubits(h.num_qubits(), s.num_qubits(), "qcc_energy");
  return expectation(qcc_state(s, ents, taus), h);
}

double qcc_energy_and_gradient(const SparsePauliOp& h, const QmfState& s, const std::vector<PauliWord>& ents,
                               const std::vector<double>& taus, std::vector<double>* grad,
                               bool with_angle_gradient) {
  check_same_qubits(h.num_qubits(), s.num_qubits(), "qcc_energy");
  Statevector psi = qcc_state(s, ents, taus);
  Statevector lambda = apply_operator(h, psi);
  const double energy = overlap(psi, lambda).real();
  if (!grad) return energy;

  const auto m = ents.size();
  const auto n = s.num_qubits();
  grad->assign(m + (with_angle_gradient ? 2 * n : 0), 0.0);
  Statevector scratch;
  // Backward sweep: at step k, psi = U_k..U_0|omega>, lambda = U_{k+1}^+..U_{M-1}^+ H|psi_final>.
  for (std::size_t k = m; k-- > 0;) {
    apply_pauli(ents[k], psi, scratch);
    (*grad)[k] = overlap(lambda, scratch).imag();
    apply_pauli_exp_inplace(psi, ents[k], -taus[k], scratch);
    apply_pauli_exp_inplace(lambda, ents[k], -taus[k], scratch);
  }
  if (!with_angle_gradient) return energy;

  // psi is now the product state; d omega / d angle = A |omega> with A acting on one qubit.
  const auto& om = psi.amplitudes();
  const auto& la = lambda.amplitudes();
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    const Complex e_phi = std::polar(1.0, s.phis[q]);
    // A_theta = D(phi) (-iY/2) D(phi)^+ = [[0, -conj(e)/2], [e/2, 0]]
    const Complex a01 = -std::conj(e_phi) * 0.5, a10 = e_phi * 0.5;
    Complex d_theta = 0.0, d_phi = 0.0;
    for (std::size_t b = 0; b < om.size(); ++b) {
      if (b & bit) continue;
      const Complex o0 = om[b], o1 = om[b | bit];
      d_theta += std::conj(la[b]) * (a01 * o1) + std::conj(la[b | bit]) * (a10 * o0);
      d_phi += std::conj(la[b | bit]) * Complex(0, 1) * o1;
    }
    (*grad)[m + q] = 2.0 * d_theta.real();
    (*grad)[m + n + q] = 2.0 * d_phi.real();
  }
  return energy;
}

QccResult optimize_qcc(const SparsePauliOp& h, const QmfState& s, const std::vector<PauliWord>& ents,
                       const QccOptions& options) {
  check_same_qubits(h.num_qubits(), s.num_qubits(), "optimize_qcc");
  if (!h.is_hermitian(1e-10)) throw ContractError("optimize_qcc: operator is not Hermitian");
  const auto m = ents.size();
  const auto n = s.num_qubits();
  const bool angles = options.optimize_angles;

  auto unpack = [&](const std::vector<double>& x, std::vector<double>& taus, QmfState& st) {
    taus.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m));
    st = s;
    if (angles) {
      for (std::size_t q = 0; q < n; ++q) {
        st.thetas[q] = x[m + q];
        st.phis[q] = x[m + n + q];
      }
    }
  };
  const Objective f = [&](const std::vector<double>& x, std::vector<double>* g) {
    std::vector<double> taus;
    QmfState st;
    unpack(x, taus, st);
    return qcc_energy_and_gradient(h, st, ents, taus, g, angles);
  };

  QccResult best;
  bool have = false;
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    std::vector<double> x0(m + (angles ? 2 * n : 0), 0.0);
    if (r > 0) {
      Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
      for (std::size_t k = 0; k < m; ++k) x0[k] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    if (angles) {
      for (std::size_t q = 0; q < n; ++q) {
        x0[m + q] = s.thetas[q];
        x0[m + n + q] = s.phis[q];
      }
    }
    const auto run = minimize_lbfgs(f, x0, options.lbfgs);
    if (!have || run.value < best.energy - 1e-12) {
      have = true;
      best.energy = run.value;
      best.converged = run.converged;
      unpack(run.x, best.taus, best.state);
    }
  }
  best.state.canonicalize();
  return best;
}

Eigen::MatrixXcd dense_matrix(const SparsePauliOp& h, std::size_t cap) {
  const auto n = h.num_qubits();
  check_cap(n, cap, "dense_matrix");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [w, c] : h) {
    const std::uint64_t x = low_mask(w.x()), z = low_mask(w.z());
    const Complex base = c * ipow(static_cast<unsigned>(std::popcount(x & z)));
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += (std::popcount(z & b) & 1) ? -base : base;
    }
  }
  return m;
}

Eigen::VectorXd spectrum(const SparsePauliOp& h, std::size_t cap) {
  if (!h.is_hermitian(1e-10)) throw ContractError("spectrum: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(h, cap), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("spectrum: eigensolver failed");
  return es.eigenvalues();
}

namespace {

using Vec = Eigen::VectorXcd;

Vec to_eigen(const Statevector& v) { return Eigen::Map<const Vec>(v.amplitudes().data(), static_cast<Eigen::Index>(v.dim())); }

Statevector from_eigen(std::size_t n, const Vec& v) {
  return Statevector::from_amplitudes(n, std::vector<Complex>(v.data(), v.data() + v.size()));
}

GroundState lanczos(const SparsePauliOp& h, const GroundStateOptions& opt) {
  const auto n = h.num_qubits();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  auto apply = [&](const Vec& v) { return to_eigen(apply_operator(h, from_eigen(n, v))); };

  Rng rng(derive_seed(opt.seed, 0x6c616e63));
  Vec start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start(i) = Complex(rng.uniform(-1, 1), 0.0);
  start.normalize();

  const int k_max = std::max(2, std::min<int>(opt.krylov_dim, static_cast<int>(dim)));
  double energy = 0.0, residual = 1.0;
  for (int restart = 0; restart < opt.max_restarts; ++restart) {
    std::vector<Vec> basis{start};
    std::vector<double> alpha, beta;
    for (int j = 0; j < k_max; ++j) {
      Vec w = apply(basis[j]);
      alpha.push_back(basis[j].dot(w).real());
      // Full reorthogonalization, twice for stability.
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) w -= b * b.dot(w);
      const double nb = w.norm();
      if (j + 1 == k_max || nb < 1e-13) break;
      beta.push_back(nb);
      basis.push_back(w / nb);
    }
    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    energy = es.eigenvalues()(0);
    Vec ritz = Vec::Zero(dim);
    for (Eigen::Index i = 0; i < k; ++i) ritz += basis[static_cast<std::size_t>(i)] * es.eigenvectors()(i, 0);
    ritz.normalize();
    const Vec hv = apply(ritz);
    energy = ritz.dot(hv).real();
    residual = (hv - energy * ritz).norm();
    start = ritz;
    if (residual < opt.residual_tolerance) {
      return {energy, from_eigen(n, ritz), residual, "lanczos"};
    }
  }
  throw NumericalError("ground_state: Lanczos did not converge (residual " + std::to_string(residual) + ")");
}

}  // namespace

GroundState ground_state(const SparsePauliOp& h, const GroundStateOptions& options) {
  const auto n = h.num_qubits();
  if (!h.is_hermitian(1e-10)) throw ContractError("ground_state: operator is not Hermitian");
  check_cap(n, options.cap, "ground_state");
  if (n <= options.dense_max) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(h, kStatevectorCap));
    if (es.info() != Eigen::Success) throw NumericalError("ground_state: eigensolver failed");
    const Vec v = es.eigenvectors().col(0);
    const Vec hv = dense_matrix(h, kStatevectorCap) * v;
    return {es.eigenvalues()(0), from_eigen(n, v), (hv - es.eigenvalues()(0) * v).norm(), "dense"};
  }
  return lanczos(h, options);
}

}  // namespace qccilc
