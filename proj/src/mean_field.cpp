#include "qccilc/mean_field.hpp"

#include <cmath>
#include <numbers>

#include "qccilc/errors.hpp"
#include "qccilc/parallel.hpp"
#include "qccilc/random.hpp"

namespace qccilc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Calls fn(q) for every qubit in the support of w.
template <typename Fn>
void for_support(const PauliWord& w, Fn&& fn) {
  const auto xs = w.x().limbs();
  const auto zs = w.z().limbs();
  for (std::size_t l = 0; l < xs.size(); ++l) {
    std::uint64_t m = xs[l] | zs[l];
    while (m) {
      const int b = std::countr_zero(m);
      fn(l * 64 + static_cast<std::size_t>(b));
      m &= m - 1;
    }
  }
}

struct Factors {
  std::vector<double> fx, fy, fz;
  explicit Factors(const QmfState& s) {
    const auto n = s.num_qubits();
    fx.resize(n);
    fy.resize(n);
    fz.resize(n);
    for (std::size_t q = 0; q < n; ++q) {
      const double st = std::sin(s.thetas[q]);
      fx[q] = st * std::cos(s.phis[q]);
      fy[q] = st * std::sin(s.phis[q]);
      fz[q] = std::cos(s.thetas[q]);
    }
  }
  double factor(const PauliWord& w, std::size_t q) const {
    switch (w.op(q)) {
      case 'X': return fx[q];
      case 'Y': return fy[q];
      case 'Z': return fz[q];
      default: return 1.0;
    }
  }
};

double term_product(const PauliWord& w, const Factors& f) {
  double p = 1.0;
  for_support(w, [&](std::size_t q) { p *= f.factor(w, q); });
  return p;
}

void check_size(const SparsePauliOp& op, const QmfState& s, const char* where) {
  check_same_qubits(op.num_qubits(), s.num_qubits(), where);
}

}  // namespace

QmfState::QmfState(std::vector<double> t, std::vector<double> p) : thetas(std::move(t)), phis(std::move(p)) {
  if (thetas.size() != phis.size()) throw DimensionError("QmfState: theta and phi counts differ");
}

QmfState QmfState::from_bits(const BitVec& bits) {
  QmfState s(bits.size());
  for (std::size_t q = 0; q < bits.size(); ++q) s.thetas[q] = bits.get(q) ? kPi : 0.0;
  return s;
}

void QmfState::canonicalize() {
  for (std::size_t q = 0; q < thetas.size(); ++q) {
    double t = std::fmod(thetas[q], kTwoPi);
    double p = phis[q];
    if (t < 0) t += kTwoPi;
    if (t > kPi) {
      t = kTwoPi - t;
      p += kPi;
    }
    p = std::fmod(p, kTwoPi);
    if (p < 0) p += kTwoPi;
    if (p >= kTwoPi) p = 0.0;
    thetas[q] = t;
    phis[q] = p;
  }
}

Complex qmf_expectation_complex(const SparsePauliOp& op, const QmfState& s) {
  check_size(op, s, "qmf_expectation");
  const Factors f(s);
  Complex e = 0.0;
  for (const auto& [w, c] : op) e += c * term_product(w, f);
  return e;
}

double qmf_expectation(const SparsePauliOp& op, const QmfState& s) {
  check_size(op, s, "qmf_expectation");
  if (!op.is_hermitian(1e-10)) throw ContractError("qmf_expectation: operator is not Hermitian");
  return qmf_expectation_complex(op, s).real();
}

double qmf_energy_and_gradient(const SparsePauliOp& op, const QmfState& s, std::vector<double>* grad) {
  check_size(op, s, "qmf_energy_and_gradient");
  const auto n = s.num_qubits();
  const Factors f(s);
  if (!grad) {
    double e = 0.0;
    for (const auto& [w, c] : op) e += c.real() * term_product(w, f);
    return e;
  }
  grad->assign(2 * n, 0.0);
  std::vector<double> dtheta_x(n), dtheta_y(n), dtheta_z(n), dphi_x(n), dphi_y(n);
  for (std::size_t q = 0; q < n; ++q) {
    const double st = std::sin(s.thetas[q]), ct = std::cos(s.thetas[q]);
    const double sp = std::sin(s.phis[q]), cp = std::cos(s.phis[q]);
    dtheta_x[q] = ct * cp;
    dtheta_y[q] = ct * sp;
    dtheta_z[q] = -st;
    dphi_x[q] = -st * sp;
    dphi_y[q] = st * cp;
  }
  double e = 0.0;
  std::vector<std::size_t> support;
  std::vector<double> vals, prefix, suffix;
  for (const auto& [w, cc] : op) {
    const double c = cc.real();
    support.clear();
    for_support(w, [&](std::size_t q) { support.push_back(q); });
    const auto k = support.size();
    vals.resize(k);
    for (std::size_t i = 0; i < k; ++i) vals[i] = f.factor(w, support[i]);
    prefix.assign(k + 1, 1.0);
    suffix.assign(k + 1, 1.0);
    for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] * vals[i];
    for (std::size_t i = k; i > 0; --i) suffix[i - 1] = suffix[i] * vals[i - 1];
    e += c * prefix[k];
    for (std::size_t i = 0; i < k; ++i) {
      const auto q = support[i];
      const double rest = c * prefix[i] * suffix[i + 1];
      switch (w.op(q)) {
        case 'X':
          (*grad)[q] += rest * dtheta_x[q];
          (*grad)[n + q] += rest * dphi_x[q];
          break;
        case 'Y':
          (*grad)[q] += rest * dtheta_y[q];
          (*grad)[n + q] += rest * dphi_y[q];
          break;
        default:
          (*grad)[q] += rest * dtheta_z[q];
          break;
      }
    }
  }
  return e;
}

QmfResult optimize_qmf(const SparsePauliOp& op, const QmfState& initial, const QmfOptions& options) {
  check_size(op, initial, "optimize_qmf");
  if (!op.is_hermitian(1e-10)) throw ContractError("optimize_qmf: operator is not Hermitian");
  const auto n = initial.num_qubits();
  const int starts = 1 + std::max(0, options.random_restarts);

  std::vector<std::vector<double>> x0(static_cast<std::size_t>(starts));
  for (int k = 0; k < starts; ++k) {
    auto& x = x0[static_cast<std::size_t>(k)];
    x.resize(2 * n);
    if (k == 0) {
      std::copy(initial.thetas.begin(), initial.thetas.end(), x.begin());
      std::copy(initial.phis.begin(), initial.phis.end(), x.begin() + static_cast<std::ptrdiff_t>(n));
    } else {
      Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(k)));
      for (std::size_t q = 0; q < n; ++q) x[q] = rng.uniform(0.0, kPi);
      for (std::size_t q = 0; q < n; ++q) x[n + q] = rng.uniform(0.0, kTwoPi);
    }
  }

  auto unpack = [n](const std::vector<double>& x) {
    return QmfState(std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)),
                    std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(n), x.end()));
  };
  const Objective f = [&](const std::vector<double>& x, std::vector<double>* g) {
    return qmf_energy_and_gradient(op, unpack(x), g);
  };

  std::vector<LbfgsResult> runs(static_cast<std::size_t>(starts));
  parallel_for(runs.size(), [&](std::size_t k) { runs[k] = minimize_lbfgs(f, x0[k], options.lbfgs); });

  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].value < runs[best].value - 1e-12) best = k;
  }
  QmfResult out;
  out.state = unpack(runs[best].x);
  out.state.canonicalize();
  out.energy = runs[best].value;
  out.converged = runs[best].converged;
  out.best_start = static_cast<int>(best);
  const double e0 = qmf_energy_and_gradient(op, initial, nullptr);
  if (out.energy > e0) {
    out.state = initial;
    out.state.canonicalize();
    out.energy = e0;
    out.best_start = 0;
  }
  return out;
}

BitVec nearest_basis_state(const QmfState& s) {
  QmfState c = s;
  c.canonicalize();
  BitVec bits(c.num_qubits());
  for (std::size_t q = 0; q < c.num_qubits(); ++q) bits.set(q, c.thetas[q] > kPi / 2);
  return bits;
}

Complex basis_expectation_complex(const SparsePauliOp& op, const BitVec& phi) {
  check_same_qubits(op.num_qubits(), phi.size(), "basis_expectation");
  Complex e = 0.0;
  for (const auto& [w, c] : op) {
    if (!w.is_diagonal()) break;  // diagonal words sort first
    e += (and_popcount(w.z(), phi) & 1) ? -c : c;
  }
  return e;
}

double basis_expectation(const SparsePauliOp& op, const BitVec& phi) {
  return basis_expectation_complex(op, phi).real();
}

Complex basis_matrix_element(const SparsePauliOp& op, const BitVec& bra, const BitVec& ket) {
  check_same_qubits(op.num_qubits(), bra.size(), "basis_matrix_element");
  check_same_qubits(op.num_qubits(), ket.size(), "basis_matrix_element");
  const BitVec flip = bra ^ ket;
  Complex e = 0.0;
  // P|b> = i^{|x&z|} (-1)^{z.b} |b^x>
  // Terms are ordered by x first, so the words with this flip are contiguous.
  for (auto it = op.terms().lower_bound(PauliWord(flip, BitVec(flip.size()))); it != op.end(); ++it) {
    const auto& [w, c] = *it;
    if (w.x() != flip) break;
    const FourthRootPhase phase(static_cast<int>(w.y_count() & 3) + 2 * static_cast<int>(and_popcount(w.z(), ket) & 1));
    e += c * phase.value();
  }
  return e;
}

}  // namespace qccilc
