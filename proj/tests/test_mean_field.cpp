#include <gtest/gtest.h>

#include <numbers>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "qccilc/errors.hpp"
#include "qccilc/fermion.hpp"
#include "qccilc/mean_field.hpp"

using namespace qccilc;

namespace {

constexpr double kPi = std::numbers::pi;

QmfState random_state(std::mt19937_64& rng, std::size_t n) {
  QmfState s(n);
  for (std::size_t q = 0; q < n; ++q) {
    s.thetas[q] = oracle::uniform(rng, 0, kPi);
    s.phis[q] = oracle::uniform(rng, 0, 2 * kPi);
  }
  return s;
}

double dense_expectation(const SparsePauliOp& op, const QmfState& s) {
  const auto v = oracle::product_state(s.thetas, s.phis);
  return (v.adjoint() * oracle::dense(op) * v)(0, 0).real();
}

}  // namespace

TEST(QmfExpectation, Examples) {
  QmfState s(2);
  EXPECT_DOUBLE_EQ(qmf_expectation(SparsePauliOp::from_labels(2, {{"Z1", 1.0}}), s), 1.0);
  s.thetas[0] = kPi / 2;
  EXPECT_NEAR(qmf_expectation(SparsePauliOp::from_labels(2, {{"X0", 1.0}}), s), 1.0, 1e-15);
  s.thetas = {0.4, 1.9};
  EXPECT_NEAR(qmf_expectation(SparsePauliOp::from_labels(2, {{"Z0 Z1", 1.0}}), s), std::cos(0.4) * std::cos(1.9),
              1e-15);
}

TEST(QmfExpectation, RejectsNonHermitian) {
  const auto op = SparsePauliOp::from_labels(1, {{"X0", Complex(0, 1)}});
  EXPECT_THROW(qmf_expectation(op, QmfState(1)), ContractError);
  EXPECT_THROW(qmf_expectation(op, QmfState(2)), DimensionError);
}

TEST(QmfExpectation, MatchesDenseProductState) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const auto h = oracle::random_hermitian(rng, n, 1 + rng() % 30);
    const auto s = random_state(rng, n);
    EXPECT_NEAR(qmf_expectation(h, s), dense_expectation(h, s), 1e-10);
  }
}

TEST(QmfExpectation, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const auto h = oracle::random_hermitian(rng, n, 12);
    const auto s = random_state(rng, n);
    std::vector<double> g;
    qmf_energy_and_gradient(h, s, &g);
    const double eps = 1e-6;
    for (std::size_t k = 0; k < 2 * n; ++k) {
      auto sp = s, sm = s;
      auto& vp = k < n ? sp.thetas[k] : sp.phis[k - n];
      auto& vm = k < n ? sm.thetas[k] : sm.phis[k - n];
      vp += eps;
      vm -= eps;
      const double fd = (qmf_expectation(h, sp) - qmf_expectation(h, sm)) / (2 * eps);
      EXPECT_NEAR(g[k], fd, 1e-8);
    }
  }
}

TEST(QmfState, CanonicalizeKeepsState) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    QmfState s(3);
    for (std::size_t q = 0; q < 3; ++q) {
      s.thetas[q] = oracle::uniform(rng, -10, 10);
      s.phis[q] = oracle::uniform(rng, -10, 10);
    }
    auto c = s;
    c.canonicalize();
    for (std::size_t q = 0; q < 3; ++q) {
      EXPECT_GE(c.thetas[q], 0.0);
      EXPECT_LE(c.thetas[q], kPi);
      EXPECT_GE(c.phis[q], 0.0);
      EXPECT_LT(c.phis[q], 2 * kPi);
    }
    // Same state up to global phase.
    const auto a = oracle::product_state(s.thetas, s.phis);
    const auto b = oracle::product_state(c.thetas, c.phis);
    EXPECT_NEAR(std::abs(a.dot(b)), 1.0, 1e-12);
  }
}

TEST(OptimizeQmf, SingleQubitZ) {
  const auto op = SparsePauliOp::from_labels(1, {{"Z0", 1.0}});
  QmfState start(1);
  start.thetas[0] = 0.3;
  const auto r = optimize_qmf(op, start);
  EXPECT_NEAR(r.energy, -1.0, 1e-12);
  EXPECT_NEAR(r.state.thetas[0], kPi, 1e-6);
}

TEST(OptimizeQmf, SingleQubitX) {
  const auto op = SparsePauliOp::from_labels(1, {{"X0", 1.0}});
  const auto r = optimize_qmf(op, QmfState(1));
  EXPECT_NEAR(r.energy, -1.0, 1e-12);
  EXPECT_NEAR(r.state.thetas[0], kPi / 2, 1e-6);
  EXPECT_NEAR(r.state.phis[0], kPi, 1e-6);
}

TEST(OptimizeQmf, HartreeFockIsStationary) {
  const auto fi = read_fcidump(fixtures::path("h2_sto3g_0.74.fcidump"));
  const auto m = map_hamiltonian(fi, {});
  QmfOptions opts;
  opts.random_restarts = 0;
  const auto r = optimize_qmf(m.hamiltonian, QmfState::from_bits(m.reference), opts);
  EXPECT_NEAR(r.energy, hartree_fock_energy(fi), 1e-8);
}

TEST(OptimizeQmf, NeverAboveInitialAndDeterministic) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    const auto h = oracle::random_hermitian(rng, n, 20);
    const auto s = random_state(rng, n);
    QmfOptions opts;
    opts.seed = 99;
    const auto r1 = optimize_qmf(h, s, opts);
    const auto r2 = optimize_qmf(h, s, opts);
    EXPECT_LE(r1.energy, qmf_expectation(h, s) + 1e-12);
    EXPECT_EQ(r1.energy, r2.energy);
    EXPECT_EQ(r1.state.thetas, r2.state.thetas);
    EXPECT_NEAR(qmf_expectation(h, r1.state), r1.energy, 1e-10);
  }
}

TEST(NearestBasisState, Examples) {
  EXPECT_EQ(nearest_basis_state(QmfState({0.0, kPi}, {0.0, 0.0})).to_string(), "01");
  EXPECT_EQ(nearest_basis_state(QmfState({0.1, 3.0}, {0.0, 0.0})).to_string(), "01");
  EXPECT_EQ(nearest_basis_state(QmfState({kPi / 2}, {0.0})).to_string(), "0");
}

TEST(NearestBasisState, MaximizesOverlap) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const auto s = random_state(rng, n);
    const auto v = oracle::product_state(s.thetas, s.phis);
    const auto best = nearest_basis_state(s);
    std::size_t idx = 0;
    for (auto q : best.set_indices()) idx |= std::size_t{1} << q;
    for (Eigen::Index b = 0; b < v.size(); ++b) EXPECT_GE(std::norm(v(idx)), std::norm(v(b)) - 1e-15);
  }
}

TEST(BasisExpectation, Examples) {
  EXPECT_EQ(basis_expectation(SparsePauliOp::from_labels(1, {{"Z0", 1.0}}), BitVec::from_string("1")), -1.0);
  EXPECT_EQ(basis_expectation(SparsePauliOp::from_labels(1, {{"X0", 1.0}}), BitVec::from_string("1")), 0.0);
}

TEST(BasisExpectation, EqualsQmfAtBasisAngles) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const auto h = oracle::random_hermitian(rng, n, 25);
    BitVec b(n);
    for (std::size_t q = 0; q < n; ++q) b.set(q, rng() & 1);
    EXPECT_NEAR(basis_expectation(h, b), qmf_expectation(h, QmfState::from_bits(b)), 1e-14);
  }
}

TEST(BasisMatrixElement, MatchesDense) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    const auto h = oracle::random_hermitian(rng, n, 10);
    const auto H = oracle::dense(h);
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i)
      for (std::size_t j = 0; j < (std::size_t{1} << n); ++j) {
        BitVec bi(n), bj(n);
        for (std::size_t q = 0; q < n; ++q) {
          bi.set(q, (i >> q) & 1);
          bj.set(q, (j >> q) & 1);
        }
        EXPECT_LT(std::abs(basis_matrix_element(h, bi, bj) - H(i, j)), 1e-12);
      }
  }
}
