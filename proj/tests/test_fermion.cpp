#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "fock_oracle.hpp"
#include "oracle.hpp"
#include "qccilc/errors.hpp"
#include "qccilc/fermion.hpp"

using namespace qccilc;

namespace {

constexpr auto kBlocked = OrbitalOrdering::kBlocked;
constexpr auto kInterleaved = OrbitalOrdering::kInterleaved;

const char* kTinyDump =
    " &FCI NORB=2,NELEC=2,MS2=0,\n"
    "  ORBSYM=1,1,\n"
    "  ISYM=1,\n"
    " &END\n"
    "  0.6 1 1 1 1\n"
    "  0.2 2 1 1 1\n"
    "  0.1 2 1 2 1\n"
    "  0.5 2 2 1 1\n"
    "  0.55 2 2 2 2\n"
    " -1.2563 1 1 0 0\n"
    "  0.05 2 1 0 0\n"
    " -0.47 2 2 0 0\n"
    "  0.7137 0 0 0 0\n";

Eigen::MatrixXd real_part(const oracle::Mat& m) { return m.real(); }

}  // namespace

TEST(Fcidump, HeaderAndLines) {
  const auto fi = parse_fcidump(kTinyDump);
  EXPECT_EQ(fi.n_orbitals, 2);
  EXPECT_EQ(fi.n_electrons, 2);
  EXPECT_EQ(fi.ms2, 0);
  EXPECT_DOUBLE_EQ(fi.core_energy, 0.7137);
  EXPECT_DOUBLE_EQ(fi.h(0, 0), -1.2563);
  EXPECT_DOUBLE_EQ(fi.h(0, 1), 0.05);
  EXPECT_DOUBLE_EQ(fi.h(1, 0), 0.05);
  EXPECT_DOUBLE_EQ(fi.g(0, 0, 1, 0), 0.2);
  EXPECT_DOUBLE_EQ(fi.g(0, 1, 0, 0), 0.2);
  EXPECT_DOUBLE_EQ(fi.g(0, 1, 1, 0), 0.1);
  EXPECT_DOUBLE_EQ(fi.g(0, 0, 1, 1), 0.5);
  EXPECT_NO_THROW(fi.validate());
}

TEST(Fcidump, FortranExponentsAndOneLineHeader) {
  const auto fi = parse_fcidump("&FCI NORB=1, NELEC=1, MS2=1 /\n 1.5D-01 1 1 0 0\n");
  EXPECT_EQ(fi.ms2, 1);
  EXPECT_DOUBLE_EQ(fi.h(0, 0), 0.15);
}

TEST(Fcidump, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_fcidump(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string head = "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n";
  EXPECT_EQ(line_of(head + "0.1 1 1 0 0\n0.2 3 1 0 0\n"), 4u);
  EXPECT_EQ(line_of(head + "abc 1 1 0 0\n"), 3u);
  EXPECT_EQ(line_of(head + "0.1 1 1 0\n"), 3u);
  EXPECT_EQ(line_of(head + "0.1 1 0 1 0\n"), 3u);
  EXPECT_THROW(parse_fcidump("NORB=2\n0.1 1 1 0 0\n"), ParseError);
  EXPECT_THROW(parse_fcidump("&FCI NELEC=2\n&END\n"), ParseError);
  EXPECT_THROW(parse_fcidump("&FCI NORB=1,NELEC=3\n&END\n"), ParseError);
}

TEST(FermionOp, NormalOrdering) {
  FermionOp f(2);
  f.add({annihilate(0), create(0)}, 1.0);
  EXPECT_EQ(f.size(), 2u);
  EXPECT_EQ(f.coeff({}), Complex(1.0));
  EXPECT_EQ(f.coeff({create(0), annihilate(0)}), Complex(-1.0));

  FermionOp g(2);
  g.add({create(1), create(0)}, 1.0);
  EXPECT_EQ(g.coeff({create(0), create(1)}), Complex(-1.0));

  FermionOp z(2);
  z.add({create(1), create(1)}, 1.0);
  z.add({annihilate(0), annihilate(0)}, 1.0);
  EXPECT_EQ(z.size(), 0u);
}

TEST(FermionOp, CanonicalAnticommutatorsUnderJw) {
  const int n = 4;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      FermionOp ap(n), aq_dag(n);
      ap.add({annihilate(p)}, 1.0);
      aq_dag.add({create(q)}, 1.0);
      const auto lhs = jordan_wigner(ap * aq_dag + aq_dag * ap, n);
      if (p == q) {
        EXPECT_EQ(lhs, SparsePauliOp::identity(n));
      } else {
        EXPECT_TRUE(lhs.empty());
      }
      // Same identity on the raw qubit images, without normal ordering.
      const auto A = jordan_wigner(ap, n), B = jordan_wigner(aq_dag, n);
      const auto raw = multiply(A, B) + multiply(B, A);
      EXPECT_EQ(raw, p == q ? SparsePauliOp::identity(n) : SparsePauliOp(n));
      const auto Ap = parity_map(ap, n), Bp = parity_map(aq_dag, n);
      EXPECT_EQ(multiply(Ap, Bp) + multiply(Bp, Ap), p == q ? SparsePauliOp::identity(n) : SparsePauliOp(n));
    }
}

TEST(JordanWigner, SquareOfCreatorVanishes) {
  for (int p = 0; p < 5; ++p) {
    FermionOp c(5);
    c.add({create(p)}, 1.0);
    const auto img = jordan_wigner(c, 5);
    EXPECT_TRUE(multiply(img, img).empty());
    const auto pimg = parity_map(c, 5);
    EXPECT_TRUE(multiply(pimg, pimg).empty());
  }
}

TEST(JordanWigner, NumberOperator) {
  FermionOp f(1);
  f.add({create(0), annihilate(0)}, 1.0);
  EXPECT_EQ(jordan_wigner(f, 1), SparsePauliOp::from_labels(1, {{"I", 0.5}, {"Z0", -0.5}}));
  EXPECT_EQ(parity_map(f, 1), SparsePauliOp::from_labels(1, {{"I", 0.5}, {"Z0", -0.5}}));
}

TEST(JordanWigner, Hopping) {
  FermionOp f(2);
  f.add({create(0), annihilate(1)}, 1.0);
  f.add({create(1), annihilate(0)}, 1.0);
  const auto h = jordan_wigner(f, 2);
  EXPECT_EQ(h, SparsePauliOp::from_labels(2, {{"X0 X1", 0.5}, {"Y0 Y1", 0.5}}));
  // 4x4 matrix: hopping between |01> and |10> occupations
  Eigen::Matrix4cd expect = Eigen::Matrix4cd::Zero();
  expect(1, 2) = expect(2, 1) = 1.0;
  EXPECT_LT(oracle::max_abs(oracle::dense(h) - expect), 1e-14);
}

TEST(JordanWigner, Constant) {
  EXPECT_EQ(jordan_wigner(FermionOp::constant(3, 2.5), 3), SparsePauliOp::identity(3, 2.5));
}

TEST(Parity, NumberOperatorSpectrum) {
  const auto n_op = number_operator(2);
  const auto ev_p = oracle::eigenvalues(oracle::dense(parity_map(n_op, 2)));
  const auto ev_j = oracle::eigenvalues(oracle::dense(jordan_wigner(n_op, 2)));
  Eigen::Vector4d expect(0, 1, 1, 2);
  EXPECT_LT((ev_p - expect).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((ev_j - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Hamiltonian, OneOrbitalNoTwoBody) {
  FermionIntegrals fi(1, 1, 1);
  fi.set_h(0, 0, -0.8);
  fi.core_energy = 0.3;
  const auto f = build_fermion_hamiltonian(fi);
  EXPECT_EQ(f.size(), 3u);
  EXPECT_EQ(f.coeff({}), Complex(0.3));
  EXPECT_EQ(f.coeff({create(0), annihilate(0)}), Complex(-0.8));
  EXPECT_EQ(f.coeff({create(1), annihilate(1)}), Complex(-0.8));
}

TEST(Hamiltonian, ZeroIntegralsGiveConstant) {
  FermionIntegrals fi(2, 2, 0);
  fi.core_energy = 1.25;
  EXPECT_EQ(jordan_wigner(build_fermion_hamiltonian(fi), 4), SparsePauliOp::identity(4, 1.25));
}

TEST(Hamiltonian, H2TermCount) {
  const auto fi = read_fcidump(fixtures::path("h2_sto3g_0.74.fcidump"));
  const auto h = jordan_wigner(build_fermion_hamiltonian(fi), 4);
  EXPECT_EQ(h.size(), 15u);
  EXPECT_TRUE(h.is_hermitian(1e-14));
}

class FixtureTest : public ::testing::TestWithParam<fixtures::Molecule> {};

TEST_P(FixtureTest, JwMatrixEqualsDeterminantOracle) {
  const auto fi = read_fcidump(fixtures::path(GetParam().file));
  if (fi.n_modes() > 8) GTEST_SKIP();
  for (auto ordering : {kBlocked, kInterleaved}) {
    const auto h = jordan_wigner(build_fermion_hamiltonian(fi, ordering), fi.n_modes(), 0.0);
    const auto dense = oracle::dense(h);
    const auto ref = fock::hamiltonian(fi, ordering);
    EXPECT_LT(oracle::max_abs(dense - ref.cast<Complex>()), 1e-10);
  }
}

TEST_P(FixtureTest, SectorGroundEnergyMatchesFullCi) {
  const auto fi = read_fcidump(fixtures::path(GetParam().file));
  const auto h = jordan_wigner(build_fermion_hamiltonian(fi), fi.n_modes());
  const auto idx = fock::sector(fi.n_orbitals, fi.n_electrons, fi.ms2, kBlocked);
  const double e_map = fock::lowest(fock::restrict(real_part(oracle::dense(h)), idx));
  const double e_oracle = fock::lowest(fock::restrict(fock::hamiltonian(fi, kBlocked), idx));
  EXPECT_NEAR(e_map, e_oracle, 1e-10);
  // Fixture-generation CASCI value; limited by the external solver's convergence.
  EXPECT_NEAR(e_map, GetParam().exact_energy, 1e-8);
}

TEST_P(FixtureTest, ParityIsoSpectralWithJw) {
  const auto fi = read_fcidump(fixtures::path(GetParam().file));
  const auto f = build_fermion_hamiltonian(fi);
  const auto ev_j = oracle::eigenvalues(oracle::dense(jordan_wigner(f, fi.n_modes())));
  const auto ev_p = oracle::eigenvalues(oracle::dense(parity_map(f, fi.n_modes())));
  EXPECT_LT((ev_j - ev_p).cwiseAbs().maxCoeff(), 1e-10);
}

TEST_P(FixtureTest, SpinSquaredCommutesWithHamiltonian) {
  const auto fi = read_fcidump(fixtures::path(GetParam().file));
  for (auto mapping : {QubitMapping::kJordanWigner, QubitMapping::kParity}) {
    const auto h = map_to_qubits(build_fermion_hamiltonian(fi), fi.n_modes(), mapping);
    const auto s2 = map_to_qubits(s_squared(fi.n_orbitals), fi.n_modes(), mapping);
    EXPECT_TRUE((multiply(s2, h) - multiply(h, s2)).empty());
  }
}

TEST_P(FixtureTest, HartreeFockExpectation) {
  const auto fi = read_fcidump(fixtures::path(GetParam().file));
  for (auto ordering : {kBlocked, kInterleaved}) {
    const auto ref = fock::hamiltonian(fi, ordering);
    const auto occ = hartree_fock_bitstring(fi, ordering, QubitMapping::kJordanWigner);
    std::size_t index = 0;
    for (auto i : occ.set_indices()) index |= std::size_t{1} << i;
    const double e_oracle = ref(index, index);
    EXPECT_NEAR(hartree_fock_energy(fi), e_oracle, 1e-10);
    for (auto mapping : {QubitMapping::kJordanWigner, QubitMapping::kParity}) {
      const auto h = map_to_qubits(build_fermion_hamiltonian(fi, ordering), fi.n_modes(), mapping);
      const auto bits = hartree_fock_bitstring(fi, ordering, mapping);
      std::size_t b = 0;
      for (auto i : bits.set_indices()) b |= std::size_t{1} << i;
      EXPECT_NEAR(oracle::dense(h)(b, b).real(), e_oracle, 1e-10);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Molecules, FixtureTest, ::testing::ValuesIn(fixtures::all()),
                         [](const auto& info) {
                           std::string name = info.param.file.substr(0, info.param.file.find(".fcidump"));
                           for (auto& c : name)
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           return name;
                         });

namespace {

double s2_expectation(int n_orb, const std::vector<int>& occupied_modes, OrbitalOrdering o) {
  const auto s2 = jordan_wigner(s_squared(n_orb, o), 2 * n_orb);
  std::size_t b = 0;
  for (int m : occupied_modes) b |= std::size_t{1} << m;
  return oracle::dense(s2)(b, b).real();
}

}  // namespace

TEST(SpinSquared, DeterminantValues) {
  for (auto o : {kBlocked, kInterleaved}) {
    const int a0 = spin_orbital(0, 0, 2, o), b0 = spin_orbital(0, 1, 2, o), a1 = spin_orbital(1, 0, 2, o);
    EXPECT_NEAR(s2_expectation(2, {a0, b0}, o), 0.0, 1e-14);
    EXPECT_NEAR(s2_expectation(2, {a0}, o), 0.75, 1e-14);
    EXPECT_NEAR(s2_expectation(2, {a0, a1}, o), 2.0, 1e-14);
  }
}

TEST(SpinPenalty, ZeroMuIsIdentity) {
  const auto h = SparsePauliOp::from_labels(2, {{"Z0", 1.0}, {"X0 X1", 0.2}});
  const auto s2 = SparsePauliOp::from_labels(2, {{"Z1", 1.0}});
  EXPECT_EQ(add_spin_penalty(h, s2, 0.0), h);
  EXPECT_THROW(add_spin_penalty(h, SparsePauliOp(3), 0.5), DimensionError);
}

TEST(SpinPenalty, TermCountIsMergeCount) {
  const auto fi = read_fcidump(fixtures::path("lih_sto3g_cas23_1.6.fcidump"));
  const auto h = jordan_wigner(build_fermion_hamiltonian(fi), 6);
  const auto s2 = jordan_wigner(s_squared(3), 6);
  EXPECT_EQ(add_spin_penalty(h, s2, 0.5).size(), op_combine(h, s2, 1.0, 0.25).size());
}

TEST(SpinPenalty, ShiftsTripletOnly) {
  const auto fi = read_fcidump(fixtures::path("h2_sto3g_0.74.fcidump"));
  const auto h = jordan_wigner(build_fermion_hamiltonian(fi), 4);
  const auto hs = add_spin_penalty(h, jordan_wigner(s_squared(2), 4), 0.5);
  const auto singlet = fock::sector(2, 2, 0, kBlocked);
  const auto triplet = fock::sector(2, 2, 2, kBlocked);  // both electrons spin up
  const auto H = real_part(oracle::dense(h)), Hs = real_part(oracle::dense(hs));
  EXPECT_NEAR(fock::lowest(fock::restrict(Hs, singlet)), fock::lowest(fock::restrict(H, singlet)), 1e-10);
  EXPECT_NEAR(fock::lowest(fock::restrict(Hs, triplet)), fock::lowest(fock::restrict(H, triplet)) + 0.5, 1e-10);
}

TEST(HartreeFock, Bitstrings) {
  FermionIntegrals fi(2, 2, 0);
  EXPECT_EQ(hartree_fock_bitstring(fi, kInterleaved, QubitMapping::kJordanWigner).to_string(), "1100");
  EXPECT_EQ(hartree_fock_bitstring(fi, kBlocked, QubitMapping::kJordanWigner).to_string(), "1010");
  EXPECT_EQ(hartree_fock_bitstring(fi, kBlocked, QubitMapping::kParity).to_string(), "1100");
  EXPECT_EQ(hartree_fock_bitstring(fi, kInterleaved, QubitMapping::kParity).to_string(), "1000");
  FermionIntegrals empty(2, 0, 0);
  EXPECT_EQ(hartree_fock_bitstring(empty, kBlocked, QubitMapping::kJordanWigner).to_string(), "0000");
  FermionIntegrals bad(1, 2, 2);
  EXPECT_THROW(hartree_fock_bitstring(bad, kBlocked, QubitMapping::kJordanWigner), ContractError);
}

TEST(Mapping, MapHamiltonianBundlesReference) {
  const auto fi = read_fcidump(fixtures::path("h2_sto3g_0.74.fcidump"));
  MappingOptions opts;
  opts.mapping = QubitMapping::kParity;
  const auto m = map_hamiltonian(fi, opts);
  EXPECT_EQ(m.n_qubits, 4);
  EXPECT_EQ(m.reference.to_string(), "1100");
  EXPECT_THROW(parse_mapping("bk"), ContractError);
  EXPECT_EQ(parse_ordering("interleaved"), kInterleaved);
}
