#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "qccilc/errors.hpp"
#include "qccilc/pauli.hpp"
#include "qccilc/pauli_io.hpp"

using namespace qccilc;

namespace {

PauliWord W(std::string_view label, std::size_t n) { return PauliWord::parse(label, n); }

const Complex I(0, 1);

}  // namespace

TEST(WordMultiply, SingleQubitXY) {
  auto [phase, w] = word_multiply(W("X0", 1), W("Y0", 1));
  EXPECT_EQ(phase.value(), I);
  EXPECT_EQ(w, W("Z0", 1));
}

TEST(WordMultiply, IdentityIsNeutral) {
  const auto p = W("X0 Y2 Z3", 4);
  auto [phase, w] = word_multiply(PauliWord(4), p);
  EXPECT_EQ(phase.k, 0);
  EXPECT_EQ(w, p);
}

TEST(WordMultiply, TwoQubitProduct) {
  // (X⊗Z)(Y⊗Z) = i Z⊗I, checked against 4x4 matrices below as well.
  auto [phase, w] = word_multiply(W("X0 Z1", 2), W("Y0 Z1", 2));
  EXPECT_EQ(phase.value(), I);
  EXPECT_EQ(w, W("Z0", 2));
  EXPECT_LT(oracle::max_abs(oracle::dense_label("XZ") * oracle::dense_label("YZ") -
                            I * oracle::dense_label("ZI")),
            1e-14);
}

TEST(WordMultiply, DimensionMismatchThrows) {
  EXPECT_THROW(word_multiply(W("X0", 1), W("X0", 2)), DimensionError);
  EXPECT_THROW(commutes(W("X0", 1), W("X0", 2)), DimensionError);
}

TEST(WordMultiply, MatchesDenseMatricesRandom) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const auto a = oracle::random_word(rng, n);
    const auto b = oracle::random_word(rng, n);
    auto [phase, c] = word_multiply(a, b);
    EXPECT_EQ(c.x(), a.x() ^ b.x());
    EXPECT_EQ(c.z(), a.z() ^ b.z());
    const oracle::Mat lhs = oracle::dense(a) * oracle::dense(b);
    EXPECT_LT(oracle::max_abs(lhs - phase.value() * oracle::dense(c)), 1e-12);
  }
}

TEST(WordMultiply, AssociativeAndInvolutory) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 70;  // crosses the limb boundary
    const auto a = oracle::random_word(rng, n);
    const auto b = oracle::random_word(rng, n);
    const auto c = oracle::random_word(rng, n);
    auto [p_ab, ab] = word_multiply(a, b);
    auto [p_ab_c, ab_c] = word_multiply(ab, c);
    auto [p_bc, bc] = word_multiply(b, c);
    auto [p_a_bc, a_bc] = word_multiply(a, bc);
    EXPECT_EQ(ab_c, a_bc);
    EXPECT_EQ(p_ab * p_ab_c, p_bc * p_a_bc);
    auto [p_aa, aa] = word_multiply(a, a);
    EXPECT_EQ(p_aa.k, 0);
    EXPECT_TRUE(aa.is_identity());
  }
}

TEST(Commutes, Examples) {
  EXPECT_FALSE(commutes(W("X0", 1), W("Z0", 1)));
  EXPECT_FALSE(commutes(W("X0 X1", 2), W("Y0 X1", 2)));
  EXPECT_TRUE(commutes(W("X0 Y1", 2), W("Y0 X1", 2)));
}

TEST(Commutes, AgreesWithDenseCommutator) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const auto a = oracle::random_word(rng, n);
    const auto b = oracle::random_word(rng, n);
    const auto A = oracle::dense(a);
    const auto B = oracle::dense(b);
    const bool dense_commutes = oracle::max_abs(A * B - B * A) < 1e-12;
    EXPECT_EQ(commutes(a, b), dense_commutes) << a.to_string() << " , " << b.to_string();
  }
}

TEST(OpCombine, CancellationGivesEmpty) {
  const auto h = SparsePauliOp::from_labels(2, {{"X0 X1", 0.3}, {"Z1", -1.2}});
  EXPECT_TRUE(op_combine(h, h, 1.0, -1.0).empty());
}

TEST(OpCombine, SubThresholdMergeKeepsDominantTerm) {
  const auto a = SparsePauliOp::from_labels(1, {{"X0", 1.0}});
  const auto b = SparsePauliOp::from_labels(1, {{"X0", 1e-12}}, 0.0);
  const auto sum = op_combine(a, b);
  ASSERT_EQ(sum.size(), 1u);
  EXPECT_NEAR(sum.coeff(W("X0", 1)).real(), 1.0, 1e-11);
}

TEST(OpCombine, DisjointWords) {
  const auto a = SparsePauliOp::from_labels(1, {{"X0", 0.5}});
  const auto b = SparsePauliOp::from_labels(1, {{"Z0", 0.5}});
  EXPECT_EQ((a + b).size(), 2u);
}

TEST(OpCombine, PruneBeforeOrAfterAgreeAboveThreshold) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    // magnitudes in [1e-6, 1], all > 10x the 1e-8 threshold
    std::vector<std::pair<PauliWord, Complex>> ta, tb;
    for (int k = 0; k < 20; ++k) {
      ta.emplace_back(oracle::random_word(rng, 3), std::pow(10.0, -oracle::uniform(rng, 0, 6)));
      tb.emplace_back(oracle::random_word(rng, 3), std::pow(10.0, -oracle::uniform(rng, 0, 6)));
    }
    const SparsePauliOp a_raw(3, ta, 0.0), b_raw(3, tb, 0.0);
    const auto pruned_first = op_combine(a_raw.with_prune_threshold(1e-8), b_raw.with_prune_threshold(1e-8));
    const auto pruned_after = op_combine(a_raw, b_raw).with_prune_threshold(1e-8);
    EXPECT_EQ(pruned_first, pruned_after);
  }
}

TEST(Commutator, Examples) {
  const auto xy = commutator(SparsePauliOp::from_labels(1, {{"X0", 1.0}}), W("Y0", 1));
  ASSERT_EQ(xy.size(), 1u);
  EXPECT_EQ(xy.coeff(W("Z0", 1)), 2.0 * I);

  EXPECT_TRUE(commutator(SparsePauliOp::from_labels(2, {{"Z0", 1.0}}), W("Z0 Z1", 2)).empty());

  const auto sum = commutator(SparsePauliOp::from_labels(1, {{"X0", 1.0}, {"Z0", 1.0}}), W("Y0", 1));
  ASSERT_EQ(sum.size(), 2u);
  EXPECT_EQ(sum.coeff(W("Z0", 1)), 2.0 * I);
  EXPECT_EQ(sum.coeff(W("X0", 1)), -2.0 * I);
}

TEST(Commutator, MatchesDenseRandom) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const auto h = oracle::random_hermitian(rng, n, 1 + rng() % 12);
    const auto t = oracle::random_word(rng, n);
    const auto c = commutator(h, t);
    EXPECT_LE(c.size(), h.size());
    const auto H = oracle::dense(h);
    const auto T = oracle::dense(t);
    EXPECT_LT(oracle::max_abs(oracle::dense(c) - (H * T - T * H)), 1e-12);
  }
}

TEST(Sandwich, Examples) {
  const auto yxy = sandwich(W("Y0", 1), SparsePauliOp::from_labels(1, {{"X0", 1.0}}), W("Y0", 1));
  ASSERT_EQ(yxy.size(), 1u);
  EXPECT_EQ(yxy.coeff(W("X0", 1)), Complex(-1.0));

  const auto c = SparsePauliOp::identity(3, 0.7);
  const auto t = W("X0 Y1 Z2", 3);
  EXPECT_EQ(sandwich(t, c, t), c);

  const auto xzy = sandwich(W("X0", 1), SparsePauliOp::from_labels(1, {{"Z0", 1.0}}), W("Y0", 1));
  ASSERT_EQ(xzy.size(), 1u);
  EXPECT_EQ(xzy.coeff(PauliWord(1)), -I);
}

TEST(Sandwich, MatchesDenseAndPreservesHermiticity) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const auto h = oracle::random_hermitian(rng, n, 1 + rng() % 10);
    const auto t1 = oracle::random_word(rng, n);
    const auto t2 = oracle::random_word(rng, n);
    EXPECT_LT(oracle::max_abs(oracle::dense(sandwich(t1, h, t2)) -
                              oracle::dense(t1) * oracle::dense(h) * oracle::dense(t2)),
              1e-12);
    EXPECT_TRUE(sandwich(t1, h, t1).is_hermitian(1e-14));
  }
}

TEST(Parity, Examples) {
  EXPECT_EQ(y_parity(W("Y0 X1", 2)), 1);
  EXPECT_EQ(y_parity(W("Y0 Y1", 2)), 0);
  EXPECT_EQ(x_parity(W("X0 X1 Z2", 3)), 0);
}

TEST(CountEvenY, Values) {
  EXPECT_EQ(count_even_y_words(4), 136u);
  EXPECT_EQ(count_even_y_words(1), 3u);
  EXPECT_EQ(count_even_y_words(2), 10u);
  EXPECT_THROW(count_even_y_words(0), ContractError);
}

TEST(CountEvenY, MatchesEnumeration) {
  for (int n = 1; n <= 6; ++n) {
    std::uint64_t count = 0;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * n)); ++code) {
      std::string label(n, 'I');
      for (int q = 0; q < n; ++q) label[q] = "IXYZ"[(code >> (2 * q)) & 3];
      if (y_parity(PauliWord::from_dense(label)) == 0) ++count;
    }
    EXPECT_EQ(count_even_y_words(n), count) << "n=" << n;
  }
}

TEST(PauliText, SingleTermFormat) {
  const auto op = SparsePauliOp::from_labels(3, {{"X0 Z2", 0.5}});
  EXPECT_EQ(to_pauli_text(op), "qubits 3\n0.5 0.0 X0 Z2\n");
}

TEST(PauliText, EmptyOperatorIsHeaderOnly) {
  EXPECT_EQ(to_pauli_text(SparsePauliOp(4)), "qubits 4\n");
}

TEST(PauliText, CanonicalOrder) {
  // x bits compared first as integers, then z bits
  const auto op = SparsePauliOp::from_labels(2, {{"X1", 1.0}, {"Z0", 2.0}, {"X0", 3.0}, {"I", 4.0}});
  EXPECT_EQ(to_pauli_text(op),
            "qubits 2\n4.0 0.0 I\n2.0 0.0 Z0\n3.0 0.0 X0\n1.0 0.0 X1\n");
}

TEST(PauliText, RoundTripIsBitExact) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 70;
    std::vector<std::pair<PauliWord, Complex>> terms;
    for (int k = 0; k < 25; ++k) {
      terms.emplace_back(oracle::random_word(rng, n),
                         Complex(oracle::uniform(rng, -3, 3), oracle::uniform(rng, -1e-3, 1e-3)));
    }
    const SparsePauliOp op(n, terms);
    const auto text = to_pauli_text(op);
    const auto back = parse_pauli_text(text);
    EXPECT_EQ(back, op);
    EXPECT_EQ(to_pauli_text(back), text);
  }
}

TEST(PauliText, ParsesCommentsAndIdentity) {
  const auto op = parse_pauli_text("# a comment\nqubits 2\n# reference 10\n1.5 0 I  # constant\n-0.25 0.0 Y0 Y1\n");
  EXPECT_EQ(op.size(), 2u);
  EXPECT_EQ(op.coeff(PauliWord(2)), Complex(1.5));
  EXPECT_EQ(op.coeff(W("Y0 Y1", 2)), Complex(-0.25));
  auto hint = find_reference_hint("qubits 2\n# reference 10\n");
  ASSERT_TRUE(hint.has_value());
  EXPECT_EQ(hint->to_string(), "10");
}

TEST(PauliText, ErrorsCarryLineNumbers) {
  try {
    parse_pauli_text("qubits 2\n1.0 0.0 X0\n1.0 zz X1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_pauli_text("qubits 2\n1.0 0.0 X1 X0\n"), ParseError);
  EXPECT_THROW(parse_pauli_text("qubits 2\n1.0 0.0 X2\n"), ParseError);
  EXPECT_THROW(parse_pauli_text("1.0 0.0 X0\n"), ParseError);
  EXPECT_THROW(parse_pauli_text(""), ParseError);
  EXPECT_THROW(parse_pauli_text("qubits 2\n1.0 0.0 Q1\n"), ParseError);
}
