#include "qccilc/pauli.hpp"

#include <cctype>
#include <cmath>

#include "qccilc/errors.hpp"

namespace qccilc {

PauliWord::PauliWord(BitVec x, BitVec z) : x_(std::move(x)), z_(std::move(z)) {
  if (x_.size() != z_.size()) {
    throw DimensionError("PauliWord: x and z bit vectors differ in length");
  }
}

PauliWord PauliWord::parse(std::string_view label, std::size_t n) {
  PauliWord w(n);
  std::size_t pos = 0;
  bool saw_identity = false;
  bool saw_factor = false;
  long last = -1;
  while (pos < label.size()) {
    while (pos < label.size() && std::isspace(static_cast<unsigned char>(label[pos]))) ++pos;
    if (pos >= label.size()) break;
    const char c = label[pos++];
    if (c == 'I' && (pos >= label.size() || std::isspace(static_cast<unsigned char>(label[pos])))) {
      saw_identity = true;
      continue;
    }
    if (c != 'X' && c != 'Y' && c != 'Z') {
      throw ParseError(0, "bad Pauli factor '" + std::string(1, c) + "' in \"" + std::string(label) + "\"");
    }
    std::size_t start = pos;
    while (pos < label.size() && std::isdigit(static_cast<unsigned char>(label[pos]))) ++pos;
    if (start == pos) {
      throw ParseError(0, "Pauli factor without qubit index in \"" + std::string(label) + "\"");
    }
    const long q = std::stol(std::string(label.substr(start, pos - start)));
    if (q <= last) {
      throw ParseError(0, "qubit indices must be strictly increasing in \"" + std::string(label) + "\"");
    }
    if (static_cast<std::size_t>(q) >= n) {
      throw ParseError(0, "qubit index " + std::to_string(q) + " out of range for " +
                              std::to_string(n) + " qubits");
    }
    last = q;
    saw_factor = true;
    if (c == 'X' || c == 'Y') w.x_.set(static_cast<std::size_t>(q));
    if (c == 'Z' || c == 'Y') w.z_.set(static_cast<std::size_t>(q));
  }
  if (saw_identity && saw_factor) {
    throw ParseError(0, "identity literal mixed with factors in \"" + std::string(label) + "\"");
  }
  if (!saw_identity && !saw_factor) throw ParseError(0, "empty Pauli word");
  return w;
}

PauliWord PauliWord::from_dense(std::string_view label) {
  PauliWord w(label.size());
  for (std::size_t q = 0; q < label.size(); ++q) {
    switch (label[q]) {
      case 'I': break;
      case 'X': w.x_.set(q); break;
      case 'Y': w.x_.set(q); w.z_.set(q); break;
      case 'Z': w.z_.set(q); break;
      default: throw ParseError(0, "bad dense Pauli label \"" + std::string(label) + "\"");
    }
  }
  return w;
}

char PauliWord::op(std::size_t q) const noexcept {
  constexpr char table[4] = {'I', 'Z', 'X', 'Y'};
  return table[(x_.get(q) ? 2 : 0) + (z_.get(q) ? 1 : 0)];
}

std::string PauliWord::to_string() const {
  std::string s;
  for (auto q : (x_ | z_).set_indices()) {
    if (!s.empty()) s += ' ';
    s += op(q);
    s += std::to_string(q);
  }
  return s.empty() ? "I" : s;
}

std::string PauliWord::to_dense() const {
  std::string s(num_qubits(), 'I');
  for (std::size_t q = 0; q < s.size(); ++q) s[q] = op(q);
  return s;
}

// With P = i^{x·z} X^x Z^z, moving Z^{z_a} past X^{x_b} costs (-1)^{z_a·x_b}, so
//   a·b = i^{|x_a z_a| + |x_b z_b| - |x_c z_c| + 2|z_a x_b|} c.
std::pair<FourthRootPhase, PauliWord> word_multiply(const PauliWord& a, const PauliWord& b) {
  check_same_qubits(a.num_qubits(), b.num_qubits(), "word_multiply");
  PauliWord c(a.x() ^ b.x(), a.z() ^ b.z());
  const auto ya = static_cast<int>(a.y_count() & 3);
  const auto yb = static_cast<int>(b.y_count() & 3);
  const auto yc = static_cast<int>(c.y_count() & 3);
  const auto swaps = static_cast<int>(and_popcount(a.z(), b.x()) & 1);
  return {FourthRootPhase(ya + yb - yc + 2 * swaps), std::move(c)};
}

bool commutes(const PauliWord& a, const PauliWord& b) {
  check_same_qubits(a.num_qubits(), b.num_qubits(), "commutes");
  return ((and_popcount(a.x(), b.z()) + and_popcount(a.z(), b.x())) & 1) == 0;
}

int y_parity(const PauliWord& w) noexcept { return static_cast<int>(w.y_count() & 1); }
int x_parity(const PauliWord& w) noexcept { return static_cast<int>(w.x().popcount() & 1); }

std::uint64_t count_even_y_words(int n_qubits) {
  if (n_qubits < 1) throw ContractError("count_even_y_words: n_qubits must be >= 1");
  if (n_qubits > 40) throw ContractError("count_even_y_words: result would overflow 64 bits");
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n, j) for the running j
  std::vector<std::uint64_t> pow3(static_cast<std::size_t>(n_qubits) + 1, 1);
  for (int j = 1; j <= n_qubits; ++j) pow3[j] = pow3[j - 1] * 3;
  for (int j = 0; j <= n_qubits; ++j) {
    if (j % 2 == 0) total += binom * pow3[n_qubits - j];
    binom = binom * static_cast<std::uint64_t>(n_qubits - j) / static_cast<std::uint64_t>(j + 1);
  }
  return total;
}

SparsePauliOp::SparsePauliOp(std::size_t n_qubits, double prune_threshold)
    : n_qubits_(n_qubits), prune_(prune_threshold) {
  if (prune_threshold < 0) throw ContractError("prune threshold must be non-negative");
}

SparsePauliOp::SparsePauliOp(std::size_t n_qubits,
                             const std::vector<std::pair<PauliWord, Complex>>& terms,
                             double prune_threshold) {
  PauliAccumulator acc(n_qubits, prune_threshold);
  for (const auto& [w, c] : terms) acc.add(w, c);
  *this = std::move(acc).finish();
}

SparsePauliOp SparsePauliOp::from_labels(
    std::size_t n_qubits, std::initializer_list<std::pair<std::string_view, Complex>> terms,
    double prune_threshold) {
  PauliAccumulator acc(n_qubits, prune_threshold);
  for (const auto& [label, c] : terms) acc.add(PauliWord::parse(label, n_qubits), c);
  return std::move(acc).finish();
}

SparsePauliOp SparsePauliOp::identity(std::size_t n_qubits, Complex c, double prune_threshold) {
  PauliAccumulator acc(n_qubits, prune_threshold);
  acc.add(PauliWord(n_qubits), c);
  return std::move(acc).finish();
}

Complex SparsePauliOp::coeff(const PauliWord& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Complex{} : it->second;
}

bool SparsePauliOp::is_hermitian(double tol) const noexcept { return max_imag() <= tol; }

double SparsePauliOp::max_imag() const noexcept {
  double m = 0;
  for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c.imag()));
  return m;
}

SparsePauliOp SparsePauliOp::with_prune_threshold(double threshold) const {
  PauliAccumulator acc(n_qubits_, threshold);
  acc.add(*this);
  return std::move(acc).finish();
}

void PauliAccumulator::add(const PauliWord& w, Complex c) {
  check_same_qubits(n_qubits_, w.num_qubits(), "PauliAccumulator::add");
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) it->second += c;
}

void PauliAccumulator::add(const SparsePauliOp& op, Complex scale) {
  check_same_qubits(n_qubits_, op.num_qubits(), "PauliAccumulator::add");
  for (const auto& [w, c] : op) {
    auto [it, inserted] = terms_.try_emplace(w, scale * c);
    if (!inserted) it->second += scale * c;
  }
}

SparsePauliOp PauliAccumulator::finish() && {
  SparsePauliOp out(n_qubits_, prune_);
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < prune_ || it->second == Complex{}) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  out.terms_ = std::move(terms_);
  return out;
}

SparsePauliOp op_combine(const SparsePauliOp& a, const SparsePauliOp& b, Complex scale_a,
                         Complex scale_b) {
  check_same_qubits(a.num_qubits(), b.num_qubits(), "op_combine");
  PauliAccumulator acc(a.num_qubits(), a.prune_threshold());
  acc.add(a, scale_a);
  acc.add(b, scale_b);
  return std::move(acc).finish();
}

SparsePauliOp operator+(const SparsePauliOp& a, const SparsePauliOp& b) { return op_combine(a, b, 1.0, 1.0); }
SparsePauliOp operator-(const SparsePauliOp& a, const SparsePauliOp& b) { return op_combine(a, b, 1.0, -1.0); }

SparsePauliOp operator*(Complex s, const SparsePauliOp& a) {
  PauliAccumulator acc(a.num_qubits(), a.prune_threshold());
  acc.add(a, s);
  return std::move(acc).finish();
}

SparsePauliOp multiply(const SparsePauliOp& a, const SparsePauliOp& b) {
  check_same_qubits(a.num_qubits(), b.num_qubits(), "multiply");
  PauliAccumulator acc(a.num_qubits(), a.prune_threshold());
  for (const auto& [wa, ca] : a) {
    for (const auto& [wb, cb] : b) {
      auto [phase, w] = word_multiply(wa, wb);
      acc.add(phase, w, ca * cb);
    }
  }
  return std::move(acc).finish();
}

SparsePauliOp commutator(const SparsePauliOp& h, const PauliWord& t) {
  check_same_qubits(h.num_qubits(), t.num_qubits(), "commutator");
  PauliAccumulator acc(h.num_qubits(), h.prune_threshold());
  for (const auto& [w, c] : h) {
    if (commutes(w, t)) continue;
    auto [phase, p] = word_multiply(w, t);
    acc.add(phase, p, 2.0 * c);
  }
  return std::move(acc).finish();
}

SparsePauliOp sandwich(const PauliWord& t1, const SparsePauliOp& h, const PauliWord& t2) {
  check_same_qubits(h.num_qubits(), t1.num_qubits(), "sandwich");
  check_same_qubits(h.num_qubits(), t2.num_qubits(), "sandwich");
  PauliAccumulator acc(h.num_qubits(), h.prune_threshold());
  for (const auto& [w, c] : h) {
    auto [p1, left] = word_multiply(t1, w);
    auto [p2, full] = word_multiply(left, t2);
    acc.add(p1 * p2, full, c);
  }
  return std::move(acc).finish();
}

}  // namespace qccilc
