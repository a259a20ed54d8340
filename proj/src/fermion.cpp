#include "qccilc/fermion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "qccilc/errors.hpp"
#include "qccilc/pauli_io.hpp"

namespace qccilc {

OrbitalOrdering parse_ordering(std::string_view s) {
  if (s == "blocked") return OrbitalOrdering::kBlocked;
  if (s == "interleaved") return OrbitalOrdering::kInterleaved;
  throw ContractError("unknown orbital ordering '" + std::string(s) + "' (blocked|interleaved)");
}

QubitMapping parse_mapping(std::string_view s) {
  if (s == "jw") return QubitMapping::kJordanWigner;
  if (s == "parity") return QubitMapping::kParity;
  throw ContractError("unknown qubit mapping '" + std::string(s) + "' (jw|parity)");
}

std::string to_string(OrbitalOrdering o) { return o == OrbitalOrdering::kBlocked ? "blocked" : "interleaved"; }
std::string to_string(QubitMapping m) { return m == QubitMapping::kJordanWigner ? "jw" : "parity"; }

// ---------------------------------------------------------------------------
// Integrals

FermionIntegrals::FermionIntegrals(int n_orb, int n_elec, int ms)
    : n_orbitals(n_orb), n_electrons(n_elec), ms2(ms) {
  if (n_orb < 1) throw ContractError("FermionIntegrals: need at least one orbital");
  const auto n = static_cast<std::size_t>(n_orb);
  one_body.assign(n * n, 0.0);
  two_body.assign(n * n * n * n, 0.0);
}

void FermionIntegrals::set_h(int p, int q, double v) {
  one_body[static_cast<std::size_t>(p * n_orbitals + q)] = v;
  one_body[static_cast<std::size_t>(q * n_orbitals + p)] = v;
}

void FermionIntegrals::set_g(int p, int q, int r, int s, double v) {
  for (auto [a, b] : {std::pair{p, q}, std::pair{q, p}}) {
    for (auto [c, d] : {std::pair{r, s}, std::pair{s, r}}) {
      two_body[index4(a, b, c, d)] = v;
      two_body[index4(c, d, a, b)] = v;
    }
  }
}

void FermionIntegrals::validate(double tol) const {
  const int n = n_orbitals;
  if (n < 1) throw ContractError("integrals: no orbitals");
  if (one_body.size() != static_cast<std::size_t>(n * n) ||
      two_body.size() != static_cast<std::size_t>(n) * n * n * n) {
    throw ContractError("integrals: array sizes do not match n_orbitals");
  }
  if (n_electrons < 0 || n_electrons > 2 * n) throw ContractError("integrals: n_electrons exceeds 2*n_orbitals");
  if (std::abs(ms2) > n_electrons || (n_electrons + ms2) % 2 != 0) {
    throw ContractError("integrals: MS2 inconsistent with NELEC");
  }
  if (n_alpha() > n || n_beta() > n) throw ContractError("integrals: spin occupation exceeds orbital count");
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (std::abs(h(p, q) - h(q, p)) > tol) throw ContractError("integrals: one-body matrix not symmetric");
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = g(p, q, r, s);
          if (std::abs(v - g(q, p, r, s)) > tol || std::abs(v - g(p, q, s, r)) > tol ||
              std::abs(v - g(r, s, p, q)) > tol) {
            throw ContractError("integrals: two-body tensor lacks 8-fold symmetry");
          }
        }
}

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool parse_int(std::string_view s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

bool parse_fortran_double(std::string_view s, double& out) {
  std::string buf(s);
  for (auto& c : buf)
    if (c == 'D' || c == 'd') c = 'E';
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && !buf.empty() && std::isfinite(out);
}

}  // namespace

FermionIntegrals parse_fcidump(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;

  // Namelist header: everything up to &END or '/'.
  std::string header;
  bool header_done = false;
  while (!header_done && std::getline(in, line)) {
    ++line_no;
    const auto u = upper(line);
    auto end_pos = u.find("&END");
    if (end_pos == std::string::npos) end_pos = u.find('/');
    if (end_pos != std::string::npos) {
      header += u.substr(0, end_pos);
      header_done = true;
    } else {
      header += u + ",";
    }
  }
  if (!header_done) throw ParseError(line_no, "FCIDUMP header is missing its &END terminator");
  if (header.find("&FCI") == std::string::npos) throw ParseError(1, "FCIDUMP header must start with &FCI");

  int norb = -1, nelec = -1, ms2 = 0;
  {
    std::string tok;
    std::string cleaned = header;
    cleaned.replace(cleaned.find("&FCI"), 4, " ");
    for (auto& c : cleaned)
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    // Re-join "KEY = VALUE" spellings.
    std::string compact;
    for (std::size_t i = 0; i < cleaned.size(); ++i) {
      if (cleaned[i] == ' ') {
        const auto prev = compact.empty() ? ' ' : compact.back();
        const auto next_non_space = cleaned.find_first_not_of(' ', i);
        if (prev == '=' || (next_non_space != std::string::npos && cleaned[next_non_space] == '=')) continue;
      }
      compact += cleaned[i];
    }
    std::istringstream hs(compact);
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const auto key = tok.substr(0, eq);
      const auto val = tok.substr(eq + 1);
      int* target = key == "NORB" ? &norb : key == "NELEC" ? &nelec : key == "MS2" ? &ms2 : nullptr;
      if (target && !parse_int(val, *target)) {
        throw ParseError(1, "FCIDUMP header: bad integer for " + key + ": '" + val + "'");
      }
    }
  }
  if (norb < 1) throw ParseError(1, "FCIDUMP header: NORB missing or not positive");
  if (nelec < 0) throw ParseError(1, "FCIDUMP header: NELEC missing");

  FermionIntegrals fi(norb, nelec, ms2);
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok[6];
    int count = 0;
    while (count < 6 && ls >> tok[count]) ++count;
    if (count == 0) continue;
    if (count != 5) throw ParseError(line_no, "expected 'value i j k l'");
    double v = 0;
    if (!parse_fortran_double(tok[0], v)) throw ParseError(line_no, "non-numeric value '" + tok[0] + "'");
    int idx[4];
    for (int k = 0; k < 4; ++k) {
      if (!parse_int(tok[k + 1], idx[k])) throw ParseError(line_no, "bad index '" + tok[k + 1] + "'");
      if (idx[k] < 0 || idx[k] > norb) throw ParseError(line_no, "index out of range: " + tok[k + 1]);
    }
    const auto [i, j, k, l] = std::tuple{idx[0], idx[1], idx[2], idx[3]};
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      fi.core_energy = v;
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      fi.set_h(i - 1, j - 1, v);
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // orbital energy; not needed
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      fi.set_g(i - 1, j - 1, k - 1, l - 1, v);
    } else {
      throw ParseError(line_no, "index pattern not recognised");
    }
  }
  try {
    fi.validate();
  } catch (const ContractError& e) {
    throw ParseError(1, e.what());
  }
  return fi;
}

FermionIntegrals read_fcidump(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return parse_fcidump(text);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

int spin_orbital(int p, int spin, int n_orbitals, OrbitalOrdering ordering) {
  return ordering == OrbitalOrdering::kBlocked ? p + spin * n_orbitals : 2 * p + spin;
}

// ---------------------------------------------------------------------------
// Normal-ordered fermion operators

namespace {

inline int mode_of(int op) { return std::abs(op) - 1; }

// Creators precede annihilators; creators ascend, annihilators descend.
inline bool in_order(int a, int b) {
  if (a > 0 && b < 0) return true;
  if (a < 0 && b > 0) return false;
  return a > 0 ? a < b : mode_of(a) > mode_of(b);
}

}  // namespace

FermionOp FermionOp::constant(int n_modes, Complex c) {
  FermionOp f(n_modes);
  f.add(LadderString{}, c);
  return f;
}

void FermionOp::add(const LadderString& ops, Complex c) {
  for (int op : ops) {
    if (op == 0 || mode_of(op) >= n_modes_) throw ContractError("FermionOp: mode index out of range");
  }
  std::vector<std::pair<LadderString, Complex>> work{{ops, c}};
  while (!work.empty()) {
    auto [s, coef] = std::move(work.back());
    work.pop_back();
    if (coef == Complex(0.0)) continue;
    std::size_t i = 0;
    while (i + 1 < s.size() && in_order(s[i], s[i + 1])) ++i;
    if (i + 1 >= s.size()) {
      terms_[s] += coef;
      continue;
    }
    if (s[i] == s[i + 1]) continue;  // a+a+ or aa on the same mode
    if (s[i] < 0 && s[i + 1] > 0 && mode_of(s[i]) == mode_of(s[i + 1])) {
      LadderString contracted;
      contracted.reserve(s.size() - 2);
      contracted.insert(contracted.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(i));
      contracted.insert(contracted.end(), s.begin() + static_cast<std::ptrdiff_t>(i + 2), s.end());
      work.emplace_back(std::move(contracted), coef);
    }
    std::swap(s[i], s[i + 1]);
    work.emplace_back(std::move(s), -coef);
  }
}

void FermionOp::accumulate(const FermionOp& other, Complex scale) {
  if (other.n_modes_ > n_modes_) n_modes_ = other.n_modes_;
  for (const auto& [s, c] : other.terms_) terms_[s] += scale * c;
}

Complex FermionOp::coeff(const LadderString& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void FermionOp::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

FermionOp FermionOp::adjoint() const {
  FermionOp out(n_modes_);
  for (const auto& [s, c] : terms_) {
    LadderString r(s.rbegin(), s.rend());
    for (auto& op : r) op = -op;
    out.add(r, std::conj(c));
  }
  return out;
}

FermionOp operator*(const FermionOp& a, const FermionOp& b) {
  FermionOp out(std::max(a.n_modes_, b.n_modes_));
  for (const auto& [sa, ca] : a.terms_) {
    for (const auto& [sb, cb] : b.terms_) {
      LadderString s = sa;
      s.insert(s.end(), sb.begin(), sb.end());
      out.add(s, ca * cb);
    }
  }
  return out;
}

FermionOp operator+(const FermionOp& a, const FermionOp& b) {
  FermionOp out = a;
  out.accumulate(b);
  return out;
}

FermionOp operator*(Complex s, const FermionOp& a) {
  FermionOp out(a.n_modes());
  out.accumulate(a, s);
  return out;
}

FermionOp build_fermion_hamiltonian(const FermionIntegrals& fi, OrbitalOrdering ordering) {
  const int n = fi.n_orbitals;
  FermionOp f(fi.n_modes());
  if (fi.core_energy != 0.0) f.add(LadderString{}, fi.core_energy);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double v = fi.h(p, q);
      if (v == 0.0) continue;
      for (int sigma = 0; sigma < 2; ++sigma) {
        f.add({create(spin_orbital(p, sigma, n, ordering)), annihilate(spin_orbital(q, sigma, n, ordering))}, v);
      }
    }
  }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = fi.g(p, q, r, s);
          if (v == 0.0) continue;
          for (int sigma = 0; sigma < 2; ++sigma) {
            for (int tau = 0; tau < 2; ++tau) {
              const int mp = spin_orbital(p, sigma, n, ordering);
              const int mq = spin_orbital(q, sigma, n, ordering);
              const int mr = spin_orbital(r, tau, n, ordering);
              const int ms = spin_orbital(s, tau, n, ordering);
              if (mp == mr || mq == ms) continue;
              f.add({create(mp), create(mr), annihilate(ms), annihilate(mq)}, 0.5 * v);
            }
          }
        }
  f.prune(0.0);
  return f;
}

// ---------------------------------------------------------------------------
// Qubit mappings

namespace {

using TermList = std::vector<std::pair<PauliWord, Complex>>;

TermList ladder_jw(int op, int n) {
  const auto nq = static_cast<std::size_t>(n);
  const int p = mode_of(op);
  BitVec zs(nq);
  for (int q = 0; q < p; ++q) zs.set(static_cast<std::size_t>(q));
  BitVec x(nq);
  x.set(static_cast<std::size_t>(p));
  BitVec zy = zs;
  zy.set(static_cast<std::size_t>(p));
  const double sign = op > 0 ? -1.0 : 1.0;
  return {{PauliWord(x, zs), 0.5}, {PauliWord(x, zy), Complex(0, 0.5 * sign)}};
}

TermList ladder_parity(int op, int n) {
  const auto nq = static_cast<std::size_t>(n);
  const int j = mode_of(op);
  BitVec x(nq);
  for (int q = j; q < n; ++q) x.set(static_cast<std::size_t>(q));
  BitVec z_prev(nq);
  if (j > 0) z_prev.set(static_cast<std::size_t>(j - 1));
  BitVec z_y(nq);
  z_y.set(static_cast<std::size_t>(j));
  const double sign = op > 0 ? -1.0 : 1.0;
  return {{PauliWord(x, z_prev), 0.5}, {PauliWord(x, z_y), Complex(0, 0.5 * sign)}};
}

template <typename LadderFn>
SparsePauliOp map_with(const FermionOp& f, int n_modes, LadderFn ladder, double prune) {
  const auto nq = static_cast<std::size_t>(n_modes);
  PauliAccumulator acc(nq, prune);
  for (const auto& [s, c] : f.terms()) {
    TermList cur{{PauliWord(nq), c}};
    for (int op : s) {
      if (mode_of(op) >= n_modes) throw ContractError("qubit mapping: mode index exceeds n_modes");
      const auto factor = ladder(op, n_modes);
      TermList next;
      next.reserve(cur.size() * factor.size());
      for (const auto& [w, cw] : cur) {
        for (const auto& [v, cv] : factor) {
          auto [phase, prod] = word_multiply(w, v);
          next.emplace_back(std::move(prod), cw * cv * phase.value());
        }
      }
      cur = std::move(next);
    }
    for (const auto& [w, cw] : cur) acc.add(w, cw);
  }
  return std::move(acc).finish();
}

}  // namespace

SparsePauliOp jordan_wigner(const FermionOp& f, int n_modes, double prune_threshold) {
  return map_with(f, n_modes, ladder_jw, prune_threshold);
}

SparsePauliOp parity_map(const FermionOp& f, int n_modes, double prune_threshold) {
  return map_with(f, n_modes, ladder_parity, prune_threshold);
}

SparsePauliOp map_to_qubits(const FermionOp& f, int n_modes, QubitMapping mapping, double prune_threshold) {
  return mapping == QubitMapping::kJordanWigner ? jordan_wigner(f, n_modes, prune_threshold)
                                                : parity_map(f, n_modes, prune_threshold);
}

FermionOp s_z(int n_orbitals, OrbitalOrdering ordering) {
  FermionOp f(2 * n_orbitals);
  for (int p = 0; p < n_orbitals; ++p) {
    const int a = spin_orbital(p, 0, n_orbitals, ordering);
    const int b = spin_orbital(p, 1, n_orbitals, ordering);
    f.add({create(a), annihilate(a)}, 0.5);
    f.add({create(b), annihilate(b)}, -0.5);
  }
  return f;
}

FermionOp s_squared(int n_orbitals, OrbitalOrdering ordering) {
  if (n_orbitals < 1) throw ContractError("s_squared: need at least one orbital");
  FermionOp s_plus(2 * n_orbitals), s_minus(2 * n_orbitals);
  for (int p = 0; p < n_orbitals; ++p) {
    const int a = spin_orbital(p, 0, n_orbitals, ordering);
    const int b = spin_orbital(p, 1, n_orbitals, ordering);
    s_plus.add({create(a), annihilate(b)}, 1.0);
    s_minus.add({create(b), annihilate(a)}, 1.0);
  }
  const auto sz = s_z(n_orbitals, ordering);
  auto out = s_minus * s_plus + sz * sz + sz;
  out.prune(1e-14);
  return out;
}

FermionOp number_operator(int n_modes) {
  FermionOp f(n_modes);
  for (int p = 0; p < n_modes; ++p) f.add({create(p), annihilate(p)}, 1.0);
  return f;
}

SparsePauliOp add_spin_penalty(const SparsePauliOp& h, const SparsePauliOp& s2, double mu) {
  check_same_qubits(h.num_qubits(), s2.num_qubits(), "add_spin_penalty");
  if (mu == 0.0) return h;
  return op_combine(h, s2, 1.0, 0.5 * mu);
}

BitVec occupations_to_qubits(const BitVec& occ, QubitMapping mapping) {
  if (mapping == QubitMapping::kJordanWigner) return occ;
  BitVec out(occ.size());
  bool parity = false;
  for (std::size_t j = 0; j < occ.size(); ++j) {
    parity ^= occ.get(j);
    out.set(j, parity);
  }
  return out;
}

namespace {

BitVec aufbau_occupations(const FermionIntegrals& fi, OrbitalOrdering ordering) {
  if (fi.n_electrons > fi.n_modes()) throw ContractError("hartree_fock_bitstring: more electrons than modes");
  if (fi.n_alpha() > fi.n_orbitals || fi.n_beta() > fi.n_orbitals || fi.n_alpha() < 0 || fi.n_beta() < 0) {
    throw ContractError("hartree_fock_bitstring: spin occupation exceeds orbital count");
  }
  BitVec occ(static_cast<std::size_t>(fi.n_modes()));
  for (int p = 0; p < fi.n_alpha(); ++p) occ.set(static_cast<std::size_t>(spin_orbital(p, 0, fi.n_orbitals, ordering)));
  for (int p = 0; p < fi.n_beta(); ++p) occ.set(static_cast<std::size_t>(spin_orbital(p, 1, fi.n_orbitals, ordering)));
  return occ;
}

}  // namespace

BitVec hartree_fock_bitstring(const FermionIntegrals& fi, OrbitalOrdering ordering, QubitMapping mapping) {
  return occupations_to_qubits(aufbau_occupations(fi, ordering), mapping);
}

double hartree_fock_energy(const FermionIntegrals& fi) {
  std::vector<std::pair<int, int>> occ;  // (orbital, spin)
  for (int p = 0; p < fi.n_alpha(); ++p) occ.emplace_back(p, 0);
  for (int p = 0; p < fi.n_beta(); ++p) occ.emplace_back(p, 1);
  double e = fi.core_energy;
  for (auto [i, si] : occ) {
    e += fi.h(i, i);
    for (auto [j, sj] : occ) {
      e += 0.5 * fi.g(i, i, j, j);
      if (si == sj) e -= 0.5 * fi.g(i, j, j, i);
    }
  }
  return e;
}

MappedHamiltonian map_hamiltonian(const FermionIntegrals& fi, const MappingOptions& opts) {
  fi.validate();
  const int n_modes = fi.n_modes();
  auto h = map_to_qubits(build_fermion_hamiltonian(fi, opts.ordering), n_modes, opts.mapping, opts.prune_threshold);
  if (opts.spin_penalty != 0.0) {
    const auto s2 =
        map_to_qubits(s_squared(fi.n_orbitals, opts.ordering), n_modes, opts.mapping, opts.prune_threshold);
    h = add_spin_penalty(h, s2, opts.spin_penalty);
  }
  return {std::move(h), hartree_fock_bitstring(fi, opts.ordering, opts.mapping),
          n_modes};
}

}  // namespace qccilc
