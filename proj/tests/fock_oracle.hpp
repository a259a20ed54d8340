#pragma once

// Determinant-basis reference for second-quantized Hamiltonians. Works on
// occupation bitmasks directly from the integrals, without FermionOp or any
// qubit mapping.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "qccilc/fermion.hpp"

namespace fock {

using Mat = Eigen::MatrixXd;

struct Det {
  double sign;
  std::uint64_t occ;
};

inline std::optional<Det> apply(bool dagger, int mode, Det d) {
  const std::uint64_t bit = std::uint64_t{1} << mode;
  if (dagger == bool(d.occ & bit)) return std::nullopt;
  const int below = __builtin_popcountll(d.occ & (bit - 1));
  return Det{(below % 2 ? -1.0 : 1.0) * d.sign, d.occ ^ bit};
}

inline int mode(int p, int spin, int n, qccilc::OrbitalOrdering o) {
  return o == qccilc::OrbitalOrdering::kBlocked ? p + spin * n : 2 * p + spin;
}

/// Full Fock-space matrix; basis index = occupation bitmask.
inline Mat hamiltonian(const qccilc::FermionIntegrals& fi, qccilc::OrbitalOrdering o) {
  const int n = fi.n_orbitals;
  const std::size_t dim = std::size_t{1} << (2 * n);
  Mat m = Mat::Zero(dim, dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    m(col, col) += fi.core_energy;
    for (int s1 = 0; s1 < 2; ++s1)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          auto d = apply(false, mode(q, s1, n, o), {1.0, col});
          if (d) d = apply(true, mode(p, s1, n, o), *d);
          if (d) m(d->occ, col) += d->sign * fi.h(p, q);
        }
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s) {
                const double g = fi.g(p, q, r, s);
                if (g == 0.0) continue;
                auto d = apply(false, mode(q, s1, n, o), {1.0, col});
                if (d) d = apply(false, mode(s, s2, n, o), *d);
                if (d) d = apply(true, mode(r, s2, n, o), *d);
                if (d) d = apply(true, mode(p, s1, n, o), *d);
                if (d) m(d->occ, col) += 0.5 * d->sign * g;
              }
  }
  return m;
}

/// Basis indices with the given electron count and 2*Sz.
inline std::vector<std::size_t> sector(int n_orbitals, int n_electrons, std::optional<int> ms2,
                                       qccilc::OrbitalOrdering o) {
  std::vector<std::size_t> out;
  const std::size_t dim = std::size_t{1} << (2 * n_orbitals);
  for (std::size_t b = 0; b < dim; ++b) {
    if (__builtin_popcountll(b) != n_electrons) continue;
    if (ms2) {
      int up = 0, down = 0;
      for (int p = 0; p < n_orbitals; ++p) {
        up += (b >> mode(p, 0, n_orbitals, o)) & 1;
        down += (b >> mode(p, 1, n_orbitals, o)) & 1;
      }
      if (up - down != *ms2) continue;
    }
    out.push_back(b);
  }
  return out;
}

template <typename M>
M restrict(const M& m, const std::vector<std::size_t>& idx) {
  M out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

inline double lowest(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace fock
