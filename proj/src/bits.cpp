#include "qccilc/bits.hpp"

#include "qccilc/errors.hpp"

namespace qccilc {

BitVec BitVec::from_string(std::string_view s) {
  BitVec b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      b.set(i);
    } else if (s[i] != '0') {
      throw ParseError(0, "bit string may only contain '0' and '1': " + std::string(s));
    }
  }
  return b;
}

BitVec BitVec::from_indices(std::size_t n, std::span<const std::size_t> idx) {
  BitVec b(n);
  for (auto i : idx) {
    if (i >= n) throw ContractError("bit index out of range");
    b.set(i);
  }
  return b;
}

bool BitVec::any() const noexcept {
  for (auto l : limbs_) {
    if (l != 0) return true;
  }
  return false;
}

std::size_t BitVec::popcount() const noexcept {
  std::size_t c = 0;
  for (auto l : limbs_) c += static_cast<std::size_t>(std::popcount(l));
  return c;
}

std::optional<std::size_t> BitVec::lowest_set() const noexcept {
  for (std::size_t k = 0; k < limbs_.size(); ++k) {
    if (limbs_[k] != 0) return k * 64 + static_cast<std::size_t>(std::countr_zero(limbs_[k]));
  }
  return std::nullopt;
}

std::vector<std::size_t> BitVec::set_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < limbs_.size(); ++k) {
    auto l = limbs_[k];
    while (l != 0) {
      out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(l)));
      l &= l - 1;
    }
  }
  return out;
}

BitVec& BitVec::operator^=(const BitVec& o) noexcept {
  for (std::size_t k = 0; k < limbs_.size(); ++k) limbs_[k] ^= o.limbs_[k];
  return *this;
}

BitVec& BitVec::operator&=(const BitVec& o) noexcept {
  for (std::size_t k = 0; k < limbs_.size(); ++k) limbs_[k] &= o.limbs_[k];
  return *this;
}

BitVec& BitVec::operator|=(const BitVec& o) noexcept {
  for (std::size_t k = 0; k < limbs_.size(); ++k) limbs_[k] |= o.limbs_[k];
  return *this;
}

std::string BitVec::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

std::strong_ordering operator<=>(const BitVec& a, const BitVec& b) noexcept {
  if (a.n_ != b.n_) return a.n_ <=> b.n_;
  for (std::size_t k = a.limbs_.size(); k-- > 0;) {
    if (a.limbs_[k] != b.limbs_[k]) return a.limbs_[k] <=> b.limbs_[k];
  }
  return std::strong_ordering::equal;
}

std::size_t BitVec::hash() const noexcept {
  // FNV-1a over limbs
  std::uint64_t h = 1469598103934665603ull ^ n_;
  for (auto l : limbs_) {
    h ^= l;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::size_t and_popcount(const BitVec& a, const BitVec& b) noexcept {
  std::size_t c = 0;
  const auto la = a.limbs();
  const auto lb = b.limbs();
  for (std::size_t k = 0; k < la.size(); ++k) {
    c += static_cast<std::size_t>(std::popcount(la[k] & lb[k]));
  }
  return c;
}

}  // namespace qccilc
