#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qccilc {

/// Fixed-length bit vector packed into 64-bit limbs. Bit 0 is the
/// least-significant bit of limb 0; unused high bits of the last limb are
/// always zero.
///
/// Ordering (`<=>`) compares the vectors as unsigned integers, so the highest
/// index is most significant.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), limbs_((n + 63) / 64, 0) {}

  /// Parses a string of '0'/'1' where character i is bit i.
  static BitVec from_string(std::string_view s);
  static BitVec from_indices(std::size_t n, std::span<const std::size_t> idx);

  std::size_t size() const noexcept { return n_; }
  std::size_t num_limbs() const noexcept { return limbs_.size(); }

  bool get(std::size_t i) const noexcept {
    return (limbs_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool v = true) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v) {
      limbs_[i >> 6] |= mask;
    } else {
      limbs_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) noexcept { limbs_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  bool any() const noexcept;
  std::size_t popcount() const noexcept;
  std::optional<std::size_t> lowest_set() const noexcept;
  std::vector<std::size_t> set_indices() const;

  std::span<const std::uint64_t> limbs() const noexcept { return limbs_; }
  std::span<std::uint64_t> limbs() noexcept { return limbs_; }

  BitVec& operator^=(const BitVec& o) noexcept;
  BitVec& operator&=(const BitVec& o) noexcept;
  BitVec& operator|=(const BitVec& o) noexcept;
  friend BitVec operator^(BitVec a, const BitVec& b) noexcept { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) noexcept { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) noexcept { return a |= b; }

  /// Character i is '1' when bit i is set.
  std::string to_string() const;

  friend bool operator==(const BitVec& a, const BitVec& b) noexcept {
    return a.n_ == b.n_ && a.limbs_ == b.limbs_;
  }
  friend std::strong_ordering operator<=>(const BitVec& a, const BitVec& b) noexcept;

  std::size_t hash() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> limbs_;
};

/// popcount(a & b) without materialising the intersection.
std::size_t and_popcount(const BitVec& a, const BitVec& b) noexcept;

}  // namespace qccilc

template <>
struct std::hash<qccilc::BitVec> {
  std::size_t operator()(const qccilc::BitVec& b) const noexcept { return b.hash(); }
};
