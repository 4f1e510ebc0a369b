#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace clgbn {

// Exact sum of IEEE-754 doubles.
//
// Every finite double is an integer multiple of 2^-1074, so the running sum is
// kept as a signed big integer in that unit, stored as base-2^32 digits in
// int64 limbs with lazily propagated carries. Addition is therefore
// associative and commutative: any grouping of the same multiset of terms
// yields the same state, and value() rounds it to nearest (ties to even).
//
// Limbs cover only the range touched so far; a default-constructed sum
// allocates nothing.
class ExactSum {
 public:
  ExactSum() = default;
  explicit ExactSum(double x) { add(x); }

  void add(double x) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    const auto biased = static_cast<int>((bits >> 52) & 0x7ff);
    std::uint64_t mantissa = bits & ((std::uint64_t{1} << 52) - 1);
    if (biased == 0x7ff) {
      special_ += x;
      has_special_ = true;
      return;
    }
    if (biased == 0 && mantissa == 0) return;
    int position = 0;  // bit position of the mantissa LSB, in units of 2^-1074
    if (biased != 0) {
      mantissa |= std::uint64_t{1} << 52;
      position = biased - 1;
    }
    const int limb = position / kDigitBits;
    const int shift = position % kDigitBits;
    const unsigned __int128 shifted = static_cast<unsigned __int128>(mantissa) << shift;
    const auto d0 = static_cast<std::int64_t>(shifted & kDigitMask);
    const auto d1 = static_cast<std::int64_t>((shifted >> 32) & kDigitMask);
    const auto d2 = static_cast<std::int64_t>(shifted >> 64);
    reserve(limb, limb + 2);
    std::int64_t* l = &limbs_[static_cast<std::size_t>(limb - low_)];
    if (bits >> 63) {
      l[0] -= d0;
      l[1] -= d1;
      l[2] -= d2;
    } else {
      l[0] += d0;
      l[1] += d1;
      l[2] += d2;
    }
    if (++pending_ >= kNormalizeAfter) normalize();
  }

  ExactSum& operator+=(double x) {
    add(x);
    return *this;
  }

  ExactSum& operator+=(const ExactSum& other) {
    if (other.has_special_) {
      special_ += other.special_;
      has_special_ = true;
    }
    if (other.limbs_.empty()) return *this;
    if (pending_ + other.pending_ >= kNormalizeAfter) normalize();
    reserve(other.low_, other.low_ + static_cast<int>(other.limbs_.size()) - 1);
    for (std::size_t i = 0; i < other.limbs_.size(); ++i) {
      limbs_[static_cast<std::size_t>(other.low_ - low_) + i] += other.limbs_[i];
    }
    pending_ += other.pending_;
    if (pending_ >= kNormalizeAfter) normalize();
    return *this;
  }

  friend ExactSum operator+(ExactSum a, const ExactSum& b) {
    a += b;
    return a;
  }

  // The exact sum rounded to the nearest double.
  double value() const {
    if (has_special_) return special_;
    ExactSum n = *this;
    n.normalize();
    n.trim();
    if (n.limbs_.empty()) return 0.0;
    bool negative = n.limbs_.back() < 0;
    if (negative) {
      for (auto& l : n.limbs_) l = -l;
      n.normalize();
      n.trim();
    }
    const auto& d = n.limbs_;
    const int top = static_cast<int>(d.size()) - 1;
    auto digit = [&](int i) -> std::uint64_t {
      return i >= 0 ? static_cast<std::uint64_t>(d[static_cast<std::size_t>(i)]) : 0;
    };
    // Top three digits hold at least 65 significant bits; lower digits only
    // contribute a sticky bit.
    unsigned __int128 head = (static_cast<unsigned __int128>(digit(top)) << 64) |
                             (static_cast<unsigned __int128>(digit(top - 1)) << 32) |
                             digit(top - 2);
    bool sticky = false;
    for (int i = top - 3; i >= 0; --i) sticky |= d[static_cast<std::size_t>(i)] != 0;
    int exponent = (n.low_ + top - 2) * kDigitBits - 1074;

    int width = 0;
    for (unsigned __int128 t = head; t != 0; t >>= 1) ++width;
    if (width > 53) {
      const int drop = width - 53;
      const unsigned __int128 rest = head & ((static_cast<unsigned __int128>(1) << drop) - 1);
      const unsigned __int128 half = static_cast<unsigned __int128>(1) << (drop - 1);
      head >>= drop;
      exponent += drop;
      const bool round_up = rest > half || (rest == half && (sticky || (head & 1)));
      if (round_up) {
        ++head;
        if (head >> 53) {
          head >>= 1;
          ++exponent;
        }
      }
    }
    const double magnitude = std::ldexp(static_cast<double>(static_cast<std::uint64_t>(head)), exponent);
    return negative ? -magnitude : magnitude;
  }

  // Nonzero exact sums are at least 2^-1074 in magnitude, so rounding cannot hide them.
  bool is_zero() const { return !has_special_ && value() == 0.0; }

 private:
  static constexpr int kDigitBits = 32;
  static constexpr std::uint64_t kDigitMask = 0xffffffffULL;
  // Each add moves a limb by less than 2^32, so 2^30 adds fit in an int64.
  static constexpr std::int64_t kNormalizeAfter = std::int64_t{1} << 30;

  void reserve(int lo, int hi) {
    if (limbs_.empty()) {
      low_ = lo;
      limbs_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
      return;
    }
    if (lo < low_) {
      limbs_.insert(limbs_.begin(), static_cast<std::size_t>(low_ - lo), 0);
      low_ = lo;
    }
    const int high = low_ + static_cast<int>(limbs_.size()) - 1;
    if (hi > high) limbs_.resize(limbs_.size() + static_cast<std::size_t>(hi - high), 0);
  }

  // Brings every limb except the top one into [0, 2^32); the top limb carries the sign.
  void normalize() {
    std::int64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::int64_t v = limbs_[i] + carry;
      carry = v >> kDigitBits;  // arithmetic shift: floor division
      limbs_[i] = v - (carry << kDigitBits);
    }
    while (carry != 0 && carry != -1) {
      std::int64_t v = carry;
      carry = v >> kDigitBits;
      limbs_.push_back(v - (carry << kDigitBits));
    }
    if (carry == -1) limbs_.back() -= std::int64_t{1} << kDigitBits;
    pending_ = 1;
  }

  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::int64_t> limbs_;
  int low_ = 0;
  std::int64_t pending_ = 0;
  double special_ = 0.0;
  bool has_special_ = false;
};

}  // namespace clgbn
