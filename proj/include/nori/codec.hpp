#pragma once

// Packed 64-bit encodings of matrices and vectors, plus a set of codes used
// by every enumeration.

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nori/error.hpp"
#include "nori/gf.hpp"

namespace nori {

/// Bit-packs the n*n entries of a matrix into one 64-bit word, entry (0,0) in
/// the low bits. Equal codes mean equal matrices.
class MatCodec {
 public:
  MatCodec() = default;
  MatCodec(const Field& F, std::size_t n)
      : n_(n), bits_(static_cast<unsigned>(std::bit_width(F.size() - 1))) {
    if (bits_ == 0) bits_ = 1;
    if (bits_ * n * n > 64)
      throw Error(ErrorKind::CapExceeded, "matrix of side " + std::to_string(n) + " over " +
                                              F.describe() + " does not fit a 64-bit code");
    mask_ = (std::uint64_t(1) << bits_) - 1;
  }

  std::size_t side() const noexcept { return n_; }
  unsigned total_bits() const noexcept { return bits_ * static_cast<unsigned>(n_ * n_); }

  std::uint64_t encode(std::span<const FieldElement> entries) const noexcept {
    std::uint64_t code = 0;
    for (std::size_t k = entries.size(); k-- > 0;) code = (code << bits_) | entries[k].code;
    return code;
  }
  std::uint64_t encode(const Mat& m) const noexcept { return encode(std::span(m.a)); }

  void decode(std::uint64_t code, std::span<FieldElement> out) const noexcept {
    for (auto& e : out) {
      e.code = static_cast<std::uint32_t>(code & mask_);
      code >>= bits_;
    }
  }
  Mat decode(std::uint64_t code) const {
    Mat m(n_);
    decode(code, std::span(m.a));
    return m;
  }

 private:
  std::size_t n_ = 0;
  unsigned bits_ = 1;
  std::uint64_t mask_ = 1;
};

/// Set of 64-bit codes: a flat bitmap when the code space is small, open
/// addressing with linear probing otherwise.
class CodeSet {
 public:
  explicit CodeSet(unsigned code_bits = 64) {
    if (code_bits <= 28) bitmap_.assign((std::size_t(1) << code_bits) / 64 + 1, 0);
    else table_.assign(1024, kEmpty);
  }

  std::size_t size() const noexcept { return size_; }

  bool contains(std::uint64_t code) const noexcept {
    if (!bitmap_.empty()) return (bitmap_[code >> 6] >> (code & 63)) & 1;
    if (code == kEmpty) return has_empty_key_;
    std::size_t mask = table_.size() - 1;
    for (std::size_t i = mix(code) & mask;; i = (i + 1) & mask) {
      if (table_[i] == code) return true;
      if (table_[i] == kEmpty) return false;
    }
  }

  /// Returns true when the code was newly inserted.
  bool insert(std::uint64_t code) {
    if (!bitmap_.empty()) {
      std::uint64_t& word = bitmap_[code >> 6];
      std::uint64_t bit = std::uint64_t(1) << (code & 63);
      if (word & bit) return false;
      word |= bit;
      ++size_;
      return true;
    }
    if (code == kEmpty) {
      if (has_empty_key_) return false;
      has_empty_key_ = true;
      ++size_;
      return true;
    }
    if (2 * (size_ + 1) > table_.size()) grow();
    if (!place(table_, code)) return false;
    ++size_;
    return true;
  }

 private:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t(0);

  static std::size_t mix(std::uint64_t x) noexcept {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return static_cast<std::size_t>(x);
  }

  static bool place(std::vector<std::uint64_t>& table, std::uint64_t code) noexcept {
    std::size_t mask = table.size() - 1;
    for (std::size_t i = mix(code) & mask;; i = (i + 1) & mask) {
      if (table[i] == code) return false;
      if (table[i] == kEmpty) {
        table[i] = code;
        return true;
      }
    }
  }

  void grow() {
    std::vector<std::uint64_t> bigger(table_.size() * 2, kEmpty);
    for (auto c : table_)
      if (c != kEmpty) place(bigger, c);
    table_.swap(bigger);
  }

  std::vector<std::uint64_t> bitmap_;
  std::vector<std::uint64_t> table_;
  std::size_t size_ = 0;
  bool has_empty_key_ = false;
};

/// Multiplies packed matrices without heap allocation.
class PackedMultiplier {
 public:
  PackedMultiplier(const Field& F, const MatCodec& codec) : F_(&F), codec_(&codec), n_(codec.side()) {}

  std::uint64_t mul(std::uint64_t x, std::uint64_t y) const noexcept {
    FieldElement a[64], b[64], c[64];
    const std::size_t nn = n_ * n_;
    codec_->decode(x, std::span(a, nn));
    codec_->decode(y, std::span(b, nn));
    product(a, b, c);
    return codec_->encode(std::span<const FieldElement>(c, nn));
  }

  /// x * m for an unpacked right factor.
  std::uint64_t mul(std::uint64_t x, const Mat& m) const noexcept {
    FieldElement a[64], c[64];
    const std::size_t nn = n_ * n_;
    codec_->decode(x, std::span(a, nn));
    product(a, m.a.data(), c);
    return codec_->encode(std::span<const FieldElement>(c, nn));
  }

  /// l * x * r.
  std::uint64_t sandwich(const Mat& l, std::uint64_t x, const Mat& r) const noexcept {
    FieldElement a[64], t[64], c[64];
    const std::size_t nn = n_ * n_;
    codec_->decode(x, std::span(a, nn));
    product(l.a.data(), a, t);
    product(t, r.a.data(), c);
    return codec_->encode(std::span<const FieldElement>(c, nn));
  }

  void product(const FieldElement* a, const FieldElement* b, FieldElement* c) const noexcept {
    const std::size_t n = n_;
    if (F_->is_prime_field()) {
      const std::uint64_t ell = F_->ell();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          std::uint64_t s = 0;
          for (std::size_t k = 0; k < n; ++k) s += std::uint64_t(a[i * n + k].code) * b[k * n + j].code;
          c[i * n + j].code = static_cast<std::uint32_t>(s % ell);
        }
      return;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        FieldElement s = F_->zero();
        for (std::size_t k = 0; k < n; ++k) s = F_->add(s, F_->mul(a[i * n + k], b[k * n + j]));
        c[i * n + j] = s;
      }
  }

 private:
  const Field* F_;
  const MatCodec* codec_;
  std::size_t n_;
};

}  // namespace nori
