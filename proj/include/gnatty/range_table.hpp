#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "gnatty/fixed_point.hpp"
#include "gnatty/interval.hpp"

namespace gnatty {

/// Per-node matrix of distance ranges. Row i belongs to a measuring pivot,
/// column j to a child; entry (i, j) bounds the distance from that pivot to
/// every object stored under child j, the child's center included.
///
/// Entries are held either as exact doubles or as fixed-point codes. In the
/// fixed-point form a table whose hi bound saturated anywhere reports +inf
/// for every hi entry at the maximum code.
class RangeTable {
 public:
  RangeTable() = default;
  RangeTable(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t entry_count() const noexcept { return rows_ * cols_; }

  bool fixed_point() const noexcept { return codec_ != nullptr; }
  bool saturated() const noexcept { return saturated_; }
  const FixedPointCodec* codec() const noexcept { return codec_.get(); }

  Interval entry(std::size_t row, std::size_t col) const {
    const std::size_t at = row * cols_ + col;
    if (!codec_) return exact_[at];
    const auto codes = code_pair(at);
    double hi = codec_->decode(codes.hi);
    if (saturated_ && codes.hi == codec_->params().max_code()) hi = std::numeric_limits<double>::infinity();
    return {codec_->decode(codes.lo), hi};
  }

  /// Exact tables only.
  void set(std::size_t row, std::size_t col, Interval iv);

  /// Replaces exact storage by fixed-point codes.
  void encode(std::shared_ptr<const FixedPointCodec> codec);

  /// Storage accounting: 4 bytes per exact value, bytes_per_code per code.
  std::size_t byte_size() const;

  // Raw access for serialization.
  std::span<const Interval> exact_entries() const { return exact_; }
  std::span<const std::uint8_t> code_bytes() const { return codes_; }
  static RangeTable from_exact(std::size_t rows, std::size_t cols, std::vector<Interval> entries);
  static RangeTable from_codes(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> bytes,
                               bool saturated, std::shared_ptr<const FixedPointCodec> codec);

 private:
  CodePair code_pair(std::size_t at) const {
    if (codec_->params().bytes_per_code() == 1) return {codes_[2 * at], codes_[2 * at + 1]};
    const auto* p = &codes_[4 * at];
    return {static_cast<std::uint32_t>(p[0] | (p[1] << 8)), static_cast<std::uint32_t>(p[2] | (p[3] << 8))};
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Interval> exact_;
  std::vector<std::uint8_t> codes_;
  std::shared_ptr<const FixedPointCodec> codec_;
  bool saturated_ = false;
};

}  // namespace gnatty
