#include "gnatty/range_table.hpp"

#include <stdexcept>

#include "gnatty/errors.hpp"

namespace gnatty {

RangeTable::RangeTable(std::size_t rows, std::size_t cols)
    : rows_(rows),
      cols_(cols),
      exact_(rows * cols,
             Interval{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}) {}

void RangeTable::set(std::size_t row, std::size_t col, Interval iv) {
  if (codec_) throw std::logic_error("RangeTable::set on a fixed-point table");
  exact_[row * cols_ + col] = iv;
}

void RangeTable::encode(std::shared_ptr<const FixedPointCodec> codec) {
  if (codec_) throw std::logic_error("RangeTable::encode: table is already fixed-point");
  const auto& params = codec->params();
  const auto width = static_cast<std::size_t>(params.bytes_per_code());
  std::vector<std::uint8_t> bytes(exact_.size() * 2 * width);
  const double ceiling = codec->decode(params.max_code());
  bool saturated = false;
  for (std::size_t at = 0; at < exact_.size(); ++at) {
    const auto codes = codec->encode(exact_[at]);
    saturated = saturated || exact_[at].hi > ceiling;
    auto* out = &bytes[at * 2 * width];
    if (width == 1) {
      out[0] = static_cast<std::uint8_t>(codes.lo);
      out[1] = static_cast<std::uint8_t>(codes.hi);
    } else {
      out[0] = static_cast<std::uint8_t>(codes.lo & 0xFF);
      out[1] = static_cast<std::uint8_t>(codes.lo >> 8);
      out[2] = static_cast<std::uint8_t>(codes.hi & 0xFF);
      out[3] = static_cast<std::uint8_t>(codes.hi >> 8);
    }
  }
  codes_ = std::move(bytes);
  exact_.clear();
  exact_.shrink_to_fit();
  codec_ = std::move(codec);
  saturated_ = saturated;
}

std::size_t RangeTable::byte_size() const {
  const std::size_t per_value = codec_ ? static_cast<std::size_t>(codec_->params().bytes_per_code()) : 4;
  return entry_count() * 2 * per_value;
}

RangeTable RangeTable::from_exact(std::size_t rows, std::size_t cols, std::vector<Interval> entries) {
  if (entries.size() != rows * cols) throw ParseError("range table: entry count does not match shape");
  RangeTable table;
  table.rows_ = rows;
  table.cols_ = cols;
  table.exact_ = std::move(entries);
  return table;
}

RangeTable RangeTable::from_codes(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> bytes,
                                  bool saturated, std::shared_ptr<const FixedPointCodec> codec) {
  const auto width = static_cast<std::size_t>(codec->params().bytes_per_code());
  if (bytes.size() != rows * cols * 2 * width) throw ParseError("range table: code bytes do not match shape");
  RangeTable table;
  table.rows_ = rows;
  table.cols_ = cols;
  table.codes_ = std::move(bytes);
  table.codec_ = std::move(codec);
  table.saturated_ = saturated;
  return table;
}

}  // namespace gnatty
