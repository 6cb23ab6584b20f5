#pragma once

#include <cstdint>
#include <vector>

#include "gnatty/interval.hpp"

namespace gnatty {

/// Unsigned fixed-point format with `total_bits` bits of which
/// `magnitude_bits` hold the integer part, applied to x^beta rather than x.
struct FixedPointParams {
  int total_bits = 8;
  int magnitude_bits = 2;
  double beta = 0.2;

  /// Throws ConfigError unless 1 <= magnitude_bits <= total_bits <= 16 and 0 < beta <= 1.
  void validate() const;

  double scale() const;  // 2^(total_bits - magnitude_bits)
  std::uint32_t max_code() const { return (std::uint32_t{1} << total_bits) - 1; }
  int bytes_per_code() const { return (total_bits + 7) / 8; }

  friend bool operator==(const FixedPointParams&, const FixedPointParams&) = default;
};

struct CodePair {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  friend bool operator==(const CodePair&, const CodePair&) = default;
};

/// (code / scale)^(1/beta)
double decode_code(std::uint32_t code, const FixedPointParams& params);

/// Rounds lo down and hi up so the decoded interval always contains `iv`,
/// except when hi is beyond the largest representable value (saturation).
CodePair encode_interval(Interval iv, const FixedPointParams& params);

/// True when `decode(max_code) < hi`, i.e. the encoded hi bound cannot cover hi.
bool saturates(double hi, const FixedPointParams& params);

/// Parameters for small integer-valued metrics: beta = 1 and the fewest
/// magnitude bits whose encoded hi bound still covers `max_distance`.
FixedPointParams integer_range_params(double max_distance, int total_bits = 8);

/// Decoding lookup table for one parameter set.
class FixedPointCodec {
 public:
  explicit FixedPointCodec(const FixedPointParams& params);

  const FixedPointParams& params() const noexcept { return params_; }
  double decode(std::uint32_t code) const { return table_[code]; }
  CodePair encode(Interval iv) const { return encode_interval(iv, params_); }

 private:
  FixedPointParams params_;
  std::vector<double> table_;
};

}  // namespace gnatty
