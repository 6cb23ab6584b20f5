#include "gnatty/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gnatty/errors.hpp"

namespace gnatty {

void FixedPointParams::validate() const {
  if (magnitude_bits < 1 || magnitude_bits > total_bits || total_bits > 16) {
    throw ConfigError("fixed-point: need 1 <= magnitude bits <= total bits <= 16, got m=" +
                      std::to_string(magnitude_bits) + " b=" + std::to_string(total_bits));
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw ConfigError("fixed-point: beta must lie in (0, 1], got " + std::to_string(beta));
  }
}

double FixedPointParams::scale() const { return std::ldexp(1.0, total_bits - magnitude_bits); }

double decode_code(std::uint32_t code, const FixedPointParams& params) {
  const double y = static_cast<double>(code) / params.scale();
  return params.beta == 1.0 ? y : std::pow(y, 1.0 / params.beta);
}

namespace {

double transform(double x, const FixedPointParams& params) {
  return params.beta == 1.0 ? x : std::pow(x, params.beta);
}

std::uint32_t clamp_code(double v, std::uint32_t max_code) {
  if (!(v > 0.0)) return 0;
  if (v >= static_cast<double>(max_code)) return max_code;
  return static_cast<std::uint32_t>(v);
}

}  // namespace

CodePair encode_interval(Interval iv, const FixedPointParams& params) {
  const auto max_code = params.max_code();
  const double scale = params.scale();
  CodePair codes;
  codes.lo = clamp_code(std::floor(transform(iv.lo, params) * scale), max_code);
  codes.hi = clamp_code(std::floor(transform(iv.hi, params) * scale) + 1.0, max_code);
  // pow() is not correctly rounded; nudge codes so the bounds hold after decoding.
  while (codes.lo > 0 && decode_code(codes.lo, params) > iv.lo) --codes.lo;
  while (codes.hi < max_code && decode_code(codes.hi, params) < iv.hi) ++codes.hi;
  return codes;
}

bool saturates(double hi, const FixedPointParams& params) {
  return decode_code(params.max_code(), params) < hi;
}

FixedPointParams integer_range_params(double max_distance, int total_bits) {
  FixedPointParams params{total_bits, 1, 1.0};
  while (params.magnitude_bits < total_bits && saturates(max_distance, params)) ++params.magnitude_bits;
  return params;
}

FixedPointCodec::FixedPointCodec(const FixedPointParams& params) : params_(params) {
  params_.validate();
  table_.resize(std::size_t{params_.max_code()} + 1);
  for (std::uint32_t code = 0; code <= params_.max_code(); ++code) table_[code] = decode_code(code, params_);
}

}  // namespace gnatty
