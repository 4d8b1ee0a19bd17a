#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "iris/segmentation.hpp"
#include "iris/transforms.hpp"

namespace iris {

enum class EncoderId : std::uint8_t {
  hh1 = 1,  // Haar approximation + analytic-signal phase sign
  hh2 = 2,  // Haar approximation + summed full/half-window phase sign
  lge = 3,  // per-row log-Gabor filtering, even+odd response signs
};

const char* encoder_name(EncoderId id);
EncoderId encoder_from_name(std::string_view name);  // throws Errc::bad_config

struct EncoderConfig {
  EncoderId encoder = EncoderId::hh1;
  std::size_t code_rows = 16;
  std::size_t code_cols = 256;
  // hh1/hh2: analytic-signal window length s. Must divide code_rows*code_cols;
  // hh2 additionally needs s even (the window is split in half).
  std::size_t filter_size = 16;
  // lge only.
  LogGaborParams log_gabor{};
};

// The reference configurations; other dims work but are flagged non-standard.
bool standard_code_dims(std::size_t rows, std::size_t cols);

// FNV-1a 64 over a canonical big-endian serialization of the parameters that
// determine the code bits (encoder, dims, s or f0/sigma_ratio).
std::uint64_t params_digest(const EncoderConfig& config);

// Packed binary iris code: bits row-major, 8 per byte, MSB first, padding
// bits zero.
struct IrisCode {
  std::size_t rows = 0;
  std::size_t cols = 0;
  EncoderId encoder = EncoderId::hh1;
  std::uint64_t digest = 0;
  std::vector<std::uint8_t> bits;

  std::size_t bit_count() const { return rows * cols; }
  std::size_t byte_count() const { return (rows * cols + 7) / 8; }

  bool bit(std::size_t r, std::size_t c) const {
    const std::size_t t = r * cols + c;
    return (bits[t >> 3] >> (7 - (t & 7))) & 1u;
  }
  void set_bit(std::size_t r, std::size_t c, bool value) {
    const std::size_t t = r * cols + c;
    const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (t & 7)));
    if (value)
      bits[t >> 3] |= mask;
    else
      bits[t >> 3] &= static_cast<std::uint8_t>(~mask);
  }

  bool operator==(const IrisCode&) const = default;
};

// Polar grid each encoder needs for a given code size. The 1-D filters run
// along the angle, so the normalized input is the transposed polar matrix:
// hh1/hh2 need angles = 2*code_cols, radii = 2*code_rows (one Haar level
// halves each dim); lge needs angles = code_cols/2 (two bits per sample),
// radii = code_rows.
struct PolarDims {
  std::size_t angles = 0;
  std::size_t radii = 0;
};
PolarDims required_polar_dims(const EncoderConfig& config);

// Throws Errc::bad_config / Errc::odd_dimensions on unusable parameters.
void validate_encoder_config(const EncoderConfig& config);

// Encoders. The polar segment must match required_polar_dims(config)
// (Errc::dimension_mismatch).
IrisCode encode_hh1(const PolarIrisSegment& polar, const EncoderConfig& config);
IrisCode encode_hh2(const PolarIrisSegment& polar, const EncoderConfig& config);
IrisCode encode_lge(const PolarIrisSegment& polar, const EncoderConfig& config);
IrisCode encode(const PolarIrisSegment& polar, const EncoderConfig& config);

// Template container format (byte-deterministic):
//   magic "IRSC" | version 0x01 | encoder id byte | rows u16 BE | cols u16 BE
//   | params digest u64 BE | packed bits (byte_count() bytes)
std::vector<std::uint8_t> serialize_template(const IrisCode& code);
IrisCode parse_template(std::span<const std::uint8_t> bytes);
void write_template_file(const IrisCode& code, const std::filesystem::path& path);
IrisCode read_template_file(const std::filesystem::path& path);

}  // namespace iris
