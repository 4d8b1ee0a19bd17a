#include "iris/encoders.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "iris/errors.hpp"

namespace iris {
namespace {

// The normalized encoder input: filter lines run along the angle, so rows are
// radial bands and columns are angular samples — the transpose of the polar
// segment layout.
MatD normalized_input(const PolarIrisSegment& polar, const EncoderConfig& config) {
  const PolarDims need = required_polar_dims(config);
  if (polar.angles() != need.angles || polar.radii() != need.radii)
    throw Error(Errc::dimension_mismatch,
                "polar segment is " + std::to_string(polar.angles()) + "x" +
                    std::to_string(polar.radii()) + ", encoder needs " +
                    std::to_string(need.angles) + "x" + std::to_string(need.radii));
  return transposed(polar.data);
}

IrisCode blank_code(const EncoderConfig& config) {
  IrisCode code;
  code.rows = config.code_rows;
  code.cols = config.code_cols;
  code.encoder = config.encoder;
  code.digest = params_digest(config);
  code.bits.assign((config.code_rows * config.code_cols + 7) / 8, 0);
  return code;
}

void append_u16_be(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

void append_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
}

void append_u64_be(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8)
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Haar approximation band of the normalized input, flattened row-major, cut
// into windows of `s` consecutive samples (window w covers flat indices
// [w*s, (w+1)*s)). Shared by both phase encoders.
MatD approx_band(const PolarIrisSegment& polar, const EncoderConfig& config) {
  const MatD ni = normalized_input(polar, config);
  return haar2d(ni).approx;  // exactly code_rows x code_cols
}

}  // namespace

const char* encoder_name(EncoderId id) {
  switch (id) {
    case EncoderId::hh1: return "hh1";
    case EncoderId::hh2: return "hh2";
    case EncoderId::lge: return "lge";
  }
  return "unknown";
}

EncoderId encoder_from_name(std::string_view name) {
  if (name == "hh1") return EncoderId::hh1;
  if (name == "hh2") return EncoderId::hh2;
  if (name == "lge") return EncoderId::lge;
  throw Error(Errc::bad_config, "unknown encoder '" + std::string(name) + "'");
}

bool standard_code_dims(std::size_t rows, std::size_t cols) {
  return (rows == 16 && cols == 256) || (rows == 16 && cols == 64) ||
         (rows == 8 && cols == 128);
}

std::uint64_t params_digest(const EncoderConfig& config) {
  std::vector<std::uint8_t> bytes;
  bytes.push_back(static_cast<std::uint8_t>(config.encoder));
  append_u32_be(bytes, static_cast<std::uint32_t>(config.code_rows));
  append_u32_be(bytes, static_cast<std::uint32_t>(config.code_cols));
  if (config.encoder == EncoderId::lge) {
    append_u64_be(bytes, std::bit_cast<std::uint64_t>(config.log_gabor.f0));
    append_u64_be(bytes, std::bit_cast<std::uint64_t>(config.log_gabor.sigma_ratio));
  } else {
    append_u32_be(bytes, static_cast<std::uint32_t>(config.filter_size));
  }
  return fnv1a64(bytes);
}

PolarDims required_polar_dims(const EncoderConfig& config) {
  validate_encoder_config(config);
  if (config.encoder == EncoderId::lge)
    return {config.code_cols / 2, config.code_rows};
  return {2 * config.code_cols, 2 * config.code_rows};
}

void validate_encoder_config(const EncoderConfig& config) {
  if (config.code_rows == 0 || config.code_cols == 0)
    throw Error(Errc::bad_config, "code dims must be positive");
  if (config.code_rows > 0xffff || config.code_cols > 0xffff)
    throw Error(Errc::bad_config, "code dims exceed template format limit (65535)");
  switch (config.encoder) {
    case EncoderId::hh1:
    case EncoderId::hh2: {
      const std::size_t s = config.filter_size;
      if (s < 2) throw Error(Errc::bad_config, "filter size must be >= 2");
      if (config.encoder == EncoderId::hh2) {
        if (s % 2 != 0)
          throw Error(Errc::odd_dimensions, "half-window phase needs an even filter size");
        if (s < 4) throw Error(Errc::bad_config, "half-window phase needs filter size >= 4");
      }
      if ((config.code_rows * config.code_cols) % s != 0)
        throw Error(Errc::odd_dimensions, "filter size must divide the code bit count");
      break;
    }
    case EncoderId::lge: {
      if (config.code_cols % 2 != 0)
        throw Error(Errc::odd_dimensions,
                    "code cols must be even (two bits per filtered sample)");
      if (config.code_cols / 2 < 4)
        throw Error(Errc::bad_config, "code cols must be >= 8 (row length >= 4)");
      // Parameter range check.
      (void)log_gabor_gain(config.log_gabor.f0, config.log_gabor);
      break;
    }
    default:
      throw Error(Errc::bad_config, "unknown encoder id");
  }
}

IrisCode encode_hh1(const PolarIrisSegment& polar, const EncoderConfig& config) {
  if (config.encoder != EncoderId::hh1)
    throw Error(Errc::bad_config, "config is not for hh1");
  const MatD af = approx_band(polar, config);
  const std::size_t s = config.filter_size;
  const std::size_t windows = af.size() / s;
  IrisCode code = blank_code(config);

  std::vector<double> window(s);
  for (std::size_t w = 0; w < windows; ++w) {
    for (std::size_t i = 0; i < s; ++i) window[i] = af.v[w * s + i];
    const auto analytic = hilbert_analytic(window);
    for (std::size_t i = 0; i < s; ++i) {
      if (analytic[i].imag() > 0.0) {
        const std::size_t t = w * s + i;
        code.set_bit(t / code.cols, t % code.cols, true);
      }
    }
  }
  return code;
}

IrisCode encode_hh2(const PolarIrisSegment& polar, const EncoderConfig& config) {
  if (config.encoder != EncoderId::hh2)
    throw Error(Errc::bad_config, "config is not for hh2");
  const MatD af = approx_band(polar, config);
  const std::size_t s = config.filter_size;
  const std::size_t half = s / 2;
  const std::size_t windows = af.size() / s;
  IrisCode code = blank_code(config);

  std::vector<double> window(s), half_buf(half);
  for (std::size_t w = 0; w < windows; ++w) {
    for (std::size_t i = 0; i < s; ++i) window[i] = af.v[w * s + i];
    const auto full = hilbert_analytic(window);

    // Second phase estimate from the window's two halves analyzed separately;
    // the bit is the sign of the summed imaginary parts.
    std::vector<std::complex<double>> halves;
    halves.reserve(s);
    for (std::size_t h = 0; h < 2; ++h) {
      for (std::size_t i = 0; i < half; ++i) half_buf[i] = window[h * half + i];
      const auto part = hilbert_analytic(half_buf);
      halves.insert(halves.end(), part.begin(), part.end());
    }

    for (std::size_t i = 0; i < s; ++i) {
      if (full[i].imag() + halves[i].imag() > 0.0) {
        const std::size_t t = w * s + i;
        code.set_bit(t / code.cols, t % code.cols, true);
      }
    }
  }
  return code;
}

IrisCode encode_lge(const PolarIrisSegment& polar, const EncoderConfig& config) {
  if (config.encoder != EncoderId::lge)
    throw Error(Errc::bad_config, "config is not for lge");
  const MatD ni = normalized_input(polar, config);  // code_rows x code_cols/2
  IrisCode code = blank_code(config);

  const std::size_t n = ni.cols;
  for (std::size_t r = 0; r < ni.rows; ++r) {
    const std::span<const double> row(&ni.v[r * n], n);
    const auto resp = log_gabor_filter_row(row, config.log_gabor);
    for (std::size_t t = 0; t < n; ++t) {
      if (resp[t].real() > 0.0) code.set_bit(r, 2 * t, true);
      if (resp[t].imag() > 0.0) code.set_bit(r, 2 * t + 1, true);
    }
  }
  return code;
}

IrisCode encode(const PolarIrisSegment& polar, const EncoderConfig& config) {
  switch (config.encoder) {
    case EncoderId::hh1: return encode_hh1(polar, config);
    case EncoderId::hh2: return encode_hh2(polar, config);
    case EncoderId::lge: return encode_lge(polar, config);
  }
  throw Error(Errc::bad_config, "unknown encoder id");
}

std::vector<std::uint8_t> serialize_template(const IrisCode& code) {
  if (code.rows == 0 || code.cols == 0)
    throw Error(Errc::degenerate_input, "refusing to serialize empty code");
  if (code.rows > 0xffff || code.cols > 0xffff)
    throw Error(Errc::format_error, "code dims exceed template format limit (65535)");
  if (code.bits.size() != code.byte_count())
    throw Error(Errc::format_error, "code bit buffer has wrong size");

  std::vector<std::uint8_t> out;
  out.reserve(18 + code.bits.size());
  out.push_back('I');
  out.push_back('R');
  out.push_back('S');
  out.push_back('C');
  out.push_back(0x01);
  out.push_back(static_cast<std::uint8_t>(code.encoder));
  append_u16_be(out, static_cast<std::uint16_t>(code.rows));
  append_u16_be(out, static_cast<std::uint16_t>(code.cols));
  append_u64_be(out, code.digest);
  out.insert(out.end(), code.bits.begin(), code.bits.end());
  return out;
}

IrisCode parse_template(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 18) throw Error(Errc::format_error, "template too short");
  if (bytes[0] != 'I' || bytes[1] != 'R' || bytes[2] != 'S' || bytes[3] != 'C')
    throw Error(Errc::format_error, "bad template magic");
  if (bytes[4] != 0x01) throw Error(Errc::format_error, "unsupported template version");
  const std::uint8_t enc = bytes[5];
  if (enc < 1 || enc > 3) throw Error(Errc::format_error, "bad encoder id");

  IrisCode code;
  code.encoder = static_cast<EncoderId>(enc);
  code.rows = (static_cast<std::size_t>(bytes[6]) << 8) | bytes[7];
  code.cols = (static_cast<std::size_t>(bytes[8]) << 8) | bytes[9];
  if (code.rows == 0 || code.cols == 0)
    throw Error(Errc::format_error, "zero code dims in template");
  code.digest = 0;
  for (int i = 0; i < 8; ++i) code.digest = (code.digest << 8) | bytes[10 + i];

  const std::size_t payload = code.byte_count();
  if (bytes.size() != 18 + payload)
    throw Error(Errc::format_error, "template payload size mismatch");
  code.bits.assign(bytes.begin() + 18, bytes.end());

  // Padding bits beyond rows*cols must be zero (serialization invariant).
  const std::size_t tail_bits = payload * 8 - code.bit_count();
  if (tail_bits > 0) {
    const std::uint8_t mask = static_cast<std::uint8_t>((1u << tail_bits) - 1u);
    if (code.bits.back() & mask)
      throw Error(Errc::format_error, "nonzero padding bits in template");
  }
  return code;
}

void write_template_file(const IrisCode& code, const std::filesystem::path& path) {
  const auto bytes = serialize_template(code);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

IrisCode read_template_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_template(bytes);
}

}  // namespace iris
