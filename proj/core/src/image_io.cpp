#include "iris/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "iris/errors.hpp"

namespace iris {
namespace {

// Skips PGM whitespace and '#' comment lines; returns the next token.
std::string next_pgm_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) {
      token.push_back(static_cast<char>(ch));
      while ((ch = in.get()) != EOF && !std::isspace(ch) && ch != '#')
        token.push_back(static_cast<char>(ch));
      if (ch == '#') in.unget();
      return token;
    }
  }
  return token;
}

std::size_t parse_size(const std::string& token, const char* what,
                       const std::filesystem::path& path) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
    throw Error(Errc::io_error, "bad PGM " + std::string(what) + " in " + path.string());
  return static_cast<std::size_t>(std::stoull(token));
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

}  // namespace

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  if (next_pgm_token(in) != "P5")
    throw Error(Errc::io_error, "not a binary PGM (P5): " + path.string());
  const std::size_t width = parse_size(next_pgm_token(in), "width", path);
  const std::size_t height = parse_size(next_pgm_token(in), "height", path);
  const std::size_t maxval = parse_size(next_pgm_token(in), "maxval", path);
  if (width == 0 || height == 0)
    throw Error(Errc::io_error, "zero-sized PGM: " + path.string());
  if (maxval == 0 || maxval > 255)
    throw Error(Errc::io_error, "only 8-bit PGM supported: " + path.string());
  // The single whitespace byte after maxval was already consumed by the
  // tokenizer; pixel data starts here.
  GrayImage img(width, height);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.data.size())
    throw Error(Errc::io_error, "truncated PGM: " + path.string());
  return img;
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  if (img.empty()) throw Error(Errc::degenerate_input, "refusing to save empty image");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot create " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

GrayImage load_png(const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw Error(Errc::io_error, "cannot open " + path.string());

  png_byte header[8] = {};
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
    throw Error(Errc::io_error, "not a PNG: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error(Errc::io_error, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(Errc::io_error, "libpng init failed");
  }

  GrayImage img;
  std::vector<png_bytep> row_ptrs;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(Errc::io_error, "corrupt PNG: " + path.string());
  }

  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray(png, 1, -1.0, -1.0);
  png_set_strip_alpha(png);  // drops native alpha and alpha gained from tRNS
  png_read_update_info(png, info);

  const std::size_t width = png_get_image_width(png, info);
  const std::size_t height = png_get_image_height(png, info);
  if (png_get_rowbytes(png, info) != width) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(Errc::io_error, "PNG to 8-bit gray conversion failed: " + path.string());
  }

  img = GrayImage(width, height);
  row_ptrs.resize(height);
  for (std::size_t y = 0; y < height; ++y) row_ptrs[y] = &img.data[y * width];
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

GrayImage load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  unsigned char magic[2] = {};
  in.read(reinterpret_cast<char*>(magic), 2);
  in.close();
  if (magic[0] == 'P' && magic[1] == '5') return load_pgm(path);
  if (magic[0] == 0x89 && magic[1] == 'P') return load_png(path);
  throw Error(Errc::io_error, "unsupported image format: " + path.string());
}

}  // namespace iris
