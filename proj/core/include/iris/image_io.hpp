#pragma once

#include <filesystem>

#include "iris/image.hpp"

namespace iris {

// Binary PGM (P5, maxval <= 255). Writing is byte-deterministic.
GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

// PNG of any color type; converted to 8-bit grayscale on load.
GrayImage load_png(const std::filesystem::path& path);

// Dispatches on magic bytes (P5 -> PGM, \x89PNG -> PNG).
GrayImage load_image(const std::filesystem::path& path);

}  // namespace iris
