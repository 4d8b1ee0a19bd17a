#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "iris/mat.hpp"

namespace iris {

// 8-bit grayscale raster, row-major, data[y * width + x].
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(std::size_t w, std::size_t h, std::uint8_t fill = 0)
      : width(w), height(h), data(w * h, fill) {}

  std::uint8_t at(std::size_t x, std::size_t y) const { return data[y * width + x]; }
  std::uint8_t& at(std::size_t x, std::size_t y) { return data[y * width + x]; }
  bool empty() const { return data.empty(); }

  bool operator==(const GrayImage&) const = default;
};

// Image as doubles (one matrix row per raster row), values kept in [0, 255].
inline MatD to_mat(const GrayImage& img) {
  MatD m(img.height, img.width);
  for (std::size_t i = 0; i < img.data.size(); ++i) m.v[i] = img.data[i];
  return m;
}

}  // namespace iris
