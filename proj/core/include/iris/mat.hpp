#pragma once

#include <cstddef>
#include <vector>

namespace iris {

// Minimal dense row-major matrix. `v` is the row-major flattening, so
// m.v[r * cols + c] == m(r, c); algorithms that need the flat view use `v`
// directly.
template <typename T>
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> v;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), v(r * c, fill) {}

  T& operator()(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return v[r * cols + c]; }

  std::size_t size() const { return v.size(); }
  bool empty() const { return v.empty(); }

  bool operator==(const Mat&) const = default;
};

using MatD = Mat<double>;
using MatU8 = Mat<unsigned char>;

// Transpose helper (used to reorient polar segments for the encoders).
template <typename T>
Mat<T> transposed(const Mat<T>& m) {
  Mat<T> t(m.cols, m.rows);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = 0; c < m.cols; ++c) t(c, r) = m(r, c);
  return t;
}

}  // namespace iris
