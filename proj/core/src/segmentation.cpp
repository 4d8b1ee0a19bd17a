#include "iris/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "iris/errors.hpp"

namespace iris {
namespace {

constexpr double kPi = std::numbers::pi;

// Bilinear sample with border clamping.
double sample_bilinear(const GrayImage& img, double x, double y) {
  const double max_x = static_cast<double>(img.width - 1);
  const double max_y = static_cast<double>(img.height - 1);
  const double xx = std::clamp(x, 0.0, max_x);
  const double yy = std::clamp(y, 0.0, max_y);
  const std::size_t x0 = static_cast<std::size_t>(xx);
  const std::size_t y0 = static_cast<std::size_t>(yy);
  const std::size_t x1 = std::min(x0 + 1, img.width - 1);
  const std::size_t y1 = std::min(y0 + 1, img.height - 1);
  const double fx = xx - static_cast<double>(x0);
  const double fy = yy - static_cast<double>(y0);
  const double top = (1.0 - fx) * img.at(x0, y0) + fx * img.at(x1, y0);
  const double bot = (1.0 - fx) * img.at(x0, y1) + fx * img.at(x1, y1);
  return (1.0 - fy) * top + fy * bot;
}

struct ComponentStats {
  std::size_t area = 0;
  std::size_t perimeter = 0;  // crack perimeter: pixel edges facing outside
  double sum_x = 0.0;
  double sum_y = 0.0;
};

// 3x3 binary erosion (mask values 0/1).
MatU8 erode3x3(const MatU8& mask) {
  MatU8 out(mask.rows, mask.cols, 0);
  for (std::size_t y = 0; y < mask.rows; ++y) {
    for (std::size_t x = 0; x < mask.cols; ++x) {
      bool all = true;
      for (int dy = -1; dy <= 1 && all; ++dy) {
        for (int dx = -1; dx <= 1 && all; ++dx) {
          const long yy = static_cast<long>(y) + dy;
          const long xx = static_cast<long>(x) + dx;
          if (yy < 0 || xx < 0 || yy >= static_cast<long>(mask.rows) ||
              xx >= static_cast<long>(mask.cols) ||
              mask(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx)) == 0)
            all = false;
        }
      }
      out(y, x) = all ? 1 : 0;
    }
  }
  return out;
}

MatU8 dilate3x3(const MatU8& mask) {
  MatU8 out(mask.rows, mask.cols, 0);
  for (std::size_t y = 0; y < mask.rows; ++y) {
    for (std::size_t x = 0; x < mask.cols; ++x) {
      bool any = false;
      for (int dy = -1; dy <= 1 && !any; ++dy) {
        for (int dx = -1; dx <= 1 && !any; ++dx) {
          const long yy = static_cast<long>(y) + dy;
          const long xx = static_cast<long>(x) + dx;
          if (yy >= 0 && xx >= 0 && yy < static_cast<long>(mask.rows) &&
              xx < static_cast<long>(mask.cols) &&
              mask(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx)) != 0)
            any = true;
        }
      }
      out(y, x) = any ? 1 : 0;
    }
  }
  return out;
}

// Largest 8-connected component of the mask; returns stats (area 0 if none).
ComponentStats largest_component(const MatU8& mask) {
  const std::size_t h = mask.rows, w = mask.cols;
  std::vector<int> label(h * w, -1);
  ComponentStats best;
  std::vector<std::size_t> stack;
  int next_label = 0;
  for (std::size_t start = 0; start < h * w; ++start) {
    if (mask.v[start] == 0 || label[start] != -1) continue;
    ComponentStats cur;
    stack.assign(1, start);
    label[start] = next_label;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const std::size_t y = p / w, x = p % w;
      cur.area += 1;
      cur.sum_x += static_cast<double>(x);
      cur.sum_y += static_cast<double>(y);
      // Crack perimeter: count the 4 pixel edges facing background/border.
      if (y == 0 || mask(y - 1, x) == 0) cur.perimeter += 1;
      if (y + 1 >= h || mask(y + 1, x) == 0) cur.perimeter += 1;
      if (x == 0 || mask(y, x - 1) == 0) cur.perimeter += 1;
      if (x + 1 >= w || mask(y, x + 1) == 0) cur.perimeter += 1;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dy == 0 && dx == 0) continue;
          const long yy = static_cast<long>(y) + dy;
          const long xx = static_cast<long>(x) + dx;
          if (yy < 0 || xx < 0 || yy >= static_cast<long>(h) || xx >= static_cast<long>(w))
            continue;
          const std::size_t q = static_cast<std::size_t>(yy) * w + static_cast<std::size_t>(xx);
          if (mask.v[q] != 0 && label[q] == -1) {
            label[q] = next_label;
            stack.push_back(q);
          }
        }
      }
    }
    if (cur.area > best.area) best = cur;
    ++next_label;
  }
  return best;
}

}  // namespace

Kmeans2Result kmeans2_binarize(const MatD& values) {
  if (values.empty()) throw Error(Errc::degenerate_input, "2-means of empty matrix");
  const auto [min_it, max_it] = std::minmax_element(values.v.begin(), values.v.end());
  double lo = *min_it, hi = *max_it;
  if (lo == hi) throw Error(Errc::degenerate_input, "2-means of constant values");

  // Lloyd iterations with centers seeded at the extremes. In 1-D the
  // assignment step is a threshold at the midpoint of the centers; ties go to
  // the higher cluster.
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double sum_lo = 0.0, sum_hi = 0.0;
    std::size_t n_lo = 0, n_hi = 0;
    for (const double v : values.v) {
      if (v < mid) {
        sum_lo += v;
        ++n_lo;
      } else {
        sum_hi += v;
        ++n_hi;
      }
    }
    if (n_lo == 0 || n_hi == 0) break;  // degenerate split; keep previous centers
    const double new_lo = sum_lo / static_cast<double>(n_lo);
    const double new_hi = sum_hi / static_cast<double>(n_hi);
    if (new_lo == lo && new_hi == hi) break;
    lo = new_lo;
    hi = new_hi;
  }
  Kmeans2Result result;
  result.low_centroid = lo;
  result.high_centroid = hi;
  result.labels = MatU8(values.rows, values.cols, 0);
  const double mid = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < values.v.size(); ++i)
    result.labels.v[i] = values.v[i] < mid ? 0 : 1;
  return result;
}

PupilCircle find_pupil(const GrayImage& img) {
  if (img.empty()) throw Error(Errc::degenerate_input, "empty image");
  MatD values(img.height, img.width);
  for (std::size_t i = 0; i < img.data.size(); ++i) values.v[i] = img.data[i];

  MatU8 labels;
  try {
    labels = kmeans2_binarize(values).labels;
  } catch (const Error& e) {
    if (e.code() == Errc::degenerate_input)
      throw Error(Errc::pupil_not_found, "image has a single intensity");
    throw;
  }
  MatU8 dark(img.height, img.width, 0);
  bool any_dark = false;
  for (std::size_t i = 0; i < labels.v.size(); ++i) {
    dark.v[i] = labels.v[i] == 0 ? 1 : 0;
    any_dark |= dark.v[i] != 0;
  }
  if (!any_dark) throw Error(Errc::pupil_not_found, "no dark cluster");

  const MatU8 opened = dilate3x3(erode3x3(dark));
  const ComponentStats comp = largest_component(opened);
  const double image_area = static_cast<double>(img.width * img.height);
  if (comp.area == 0 || static_cast<double>(comp.area) < 0.0005 * image_area)
    throw Error(Errc::pupil_not_found, "largest dark region too small");

  const double area = static_cast<double>(comp.area);
  const double perim = static_cast<double>(comp.perimeter);
  const double circularity = 4.0 * kPi * area / (perim * perim);
  if (circularity < 0.5)
    throw Error(Errc::pupil_not_found, "largest dark region not disk-like");

  PupilCircle circle;
  circle.cx = comp.sum_x / area;
  circle.cy = comp.sum_y / area;
  circle.radius = std::sqrt(area / kPi);
  if (circle.cx - circle.radius < 0.0 || circle.cy - circle.radius < 0.0 ||
      circle.cx + circle.radius > static_cast<double>(img.width - 1) ||
      circle.cy + circle.radius > static_cast<double>(img.height - 1))
    throw Error(Errc::pupil_not_found, "pupil circle exceeds image bounds");
  return circle;
}

PolarIrisSegment unwrap_polar(const GrayImage& img, const PupilCircle& pupil,
                              double radial_extent, std::size_t angles,
                              std::size_t radii) {
  if (img.empty()) throw Error(Errc::degenerate_input, "empty image");
  if (angles == 0 || radii == 0)
    throw Error(Errc::invalid_geometry, "polar grid dims must be positive");
  if (!(pupil.radius > 0.0) || !(radial_extent > 0.0))
    throw Error(Errc::invalid_geometry, "radii must be positive");
  if (pupil.cx - pupil.radius < 0.0 || pupil.cy - pupil.radius < 0.0 ||
      pupil.cx + pupil.radius > static_cast<double>(img.width - 1) ||
      pupil.cy + pupil.radius > static_cast<double>(img.height - 1))
    throw Error(Errc::invalid_geometry, "pupil circle exceeds image bounds");

  PolarIrisSegment seg;
  seg.pupil_radius = pupil.radius;
  seg.radial_step = radial_extent / static_cast<double>(radii);
  seg.data = MatD(angles, radii);
  for (std::size_t k = 0; k < angles; ++k) {
    const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(angles);
    const double ct = std::cos(theta), st = std::sin(theta);
    for (std::size_t j = 0; j < radii; ++j) {
      const double r = pupil.radius + static_cast<double>(j) * seg.radial_step;
      seg.data(k, j) = sample_bilinear(img, pupil.cx + r * ct, pupil.cy + r * st) / 255.0;
    }
  }
  return seg;
}

std::size_t detect_limbic_index(const PolarIrisSegment& working) {
  const std::size_t angles = working.angles();
  const std::size_t radii = working.radii();
  if (angles < 8 || radii < 8)
    throw Error(Errc::degenerate_input, "working polar grid too small");

  // Sector row ranges on the angular grid: theta in [22.5, 45] deg (right,
  // below the horizontal diameter) and [135, 157.5] deg (left). Row k maps to
  // theta_k = 360*k/angles deg.
  const auto sector_rows = [angles](double lo_deg, double hi_deg) {
    const std::size_t lo =
        static_cast<std::size_t>(std::ceil(lo_deg / 360.0 * static_cast<double>(angles)));
    const std::size_t hi =
        static_cast<std::size_t>(std::floor(hi_deg / 360.0 * static_cast<double>(angles)));
    return std::make_pair(lo, hi);  // inclusive
  };

  // Boundary index within one sector, or radii (sentinel) when the sector has
  // no qualifying maximum.
  const auto sector_index = [&](std::size_t row_lo, std::size_t row_hi) -> std::size_t {
    const std::size_t sector_rows = row_hi - row_lo + 1;
    std::vector<double> v(radii, 0.0);
    const double inv_rows = 1.0 / static_cast<double>(sector_rows);
    for (std::size_t j = 0; j < radii; ++j) {
      double sum = 0.0;
      for (std::size_t k = row_lo; k <= row_hi; ++k) sum += working.data(k, j);
      v[j] = sum * inv_rows;
    }
    // Mid-range level over the scanned columns only: column 0 sits on the
    // pupil blend and columns past the sclera can be darker still, and
    // neither may drag the level below the iris texture ripples.
    const auto [min_it, max_it] = std::minmax_element(v.begin() + 2, v.end());
    const double level = *min_it + 0.5 * (*max_it - *min_it);

    // Smallest-index strict local max, >= 2 columns from the pupil edge and
    // at or above mid-range level (so plateau noise inside the dark iris
    // cannot masquerade as the bright sclera peak).
    std::size_t peak = radii;
    for (std::size_t j = 2; j + 1 < radii; ++j) {
      if (v[j] > v[j - 1] && v[j] > v[j + 1] && v[j] >= level) {
        peak = j;
        break;
      }
    }
    if (peak == radii) return radii;

    // Crop columns [0, peak] and 2-means the subimage pixels; the boundary
    // index is the count of columns whose majority label matches the
    // pupil-side (column 0) majority. Voting per column keeps one blended or
    // speckled column from moving a centroid that hundreds of pixels define.
    MatD crop(sector_rows, peak + 1);
    for (std::size_t k = 0; k < sector_rows; ++k)
      for (std::size_t j = 0; j <= peak; ++j) crop(k, j) = working.data(row_lo + k, j);
    // A strict local max guarantees at least two distinct values, so 2-means
    // cannot see degenerate input here.
    const MatU8 labels = kmeans2_binarize(crop).labels;
    const auto majority_high = [&](std::size_t j) {
      std::size_t high = 0;
      for (std::size_t k = 0; k < sector_rows; ++k) high += labels(k, j);
      return 2 * high > sector_rows;  // ties side with the low cluster
    };
    const bool inner = majority_high(0);
    std::size_t count = 0;
    for (std::size_t j = 0; j <= peak; ++j)
      if (majority_high(j) == inner) ++count;
    return count;
  };

  const auto [r1_lo, r1_hi] = sector_rows(22.5, 45.0);
  const auto [r2_lo, r2_hi] = sector_rows(135.0, 157.5);
  const std::size_t i1 = sector_index(r1_lo, r1_hi);
  const std::size_t i2 = sector_index(r2_lo, r2_hi);
  if (i1 == radii && i2 == radii)
    throw Error(Errc::limbic_not_found, "no qualifying brightness maximum in either sector");
  return std::min(i1, i2);
}

SegmentationResult segment(const GrayImage& img, std::size_t out_angles,
                           std::size_t out_radii, const SegmentationOptions& options) {
  SegmentationResult result;
  try {
    if (out_angles == 0 || out_radii == 0)
      throw Error(Errc::invalid_geometry, "output polar dims must be positive");

    result.pupil = options.pupil_finder ? options.pupil_finder(img) : find_pupil(img);

    const double extent = options.radial_extent_factor * result.pupil.radius;
    const PolarIrisSegment working =
        unwrap_polar(img, result.pupil, extent, options.working_angles, options.working_radii);

    const std::size_t boundary_col = detect_limbic_index(working);
    result.limbic_radius =
        result.pupil.radius + static_cast<double>(boundary_col) * working.radial_step;
    if (result.limbic_radius <= result.pupil.radius)
      throw Error(Errc::limbic_not_found, "limbic boundary at or inside the pupil edge");

    result.segment = unwrap_polar(img, result.pupil,
                                  result.limbic_radius - result.pupil.radius,
                                  out_angles, out_radii);
    result.ok = true;
  } catch (const Error& e) {
    result.ok = false;
    result.failure_reason = e.what();
  }
  return result;
}

}  // namespace iris
