#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "iris/image.hpp"
#include "iris/mat.hpp"

namespace iris {

// Pupil boundary as a circle in image coordinates (pixels; y grows downward).
struct PupilCircle {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

// Iris ring resampled on a polar grid. Row k holds the circle at angle
// theta_k = 2*pi*k / angles() (theta 0 points toward +x, increasing toward
// +y); column j holds radius pupil_radius + j * radial_step. Values are
// intensities scaled to [0, 1].
struct PolarIrisSegment {
  MatD data;                 // angles() x radii()
  double pupil_radius = 0.0; // radius of column 0, pixels
  double radial_step = 0.0;  // pixels per column

  std::size_t angles() const { return data.rows; }
  std::size_t radii() const { return data.cols; }
};

struct SegmentationResult {
  bool ok = false;
  std::string failure_reason;   // empty when ok
  PupilCircle pupil;
  double limbic_radius = 0.0;   // pixels, estimated iris/sclera boundary
  PolarIrisSegment segment;     // ring [pupil.radius, limbic_radius] resampled
};

struct SegmentationOptions {
  // Polar working grid used while locating the limbic boundary.
  std::size_t working_angles = 256;
  std::size_t working_radii = 64;
  // The working unwrap spans [pupil_radius, radial_extent_factor * pupil_radius].
  double radial_extent_factor = 3.0;
  // Replace the default dark-disk pupil finder (e.g. with a detector tuned to
  // a specific sensor). Must return a circle fully inside the image or throw.
  std::function<PupilCircle(const GrayImage&)> pupil_finder;
};

// Result of two-cluster 1-D k-means over a value matrix: per-element labels
// (0 = lower-mean cluster, 1 = higher-mean cluster) plus the two converged
// cluster centroids.
struct Kmeans2Result {
  MatU8 labels;           // same shape as the input
  double low_centroid = 0.0;
  double high_centroid = 0.0;
};

// Two-cluster 1-D k-means on all values of `values`: centers seeded at
// min/max, Lloyd iterations until the assignment reaches a fixpoint. Ties go
// to the higher cluster. Throws Errc::degenerate_input when every value is
// equal (no two clusters exist) or the matrix is empty.
Kmeans2Result kmeans2_binarize(const MatD& values);

// Default pupil detector: darkest k-means cluster, 3x3 morphological opening,
// largest 8-connected component kept if it is big enough (>= 0.05% of image)
// and disk-like (4*pi*area/perimeter^2 >= 0.5); circle = centroid +
// sqrt(area/pi). Throws Errc::pupil_not_found otherwise.
PupilCircle find_pupil(const GrayImage& img);

// Resamples the annulus [pupil.radius, pupil.radius + radial_extent] onto an
// angles x radii polar grid with bilinear interpolation (border-clamped) and
// scales intensities to [0, 1]. Throws Errc::invalid_geometry on degenerate
// geometry.
PolarIrisSegment unwrap_polar(const GrayImage& img, const PupilCircle& pupil,
                              double radial_extent, std::size_t angles,
                              std::size_t radii);

// Locates the iris/sclera boundary column in a working polar unwrap. For each
// of two sectors under the horizontal diameter (theta in [22.5, 45] deg and
// [135, 157.5] deg) the column-mean profile V is scanned for the
// smallest-index strict local maximum that lies at least 2 columns outside
// the pupil edge and at or above mid-range level min(V) + 0.5*(max-min); the
// profile is then cropped at that maximum, binarized with 2-means, and the
// boundary index is the number of columns whose majority label matches
// column 0's. The result is the smaller of the two sector indices. Requires
// at least 8 angular rows and 8 radial columns. Throws Errc::limbic_not_found
// when neither sector has a qualifying maximum.
std::size_t detect_limbic_index(const PolarIrisSegment& working);

// Full pipeline: pupil -> working unwrap -> limbic boundary -> final unwrap
// of the ring [pupil.radius, limbic_radius] at out_angles x out_radii.
// Detection failures are reported in the result (ok = false + reason), not
// thrown.
SegmentationResult segment(const GrayImage& img, std::size_t out_angles,
                           std::size_t out_radii,
                           const SegmentationOptions& options = {});

}  // namespace iris
