#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "iris/errors.hpp"
#include "iris/segmentation.hpp"
#include "iris/synth.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using iris::Errc;
using iris::GrayImage;
using iris::MatD;
using iris::PolarIrisSegment;
using iris::PupilCircle;
using testutil::error_code_of;

namespace {

constexpr double kPi = oracle::kPi;

GrayImage disk_image(std::size_t w, std::size_t h, double cx, double cy, double r,
                     std::uint8_t bg, std::uint8_t fg) {
  GrayImage img(w, h, bg);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      if (dx * dx + dy * dy <= r * r) img.at(x, y) = fg;
    }
  }
  return img;
}

// Polar working grid whose column-mean profile steps from `low` to a strict
// peak at `boundary`, decaying gently after it (dark iris, bright sclera).
PolarIrisSegment step_profile(std::size_t angles, std::size_t radii, std::size_t boundary) {
  PolarIrisSegment seg;
  seg.pupil_radius = 30.0;
  seg.radial_step = 1.0;
  seg.data = MatD(angles, radii);
  for (std::size_t k = 0; k < angles; ++k) {
    for (std::size_t j = 0; j < radii; ++j) {
      if (j < boundary)
        seg.data(k, j) = 0.30;
      else
        seg.data(k, j) = 0.95 - 0.01 * static_cast<double>(j - boundary);
    }
  }
  return seg;
}

iris::IrisTexture two_term_texture(double n1, double w1, double n2, double w2) {
  iris::IrisTexture tex;
  tex.terms = {{n1, w1, 1.0, 0.3, 0.9}, {n2, w2, 0.7, 1.1, 0.2}};
  double sum_sq = 0.0;
  for (const auto& t : tex.terms) sum_sq += t.amp * t.amp;
  tex.inv_rms = 1.0 / std::sqrt(sum_sq / 4.0);
  return tex;
}

}  // namespace

TEST_SUITE("segmentation") {

TEST_CASE("two-means splits a bimodal population exactly") {
  MatD m(2, 3);
  m.v = {0.0, 0.0, 0.0, 10.0, 10.0, 10.0};
  const auto km = iris::kmeans2_binarize(m);
  CHECK_EQ(km.low_centroid, 0.0);
  CHECK_EQ(km.high_centroid, 10.0);
  const std::vector<unsigned char> want{0, 0, 0, 1, 1, 1};
  CHECK_EQ(km.labels.v, want);
}

TEST_CASE("two-means centroids match the brute-force optimal split") {
  MatD m(1, 4);
  m.v = {1.0, 2.0, 9.0, 10.0};
  const auto km = iris::kmeans2_binarize(m);
  CHECK_EQ(km.low_centroid, 1.5);
  CHECK_EQ(km.high_centroid, 9.5);
  const auto [lo, hi] = oracle::best_two_partition(m.v);
  CHECK_EQ(km.low_centroid, lo);
  CHECK_EQ(km.high_centroid, hi);
  const std::vector<unsigned char> want{0, 0, 1, 1};
  CHECK_EQ(km.labels.v, want);
}

TEST_CASE("two-means reaches an assignment fixpoint") {
  // At convergence the labels must be the nearest-centroid assignment and the
  // centroids must be the means of their clusters.
  std::mt19937_64 g(19);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(g() % 56);
    MatD m(1, n);
    for (auto& x : m.v) x = oracle::uniform(g, 0.0, 100.0);
    if (*std::min_element(m.v.begin(), m.v.end()) ==
        *std::max_element(m.v.begin(), m.v.end()))
      continue;  // astronomically unlikely, but the contract would reject it
    const auto km = iris::kmeans2_binarize(m);
    CHECK_LT(km.low_centroid, km.high_centroid);

    const double mid = 0.5 * (km.low_centroid + km.high_centroid);
    double sum_lo = 0.0, sum_hi = 0.0;
    std::size_t n_lo = 0, n_hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool hi_side = m.v[i] >= mid;  // ties go to the higher cluster
      CHECK_EQ(km.labels.v[i], hi_side ? 1 : 0);
      if (hi_side) {
        sum_hi += m.v[i];
        ++n_hi;
      } else {
        sum_lo += m.v[i];
        ++n_lo;
      }
    }
    REQUIRE_GT(n_lo, 0);
    REQUIRE_GT(n_hi, 0);
    CHECK_LE(std::abs(sum_lo / static_cast<double>(n_lo) - km.low_centroid), 1e-12);
    CHECK_LE(std::abs(sum_hi / static_cast<double>(n_hi) - km.high_centroid), 1e-12);
  }
}

TEST_CASE("two-means is permutation-invariant") {
  std::mt19937_64 g(23);
  MatD m(1, 20);
  for (auto& x : m.v) x = oracle::uniform(g, -5.0, 5.0);
  const auto base = iris::kmeans2_binarize(m);

  MatD shuffled = m;
  std::vector<std::size_t> perm(m.v.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), g);
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled.v[i] = m.v[perm[i]];
  const auto moved = iris::kmeans2_binarize(shuffled);

  CHECK_EQ(base.low_centroid, moved.low_centroid);
  CHECK_EQ(base.high_centroid, moved.high_centroid);
  for (std::size_t i = 0; i < perm.size(); ++i)
    CHECK_EQ(moved.labels.v[i], base.labels.v[perm[i]]);
}

TEST_CASE("two-means rejects degenerate input") {
  CHECK_EQ(error_code_of([] { iris::kmeans2_binarize(MatD(3, 3, 4.2)); }),
           Errc::degenerate_input);
  CHECK_EQ(error_code_of([] { iris::kmeans2_binarize(MatD()); }), Errc::degenerate_input);
}

TEST_CASE("pupil finder locates a centered dark disk") {
  const auto img = disk_image(256, 256, 128.0, 128.0, 30.0, 200, 20);
  const PupilCircle p = iris::find_pupil(img);
  CHECK_LE(std::abs(p.cx - 128.0), 1.0);
  CHECK_LE(std::abs(p.cy - 128.0), 1.0);
  CHECK_LE(std::abs(p.radius - 30.0), 1.0);
}

TEST_CASE("pupil finder is translation-covariant") {
  const auto img = disk_image(256, 256, 90.0, 150.0, 30.0, 200, 20);
  const PupilCircle p = iris::find_pupil(img);
  CHECK_LE(std::abs(p.cx - 90.0), 1.0);
  CHECK_LE(std::abs(p.cy - 150.0), 1.0);
  CHECK_LE(std::abs(p.radius - 30.0), 1.0);
}

TEST_CASE("pupil finder rejects a uniform image") {
  CHECK_EQ(error_code_of([] { iris::find_pupil(GrayImage(64, 64, 255)); }),
           Errc::pupil_not_found);
}

TEST_CASE("pupil finder rejects sparse noise and non-circular shapes") {
  // Isolated dark pixels vanish under the 3x3 opening.
  GrayImage speckled(256, 256, 200);
  std::mt19937_64 g(31);
  for (int i = 0; i < 20; ++i)
    speckled.at(g() % 256, g() % 256) = 10;
  CHECK_EQ(error_code_of([&] { iris::find_pupil(speckled); }), Errc::pupil_not_found);

  // A long thin bar survives the opening but is far from disk-like.
  GrayImage barred(256, 256, 200);
  for (std::size_t y = 100; y < 105; ++y)
    for (std::size_t x = 0; x < 256; ++x) barred.at(x, y) = 10;
  CHECK_EQ(error_code_of([&] { iris::find_pupil(barred); }), Errc::pupil_not_found);
}

TEST_CASE("polar unwrap of a radially banded image has identical rows") {
  // Rings of constant intensity, 3 px wide, centered on the sampled radii, so
  // every bilinear read sees four equal neighbors.
  GrayImage img(256, 256, 10);
  const double cx = 128.0, cy = 128.0;
  for (std::size_t y = 0; y < 256; ++y) {
    for (std::size_t x = 0; x < 256; ++x) {
      const double d = std::hypot(static_cast<double>(x) - cx, static_cast<double>(y) - cy);
      for (int j = 0; j <= 10; ++j) {
        const double ring = 30.0 + 3.0 * j;
        if (d >= ring - 1.5 && d < ring + 1.5) {
          img.at(x, y) = static_cast<std::uint8_t>(40 + 15 * j);
          break;
        }
      }
    }
  }
  const PupilCircle pupil{cx, cy, 30.0};
  const auto seg = iris::unwrap_polar(img, pupil, 30.0, 64, 10);
  REQUIRE_EQ(seg.angles(), 64);
  REQUIRE_EQ(seg.radii(), 10);
  CHECK_EQ(seg.radial_step, 3.0);
  for (std::size_t k = 1; k < seg.angles(); ++k)
    for (std::size_t j = 0; j < seg.radii(); ++j)
      CHECK_LE(std::abs(seg.data(k, j) - seg.data(0, j)), 1e-9);
  // Column j sampled ring j: value (40 + 15 j)/255.
  for (std::size_t j = 0; j < seg.radii(); ++j)
    CHECK_LE(std::abs(seg.data(0, j) - (40.0 + 15.0 * static_cast<double>(j)) / 255.0), 1e-9);
}

TEST_CASE("polar unwrap maps a step ring to the expected column") {
  GrayImage img(256, 256, 0);
  for (std::size_t y = 0; y < 256; ++y) {
    for (std::size_t x = 0; x < 256; ++x) {
      const double d = std::hypot(static_cast<double>(x) - 128.0,
                                  static_cast<double>(y) - 128.0);
      if (d >= 40.0) img.at(x, y) = 255;
    }
  }
  const auto seg = iris::unwrap_polar(img, {128.0, 128.0, 30.0}, 32.0, 64, 32);
  // radial_step = 1, so the 0 -> 1 transition sits at column (40-30)/1 = 10.
  for (std::size_t k = 0; k < seg.angles(); ++k) {
    std::size_t first_bright = seg.radii();
    for (std::size_t j = 0; j < seg.radii(); ++j) {
      if (seg.data(k, j) >= 0.5) {
        first_bright = j;
        break;
      }
    }
    CHECK_GE(first_bright, 9);
    CHECK_LE(first_bright, 11);
  }
}

TEST_CASE("polar unwrap samples four flat angular quadrants") {
  // Quadrants split along the diagonals (|angle| < 45 deg is "right", etc.)
  // so the four sampled rays at angles 0, 90, 180, 270 deg sit centrally
  // inside one quadrant each. Angles measure y downward.
  GrayImage img(256, 256, 0);
  const double values[4] = {60.0, 110.0, 160.0, 210.0};
  for (std::size_t y = 0; y < 256; ++y) {
    for (std::size_t x = 0; x < 256; ++x) {
      const double theta =
          std::atan2(static_cast<double>(y) - 128.0, static_cast<double>(x) - 128.0);
      const int q = static_cast<int>(std::floor((theta + kPi / 4.0) / (kPi / 2.0)));
      const int quadrant = ((q % 4) + 4) % 4;
      img.at(x, y) = static_cast<std::uint8_t>(values[quadrant]);
    }
  }
  const auto seg = iris::unwrap_polar(img, {128.0, 128.0, 20.0}, 30.0, 4, 16);
  REQUIRE_EQ(seg.angles(), 4);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t j = 0; j < seg.radii(); ++j)
      CHECK_LE(std::abs(seg.data(k, j) - values[k] / 255.0), 1e-12);
}

TEST_CASE("polar unwrap validates geometry") {
  const GrayImage img(128, 128, 100);
  CHECK_EQ(error_code_of([&] { iris::unwrap_polar(img, {5.0, 64.0, 30.0}, 10.0, 16, 8); }),
           Errc::invalid_geometry);
  CHECK_EQ(error_code_of([&] { iris::unwrap_polar(img, {64.0, 64.0, 0.0}, 10.0, 16, 8); }),
           Errc::invalid_geometry);
  CHECK_EQ(error_code_of([&] { iris::unwrap_polar(img, {64.0, 64.0, 20.0}, 0.0, 16, 8); }),
           Errc::invalid_geometry);
  CHECK_EQ(error_code_of([&] { iris::unwrap_polar(img, {64.0, 64.0, 20.0}, 10.0, 0, 8); }),
           Errc::invalid_geometry);
  CHECK_EQ(error_code_of([&] { iris::unwrap_polar(GrayImage(), {4.0, 4.0, 2.0}, 2.0, 8, 8); }),
           Errc::degenerate_input);
}

TEST_CASE("limbic detector finds a clean step boundary") {
  const auto seg = step_profile(256, 64, 22);
  CHECK_EQ(iris::detect_limbic_index(seg), 22);
}

TEST_CASE("limbic detector finds a noisy boundary within tolerance") {
  PolarIrisSegment seg;
  seg.pupil_radius = 30.0;
  seg.radial_step = 1.0;
  seg.data = MatD(256, 64);
  std::mt19937_64 g(7);
  for (std::size_t k = 0; k < 256; ++k) {
    for (std::size_t j = 0; j < 64; ++j) {
      const double base = j < 20 ? 0.30 : 0.90;
      seg.data(k, j) = base + oracle::uniform(g, -0.02, 0.02);
    }
  }
  const std::size_t idx = iris::detect_limbic_index(seg);
  CHECK_GE(idx, 18);
  CHECK_LE(idx, 22);
}

TEST_CASE("limbic detector takes the smaller of the two sector estimates") {
  // Left sector rows (135..157.5 deg) see a boundary at 14, everything else
  // at 22; the result must be the minimum.
  auto seg = step_profile(256, 64, 22);
  const std::size_t row_lo = static_cast<std::size_t>(std::ceil(135.0 / 360.0 * 256.0));
  const std::size_t row_hi = static_cast<std::size_t>(std::floor(157.5 / 360.0 * 256.0));
  const auto narrow = step_profile(256, 64, 14);
  for (std::size_t k = row_lo; k <= row_hi; ++k)
    for (std::size_t j = 0; j < 64; ++j) seg.data(k, j) = narrow.data(k, j);
  CHECK_EQ(iris::detect_limbic_index(seg), 14);
}

TEST_CASE("limbic detector rejects monotone and flat profiles") {
  PolarIrisSegment ramp;
  ramp.pupil_radius = 30.0;
  ramp.radial_step = 1.0;
  ramp.data = MatD(64, 32);
  for (std::size_t k = 0; k < 64; ++k)
    for (std::size_t j = 0; j < 32; ++j) ramp.data(k, j) = static_cast<double>(j) / 32.0;
  CHECK_EQ(error_code_of([&] { iris::detect_limbic_index(ramp); }), Errc::limbic_not_found);

  PolarIrisSegment flat = ramp;
  std::fill(flat.data.v.begin(), flat.data.v.end(), 0.5);
  CHECK_EQ(error_code_of([&] { iris::detect_limbic_index(flat); }), Errc::limbic_not_found);
}

TEST_CASE("near-pupil peaks cannot hijack the boundary") {
  // A strict local maximum at column 1 sits inside the 2-column guard band,
  // so the peak is still found at the true boundary (25). The bright column
  // lands in the sclera cluster of the cropped 2-means, shifting the matching
  // count down by one.
  auto bright = step_profile(256, 64, 25);
  for (std::size_t k = 0; k < 256; ++k) bright.data(k, 1) = 0.97;
  CHECK_EQ(iris::detect_limbic_index(bright), 24);

  // A bump below the mid-range level is not a qualifying peak and stays in
  // the dark cluster, leaving the boundary count untouched.
  auto dim = step_profile(256, 64, 25);
  for (std::size_t k = 0; k < 256; ++k) dim.data(k, 1) = 0.50;
  CHECK_EQ(iris::detect_limbic_index(dim), 25);
}

TEST_CASE("limbic detector is invariant to affine intensity rescaling") {
  const auto base = step_profile(256, 64, 14);
  PolarIrisSegment scaled = base;
  for (auto& x : scaled.data.v) x = 0.4 * x + 0.1;
  CHECK_EQ(iris::detect_limbic_index(base), iris::detect_limbic_index(scaled));
}

TEST_CASE("limbic detector needs a minimum working grid") {
  CHECK_EQ(error_code_of([] {
             PolarIrisSegment tiny;
             tiny.data = MatD(4, 64, 0.5);
             iris::detect_limbic_index(tiny);
           }),
           Errc::degenerate_input);
  CHECK_EQ(error_code_of([] {
             PolarIrisSegment tiny;
             tiny.data = MatD(64, 4, 0.5);
             iris::detect_limbic_index(tiny);
           }),
           Errc::degenerate_input);
}

TEST_CASE("segment recovers ring geometry from a rendered eye") {
  iris::EyeParams params;  // pupil 30, limbic 70, eyelid 85
  params.texture = two_term_texture(12.0, 1.2, 17.0, 2.1);
  const GrayImage img = iris::render_eye(params, 256, 256);
  const auto res = iris::segment(img, 512, 32);
  REQUIRE_MESSAGE(res.ok, res.failure_reason);
  CHECK_LE(std::abs(res.pupil.cx - 128.0), 1.5);
  CHECK_LE(std::abs(res.pupil.cy - 128.0), 1.5);
  CHECK_LE(std::abs(res.pupil.radius - 30.0), 2.0);
  CHECK_LE(std::abs(res.limbic_radius - 70.0), 3.0);
  REQUIRE_EQ(res.segment.angles(), 512);
  REQUIRE_EQ(res.segment.radii(), 32);
  CHECK_EQ(res.segment.pupil_radius, res.pupil.radius);
  CHECK_LE(std::abs(res.segment.radial_step -
                    (res.limbic_radius - res.pupil.radius) / 32.0),
           1e-12);
  for (const double v : res.segment.data.v) {
    CHECK_GE(v, 0.0);
    CHECK_LE(v, 1.0);
  }
}

TEST_CASE("segment geometry is texture-independent") {
  // Same anatomy and same noise field (shared seed); only the texture
  // differs. Sensor noise stays on: a noiseless sclera is perfectly flat, and
  // a flat plateau has no strict local maximum for the detector to anchor on.
  iris::EyeParams a;
  a.texture = two_term_texture(12.0, 1.2, 17.0, 2.1);
  iris::EyeParams b = a;
  b.texture = two_term_texture(13.0, 0.8, 19.0, 2.7);

  const auto res_a = iris::segment(iris::render_eye(a, 256, 256), 256, 16);
  const auto res_b = iris::segment(iris::render_eye(b, 256, 256), 256, 16);
  REQUIRE_MESSAGE(res_a.ok, res_a.failure_reason);
  REQUIRE_MESSAGE(res_b.ok, res_b.failure_reason);
  CHECK_LE(std::abs(res_a.pupil.radius - res_b.pupil.radius), 1.0);
  CHECK_LE(std::abs(res_a.limbic_radius - res_b.limbic_radius), 2.0);
}

TEST_CASE("segment reports failures instead of throwing") {
  const auto res = iris::segment(GrayImage(128, 128, 255), 256, 16);
  CHECK_FALSE(res.ok);
  CHECK_NE(res.failure_reason.find("pupil_not_found"), std::string::npos);
}

TEST_CASE("segment is deterministic") {
  iris::EyeParams params;
  params.texture = two_term_texture(14.0, 1.5, 21.0, 2.4);
  params.noise_seed = 99;
  const GrayImage img = iris::render_eye(params, 256, 256);
  const auto r1 = iris::segment(img, 256, 16);
  const auto r2 = iris::segment(img, 256, 16);
  REQUIRE_MESSAGE(r1.ok, r1.failure_reason);
  CHECK_EQ(r1.ok, r2.ok);
  CHECK_EQ(r1.pupil.cx, r2.pupil.cx);
  CHECK_EQ(r1.pupil.cy, r2.pupil.cy);
  CHECK_EQ(r1.pupil.radius, r2.pupil.radius);
  CHECK_EQ(r1.limbic_radius, r2.limbic_radius);
  CHECK(r1.segment.data == r2.segment.data);
}

}  // TEST_SUITE
