#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "iris/image.hpp"
#include "iris/manifest.hpp"

namespace iris {

// One separable texture harmonic: amp * cos(n*alpha + phase_a) *
// cos(w*pi*rho + phase_r), with alpha the iris angle and rho the normalized
// radial coordinate (0 at the pupil edge, 1 at the limbus).
struct TextureTerm {
  double n = 2.0;  // integer angular harmonic (keeps the pattern 2*pi periodic)
  double w = 1.0;  // radial frequency
  double amp = 1.0;
  double phase_a = 0.0;
  double phase_r = 0.0;
};

// RMS-normalized sum of harmonics; eval() has unit variance over uniform
// (alpha, rho) before clamping.
struct IrisTexture {
  std::vector<TextureTerm> terms;
  double inv_rms = 1.0;

  double eval(double alpha, double rho) const;
};

// Everything needed to render one deterministic eye image.
struct EyeParams {
  double cx = 128.0, cy = 128.0;  // pupil/iris center, pixels
  double pupil_radius = 30.0;
  double limbic_radius = 70.0;    // iris/sclera boundary
  double eyelid_radius = 85.0;    // sclera/periocular boundary
  double pupil_level = 18.0;      // mean gray levels, 0..255
  double sclera_level = 238.0;
  double eyelid_level = 150.0;
  double iris_base = 152.0;
  double iris_amp = 17.0;         // texture contrast (texture has unit RMS)
  double rotation = 0.0;          // radians; rotates the iris texture only
  double grad_strength = 0.0;     // multiplicative illumination slope
  double grad_angle = 0.0;
  double noise_sigma = 2.0;       // additive Gaussian pixel noise
  std::uint64_t noise_seed = 0;
  IrisTexture texture;            // empty terms -> flat iris
};

// Renders concentric pupil/iris/sclera/periocular regions with ~1.5 px
// blended boundaries, the texture stretched over [pupil_radius,
// limbic_radius], an illumination gradient, and seeded per-pixel noise.
// Deterministic function of its arguments.
GrayImage render_eye(const EyeParams& params, std::size_t width, std::size_t height);

struct SynthConfig {
  std::size_t identities = 20;  // distinct eyes; eye i -> subject i/2, L/R by parity
  std::size_t samples = 10;     // images per eye
  std::uint64_t seed = 1;
  std::size_t width = 256;
  std::size_t height = 256;
};

// Generates identities*samples PGM images under out_dir/images plus
// out_dir/manifest.csv, and returns the manifest. Identity appearance
// (anatomy + texture) derives from a per-identity seed, per-sample capture
// nuisances (pupil dilation, rotation, off-center, lighting, noise) from
// per-sample seeds, all spawned from config.seed; reruns are byte-identical.
// Requires identities >= 2 and samples >= 2 (Errc::bad_config).
DatasetManifest synth_dataset(const SynthConfig& config, const std::filesystem::path& out_dir);

}  // namespace iris
