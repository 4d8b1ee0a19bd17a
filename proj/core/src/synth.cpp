#include "iris/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "iris/errors.hpp"
#include "iris/image_io.hpp"

namespace iris {
namespace {

constexpr double kPi = std::numbers::pi;

// Deterministic uniform/normal draws on top of the fixed mt19937_64 stream.
// The standard distributions are implementation-defined, so they are avoided:
// artifacts must be byte-identical across standard libraries.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  std::uint64_t raw() { return gen(); }

  double unit() {  // [0, 1), 53-bit resolution
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t below(std::uint64_t n) { return gen() % n; }

  double normal(double sigma) {  // Box-Muller, one fresh pair per call
    const double u1 = std::max(unit(), 0x1.0p-1074);
    const double u2 = unit();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }
};

double mix_linear(double a, double b, double t) {
  const double u = std::clamp(t, 0.0, 1.0);
  return a + (b - a) * u;
}

IrisTexture make_texture(Rng& rng) {
  IrisTexture tex;
  tex.terms.reserve(24);
  double power = 0.0;
  for (int i = 0; i < 24; ++i) {
    TextureTerm term;
    // Crypt/furrow detail is angularly fine-grained: harmonics below ~10
    // would survive averaging over a 22.5-degree sector and tilt its radial
    // brightness profile, which the limbic detector reads as structure.
    term.n = static_cast<double>(10 + rng.below(17));  // integer harmonics 10..26
    term.w = rng.uniform(0.5, 3.0);
    term.amp = rng.uniform(0.5, 1.0);
    term.phase_a = rng.uniform(0.0, 2.0 * kPi);
    term.phase_r = rng.uniform(0.0, 2.0 * kPi);
    power += term.amp * term.amp / 4.0;  // var of cos*cos over uniform phase
    tex.terms.push_back(term);
  }
  tex.inv_rms = 1.0 / std::sqrt(power);
  return tex;
}

}  // namespace

double IrisTexture::eval(double alpha, double rho) const {
  double sum = 0.0;
  for (const auto& t : terms)
    sum += t.amp * std::cos(t.n * alpha + t.phase_a) * std::cos(t.w * kPi * rho + t.phase_r);
  return sum * inv_rms;
}

GrayImage render_eye(const EyeParams& p, std::size_t width, std::size_t height) {
  if (width < 64 || height < 64)
    throw Error(Errc::bad_config, "render size must be at least 64x64");
  if (!(p.pupil_radius > 0.0) || !(p.limbic_radius > p.pupil_radius) ||
      !(p.eyelid_radius > p.limbic_radius))
    throw Error(Errc::invalid_geometry, "need 0 < pupil < limbic < eyelid radius");

  GrayImage img(width, height);
  Rng noise(p.noise_seed);
  const double blend_p = 0.75, blend_l = 0.75, blend_e = 1.5;
  const double inv_ring = 1.0 / (p.limbic_radius - p.pupil_radius);
  const double gx = std::cos(p.grad_angle), gy = std::sin(p.grad_angle);
  const double inv_extent = 1.0 / static_cast<double>(std::max(width, height));

  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const double dx = static_cast<double>(x) - p.cx;
      const double dy = static_cast<double>(y) - p.cy;
      const double d = std::hypot(dx, dy);

      // Iris intensity: base level plus texture on (angle - rotation, rho),
      // rho normalized over the current ring so dilation stretches the
      // pattern the way the polar unwrap expects.
      const auto iris_val = [&]() {
        double t = 0.0;
        if (!p.texture.terms.empty()) {
          const double alpha = std::atan2(dy, dx) - p.rotation;
          const double rho = std::clamp((d - p.pupil_radius) * inv_ring, 0.0, 1.0);
          t = std::clamp(p.texture.eval(alpha, rho), -2.0, 2.0);
        }
        return p.iris_base + p.iris_amp * t;
      };

      double v;
      if (d <= p.pupil_radius - blend_p) {
        v = p.pupil_level;
      } else if (d < p.pupil_radius + blend_p) {
        v = mix_linear(p.pupil_level, iris_val(),
                           (d - (p.pupil_radius - blend_p)) / (2.0 * blend_p));
      } else if (d <= p.limbic_radius - blend_l) {
        v = iris_val();
      } else if (d < p.limbic_radius + blend_l) {
        v = mix_linear(iris_val(), p.sclera_level,
                           (d - (p.limbic_radius - blend_l)) / (2.0 * blend_l));
      } else if (d <= p.eyelid_radius - blend_e) {
        v = p.sclera_level;
      } else if (d < p.eyelid_radius + blend_e) {
        v = mix_linear(p.sclera_level, p.eyelid_level,
                           (d - (p.eyelid_radius - blend_e)) / (2.0 * blend_e));
      } else {
        v = p.eyelid_level;
      }

      v *= 1.0 + p.grad_strength * (gx * dx + gy * dy) * inv_extent;
      v += noise.normal(p.noise_sigma);
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l));
    }
  }
  return img;
}

DatasetManifest synth_dataset(const SynthConfig& config, const std::filesystem::path& out_dir) {
  if (config.identities < 2) throw Error(Errc::bad_config, "need at least 2 identities");
  if (config.samples < 2) throw Error(Errc::bad_config, "need at least 2 samples per identity");
  if (config.width < 64 || config.height < 64)
    throw Error(Errc::bad_config, "image size must be at least 64x64");

  std::filesystem::create_directories(out_dir / "images");

  // Hierarchical seeding: master stream spawns one seed per identity; each
  // identity stream fixes the anatomy/texture and spawns per-sample seeds for
  // the capture nuisances. Adding identities or samples never reshuffles the
  // earlier ones.
  Rng master(config.seed);
  std::vector<std::uint64_t> identity_seeds(config.identities);
  for (auto& s : identity_seeds) s = master.raw();

  DatasetManifest manifest;
  manifest.base_dir = out_dir;

  for (std::size_t id = 0; id < config.identities; ++id) {
    Rng idr(identity_seeds[id]);
    const double base_pupil = idr.uniform(26.0, 34.0);
    const double limbic = base_pupil * idr.uniform(2.2, 2.5);
    // The iris must stay clearly darker than the sclera even at full texture
    // swing (base + 2*amp < sclera - margin) or the limbic detector's 2-means
    // loses its bimodality; it must also stay clearly brighter than the pupil
    // so the darkest-cluster pupil finder isolates the pupil alone.
    const double iris_base = idr.uniform(146.0, 160.0);
    const double iris_amp = idr.uniform(13.0, 19.0);
    const IrisTexture texture = make_texture(idr);

    char subject_buf[32];
    std::snprintf(subject_buf, sizeof(subject_buf), "s%02zu", id / 2);
    const std::string subject(subject_buf);
    const char eye = (id % 2 == 0) ? 'L' : 'R';

    for (std::size_t sample = 0; sample < config.samples; ++sample) {
      Rng sr(idr.raw());

      EyeParams p;
      p.pupil_radius = base_pupil * sr.uniform(0.93, 1.07);
      p.limbic_radius = limbic;
      p.eyelid_radius = limbic + sr.uniform(10.0, 18.0);
      p.eyelid_level = sr.uniform(140.0, 160.0);
      p.iris_base = iris_base;
      p.iris_amp = iris_amp;
      p.texture = texture;
      p.cx = static_cast<double>(config.width) / 2.0 + sr.uniform(-4.0, 4.0);
      p.cy = static_cast<double>(config.height) / 2.0 + sr.uniform(-4.0, 4.0);
      // Cooperative capture: head roll across samples stays small. The
      // matcher runs without shift compensation, so every degree of relative
      // rotation costs aligned bits directly.
      p.rotation = sr.uniform(-1.0, 1.0) * kPi / 180.0;
      p.grad_strength = sr.uniform(0.02, 0.06);
      p.grad_angle = sr.uniform(0.0, 2.0 * kPi);
      p.noise_seed = sr.raw();

      const GrayImage img = render_eye(p, config.width, config.height);

      char name_buf[32];
      std::snprintf(name_buf, sizeof(name_buf), "%s%c_%02zu.pgm", subject.c_str(), eye, sample);
      const std::string rel = std::string("images/") + name_buf;
      save_pgm(img, out_dir / rel);

      ManifestEntry entry;
      entry.path = rel;
      entry.subject = subject;
      entry.eye = eye;
      entry.sample = static_cast<int>(sample);
      manifest.entries.push_back(std::move(entry));
    }
  }

  write_manifest(manifest, out_dir / "manifest.csv");
  return manifest;
}

}  // namespace iris
