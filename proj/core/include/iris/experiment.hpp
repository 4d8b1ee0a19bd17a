#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "iris/evaluation.hpp"
#include "iris/manifest.hpp"
#include "iris/synth.hpp"

namespace iris {

enum class MatchMode { single, multi };

struct ExperimentConfig {
  EncoderConfig encoder;
  MatchMode mode = MatchMode::single;
  // multi mode: enroll the first `enroll_count` usable samples per eye
  // (1..10); remaining samples become candidates.
  std::size_t enroll_count = 10;
  // multi mode: imposter std for the score normalization; <= 0 means "measure
  // it from a paired single-enrollment run on the same templates".
  double mdss_imposter_std = 0.0;
  std::size_t max_shift_cols = 0;  // optional best-shift matching (0 = off)
  std::vector<double> frr_targets{std::begin(kDefaultFrrTargets), std::end(kDefaultFrrTargets)};
  std::vector<double> far_targets{std::begin(kDefaultFarTargets), std::end(kDefaultFarTargets)};
  unsigned threads = 0;  // 0 = hardware concurrency
};

// e.g. "hh1_16x256_single" / "lge_16x256_multi_k8"; used as directory name.
std::string config_label(const ExperimentConfig& config);

// Closed-form pair counts used to cross-check every scoring run.
struct PairCounts {
  std::size_t genuine = 0;
  std::size_t imposter = 0;
};
// Single enrollment: all-pairs over M = sum(m_e) templates; genuine pairs
// sum over eyes of m_e*(m_e-1)/2.
PairCounts expected_single_counts(std::span<const std::size_t> per_eye_samples);
// Multi enrollment with k enrolled per eye: candidates c_e = max(m_e - k, 0),
// each scored against all G enrolled identities; genuine = sum c_e.
PairCounts expected_multi_counts(std::span<const std::size_t> per_eye_samples, std::size_t k);

struct ImageOutcome {
  ManifestEntry entry;
  bool ok = false;
  std::string reason;  // failure reason when !ok
  PupilCircle pupil;
  double limbic_radius = 0.0;
};

struct ExperimentResult {
  std::string label;
  std::size_t images = 0;
  std::size_t encoded = 0;
  std::size_t failed = 0;
  std::vector<ImageOutcome> outcomes;
  ScoreKind kind = ScoreKind::hamming;
  double mdss_imposter_std_used = 0.0;  // multi mode: the s actually applied
  std::size_t genuine_count = 0;
  std::size_t imposter_count = 0;
  EvaluationReport report;
  // Artifacts written under the experiment directory.
  std::filesystem::path templates_dir;
  std::filesystem::path outcomes_csv;
  std::filesystem::path scores_csv;
  std::filesystem::path roc_csv;
  std::filesystem::path histogram_csv;
  std::filesystem::path metrics_txt;
  std::filesystem::path metrics_json;
};

// Segments + encodes every manifest image (parallel, per-image failures
// recorded rather than fatal), scores per the mode, cross-checks the pair
// counts against the closed-form expectation, evaluates the metric suite, and
// writes templates plus all report artifacts under out_dir. Deterministic:
// reruns produce byte-identical artifacts.
ExperimentResult run_experiment(const DatasetManifest& manifest,
                                const ExperimentConfig& config,
                                const std::filesystem::path& out_dir);

// Runs >= 2 configs on one dataset (each in out_dir/<label>/) and writes
// side-by-side comparison.txt / comparison.csv in out_dir.
std::vector<ExperimentResult> compare_encoders(const DatasetManifest& manifest,
                                               std::span<const ExperimentConfig> configs,
                                               const std::filesystem::path& out_dir);

void write_comparison(std::span<const ExperimentResult> results,
                      const std::filesystem::path& txt_path,
                      const std::filesystem::path& csv_path);

}  // namespace iris
