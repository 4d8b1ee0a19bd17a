#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "iris/matching.hpp"

namespace iris {

// Genuine/imposter score samples, each kept sorted ascending.
struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> imposter;

  static ScoreSet from_table(const ScoreTable& table);
  static ScoreSet from_samples(std::vector<double> genuine_scores,
                               std::vector<double> imposter_scores);
};

struct DistributionStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n-1)
  double dof = 0.0;     // binomial degrees of freedom, mean*(1-mean)/stddev^2
  std::size_t count = 0;
};

// Sample statistics of a score sample (n >= 2, Errc::too_few_scores). The
// scores are fractions of agreeing bits, so dof is the equivalent number of
// independent Bernoulli trials; dof = 0 when stddev is 0 (undefined).
DistributionStats stats(std::span<const double> scores, std::size_t code_bits);

// Same statistics derived from already-known moments (e.g. published tables).
DistributionStats stats_from_moments(double mean, double stddev);

// Decidability d' = |mean_i - mean_g| / sqrt((var_i + var_g)/2).
// Errc::degenerate_std when both variances are zero.
double decidability(const DistributionStats& genuine, const DistributionStats& imposter);

// Fisher ratio r = (mean_i - mean_g)^2 / (var_i + var_g); equals d'^2 / 2.
double fisher_ratio(const DistributionStats& genuine, const DistributionStats& imposter);

// Fraction of the imposter-dof budget actually stored: dof / code_bits, %.
double storage_efficiency(double imposter_dof, std::size_t code_bits);

// Decision rule: accept iff score >= threshold.
struct FarFrr {
  double far = 0.0;  // imposter fraction accepted
  double frr = 0.0;  // genuine fraction rejected
};
FarFrr far_frr(const ScoreSet& scores, double threshold);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Equal error rate of the empirical FAR/FRR curves: linear interpolation
// between the bracketing sweep thresholds of the non-increasing difference
// FAR - FRR. Fully separated sets give EER 0 at threshold halfway between the
// max imposter and min genuine scores. Both samples must be non-empty
// (Errc::too_few_scores).
EerResult equal_error_rate(const ScoreSet& scores);

// Predicted odds of false accept at a threshold under a Gaussian imposter
// model whose mean is shifted up by 0.005 (safety margin):
// 0.5*erfc((t - (mean+0.005)) / (stddev*sqrt(2))). Errc::degenerate_std when
// stddev <= 0.
double predicted_false_accept_odds(const DistributionStats& imposter, double threshold);

// Observed odds on the measured samples (same decision rule as far_frr):
// ofa = observed false-accept rate, ofr = observed false-reject rate.
FarFrr observed_odds(const ScoreSet& scores, double threshold);

struct ScoreExtremes {
  double max_imposter = 0.0;   // MIS
  double min_genuine = 0.0;    // mGS
  double margin = 0.0;         // mGS - MIS (> 0 iff fully separated)
  double far_at_max_imposter = 0.0;  // always >= 1/imposter_count
  double frr_at_max_imposter = 0.0;
  double frr_at_min_genuine = 0.0;   // always < 1 at mGS (mGS itself accepted)
};
ScoreExtremes extremes(const ScoreSet& scores);

struct OperatingPoint {
  bool for_frr = false;     // true: FRR-targeted; false: FAR-targeted
  double target = 0.0;
  bool reachable = true;
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;
  double predicted_fa_odds = 0.0;
};

// Threshold whose empirical FRR is nearest the target from below (candidate
// thresholds = distinct genuine scores). Errc::unreachable_target when the
// best reachable FRR is 0 or less than a tenth of the target.
OperatingPoint operating_point_for_frr(const ScoreSet& scores,
                                       const DistributionStats& imposter,
                                       double target_frr);

// Threshold whose empirical FAR is nearest the target (candidates = distinct
// imposter scores plus one past the maximum; equidistant -> larger threshold).
// Errc::unreachable_target when the best FAR is 0 or outside
// [target/10, 10*target].
OperatingPoint operating_point_for_far(const ScoreSet& scores,
                                       const DistributionStats& imposter,
                                       double target_far);

// One row per target, in the given order (FRR targets first); unreachable
// targets are marked rather than thrown.
std::vector<OperatingPoint> operating_table(const ScoreSet& scores,
                                            const DistributionStats& imposter,
                                            std::span<const double> frr_targets,
                                            std::span<const double> far_targets);

struct EvaluationReport {
  std::size_t code_bits = 0;
  DistributionStats genuine;
  DistributionStats imposter;
  double decidability_value = 0.0;
  double fisher_value = 0.0;
  EerResult eer;
  ScoreExtremes score_extremes;
  double storage_percent = 0.0;
  std::vector<OperatingPoint> operating_points;
};

inline constexpr double kDefaultFrrTargets[] = {0.01, 0.02, 0.03, 0.04, 0.05};
inline constexpr double kDefaultFarTargets[] = {1e-3, 1e-4, 1e-5};

// Full metric suite over a score set (both samples need >= 2 scores).
EvaluationReport evaluate_scores(const ScoreSet& scores, std::size_t code_bits,
                                 std::span<const double> frr_targets = kDefaultFrrTargets,
                                 std::span<const double> far_targets = kDefaultFarTargets);

// Report writers; all byte-deterministic, numbers full-precision decimal.
// ROC CSV: threshold,far,frr,predicted_fa_odds at every distinct score plus a
// sentinel past the max. Histogram CSV: bin_center,genuine_freq,imposter_freq
// with bin width 1/code_bits and relative frequencies.
void write_roc_csv(const ScoreSet& scores, const DistributionStats& imposter,
                   const std::filesystem::path& path);
void write_histogram_csv(const ScoreSet& scores, std::size_t code_bits,
                         const std::filesystem::path& path);
void write_metrics_text(const EvaluationReport& report, const std::string& title,
                        const std::filesystem::path& path);
void write_metrics_json(const EvaluationReport& report, const std::string& title,
                        const std::filesystem::path& path);

}  // namespace iris
