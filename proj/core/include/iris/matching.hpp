#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "iris/encoders.hpp"

namespace iris {

// Hamming similarity score: the fraction of agreeing bits,
// (bits - popcount(a xor b)) / bits, in [0, 1]; 1 means identical codes.
// Operands must share dims and encoder (Errc::dimension_mismatch) and be
// non-empty (Errc::degenerate_input).
double hamming_similarity(const IrisCode& a, const IrisCode& b);

// `b` circularly shifted left/right by up to max_shift_cols columns; best
// (maximum) similarity over the 2*max_shift_cols+1 alignments. With
// max_shift_cols = 0 this is exactly hamming_similarity. Optional utility;
// the pipeline does not shift unless explicitly configured to.
double hamming_similarity_best_shift(const IrisCode& a, const IrisCode& b,
                                     std::size_t max_shift_cols);

// An enrolled identity: 1..10 templates of identical shape/encoder.
struct EnrolledIdentity {
  std::string label;
  std::vector<IrisCode> templates;
};

// Multi-enrollment score: mean(HSS) + sample_std(HSS) - s/2, where HSS are
// the Hamming similarities between the candidate and each enrolled template,
// sample_std uses n-1 (0 for a single template), and s is the imposter
// standard deviation measured in a paired single-enrollment run (s > 0,
// Errc::degenerate_std).
double mdss(const IrisCode& candidate, const EnrolledIdentity& identity,
            double imposter_std);

struct ScoreRecord {
  std::size_t pair_id = 0;
  std::string label_a;  // eye label (or identity label for galleries)
  std::string label_b;
  bool genuine = false;
  double score = 0.0;
};

enum class ScoreKind { hamming, mdss };

struct ScoreTable {
  ScoreKind kind = ScoreKind::hamming;
  std::vector<ScoreRecord> records;

  std::size_t genuine_count() const;
  std::size_t imposter_count() const;
};

struct LabeledCode {
  std::string label;  // eye label, e.g. "s00L"
  IrisCode code;
};

// All n*(n-1)/2 unordered pairs, deterministic order: pair (i, j), i < j, at
// pair_id i*(2n-i-1)/2 + (j-i-1). genuine = labels equal. Requires n >= 2
// (Errc::too_few_templates). max_shift_cols enables best-shift scoring
// (0 = plain).
ScoreTable all_pairs_scores(const std::vector<LabeledCode>& templates,
                            std::size_t max_shift_cols = 0);

// Every candidate against every enrolled identity (MDSS scores), in
// candidate-major order: pair_id = candidate_index * gallery_size +
// identity_index. genuine = candidate label equals identity label.
ScoreTable identity_gallery_scores(const std::vector<LabeledCode>& candidates,
                                   const std::vector<EnrolledIdentity>& gallery,
                                   double imposter_std);

// CSV: header "pair_id,label_a,label_b,kind,genuine,score"; kind HS or MDSS;
// genuine 0/1; score full-precision decimal. Byte-deterministic.
void write_scores_csv(const ScoreTable& table, const std::filesystem::path& path);
ScoreTable read_scores_csv(const std::filesystem::path& path);

}  // namespace iris
