// iris: command-line front end for the iris-recognition toolkit.
//
// Verbs:
//   synth     generate a labeled synthetic eye-image dataset
//   segment   locate the pupil and iris/sclera boundary in one image
//   encode    segment an image and encode a packed binary template
//   enroll    bundle 1..10 templates of one eye into an identity directory
//   match     Hamming similarity of two templates, or multi-template score
//             of a candidate against an enrolled identity
//   evaluate  run the full pipeline on a dataset manifest (or re-evaluate a
//             score CSV) and write the metric/report artifacts
//   compare   run several encoders on one dataset, side-by-side tables
//
// All numeric output is full-precision decimal so results can be compared
// and post-processed without rounding loss.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iris/encoders.hpp"
#include "iris/errors.hpp"
#include "iris/evaluation.hpp"
#include "iris/experiment.hpp"
#include "iris/image_io.hpp"
#include "iris/manifest.hpp"
#include "iris/matching.hpp"
#include "iris/segmentation.hpp"
#include "iris/synth.hpp"

namespace fs = std::filesystem;

namespace {

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string hex_digest(std::uint64_t d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(d));
  return buf;
}

// -------------------------------------------------------------------------
// Shared encoder flags (encode, evaluate, compare).

struct EncoderFlags {
  std::string name = "hh1";
  std::size_t rows = 16;
  std::size_t cols = 256;
  std::size_t filter_size = 16;
  double f0 = iris::LogGaborParams{}.f0;
  double sigma_ratio = iris::LogGaborParams{}.sigma_ratio;

  iris::EncoderConfig config() const {
    iris::EncoderConfig cfg;
    cfg.encoder = iris::encoder_from_name(name);
    cfg.code_rows = rows;
    cfg.code_cols = cols;
    cfg.filter_size = filter_size;
    cfg.log_gabor.f0 = f0;
    cfg.log_gabor.sigma_ratio = sigma_ratio;
    iris::validate_encoder_config(cfg);
    if (!iris::standard_code_dims(rows, cols))
      std::cerr << "warning: " << rows << "x" << cols
                << " is a non-standard code size; reference operating points were "
                   "measured on the standard sizes\n";
    return cfg;
  }
};

void add_dims_flags(CLI::App* cmd, EncoderFlags& f) {
  cmd->add_option("--rows", f.rows, "Code rows")->capture_default_str();
  cmd->add_option("--cols", f.cols, "Code columns")->capture_default_str();
  cmd->add_option("--filter-size", f.filter_size,
                  "hh1/hh2 analytic-window length s (divides rows*cols; even for hh2)")
      ->capture_default_str();
  cmd->add_option("--f0", f.f0, "lge center frequency, cycles/sample")->capture_default_str();
  cmd->add_option("--sigma-ratio", f.sigma_ratio, "lge bandwidth ratio sigma/f0")
      ->capture_default_str();
}

void add_encoder_flags(CLI::App* cmd, EncoderFlags& f) {
  cmd->add_option("--encoder", f.name, "Encoder: hh1, hh2, or lge")
      ->check(CLI::IsMember({"hh1", "hh2", "lge"}))
      ->capture_default_str();
  add_dims_flags(cmd, f);
}

// -------------------------------------------------------------------------
// Identity directories (enroll/match) and metric-file lookups.

constexpr const char* kIdentityFile = "identity.json";

std::string template_filename(std::size_t index) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "template_%02zu.irsc", index);
  return buf;
}

iris::EnrolledIdentity load_identity(const fs::path& dir) {
  const fs::path meta = dir / kIdentityFile;
  std::ifstream in(meta, std::ios::binary);
  if (!in) throw iris::Error(iris::Errc::io_error, "cannot open " + meta.string());
  const nlohmann::json j = nlohmann::json::parse(in);
  iris::EnrolledIdentity id;
  id.label = j.at("label").get<std::string>();
  for (const auto& name : j.at("templates"))
    id.templates.push_back(iris::read_template_file(dir / name.get<std::string>()));
  if (id.templates.empty())
    throw iris::Error(iris::Errc::empty_identity, "no templates listed in " + meta.string());
  return id;
}

// The imposter standard deviation of a paired single-enrollment run, read
// from its metrics.json.
double imposter_std_from_metrics(const fs::path& metrics_json) {
  std::ifstream in(metrics_json, std::ios::binary);
  if (!in) throw iris::Error(iris::Errc::io_error, "cannot open " + metrics_json.string());
  const nlohmann::json j = nlohmann::json::parse(in);
  return j.at("imposter").at("stddev").get<double>();
}

// -------------------------------------------------------------------------
// Report printing shared by the evaluate paths.

void print_report(const iris::EvaluationReport& r) {
  std::cout << "code_bits " << r.code_bits << "\n";
  std::cout << "genuine_count " << r.genuine.count << "\n";
  std::cout << "genuine_mean " << full(r.genuine.mean) << "\n";
  std::cout << "genuine_stddev " << full(r.genuine.stddev) << "\n";
  std::cout << "genuine_dof " << full(r.genuine.dof) << "\n";
  std::cout << "imposter_count " << r.imposter.count << "\n";
  std::cout << "imposter_mean " << full(r.imposter.mean) << "\n";
  std::cout << "imposter_stddev " << full(r.imposter.stddev) << "\n";
  std::cout << "imposter_dof " << full(r.imposter.dof) << "\n";
  std::cout << "decidability " << full(r.decidability_value) << "\n";
  std::cout << "fisher_ratio " << full(r.fisher_value) << "\n";
  std::cout << "eer " << full(r.eer.eer) << "\n";
  std::cout << "eer_threshold " << full(r.eer.threshold) << "\n";
  std::cout << "max_imposter " << full(r.score_extremes.max_imposter) << "\n";
  std::cout << "min_genuine " << full(r.score_extremes.min_genuine) << "\n";
  std::cout << "margin " << full(r.score_extremes.margin) << "\n";
  std::cout << "far_at_max_imposter " << full(r.score_extremes.far_at_max_imposter) << "\n";
  std::cout << "storage_efficiency_percent " << full(r.storage_percent) << "\n";
  for (const auto& op : r.operating_points) {
    std::cout << (op.for_frr ? "op_frr_target " : "op_far_target ") << full(op.target);
    if (!op.reachable) {
      std::cout << " unreachable\n";
      continue;
    }
    std::cout << " threshold " << full(op.threshold) << " far " << full(op.far) << " frr "
              << full(op.frr) << " predicted_fa_odds " << full(op.predicted_fa_odds) << "\n";
  }
}

void print_experiment(const iris::ExperimentResult& res) {
  std::cout << "label " << res.label << "\n";
  std::cout << "images " << res.images << "\n";
  std::cout << "encoded " << res.encoded << "\n";
  std::cout << "failed " << res.failed << "\n";
  if (res.kind == iris::ScoreKind::mdss)
    std::cout << "mdss_imposter_std " << full(res.mdss_imposter_std_used) << "\n";
  std::cout << "genuine_pairs " << res.genuine_count << "\n";
  std::cout << "imposter_pairs " << res.imposter_count << "\n";
  print_report(res.report);
}

// -------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string out;
  iris::SynthConfig cfg;
};

int run_synth(const SynthArgs& a) {
  const auto manifest = iris::synth_dataset(a.cfg, a.out);
  std::cout << "images " << manifest.entries.size() << "\n";
  std::cout << "eyes " << a.cfg.identities << "\n";
  std::cout << "samples_per_eye " << a.cfg.samples << "\n";
  std::cout << "manifest " << (fs::path(a.out) / "manifest.csv").string() << "\n";
  return 0;
}

// -------------------------------------------------------------------------
// segment

struct SegmentArgs {
  std::string image;
  std::size_t angles = 256;
  std::size_t radii = 64;
  std::string polar_out;
};

int run_segment(const SegmentArgs& a) {
  const iris::GrayImage img = iris::load_image(a.image);
  const iris::SegmentationResult res = iris::segment(img, a.angles, a.radii);
  if (!res.ok) {
    std::cerr << "segmentation failed: " << res.failure_reason << "\n";
    return 1;
  }
  std::cout << "pupil_cx " << full(res.pupil.cx) << "\n";
  std::cout << "pupil_cy " << full(res.pupil.cy) << "\n";
  std::cout << "pupil_radius " << full(res.pupil.radius) << "\n";
  std::cout << "limbic_radius " << full(res.limbic_radius) << "\n";
  std::cout << "radial_step " << full(res.segment.radial_step) << "\n";
  if (!a.polar_out.empty()) {
    // Unwrapped ring as an image: angle down the rows, radius across.
    iris::GrayImage polar(res.segment.radii(), res.segment.angles());
    for (std::size_t k = 0; k < res.segment.angles(); ++k)
      for (std::size_t j = 0; j < res.segment.radii(); ++j) {
        const double v = res.segment.data(k, j) * 255.0;
        polar.at(j, k) = static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v + 0.5));
      }
    iris::save_pgm(polar, a.polar_out);
    std::cout << "polar_image " << a.polar_out << "\n";
  }
  return 0;
}

// -------------------------------------------------------------------------
// encode

struct EncodeArgs {
  std::string image;
  std::string out;
  EncoderFlags enc;
};

int run_encode(const EncodeArgs& a) {
  const iris::EncoderConfig cfg = a.enc.config();
  const iris::GrayImage img = iris::load_image(a.image);
  const iris::PolarDims pd = iris::required_polar_dims(cfg);
  const iris::SegmentationResult res = iris::segment(img, pd.angles, pd.radii);
  if (!res.ok) {
    std::cerr << "segmentation failed: " << res.failure_reason << "\n";
    return 1;
  }
  const iris::IrisCode code = iris::encode(res.segment, cfg);
  iris::write_template_file(code, a.out);
  std::cout << "template " << a.out << "\n";
  std::cout << "encoder " << iris::encoder_name(code.encoder) << "\n";
  std::cout << "code_bits " << code.bit_count() << "\n";
  std::cout << "code_rows " << code.rows << "\n";
  std::cout << "code_cols " << code.cols << "\n";
  std::cout << "params_digest " << hex_digest(code.digest) << "\n";
  return 0;
}

// -------------------------------------------------------------------------
// enroll

struct EnrollArgs {
  std::vector<std::string> templates;
  std::string label;
  std::string out;
};

int run_enroll(const EnrollArgs& a) {
  std::vector<iris::IrisCode> codes;
  codes.reserve(a.templates.size());
  for (const auto& path : a.templates) codes.push_back(iris::read_template_file(path));
  for (std::size_t i = 1; i < codes.size(); ++i) {
    if (codes[i].rows != codes[0].rows || codes[i].cols != codes[0].cols ||
        codes[i].encoder != codes[0].encoder || codes[i].digest != codes[0].digest)
      throw iris::Error(iris::Errc::dimension_mismatch,
                        a.templates[i] + " was encoded with different parameters than " +
                            a.templates[0]);
  }
  const fs::path dir(a.out);
  fs::create_directories(dir);
  nlohmann::ordered_json meta;
  meta["label"] = a.label;
  meta["encoder"] = iris::encoder_name(codes[0].encoder);
  meta["code_rows"] = codes[0].rows;
  meta["code_cols"] = codes[0].cols;
  meta["params_digest"] = hex_digest(codes[0].digest);
  meta["templates"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < codes.size(); ++i) {
    const std::string name = template_filename(i);
    iris::write_template_file(codes[i], dir / name);
    meta["templates"].push_back(name);
  }
  std::ofstream out(dir / kIdentityFile, std::ios::binary | std::ios::trunc);
  if (!out) throw iris::Error(iris::Errc::io_error, "cannot create " + (dir / kIdentityFile).string());
  out << meta.dump(2) << "\n";
  std::cout << "identity " << a.out << "\n";
  std::cout << "label " << a.label << "\n";
  std::cout << "templates " << codes.size() << "\n";
  return 0;
}

// -------------------------------------------------------------------------
// match

struct MatchArgs {
  std::vector<std::string> pair;  // two template files -> Hamming similarity
  std::size_t shift = 0;
  std::string identity_dir;  // + candidate -> multi-template score
  std::string candidate;
  double mdss_s = 0.0;
  std::string mdss_from;
};

int run_match(const MatchArgs& a) {
  if (!a.pair.empty()) {
    if (!a.identity_dir.empty() || !a.candidate.empty())
      throw iris::Error(iris::Errc::bad_config,
                        "pass either two template files or --identity/--candidate, not both");
    if (a.pair.size() != 2)
      throw iris::Error(iris::Errc::bad_config, "pairwise matching takes two template files");
    const iris::IrisCode x = iris::read_template_file(a.pair[0]);
    const iris::IrisCode y = iris::read_template_file(a.pair[1]);
    const double score = a.shift > 0 ? iris::hamming_similarity_best_shift(x, y, a.shift)
                                     : iris::hamming_similarity(x, y);
    std::cout << "HS " << full(score) << "\n";
    return 0;
  }
  if (a.identity_dir.empty() || a.candidate.empty())
    throw iris::Error(iris::Errc::bad_config,
                      "pass two template files, or --identity DIR with --candidate FILE");
  if ((a.mdss_s > 0.0) == !a.mdss_from.empty())
    throw iris::Error(iris::Errc::bad_config,
                      "multi-template scoring needs exactly one of --mdss-s or --mdss-from");
  const double s = a.mdss_from.empty() ? a.mdss_s : imposter_std_from_metrics(a.mdss_from);
  const iris::EnrolledIdentity id = load_identity(a.identity_dir);
  const iris::IrisCode cand = iris::read_template_file(a.candidate);
  std::cout << "MDSS " << full(iris::mdss(cand, id, s)) << "\n";
  std::cout << "imposter_std " << full(s) << "\n";
  return 0;
}

// -------------------------------------------------------------------------
// evaluate / compare

struct RunFlags {
  std::string mode = "single";
  std::size_t enroll_count = 10;
  double mdss_s = 0.0;
  std::string mdss_from;
  std::size_t shift = 0;
  unsigned threads = 0;
  std::vector<double> frr_targets{std::begin(iris::kDefaultFrrTargets),
                                  std::end(iris::kDefaultFrrTargets)};
  std::vector<double> far_targets{std::begin(iris::kDefaultFarTargets),
                                  std::end(iris::kDefaultFarTargets)};
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--mode", f.mode, "Matching mode: single (all template pairs) or multi "
                                    "(candidates vs. enrolled identities)")
      ->check(CLI::IsMember({"single", "multi"}))
      ->capture_default_str();
  cmd->add_option("-k,--enroll-count", f.enroll_count,
                  "multi: templates enrolled per eye (the rest become candidates)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{10}))
      ->capture_default_str();
  cmd->add_option("--mdss-s", f.mdss_s,
                  "multi: imposter standard deviation for the score normalization "
                  "(unset: measured from a paired single-enrollment run)");
  cmd->add_option("--mdss-from", f.mdss_from,
                  "multi: read the imposter standard deviation from a single-enrollment "
                  "run's metrics.json");
  cmd->add_option("--shift", f.shift, "Best-of +/-N column shifts when matching (0 = off)")
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
  cmd->add_option("--frr-targets", f.frr_targets, "FRR operating-point targets")
      ->delimiter(',');
  cmd->add_option("--far-targets", f.far_targets, "FAR operating-point targets")
      ->delimiter(',');
}

iris::ExperimentConfig experiment_config(const EncoderFlags& enc, const RunFlags& run) {
  iris::ExperimentConfig cfg;
  cfg.encoder = enc.config();
  cfg.mode = run.mode == "multi" ? iris::MatchMode::multi : iris::MatchMode::single;
  cfg.enroll_count = run.enroll_count;
  cfg.mdss_imposter_std =
      run.mdss_from.empty() ? run.mdss_s : imposter_std_from_metrics(run.mdss_from);
  cfg.max_shift_cols = run.shift;
  cfg.frr_targets = run.frr_targets;
  cfg.far_targets = run.far_targets;
  cfg.threads = run.threads;
  return cfg;
}

struct EvaluateArgs {
  std::string manifest;
  std::string scores;
  std::size_t code_bits = 0;
  std::string out;
  EncoderFlags enc;
  RunFlags run;
};

int run_evaluate(const EvaluateArgs& a) {
  if (a.manifest.empty() == a.scores.empty())
    throw iris::Error(iris::Errc::bad_config, "pass exactly one of --manifest or --scores");
  if (!a.scores.empty() && a.code_bits == 0)
    throw iris::Error(iris::Errc::bad_config, "--scores needs --code-bits (bits per template)");
  if (!a.manifest.empty()) {
    const iris::DatasetManifest manifest = iris::read_manifest(a.manifest);
    const iris::ExperimentConfig cfg = experiment_config(a.enc, a.run);
    const iris::ExperimentResult res = iris::run_experiment(manifest, cfg, a.out);
    print_experiment(res);
    std::cout << "artifacts " << a.out << "\n";
    return 0;
  }
  const iris::ScoreTable table = iris::read_scores_csv(a.scores);
  const iris::ScoreSet scores = iris::ScoreSet::from_table(table);
  const iris::EvaluationReport report =
      iris::evaluate_scores(scores, a.code_bits, a.run.frr_targets, a.run.far_targets);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  const std::string title = fs::path(a.scores).stem().string();
  iris::write_roc_csv(scores, report.imposter, dir / "roc.csv");
  iris::write_histogram_csv(scores, a.code_bits, dir / "histogram.csv");
  iris::write_metrics_text(report, title, dir / "metrics.txt");
  iris::write_metrics_json(report, title, dir / "metrics.json");
  std::cout << "genuine_pairs " << table.genuine_count() << "\n";
  std::cout << "imposter_pairs " << table.imposter_count() << "\n";
  print_report(report);
  std::cout << "artifacts " << a.out << "\n";
  return 0;
}

struct CompareArgs {
  std::string manifest;
  std::vector<std::string> encoders{"hh1", "hh2", "lge"};
  std::string out;
  EncoderFlags enc;  // shared dims/filter parameters; name overridden per run
  RunFlags run;
};

int run_compare(const CompareArgs& a) {
  const iris::DatasetManifest manifest = iris::read_manifest(a.manifest);
  std::vector<iris::ExperimentConfig> configs;
  configs.reserve(a.encoders.size());
  for (const auto& name : a.encoders) {
    EncoderFlags enc = a.enc;
    enc.name = name;
    configs.push_back(experiment_config(enc, a.run));
  }
  const auto results = iris::compare_encoders(manifest, configs, a.out);
  for (const auto& res : results)
    std::cout << "run " << res.label << " d' " << full(res.report.decidability_value) << " eer "
              << full(res.report.eer.eer) << "\n";
  std::ifstream table(fs::path(a.out) / "comparison.txt", std::ios::binary);
  if (table && table.peek() != std::ifstream::traits_type::eof()) std::cout << table.rdbuf();
  std::cout << "artifacts " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iris-recognition toolkit: synthesize eye-image datasets, segment and "
               "encode binary iris templates, match them, and evaluate recognition "
               "performance."};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
  synth_cmd->add_option("--out", synth.out, "Output directory (images/ + manifest.csv)")
      ->required();
  synth_cmd->add_option("--identities", synth.cfg.identities, "Distinct eyes")
      ->capture_default_str();
  synth_cmd->add_option("--samples", synth.cfg.samples, "Images per eye")->capture_default_str();
  synth_cmd->add_option("--seed", synth.cfg.seed, "Master seed")->capture_default_str();
  synth_cmd->add_option("--width", synth.cfg.width, "Image width, pixels")->capture_default_str();
  synth_cmd->add_option("--height", synth.cfg.height, "Image height, pixels")
      ->capture_default_str();

  SegmentArgs segment;
  CLI::App* segment_cmd =
      app.add_subcommand("segment", "Locate the pupil and iris/sclera boundary in one image");
  segment_cmd->add_option("image", segment.image, "PGM or PNG eye image")->required();
  segment_cmd->add_option("--angles", segment.angles, "Polar rows of the unwrapped ring")
      ->capture_default_str();
  segment_cmd->add_option("--radii", segment.radii, "Polar columns of the unwrapped ring")
      ->capture_default_str();
  segment_cmd->add_option("--polar-out", segment.polar_out,
                          "Also write the unwrapped iris ring as a PGM image");

  EncodeArgs encode;
  CLI::App* encode_cmd =
      app.add_subcommand("encode", "Segment an image and encode a binary template");
  encode_cmd->add_option("image", encode.image, "PGM or PNG eye image")->required();
  encode_cmd->add_option("--out", encode.out, "Template file to write")->required();
  add_encoder_flags(encode_cmd, encode.enc);

  EnrollArgs enroll;
  CLI::App* enroll_cmd =
      app.add_subcommand("enroll", "Bundle templates of one eye into an identity directory");
  enroll_cmd->add_option("templates", enroll.templates, "1..10 template files of the same eye")
      ->required()
      ->expected(1, 10);
  enroll_cmd->add_option("--label", enroll.label, "Identity label, e.g. s00L")->required();
  enroll_cmd->add_option("--out", enroll.out, "Identity directory to create")->required();

  MatchArgs match;
  CLI::App* match_cmd = app.add_subcommand(
      "match", "Score two templates (Hamming) or a candidate against an identity");
  match_cmd->add_option("templates", match.pair, "Two template files")->expected(0, 2);
  match_cmd->add_option("--shift", match.shift, "Best-of +/-N column shifts (0 = off)")
      ->capture_default_str();
  match_cmd->add_option("--identity", match.identity_dir, "Enrolled identity directory");
  match_cmd->add_option("--candidate", match.candidate, "Candidate template file");
  match_cmd->add_option("--mdss-s", match.mdss_s,
                        "Imposter standard deviation for the multi-template score");
  match_cmd->add_option("--mdss-from", match.mdss_from,
                        "Read the imposter standard deviation from a single-enrollment "
                        "run's metrics.json");

  EvaluateArgs evaluate;
  CLI::App* evaluate_cmd = app.add_subcommand(
      "evaluate", "Run the pipeline on a dataset manifest, or re-evaluate a score CSV");
  CLI::Option* eval_manifest =
      evaluate_cmd->add_option("--manifest", evaluate.manifest, "Dataset manifest CSV");
  CLI::Option* eval_scores =
      evaluate_cmd->add_option("--scores", evaluate.scores, "Score CSV from an earlier run");
  eval_manifest->excludes(eval_scores);
  eval_scores->excludes(eval_manifest);
  evaluate_cmd
      ->add_option("--code-bits", evaluate.code_bits, "Bits per template (with --scores)")
      ->needs(eval_scores);
  evaluate_cmd->add_option("--out", evaluate.out, "Directory for the report artifacts")
      ->required();
  add_encoder_flags(evaluate_cmd, evaluate.enc);
  add_run_flags(evaluate_cmd, evaluate.run);

  CompareArgs compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Run several encoders on one dataset, side by side");
  compare_cmd->add_option("--manifest", compare.manifest, "Dataset manifest CSV")->required();
  compare_cmd
      ->add_option("--encoders", compare.encoders, "Encoders to run (two or more)")
      ->delimiter(',')
      ->check(CLI::IsMember({"hh1", "hh2", "lge"}));
  compare_cmd->add_option("--out", compare.out, "Directory for the runs and comparison tables")
      ->required();
  add_dims_flags(compare_cmd, compare.enc);
  add_run_flags(compare_cmd, compare.run);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    if (segment_cmd->parsed()) return run_segment(segment);
    if (encode_cmd->parsed()) return run_encode(encode);
    if (enroll_cmd->parsed()) return run_enroll(enroll);
    if (match_cmd->parsed()) return run_match(match);
    if (evaluate_cmd->parsed()) return run_evaluate(evaluate);
    if (compare_cmd->parsed()) return run_compare(compare);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
