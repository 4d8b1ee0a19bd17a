#include "iris/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "iris/errors.hpp"
#include "iris/image_io.hpp"
#include "iris/parallel.hpp"
#include "iris/segmentation.hpp"
#include "text.hpp"

namespace iris {
namespace {

using detail::fmt_full;

struct Slot {
  ImageOutcome outcome;
  IrisCode code;  // valid when outcome.ok
};

std::string template_filename(const ManifestEntry& e) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%c_%02d.irsc", e.subject.c_str(), e.eye, e.sample);
  return buf;
}

void write_outcomes_csv(const std::vector<Slot>& slots, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot create " + path.string());
  out << "path,subject,eye,sample,status,reason,pupil_cx,pupil_cy,pupil_radius,limbic_radius\n";
  for (const auto& s : slots) {
    const auto& e = s.outcome.entry;
    std::string reason = s.outcome.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    out << e.path << ',' << e.subject << ',' << e.eye << ',' << e.sample << ','
        << (s.outcome.ok ? "ok" : "failed") << ',' << reason << ',';
    if (s.outcome.ok) {
      out << fmt_full(s.outcome.pupil.cx) << ',' << fmt_full(s.outcome.pupil.cy) << ','
          << fmt_full(s.outcome.pupil.radius) << ',' << fmt_full(s.outcome.limbic_radius);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

void check_counts(const ScoreTable& table, const PairCounts& expected) {
  const std::size_t gen = table.genuine_count();
  const std::size_t imp = table.imposter_count();
  if (gen != expected.genuine || imp != expected.imposter)
    throw Error(Errc::counting_mismatch,
                "scored " + std::to_string(gen) + " genuine / " + std::to_string(imp) +
                    " imposter pairs, closed form expects " +
                    std::to_string(expected.genuine) + " / " +
                    std::to_string(expected.imposter));
}

}  // namespace

std::string config_label(const ExperimentConfig& config) {
  std::string s = encoder_name(config.encoder.encoder);
  s += "_" + std::to_string(config.encoder.code_rows) + "x" +
       std::to_string(config.encoder.code_cols);
  if (config.mode == MatchMode::single)
    s += "_single";
  else
    s += "_multi_k" + std::to_string(config.enroll_count);
  if (config.max_shift_cols > 0) s += "_shift" + std::to_string(config.max_shift_cols);
  return s;
}

PairCounts expected_single_counts(std::span<const std::size_t> per_eye_samples) {
  std::size_t total_templates = 0;
  PairCounts counts;
  for (const std::size_t m : per_eye_samples) {
    total_templates += m;
    counts.genuine += m >= 2 ? m * (m - 1) / 2 : 0;
  }
  const std::size_t all_pairs =
      total_templates >= 2 ? total_templates * (total_templates - 1) / 2 : 0;
  counts.imposter = all_pairs - counts.genuine;
  return counts;
}

PairCounts expected_multi_counts(std::span<const std::size_t> per_eye_samples, std::size_t k) {
  std::size_t gallery = 0, candidates = 0;
  for (const std::size_t m : per_eye_samples) {
    if (m == 0) continue;
    gallery += 1;
    candidates += m > k ? m - k : 0;
  }
  PairCounts counts;
  counts.genuine = candidates;  // each candidate's own eye is always enrolled
  counts.imposter = candidates * gallery - candidates;
  return counts;
}

ExperimentResult run_experiment(const DatasetManifest& manifest,
                                const ExperimentConfig& config,
                                const std::filesystem::path& out_dir) {
  validate_encoder_config(config.encoder);
  if (config.mode == MatchMode::multi &&
      (config.enroll_count < 1 || config.enroll_count > 10))
    throw Error(Errc::bad_config, "enroll count must be in 1..10");
  if (manifest.entries.empty()) throw Error(Errc::degenerate_input, "empty manifest");

  const PolarDims dims = required_polar_dims(config.encoder);
  std::filesystem::create_directories(out_dir / "templates");

  ExperimentResult result;
  result.label = config_label(config);
  result.images = manifest.entries.size();
  result.kind = config.mode == MatchMode::single ? ScoreKind::hamming : ScoreKind::mdss;

  // Segment + encode every image; per-image detection failures are recorded,
  // I/O errors propagate.
  std::vector<Slot> slots(manifest.entries.size());
  parallel_for(
      0, manifest.entries.size(),
      [&](std::size_t i) {
        const ManifestEntry& e = manifest.entries[i];
        Slot& slot = slots[i];
        slot.outcome.entry = e;
        const GrayImage img = load_image(manifest.resolve(e));
        const SegmentationResult seg = segment(img, dims.angles, dims.radii);
        if (!seg.ok) {
          slot.outcome.ok = false;
          slot.outcome.reason = seg.failure_reason;
          return;
        }
        slot.outcome.ok = true;
        slot.outcome.pupil = seg.pupil;
        slot.outcome.limbic_radius = seg.limbic_radius;
        slot.code = encode(seg.segment, config.encoder);
      },
      config.threads);

  for (const auto& s : slots) {
    result.outcomes.push_back(s.outcome);
    if (s.outcome.ok)
      ++result.encoded;
    else
      ++result.failed;
  }

  result.templates_dir = out_dir / "templates";
  for (const auto& s : slots)
    if (s.outcome.ok)
      write_template_file(s.code, result.templates_dir / template_filename(s.outcome.entry));
  result.outcomes_csv = out_dir / "outcomes.csv";
  write_outcomes_csv(slots, result.outcomes_csv);

  // Usable templates grouped by eye, first-appearance order.
  std::vector<std::string> eye_order;
  std::map<std::string, std::vector<std::size_t>> per_eye;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].outcome.ok) continue;
    const std::string label = slots[i].outcome.entry.eye_label();
    auto [it, inserted] = per_eye.try_emplace(label);
    if (inserted) eye_order.push_back(label);
    it->second.push_back(i);
  }
  std::vector<std::size_t> per_eye_sizes;
  per_eye_sizes.reserve(eye_order.size());
  for (const auto& label : eye_order) per_eye_sizes.push_back(per_eye[label].size());

  ScoreTable table;
  if (config.mode == MatchMode::single) {
    std::vector<LabeledCode> templates;
    templates.reserve(result.encoded);
    for (const auto& s : slots)
      if (s.outcome.ok) templates.push_back({s.outcome.entry.eye_label(), s.code});
    table = all_pairs_scores(templates, config.max_shift_cols);
    check_counts(table, expected_single_counts(per_eye_sizes));
  } else {
    std::vector<EnrolledIdentity> gallery;
    std::vector<LabeledCode> candidates;
    for (const auto& label : eye_order) {
      const auto& indices = per_eye[label];
      EnrolledIdentity identity;
      identity.label = label;
      const std::size_t enrolled = std::min(config.enroll_count, indices.size());
      for (std::size_t t = 0; t < enrolled; ++t)
        identity.templates.push_back(slots[indices[t]].code);
      gallery.push_back(std::move(identity));
      for (std::size_t t = enrolled; t < indices.size(); ++t)
        candidates.push_back({label, slots[indices[t]].code});
    }

    double s = config.mdss_imposter_std;
    if (!(s > 0.0)) {
      // Measure the imposter spread in a paired single-enrollment run over
      // the same templates.
      std::vector<LabeledCode> templates;
      templates.reserve(result.encoded);
      for (const auto& slot : slots)
        if (slot.outcome.ok) templates.push_back({slot.outcome.entry.eye_label(), slot.code});
      const ScoreTable single = all_pairs_scores(templates, config.max_shift_cols);
      const ScoreSet single_set = ScoreSet::from_table(single);
      s = stats(single_set.imposter, config.encoder.code_rows * config.encoder.code_cols)
              .stddev;
      if (!(s > 0.0))
        throw Error(Errc::degenerate_std,
                    "paired single-enrollment run has zero imposter spread");
    }
    result.mdss_imposter_std_used = s;
    table = identity_gallery_scores(candidates, gallery, s);
    check_counts(table, expected_multi_counts(per_eye_sizes, config.enroll_count));
  }

  result.genuine_count = table.genuine_count();
  result.imposter_count = table.imposter_count();
  result.scores_csv = out_dir / "scores.csv";
  write_scores_csv(table, result.scores_csv);

  const ScoreSet scores = ScoreSet::from_table(table);
  const std::size_t bits = config.encoder.code_rows * config.encoder.code_cols;
  result.report = evaluate_scores(scores, bits, config.frr_targets, config.far_targets);

  result.roc_csv = out_dir / "roc.csv";
  result.histogram_csv = out_dir / "histogram.csv";
  result.metrics_txt = out_dir / "metrics.txt";
  result.metrics_json = out_dir / "metrics.json";
  write_roc_csv(scores, result.report.imposter, result.roc_csv);
  write_histogram_csv(scores, bits, result.histogram_csv);
  write_metrics_text(result.report, result.label, result.metrics_txt);
  write_metrics_json(result.report, result.label, result.metrics_json);

  // Run echo: configuration, counts, and artifact names in one place.
  nlohmann::ordered_json run;
  run["label"] = result.label;
  run["encoder"] = encoder_name(config.encoder.encoder);
  run["code_rows"] = config.encoder.code_rows;
  run["code_cols"] = config.encoder.code_cols;
  run["standard_dims"] = standard_code_dims(config.encoder.code_rows, config.encoder.code_cols);
  if (config.encoder.encoder == EncoderId::lge) {
    run["f0"] = config.encoder.log_gabor.f0;
    run["sigma_ratio"] = config.encoder.log_gabor.sigma_ratio;
  } else {
    run["filter_size"] = config.encoder.filter_size;
  }
  run["mode"] = config.mode == MatchMode::single ? "single" : "multi";
  if (config.mode == MatchMode::multi) {
    run["enroll_count"] = config.enroll_count;
    run["mdss_imposter_std"] = result.mdss_imposter_std_used;
  }
  run["max_shift_cols"] = config.max_shift_cols;
  run["images"] = result.images;
  run["encoded"] = result.encoded;
  run["failed"] = result.failed;
  run["genuine_pairs"] = result.genuine_count;
  run["imposter_pairs"] = result.imposter_count;
  run["artifacts"] = {"templates/", "outcomes.csv", "scores.csv", "roc.csv",
                      "histogram.csv", "metrics.txt", "metrics.json"};
  std::ofstream run_out(out_dir / "run.json", std::ios::binary | std::ios::trunc);
  if (!run_out) throw Error(Errc::io_error, "cannot create run.json");
  run_out << run.dump(2) << '\n';

  return result;
}

std::vector<ExperimentResult> compare_encoders(const DatasetManifest& manifest,
                                               std::span<const ExperimentConfig> configs,
                                               const std::filesystem::path& out_dir) {
  if (configs.size() < 2)
    throw Error(Errc::bad_config, "comparison needs at least 2 configurations");

  // Repeated configurations are allowed (e.g. to confirm determinism); their
  // run directories are disambiguated with a counter suffix.
  std::map<std::string, std::size_t> seen;
  std::vector<std::string> run_labels;
  run_labels.reserve(configs.size());
  for (const auto& c : configs) {
    std::string label = config_label(c);
    const std::size_t n = ++seen[label];
    if (n > 1) label += "_run" + std::to_string(n);
    run_labels.push_back(std::move(label));
  }

  std::vector<ExperimentResult> results;
  results.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    results.push_back(run_experiment(manifest, configs[i], out_dir / run_labels[i]));
    results.back().label = run_labels[i];
  }
  write_comparison(results, out_dir / "comparison.txt", out_dir / "comparison.csv");
  return results;
}

void write_comparison(std::span<const ExperimentResult> results,
                      const std::filesystem::path& txt_path,
                      const std::filesystem::path& csv_path) {
  if (results.empty()) throw Error(Errc::degenerate_input, "no results to compare");

  // Text table: metrics as rows, one column per configuration.
  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  const auto add_row = [&](const std::string& name, auto&& getter) {
    std::vector<std::string> cells;
    for (const auto& r : results) cells.push_back(getter(r));
    rows.emplace_back(name, std::move(cells));
  };
  add_row("code bits", [](const auto& r) { return std::to_string(r.report.code_bits); });
  add_row("images encoded / failed", [](const auto& r) {
    return std::to_string(r.encoded) + " / " + std::to_string(r.failed);
  });
  add_row("genuine pairs", [](const auto& r) { return std::to_string(r.genuine_count); });
  add_row("imposter pairs", [](const auto& r) { return std::to_string(r.imposter_count); });
  add_row("imposter mean", [](const auto& r) { return fmt_full(r.report.imposter.mean); });
  add_row("imposter std", [](const auto& r) { return fmt_full(r.report.imposter.stddev); });
  add_row("imposter dof", [](const auto& r) { return fmt_full(r.report.imposter.dof); });
  add_row("genuine mean", [](const auto& r) { return fmt_full(r.report.genuine.mean); });
  add_row("genuine std", [](const auto& r) { return fmt_full(r.report.genuine.stddev); });
  add_row("genuine dof", [](const auto& r) { return fmt_full(r.report.genuine.dof); });
  add_row("decidability d'", [](const auto& r) { return fmt_full(r.report.decidability_value); });
  add_row("fisher ratio r", [](const auto& r) { return fmt_full(r.report.fisher_value); });
  add_row("eer", [](const auto& r) { return fmt_full(r.report.eer.eer); });
  add_row("max imposter score (MIS)",
          [](const auto& r) { return fmt_full(r.report.score_extremes.max_imposter); });
  add_row("min genuine score (mGS)",
          [](const auto& r) { return fmt_full(r.report.score_extremes.min_genuine); });
  add_row("margin (mGS - MIS)",
          [](const auto& r) { return fmt_full(r.report.score_extremes.margin); });
  add_row("FAR at MIS",
          [](const auto& r) { return fmt_full(r.report.score_extremes.far_at_max_imposter); });
  add_row("storage efficiency %",
          [](const auto& r) { return fmt_full(r.report.storage_percent); });

  // Operating-point rows keyed on the first result's targets.
  for (const auto& op0 : results[0].report.operating_points) {
    const std::string name = std::string(op0.for_frr ? "FAR at FRR target " : "FRR at FAR target ") +
                             fmt_full(op0.target);
    std::vector<std::string> cells;
    for (const auto& r : results) {
      std::string cell = "n/a";
      for (const auto& op : r.report.operating_points) {
        if (op.for_frr == op0.for_frr && op.target == op0.target) {
          cell = op.reachable ? fmt_full(op0.for_frr ? op.far : op.frr) : "unreachable";
          break;
        }
      }
      cells.push_back(std::move(cell));
    }
    rows.emplace_back(name, std::move(cells));
  }

  std::size_t name_width = 0;
  for (const auto& [name, _] : rows) name_width = std::max(name_width, name.size());
  std::vector<std::size_t> col_width(results.size());
  for (std::size_t c = 0; c < results.size(); ++c) {
    col_width[c] = results[c].label.size();
    for (const auto& [_, cells] : rows) col_width[c] = std::max(col_width[c], cells[c].size());
  }

  std::ofstream txt(txt_path, std::ios::binary | std::ios::trunc);
  if (!txt) throw Error(Errc::io_error, "cannot create " + txt_path.string());
  const auto pad = [&txt](const std::string& s, std::size_t w) {
    txt << s;
    for (std::size_t i = s.size(); i < w; ++i) txt << ' ';
  };
  pad("metric", name_width);
  for (std::size_t c = 0; c < results.size(); ++c) {
    txt << "  ";
    pad(results[c].label, col_width[c]);
  }
  txt << '\n';
  for (const auto& [name, cells] : rows) {
    pad(name, name_width);
    for (std::size_t c = 0; c < results.size(); ++c) {
      txt << "  ";
      pad(cells[c], col_width[c]);
    }
    txt << '\n';
  }
  if (!txt) throw Error(Errc::io_error, "short write to " + txt_path.string());

  std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
  if (!csv) throw Error(Errc::io_error, "cannot create " + csv_path.string());
  csv << "label,code_bits,encoded,failed,genuine_pairs,imposter_pairs,imposter_mean,"
         "imposter_std,imposter_dof,genuine_mean,genuine_std,genuine_dof,decidability,"
         "fisher_ratio,eer,eer_threshold,max_imposter,min_genuine,margin,far_at_mis,"
         "storage_percent\n";
  for (const auto& r : results) {
    csv << r.label << ',' << r.report.code_bits << ',' << r.encoded << ',' << r.failed << ','
        << r.genuine_count << ',' << r.imposter_count << ','
        << fmt_full(r.report.imposter.mean) << ',' << fmt_full(r.report.imposter.stddev) << ','
        << fmt_full(r.report.imposter.dof) << ',' << fmt_full(r.report.genuine.mean) << ','
        << fmt_full(r.report.genuine.stddev) << ',' << fmt_full(r.report.genuine.dof) << ','
        << fmt_full(r.report.decidability_value) << ',' << fmt_full(r.report.fisher_value) << ','
        << fmt_full(r.report.eer.eer) << ',' << fmt_full(r.report.eer.threshold) << ','
        << fmt_full(r.report.score_extremes.max_imposter) << ','
        << fmt_full(r.report.score_extremes.min_genuine) << ','
        << fmt_full(r.report.score_extremes.margin) << ','
        << fmt_full(r.report.score_extremes.far_at_max_imposter) << ','
        << fmt_full(r.report.storage_percent) << '\n';
  }
  if (!csv) throw Error(Errc::io_error, "short write to " + csv_path.string());
}

}  // namespace iris
