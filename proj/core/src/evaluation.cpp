#include "iris/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "iris/errors.hpp"
#include "text.hpp"

namespace iris {
namespace {

using detail::fmt_full;

std::size_t count_lt(const std::vector<double>& sorted, double t) {
  return static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}

std::size_t count_ge(const std::vector<double>& sorted, double t) {
  return sorted.size() - count_lt(sorted, t);
}

std::vector<double> distinct_sorted(const std::vector<double>& sorted) {
  std::vector<double> out(sorted);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_both(const ScoreSet& scores) {
  if (scores.genuine.empty() || scores.imposter.empty())
    throw Error(Errc::too_few_scores, "need both genuine and imposter scores");
}

}  // namespace

ScoreSet ScoreSet::from_table(const ScoreTable& table) {
  ScoreSet s;
  for (const auto& r : table.records)
    (r.genuine ? s.genuine : s.imposter).push_back(r.score);
  std::sort(s.genuine.begin(), s.genuine.end());
  std::sort(s.imposter.begin(), s.imposter.end());
  return s;
}

ScoreSet ScoreSet::from_samples(std::vector<double> genuine_scores,
                                std::vector<double> imposter_scores) {
  ScoreSet s;
  s.genuine = std::move(genuine_scores);
  s.imposter = std::move(imposter_scores);
  std::sort(s.genuine.begin(), s.genuine.end());
  std::sort(s.imposter.begin(), s.imposter.end());
  return s;
}

DistributionStats stats(std::span<const double> scores, std::size_t code_bits) {
  if (scores.size() < 2)
    throw Error(Errc::too_few_scores, "statistics need at least 2 scores");
  if (code_bits == 0) throw Error(Errc::bad_config, "code_bits must be positive");

  const double n = static_cast<double>(scores.size());
  double sum = 0.0;
  for (const double x : scores) sum += x;
  const double mean = sum / n;
  double acc = 0.0;
  for (const double x : scores) acc += (x - mean) * (x - mean);
  const double stddev = std::sqrt(acc / (n - 1.0));

  DistributionStats out;
  out.mean = mean;
  out.stddev = stddev;
  out.dof = stddev > 0.0 ? mean * (1.0 - mean) / (stddev * stddev) : 0.0;
  out.count = scores.size();
  return out;
}

DistributionStats stats_from_moments(double mean, double stddev) {
  if (!(stddev >= 0.0)) throw Error(Errc::degenerate_std, "negative standard deviation");
  DistributionStats out;
  out.mean = mean;
  out.stddev = stddev;
  out.dof = stddev > 0.0 ? mean * (1.0 - mean) / (stddev * stddev) : 0.0;
  out.count = 0;
  return out;
}

double decidability(const DistributionStats& genuine, const DistributionStats& imposter) {
  const double vi = imposter.stddev * imposter.stddev;
  const double vg = genuine.stddev * genuine.stddev;
  if (vi + vg <= 0.0)
    throw Error(Errc::degenerate_std, "both score distributions are degenerate");
  return std::abs(imposter.mean - genuine.mean) / std::sqrt(0.5 * (vi + vg));
}

double fisher_ratio(const DistributionStats& genuine, const DistributionStats& imposter) {
  const double vi = imposter.stddev * imposter.stddev;
  const double vg = genuine.stddev * genuine.stddev;
  if (vi + vg <= 0.0)
    throw Error(Errc::degenerate_std, "both score distributions are degenerate");
  const double diff = imposter.mean - genuine.mean;
  return diff * diff / (vi + vg);
}

double storage_efficiency(double imposter_dof, std::size_t code_bits) {
  if (code_bits == 0) throw Error(Errc::bad_config, "code_bits must be positive");
  return 100.0 * imposter_dof / static_cast<double>(code_bits);
}

FarFrr far_frr(const ScoreSet& scores, double threshold) {
  require_both(scores);
  FarFrr out;
  out.far = static_cast<double>(count_ge(scores.imposter, threshold)) /
            static_cast<double>(scores.imposter.size());
  out.frr = static_cast<double>(count_lt(scores.genuine, threshold)) /
            static_cast<double>(scores.genuine.size());
  return out;
}

FarFrr observed_odds(const ScoreSet& scores, double threshold) {
  return far_frr(scores, threshold);
}

EerResult equal_error_rate(const ScoreSet& scores) {
  require_both(scores);
  const auto& gen = scores.genuine;
  const auto& imp = scores.imposter;

  // Fully separated distributions: zero error midway across the gap.
  if (imp.back() < gen.front()) return {0.0, 0.5 * (imp.back() + gen.front())};

  // Sweep distinct scores ascending; FAR - FRR is non-increasing, so the
  // first sign change brackets the crossing. The sentinel past the maximum
  // (FAR 0, FRR 1) guarantees termination.
  std::vector<double> cand;
  cand.reserve(gen.size() + imp.size() + 1);
  std::merge(gen.begin(), gen.end(), imp.begin(), imp.end(), std::back_inserter(cand));
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  cand.push_back(std::nextafter(cand.back(), std::numeric_limits<double>::infinity()));

  double prev_t = 0.0, prev_far = 0.0, prev_d = 0.0;
  bool have_prev = false;
  for (const double t : cand) {
    const FarFrr ff = far_frr(scores, t);
    const double d = ff.far - ff.frr;
    if (d == 0.0) return {ff.far, t};
    if (d < 0.0) {
      if (!have_prev) return {ff.far, t};  // unreachable: first sweep point has FAR=1
      const double alpha = prev_d / (prev_d - d);
      const double eer = prev_far + alpha * (ff.far - prev_far);
      const double thr = prev_t + alpha * (t - prev_t);
      return {eer, thr};
    }
    prev_t = t;
    prev_far = ff.far;
    prev_d = d;
    have_prev = true;
  }
  // Unreachable: the sentinel always yields FAR - FRR = -1.
  return {prev_far, prev_t};
}

double predicted_false_accept_odds(const DistributionStats& imposter, double threshold) {
  if (!(imposter.stddev > 0.0))
    throw Error(Errc::degenerate_std, "imposter std must be positive");
  // Gaussian tail with the imposter mean shifted up by a 0.005 safety margin.
  const double z = (threshold - (imposter.mean + 0.005)) / imposter.stddev;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

ScoreExtremes extremes(const ScoreSet& scores) {
  require_both(scores);
  ScoreExtremes out;
  out.max_imposter = scores.imposter.back();
  out.min_genuine = scores.genuine.front();
  out.margin = out.min_genuine - out.max_imposter;
  const FarFrr at_mis = far_frr(scores, out.max_imposter);
  out.far_at_max_imposter = at_mis.far;
  out.frr_at_max_imposter = at_mis.frr;
  out.frr_at_min_genuine = far_frr(scores, out.min_genuine).frr;
  return out;
}

OperatingPoint operating_point_for_frr(const ScoreSet& scores,
                                       const DistributionStats& imposter,
                                       double target_frr) {
  require_both(scores);
  if (!(target_frr > 0.0) || !(target_frr < 1.0))
    throw Error(Errc::bad_config, "FRR target must be in (0, 1)");

  // Candidate thresholds are the distinct genuine scores; FRR(g_k) = (number
  // of genuine scores below g_k)/N is the exact staircase. Choose the largest
  // FRR that does not exceed the target ("nearest from below").
  const auto cand = distinct_sorted(scores.genuine);
  const double n = static_cast<double>(scores.genuine.size());
  double best_t = cand.front();
  double best_frr = 0.0;  // FRR at the minimum genuine score is always 0
  for (const double t : cand) {
    const double frr = static_cast<double>(count_lt(scores.genuine, t)) / n;
    if (frr <= target_frr) {
      best_t = t;
      best_frr = frr;
    } else {
      break;
    }
  }
  if (best_frr == 0.0 || best_frr < target_frr / 10.0)
    throw Error(Errc::unreachable_target,
                "no threshold reaches FRR within a decade below " + fmt_full(target_frr));

  OperatingPoint op;
  op.for_frr = true;
  op.target = target_frr;
  op.threshold = best_t;
  const FarFrr ff = far_frr(scores, best_t);
  op.far = ff.far;
  op.frr = ff.frr;
  op.predicted_fa_odds = predicted_false_accept_odds(imposter, best_t);
  return op;
}

OperatingPoint operating_point_for_far(const ScoreSet& scores,
                                       const DistributionStats& imposter,
                                       double target_far) {
  require_both(scores);
  if (!(target_far > 0.0) || !(target_far < 1.0))
    throw Error(Errc::bad_config, "FAR target must be in (0, 1)");

  // Candidates: distinct imposter scores (FAR(v) = fraction >= v, positive)
  // plus one step past the maximum (FAR 0). Nearest to the target wins;
  // equidistant prefers the larger threshold (the stricter setting).
  auto cand = distinct_sorted(scores.imposter);
  cand.push_back(std::nextafter(cand.back(), std::numeric_limits<double>::infinity()));
  const double n = static_cast<double>(scores.imposter.size());
  double best_t = cand.front();
  double best_far = 1.0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const double t : cand) {
    const double far = static_cast<double>(count_ge(scores.imposter, t)) / n;
    const double dist = std::abs(far - target_far);
    if (dist < best_dist || (dist == best_dist && t > best_t)) {
      best_dist = dist;
      best_t = t;
      best_far = far;
    }
  }
  if (best_far == 0.0 || best_far < target_far / 10.0 || best_far > target_far * 10.0)
    throw Error(Errc::unreachable_target,
                "no threshold reaches FAR within a decade of " + fmt_full(target_far));

  OperatingPoint op;
  op.for_frr = false;
  op.target = target_far;
  op.threshold = best_t;
  const FarFrr ff = far_frr(scores, best_t);
  op.far = ff.far;
  op.frr = ff.frr;
  op.predicted_fa_odds = predicted_false_accept_odds(imposter, best_t);
  return op;
}

std::vector<OperatingPoint> operating_table(const ScoreSet& scores,
                                            const DistributionStats& imposter,
                                            std::span<const double> frr_targets,
                                            std::span<const double> far_targets) {
  std::vector<OperatingPoint> rows;
  rows.reserve(frr_targets.size() + far_targets.size());
  for (const double target : frr_targets) {
    try {
      rows.push_back(operating_point_for_frr(scores, imposter, target));
    } catch (const Error& e) {
      if (e.code() != Errc::unreachable_target) throw;
      OperatingPoint op;
      op.for_frr = true;
      op.target = target;
      op.reachable = false;
      op.threshold = op.far = op.frr = op.predicted_fa_odds =
          std::numeric_limits<double>::quiet_NaN();
      rows.push_back(op);
    }
  }
  for (const double target : far_targets) {
    try {
      rows.push_back(operating_point_for_far(scores, imposter, target));
    } catch (const Error& e) {
      if (e.code() != Errc::unreachable_target) throw;
      OperatingPoint op;
      op.for_frr = false;
      op.target = target;
      op.reachable = false;
      op.threshold = op.far = op.frr = op.predicted_fa_odds =
          std::numeric_limits<double>::quiet_NaN();
      rows.push_back(op);
    }
  }
  return rows;
}

EvaluationReport evaluate_scores(const ScoreSet& scores, std::size_t code_bits,
                                 std::span<const double> frr_targets,
                                 std::span<const double> far_targets) {
  EvaluationReport rep;
  rep.code_bits = code_bits;
  rep.genuine = stats(scores.genuine, code_bits);
  rep.imposter = stats(scores.imposter, code_bits);
  rep.decidability_value = decidability(rep.genuine, rep.imposter);
  rep.fisher_value = fisher_ratio(rep.genuine, rep.imposter);
  rep.eer = equal_error_rate(scores);
  rep.score_extremes = extremes(scores);
  rep.storage_percent = storage_efficiency(rep.imposter.dof, code_bits);
  rep.operating_points = operating_table(scores, rep.imposter, frr_targets, far_targets);
  return rep;
}

void write_roc_csv(const ScoreSet& scores, const DistributionStats& imposter,
                   const std::filesystem::path& path) {
  require_both(scores);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot create " + path.string());
  out << "threshold,far,frr,predicted_fa_odds\n";

  std::vector<double> cand;
  cand.reserve(scores.genuine.size() + scores.imposter.size() + 1);
  std::merge(scores.genuine.begin(), scores.genuine.end(), scores.imposter.begin(),
             scores.imposter.end(), std::back_inserter(cand));
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  cand.push_back(std::nextafter(cand.back(), std::numeric_limits<double>::infinity()));

  const bool have_pofa = imposter.stddev > 0.0;
  for (const double t : cand) {
    const FarFrr ff = far_frr(scores, t);
    out << fmt_full(t) << ',' << fmt_full(ff.far) << ',' << fmt_full(ff.frr) << ','
        << (have_pofa ? fmt_full(predicted_false_accept_odds(imposter, t)) : "nan")
        << '\n';
  }
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

void write_histogram_csv(const ScoreSet& scores, std::size_t code_bits,
                         const std::filesystem::path& path) {
  require_both(scores);
  if (code_bits == 0) throw Error(Errc::bad_config, "code_bits must be positive");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot create " + path.string());
  out << "bin_center,genuine_freq,imposter_freq\n";

  // Bin width = one bit of similarity; bins cover [min(0, lo), max(1, hi)].
  const double width = 1.0 / static_cast<double>(code_bits);
  const double lo = std::min({0.0, scores.genuine.front(), scores.imposter.front()});
  const double hi = std::max({1.0, scores.genuine.back(), scores.imposter.back()});
  const std::size_t bins = static_cast<std::size_t>(std::ceil((hi - lo) / width - 1e-9));

  std::vector<std::size_t> gcount(bins, 0), icount(bins, 0);
  const auto bin_of = [&](double v) {
    const double raw = (v - lo) / width;
    std::size_t b = raw <= 0.0 ? 0 : static_cast<std::size_t>(raw);
    return std::min(b, bins - 1);
  };
  for (const double v : scores.genuine) gcount[bin_of(v)] += 1;
  for (const double v : scores.imposter) icount[bin_of(v)] += 1;

  const double gn = static_cast<double>(scores.genuine.size());
  const double in = static_cast<double>(scores.imposter.size());
  for (std::size_t b = 0; b < bins; ++b) {
    const double center = lo + (static_cast<double>(b) + 0.5) * width;
    out << fmt_full(center) << ',' << fmt_full(static_cast<double>(gcount[b]) / gn)
        << ',' << fmt_full(static_cast<double>(icount[b]) / in) << '\n';
  }
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

namespace {

void write_report_lines(std::ostream& out, const EvaluationReport& rep,
                        const std::string& title) {
  const auto line = [&out](const std::string& label, const std::string& value) {
    out << "  " << label;
    for (std::size_t i = label.size(); i < 34; ++i) out << ' ';
    out << value << '\n';
  };

  out << title << '\n';
  out << std::string(title.size(), '=') << "\n\n";
  out << "Score distributions\n";
  line("code bits", std::to_string(rep.code_bits));
  line("genuine count", std::to_string(rep.genuine.count));
  line("imposter count", std::to_string(rep.imposter.count));
  line("genuine mean / std", fmt_full(rep.genuine.mean) + " / " + fmt_full(rep.genuine.stddev));
  line("imposter mean / std", fmt_full(rep.imposter.mean) + " / " + fmt_full(rep.imposter.stddev));
  line("genuine dof", fmt_full(rep.genuine.dof));
  line("imposter dof", fmt_full(rep.imposter.dof));
  out << "\nSeparation\n";
  line("decidability d'", fmt_full(rep.decidability_value));
  line("fisher ratio r", fmt_full(rep.fisher_value));
  line("eer", fmt_full(rep.eer.eer) + " at threshold " + fmt_full(rep.eer.threshold));
  line("max imposter score (MIS)", fmt_full(rep.score_extremes.max_imposter));
  line("min genuine score (mGS)", fmt_full(rep.score_extremes.min_genuine));
  line("margin (mGS - MIS)", fmt_full(rep.score_extremes.margin));
  line("FAR at MIS", fmt_full(rep.score_extremes.far_at_max_imposter));
  line("FRR at MIS", fmt_full(rep.score_extremes.frr_at_max_imposter));
  line("FRR at mGS", fmt_full(rep.score_extremes.frr_at_min_genuine));
  line("storage efficiency", fmt_full(rep.storage_percent) + " %");
  out << "\nOperating points (accept when score >= threshold)\n";
  for (const auto& op : rep.operating_points) {
    const std::string label =
        std::string(op.for_frr ? "FRR target " : "FAR target ") + fmt_full(op.target);
    if (!op.reachable) {
      line(label, "unreachable (no threshold within a decade of the target)");
      continue;
    }
    line(label, "threshold " + fmt_full(op.threshold) + "  FAR " + fmt_full(op.far) +
                    "  FRR " + fmt_full(op.frr) + "  predicted FA odds " +
                    fmt_full(op.predicted_fa_odds));
  }
}

}  // namespace

void write_metrics_text(const EvaluationReport& report, const std::string& title,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot create " + path.string());
  write_report_lines(out, report, title);
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

void write_metrics_json(const EvaluationReport& report, const std::string& title,
                        const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["title"] = title;
  j["code_bits"] = report.code_bits;
  const auto stats_json = [](const DistributionStats& s) {
    nlohmann::ordered_json o;
    o["count"] = s.count;
    o["mean"] = s.mean;
    o["stddev"] = s.stddev;
    o["dof"] = s.dof;
    return o;
  };
  j["genuine"] = stats_json(report.genuine);
  j["imposter"] = stats_json(report.imposter);
  j["decidability"] = report.decidability_value;
  j["fisher_ratio"] = report.fisher_value;
  j["eer"] = {{"value", report.eer.eer}, {"threshold", report.eer.threshold}};
  j["extremes"] = {{"max_imposter", report.score_extremes.max_imposter},
                   {"min_genuine", report.score_extremes.min_genuine},
                   {"margin", report.score_extremes.margin},
                   {"far_at_max_imposter", report.score_extremes.far_at_max_imposter},
                   {"frr_at_max_imposter", report.score_extremes.frr_at_max_imposter},
                   {"frr_at_min_genuine", report.score_extremes.frr_at_min_genuine}};
  j["storage_efficiency_percent"] = report.storage_percent;
  j["operating_points"] = nlohmann::ordered_json::array();
  for (const auto& op : report.operating_points) {
    nlohmann::ordered_json o;
    o["kind"] = op.for_frr ? "frr_target" : "far_target";
    o["target"] = op.target;
    o["reachable"] = op.reachable;
    if (op.reachable) {
      o["threshold"] = op.threshold;
      o["far"] = op.far;
      o["frr"] = op.frr;
      o["predicted_fa_odds"] = op.predicted_fa_odds;
    }
    j["operating_points"].push_back(o);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot create " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

}  // namespace iris
