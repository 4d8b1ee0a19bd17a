#include "iris/matching.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "iris/errors.hpp"
#include "iris/parallel.hpp"

namespace iris {
namespace {

void check_comparable(const IrisCode& a, const IrisCode& b) {
  if (a.bit_count() == 0 || b.bit_count() == 0)
    throw Error(Errc::degenerate_input, "empty code");
  if (a.rows != b.rows || a.cols != b.cols)
    throw Error(Errc::dimension_mismatch, "codes have different dims");
  if (a.encoder != b.encoder)
    throw Error(Errc::dimension_mismatch, "codes from different encoders");
  if (a.bits.size() != a.byte_count() || b.bits.size() != b.byte_count())
    throw Error(Errc::dimension_mismatch, "code bit buffer has wrong size");
}

// Fraction of agreeing bits; operands already validated.
double similarity_unchecked(const IrisCode& a, const IrisCode& b) {
  const std::size_t bytes = a.bits.size();
  std::size_t disagree = 0;
  std::size_t i = 0;
  for (; i + 8 <= bytes; i += 8) {
    std::uint64_t x, y;
    std::memcpy(&x, a.bits.data() + i, 8);
    std::memcpy(&y, b.bits.data() + i, 8);
    disagree += static_cast<std::size_t>(std::popcount(x ^ y));
  }
  for (; i < bytes; ++i)
    disagree += static_cast<std::size_t>(
        std::popcount(static_cast<unsigned>(a.bits[i] ^ b.bits[i])));
  const double bits = static_cast<double>(a.bit_count());
  return (bits - static_cast<double>(disagree)) / bits;
}

IrisCode shifted_columns(const IrisCode& code, long shift) {
  const long cols = static_cast<long>(code.cols);
  IrisCode out = code;
  std::fill(out.bits.begin(), out.bits.end(), 0);
  for (std::size_t r = 0; r < code.rows; ++r) {
    for (std::size_t c = 0; c < code.cols; ++c) {
      const long src = (static_cast<long>(c) - shift % cols + cols) % cols;
      if (code.bit(r, static_cast<std::size_t>(src))) out.set_bit(r, c, true);
    }
  }
  return out;
}

double sample_mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (const double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (const double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

std::string csv_escape_check(const std::string& label) {
  if (label.find_first_of(",\"\n\r") != std::string::npos)
    throw Error(Errc::format_error, "label contains CSV delimiters: " + label);
  return label;
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double hamming_similarity(const IrisCode& a, const IrisCode& b) {
  check_comparable(a, b);
  return similarity_unchecked(a, b);
}

double hamming_similarity_best_shift(const IrisCode& a, const IrisCode& b,
                                     std::size_t max_shift_cols) {
  check_comparable(a, b);
  if (max_shift_cols == 0) return similarity_unchecked(a, b);
  double best = similarity_unchecked(a, b);
  for (long d = 1; d <= static_cast<long>(max_shift_cols); ++d) {
    best = std::max(best, similarity_unchecked(a, shifted_columns(b, d)));
    best = std::max(best, similarity_unchecked(a, shifted_columns(b, -d)));
  }
  return best;
}

double mdss(const IrisCode& candidate, const EnrolledIdentity& identity,
            double imposter_std) {
  if (identity.templates.empty())
    throw Error(Errc::empty_identity, "identity '" + identity.label + "' has no templates");
  if (identity.templates.size() > 10)
    throw Error(Errc::bad_config, "identity '" + identity.label + "' has more than 10 templates");
  if (!(imposter_std > 0.0))
    throw Error(Errc::degenerate_std, "imposter std must be positive");

  std::vector<double> hss;
  hss.reserve(identity.templates.size());
  for (const IrisCode& t : identity.templates)
    hss.push_back(hamming_similarity(candidate, t));
  const double mean = sample_mean(hss);
  return mean + sample_std(hss, mean) - imposter_std / 2.0;
}

std::size_t ScoreTable::genuine_count() const {
  std::size_t n = 0;
  for (const auto& r : records) n += r.genuine ? 1 : 0;
  return n;
}

std::size_t ScoreTable::imposter_count() const {
  return records.size() - genuine_count();
}

ScoreTable all_pairs_scores(const std::vector<LabeledCode>& templates,
                            std::size_t max_shift_cols) {
  const std::size_t n = templates.size();
  if (n < 2) throw Error(Errc::too_few_templates, "need at least 2 templates to pair up");

  ScoreTable table;
  table.kind = ScoreKind::hamming;
  table.records.resize(n * (n - 1) / 2);

  parallel_for(0, n - 1, [&](std::size_t i) {
    // pair (i, j) with i < j lives at index i*(2n-i-1)/2 + (j-i-1)
    const std::size_t base = i * (2 * n - i - 1) / 2;
    for (std::size_t j = i + 1; j < n; ++j) {
      ScoreRecord rec;
      rec.pair_id = base + (j - i - 1);
      rec.label_a = templates[i].label;
      rec.label_b = templates[j].label;
      rec.genuine = templates[i].label == templates[j].label;
      rec.score = max_shift_cols == 0
                      ? hamming_similarity(templates[i].code, templates[j].code)
                      : hamming_similarity_best_shift(templates[i].code,
                                                      templates[j].code, max_shift_cols);
      table.records[rec.pair_id] = std::move(rec);
    }
  });
  return table;
}

ScoreTable identity_gallery_scores(const std::vector<LabeledCode>& candidates,
                                   const std::vector<EnrolledIdentity>& gallery,
                                   double imposter_std) {
  if (gallery.empty()) throw Error(Errc::too_few_templates, "empty gallery");
  if (candidates.empty()) throw Error(Errc::too_few_templates, "no candidates");

  ScoreTable table;
  table.kind = ScoreKind::mdss;
  const std::size_t g = gallery.size();
  table.records.resize(candidates.size() * g);

  parallel_for(0, candidates.size(), [&](std::size_t ci) {
    for (std::size_t gi = 0; gi < g; ++gi) {
      ScoreRecord rec;
      rec.pair_id = ci * g + gi;
      rec.label_a = candidates[ci].label;
      rec.label_b = gallery[gi].label;
      rec.genuine = candidates[ci].label == gallery[gi].label;
      rec.score = mdss(candidates[ci].code, gallery[gi], imposter_std);
      table.records[rec.pair_id] = std::move(rec);
    }
  });
  return table;
}

void write_scores_csv(const ScoreTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot create " + path.string());
  out << "pair_id,label_a,label_b,kind,genuine,score\n";
  const char* kind = table.kind == ScoreKind::hamming ? "HS" : "MDSS";
  for (const auto& r : table.records) {
    out << r.pair_id << ',' << csv_escape_check(r.label_a) << ','
        << csv_escape_check(r.label_b) << ',' << kind << ',' << (r.genuine ? 1 : 0)
        << ',' << fmt_full(r.score) << '\n';
  }
  if (!out) throw Error(Errc::io_error, "short write to " + path.string());
}

ScoreTable read_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || (line != "pair_id,label_a,label_b,kind,genuine,score" &&
                                  line != "pair_id,label_a,label_b,kind,genuine,score\r"))
    throw Error(Errc::format_error, "bad scores CSV header in " + path.string());

  ScoreTable table;
  bool kind_set = false;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string, 6> fields;
    std::size_t field = 0, start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (field >= 6)
          throw Error(Errc::format_error, "too many fields at line " + std::to_string(line_no));
        fields[field++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    if (field != 6)
      throw Error(Errc::format_error, "expected 6 fields at line " + std::to_string(line_no));

    ScoreRecord rec;
    ScoreKind kind;
    try {
      rec.pair_id = std::stoull(fields[0]);
      rec.label_a = fields[1];
      rec.label_b = fields[2];
      if (fields[3] == "HS")
        kind = ScoreKind::hamming;
      else if (fields[3] == "MDSS")
        kind = ScoreKind::mdss;
      else
        throw Error(Errc::format_error, "unknown score kind '" + fields[3] + "'");
      if (fields[4] != "0" && fields[4] != "1")
        throw Error(Errc::format_error, "genuine flag must be 0 or 1");
      rec.genuine = fields[4] == "1";
      rec.score = std::stod(fields[5]);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(Errc::format_error, "unparsable number at line " + std::to_string(line_no));
    }
    if (kind_set && kind != table.kind)
      throw Error(Errc::format_error, "mixed score kinds in " + path.string());
    table.kind = kind;
    kind_set = true;
    table.records.push_back(std::move(rec));
  }
  if (table.records.empty())
    throw Error(Errc::format_error, "no score rows in " + path.string());
  return table;
}

}  // namespace iris
