#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "iris/errors.hpp"
#include "iris/matching.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using iris::EncoderId;
using iris::EnrolledIdentity;
using iris::Errc;
using iris::IrisCode;
using iris::LabeledCode;
using iris::ScoreKind;
using iris::ScoreRecord;
using iris::ScoreTable;
using testutil::error_code_of;
using testutil::ScratchDir;

namespace {

IrisCode make_code(std::size_t rows, std::size_t cols, std::uint64_t seed,
                   EncoderId encoder = EncoderId::hh1) {
  IrisCode code;
  code.rows = rows;
  code.cols = cols;
  code.encoder = encoder;
  code.digest = seed;
  code.bits.assign(code.byte_count(), 0);
  std::mt19937_64 g(seed);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) code.set_bit(r, c, (g() & 1) != 0);
  return code;
}

IrisCode from_bits(const std::string& bits01) {
  IrisCode code;
  code.rows = 1;
  code.cols = bits01.size();
  code.encoder = EncoderId::hh1;
  code.bits.assign(code.byte_count(), 0);
  for (std::size_t c = 0; c < bits01.size(); ++c) code.set_bit(0, c, bits01[c] == '1');
  return code;
}

// Flip `count` distinct bits, taking positions `start, start+1, ...`.
IrisCode with_flipped(const IrisCode& base, std::size_t start, std::size_t count) {
  IrisCode out = base;
  for (std::size_t t = start; t < start + count; ++t)
    out.set_bit(t / out.cols, t % out.cols, !out.bit(t / out.cols, t % out.cols));
  return out;
}

}  // namespace

TEST_SUITE("matching") {

TEST_CASE("hamming similarity counts agreeing bit fractions") {
  CHECK_EQ(iris::hamming_similarity(from_bits("10110010"), from_bits("10100110")), 0.75);
  const IrisCode a = make_code(4, 32, 11);
  CHECK_EQ(iris::hamming_similarity(a, a), 1.0);

  IrisCode complement = a;
  for (auto& byte : complement.bits) byte = static_cast<std::uint8_t>(~byte);
  CHECK_EQ(iris::hamming_similarity(a, complement), 0.0);
}

TEST_CASE("similarity against a code and its complement sums to one") {
  // 128 bits: the two counts split a power of two, so the fractions add
  // exactly.
  const IrisCode a = make_code(4, 32, 21);
  const IrisCode b = make_code(4, 32, 22);
  IrisCode nb = b;
  for (auto& byte : nb.bits) byte = static_cast<std::uint8_t>(~byte);
  CHECK_EQ(iris::hamming_similarity(a, b) + iris::hamming_similarity(a, nb), 1.0);
}

TEST_CASE("similarity operands are validated") {
  const IrisCode a = make_code(4, 32, 31);
  CHECK_EQ(error_code_of([&] { iris::hamming_similarity(a, make_code(4, 16, 31)); }),
           Errc::dimension_mismatch);
  CHECK_EQ(error_code_of([&] { iris::hamming_similarity(a, make_code(8, 32, 31)); }),
           Errc::dimension_mismatch);
  CHECK_EQ(error_code_of(
               [&] { iris::hamming_similarity(a, make_code(4, 32, 31, EncoderId::lge)); }),
           Errc::dimension_mismatch);
  CHECK_EQ(error_code_of([&] { iris::hamming_similarity(a, IrisCode{}); }),
           Errc::degenerate_input);

  // Differing parameter digests are allowed: the digest is bookkeeping, not
  // part of the score.
  IrisCode other_digest = make_code(4, 32, 32);
  other_digest.digest = 999;
  CHECK_NOTHROW(iris::hamming_similarity(a, other_digest));
}

TEST_CASE("one minus similarity behaves as a distance") {
  std::mt19937_64 g(41);
  for (int trial = 0; trial < 50; ++trial) {
    const IrisCode a = make_code(4, 32, g());
    const IrisCode b = make_code(4, 32, g());
    const IrisCode c = make_code(4, 32, g());
    CHECK_EQ(iris::hamming_similarity(a, b), iris::hamming_similarity(b, a));
    const double dab = 1.0 - iris::hamming_similarity(a, b);
    const double dbc = 1.0 - iris::hamming_similarity(b, c);
    const double dac = 1.0 - iris::hamming_similarity(a, c);
    CHECK_LE(dac, dab + dbc + 1e-15);
  }
}

TEST_CASE("best-shift scoring recovers a planted column shift") {
  const IrisCode a = make_code(16, 64, 51);
  IrisCode shifted = a;
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t c = 0; c < a.cols; ++c) shifted.set_bit(r, (c + 3) % a.cols, a.bit(r, c));

  CHECK_LT(iris::hamming_similarity(a, shifted), 1.0);
  CHECK_EQ(iris::hamming_similarity_best_shift(a, shifted, 4), 1.0);
  CHECK_EQ(iris::hamming_similarity_best_shift(a, shifted, 3), 1.0);
  CHECK_LT(iris::hamming_similarity_best_shift(a, shifted, 2), 1.0);
  CHECK_EQ(iris::hamming_similarity_best_shift(a, shifted, 0),
           iris::hamming_similarity(a, shifted));
  CHECK_GE(iris::hamming_similarity_best_shift(a, shifted, 2),
           iris::hamming_similarity(a, shifted));
}

TEST_CASE("multi-enrollment score adds the spread and subtracts half the imposter std") {
  const IrisCode candidate = make_code(4, 10, 61);  // 40 bits

  SUBCASE("single template: similarity minus s/2") {
    EnrolledIdentity id{"x", {candidate}};
    CHECK_EQ(iris::mdss(candidate, id, 0.02), 1.0 - 0.01);
  }
  SUBCASE("equal similarities: zero spread") {
    EnrolledIdentity id{"x", {with_flipped(candidate, 0, 12), with_flipped(candidate, 12, 12)}};
    CHECK_EQ(iris::mdss(candidate, id, 0.02), 0.7 - 0.01);
  }
  SUBCASE("similarities 0.6 and 0.8 with s = 0.02") {
    EnrolledIdentity id{"x", {with_flipped(candidate, 0, 16), with_flipped(candidate, 16, 8)}};
    // mean 0.7 + sample std sqrt(0.02) - 0.01
    CHECK_LE(std::abs(iris::mdss(candidate, id, 0.02) - 0.8314213562373094), 1e-12);
  }
}

TEST_CASE("multi-enrollment inputs are validated") {
  const IrisCode candidate = make_code(4, 10, 71);
  CHECK_EQ(error_code_of([&] { iris::mdss(candidate, EnrolledIdentity{"x", {}}, 0.02); }),
           Errc::empty_identity);

  EnrolledIdentity too_many{"x", std::vector<IrisCode>(11, candidate)};
  CHECK_EQ(error_code_of([&] { iris::mdss(candidate, too_many, 0.02); }), Errc::bad_config);

  EnrolledIdentity ok{"x", {candidate}};
  CHECK_EQ(error_code_of([&] { iris::mdss(candidate, ok, 0.0); }), Errc::degenerate_std);
  CHECK_EQ(error_code_of([&] { iris::mdss(candidate, ok, -0.1); }), Errc::degenerate_std);

  EnrolledIdentity wrong_dims{"x", {make_code(4, 12, 71)}};
  CHECK_EQ(error_code_of([&] { iris::mdss(candidate, wrong_dims, 0.02); }),
           Errc::dimension_mismatch);
}

TEST_CASE("all-pairs scoring enumerates unordered pairs in order") {
  const std::vector<LabeledCode> codes{
      {"A", make_code(2, 8, 81)}, {"A", make_code(2, 8, 82)}, {"B", make_code(2, 8, 83)}};
  const ScoreTable table = iris::all_pairs_scores(codes);
  CHECK_EQ(table.kind, ScoreKind::hamming);
  REQUIRE_EQ(table.records.size(), 3);

  const ScoreRecord& r0 = table.records[0];
  CHECK_EQ(r0.pair_id, 0);
  CHECK_EQ(r0.label_a, "A");
  CHECK_EQ(r0.label_b, "A");
  CHECK(r0.genuine);
  CHECK_EQ(r0.score, iris::hamming_similarity(codes[0].code, codes[1].code));

  const ScoreRecord& r1 = table.records[1];
  CHECK_EQ(r1.pair_id, 1);
  CHECK_EQ(r1.label_a, "A");
  CHECK_EQ(r1.label_b, "B");
  CHECK_FALSE(r1.genuine);
  CHECK_EQ(r1.score, iris::hamming_similarity(codes[0].code, codes[2].code));

  const ScoreRecord& r2 = table.records[2];
  CHECK_EQ(r2.pair_id, 2);
  CHECK_EQ(r2.label_a, "A");
  CHECK_EQ(r2.label_b, "B");
  CHECK_FALSE(r2.genuine);
  CHECK_EQ(r2.score, iris::hamming_similarity(codes[1].code, codes[2].code));

  CHECK_EQ(table.genuine_count(), 1);
  CHECK_EQ(table.imposter_count(), 2);

  CHECK_EQ(error_code_of([] {
             iris::all_pairs_scores({{"A", make_code(2, 8, 84)}});
           }),
           Errc::too_few_templates);
}

TEST_CASE("all-pairs counts match the closed form for 50 classes of 20") {
  std::vector<LabeledCode> codes;
  codes.reserve(1000);
  std::mt19937_64 g(91);
  for (std::size_t i = 0; i < 1000; ++i) {
    char label[8];
    std::snprintf(label, sizeof label, "id%02zu", i % 50);
    codes.push_back({label, make_code(1, 8, g())});
  }
  const ScoreTable table = iris::all_pairs_scores(codes);
  REQUIRE_EQ(table.records.size(), 1000 * 999 / 2);
  CHECK_EQ(table.genuine_count(), 9500);    // 50 * C(20, 2)
  CHECK_EQ(table.imposter_count(), 490000);
  for (std::size_t p = 0; p < table.records.size(); ++p)
    if (table.records[p].pair_id != p) {
      CHECK_EQ(table.records[p].pair_id, p);
      break;
    }
}

TEST_CASE("gallery scoring is candidate-major with one genuine per candidate") {
  std::mt19937_64 g(101);
  std::vector<EnrolledIdentity> gallery;
  for (std::size_t i = 0; i < 50; ++i) {
    char label[8];
    std::snprintf(label, sizeof label, "id%02zu", i);
    EnrolledIdentity id{label, {}};
    for (std::size_t t = 0; t < 10; ++t) id.templates.push_back(make_code(2, 8, g()));
    gallery.push_back(std::move(id));
  }
  std::vector<LabeledCode> candidates;
  for (std::size_t i = 0; i < 497; ++i) {
    char label[8];
    std::snprintf(label, sizeof label, "id%02zu", i % 50);
    candidates.push_back({label, make_code(2, 8, g())});
  }

  const ScoreTable table = iris::identity_gallery_scores(candidates, gallery, 0.02);
  CHECK_EQ(table.kind, ScoreKind::mdss);
  REQUIRE_EQ(table.records.size(), 497 * 50);
  CHECK_EQ(table.genuine_count(), 497);
  CHECK_EQ(table.imposter_count(), 24353);

  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    for (std::size_t gi = 0; gi < gallery.size(); ++gi) {
      const ScoreRecord& r = table.records[ci * 50 + gi];
      if (r.pair_id != ci * 50 + gi || r.label_a != candidates[ci].label ||
          r.label_b != gallery[gi].label || r.genuine != (ci % 50 == gi)) {
        REQUIRE_EQ(r.pair_id, ci * 50 + gi);
        REQUIRE_EQ(r.label_a, candidates[ci].label);
        REQUIRE_EQ(r.label_b, gallery[gi].label);
        REQUIRE_EQ(r.genuine, ci % 50 == gi);
      }
    }
  }
  // Spot-check one score against a direct evaluation.
  CHECK_EQ(table.records[7 * 50 + 3].score,
           iris::mdss(candidates[7].code, gallery[3], 0.02));
}

TEST_CASE("score CSV bytes are exactly specified") {
  ScratchDir dir("scores_csv");
  ScoreTable table;
  table.kind = ScoreKind::hamming;
  table.records = {{0, "A", "A", true, 0.75}, {1, "A", "B", false, 0.5}};

  const auto path = dir.path() / "scores.csv";
  iris::write_scores_csv(table, path);
  CHECK_EQ(testutil::read_file_text(path),
           "pair_id,label_a,label_b,kind,genuine,score\n"
           "0,A,A,HS,1,0.75\n"
           "1,A,B,HS,0,0.5\n");

  const ScoreTable back = iris::read_scores_csv(path);
  CHECK_EQ(back.kind, ScoreKind::hamming);
  REQUIRE_EQ(back.records.size(), 2);
  CHECK_EQ(back.records[0].pair_id, 0);
  CHECK_EQ(back.records[0].label_b, "A");
  CHECK(back.records[0].genuine);
  CHECK_EQ(back.records[0].score, 0.75);
  CHECK_EQ(back.records[1].score, 0.5);

  const auto rewrite = dir.path() / "scores2.csv";
  iris::write_scores_csv(back, rewrite);
  CHECK_EQ(testutil::read_file_bytes(path), testutil::read_file_bytes(rewrite));
}

TEST_CASE("score CSV round-trips full-precision doubles") {
  ScratchDir dir("scores_prec");
  ScoreTable table;
  table.kind = ScoreKind::mdss;
  std::mt19937_64 g(111);
  for (std::size_t i = 0; i < 100; ++i)
    table.records.push_back({i, "a", "b", false, oracle::uniform(g, 0.0, 1.0)});
  const auto path = dir.path() / "scores.csv";
  iris::write_scores_csv(table, path);
  const ScoreTable back = iris::read_scores_csv(path);
  CHECK_EQ(back.kind, ScoreKind::mdss);
  REQUIRE_EQ(back.records.size(), table.records.size());
  for (std::size_t i = 0; i < table.records.size(); ++i)
    CHECK_EQ(back.records[i].score, table.records[i].score);
}

TEST_CASE("labels containing CSV delimiters are rejected on write") {
  ScratchDir dir("scores_bad_label");
  for (const std::string label : {"a,b", "a\"b", "a\nb", "a\rb"}) {
    ScoreTable table;
    table.records = {{0, label, "B", false, 0.5}};
    CHECK_EQ(error_code_of([&] {
               iris::write_scores_csv(table, dir.path() / "bad.csv");
             }),
             Errc::format_error);
  }
}

TEST_CASE("score CSV parser rejects malformed input") {
  ScratchDir dir("scores_parse");
  const auto path = dir.path() / "in.csv";
  const auto expect_error = [&](const std::string& text, Errc code) {
    testutil::write_file_text(path, text);
    CHECK_EQ(error_code_of([&] { iris::read_scores_csv(path); }), code);
  };

  expect_error("id,label_a,label_b,kind,genuine,score\n0,A,B,HS,0,0.5\n", Errc::format_error);
  expect_error("pair_id,label_a,label_b,kind,genuine,score\n0,A,B,XX,0,0.5\n",
               Errc::format_error);
  expect_error(
      "pair_id,label_a,label_b,kind,genuine,score\n0,A,B,HS,0,0.5\n1,A,B,MDSS,0,0.5\n",
      Errc::format_error);
  expect_error("pair_id,label_a,label_b,kind,genuine,score\n0,A,B,HS,0,abc\n",
               Errc::format_error);
  expect_error("pair_id,label_a,label_b,kind,genuine,score\n0,A,B,HS,2,0.5\n",
               Errc::format_error);
  expect_error("pair_id,label_a,label_b,kind,genuine,score\n0,A,B,HS,0\n", Errc::format_error);
  expect_error("pair_id,label_a,label_b,kind,genuine,score\n0,A,B,HS,0,0.5,9\n",
               Errc::format_error);
  expect_error("pair_id,label_a,label_b,kind,genuine,score\n", Errc::format_error);
  CHECK_EQ(error_code_of([&] { iris::read_scores_csv(dir.path() / "missing.csv"); }),
           Errc::io_error);
}

}  // TEST_SUITE
