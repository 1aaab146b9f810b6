#include <gtest/gtest.h>

#include <random>

#include "ddix/features.hpp"

using namespace ddix;
using namespace ddix::features;

TEST(Shape, Classes) {
  EXPECT_EQ(word_shape("KETOCONAZOLE"), ShapeClass::Upper);
  EXPECT_EQ(word_shape("86%"), ShapeClass::NumPunc);
  EXPECT_EQ(word_shape("."), ShapeClass::NumPunc);
  EXPECT_EQ(word_shape("Aspirin"), ShapeClass::UpperFirst);
  EXPECT_EQ(word_shape("plasma"), ShapeClass::Lower);
  EXPECT_EQ(word_shape("mRNA"), ShapeClass::Lower);
  EXPECT_EQ(word_shape("CYP3A4"), ShapeClass::Upper);
  EXPECT_EQ(word_shape("Co-administration"), ShapeClass::UpperFirst);
}

TEST(Shape, TotalOverRandomStrings) {
  std::mt19937_64 rng(2);
  const std::string alphabet = "aZb9%-.Qx";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    for (int k = 0, n = 1 + static_cast<int>(rng() % 6); k < n; ++k) s += alphabet[rng() % alphabet.size()];
    const int c = static_cast<int>(word_shape(s));
    EXPECT_GE(c, 0);
    EXPECT_LT(c, kShapeClassCount);
    EXPECT_EQ(word_shape(s), word_shape(s));
  }
}

TEST(Distance, Buckets) {
  const std::vector<Span> anchor{Span::contiguous(0, 0)};
  EXPECT_EQ(distance_bucket(3, {}), kAbsentAnchor);
  EXPECT_EQ(distance_bucket(0, anchor), 0);   // inside
  EXPECT_EQ(distance_bucket(1, anchor), 0);   // adjacent
  EXPECT_EQ(distance_bucket(5, anchor), 0);   // 4 between
  EXPECT_EQ(distance_bucket(6, anchor), 1);   // 5 between
  EXPECT_EQ(distance_bucket(8, anchor), 1);   // 7 between
  EXPECT_EQ(distance_bucket(11, anchor), 2);  // 10 between
}

TEST(Distance, SymmetricAndMonotone) {
  const std::vector<Span> anchor{Span::contiguous(30, 31)};
  int prev = 0;
  for (int d = 0; d < 25; ++d) {
    const int right = distance_bucket(32 + d, anchor);
    EXPECT_EQ(right, distance_bucket(29 - d, anchor));
    EXPECT_GE(right, prev);
    prev = right;
  }
  // Nearest occurrence wins.
  EXPECT_EQ(distance_bucket(20, {Span::contiguous(0, 0), Span::contiguous(19, 19)}), 0);
}

TEST(Vocab, ReservedIdsAndUnknowns) {
  Vocab v;
  EXPECT_EQ(v.word_count(), 2);
  v.fit({corpus::Sentence::from_text("Digoxin levels rise")});
  EXPECT_EQ(v.word_id("DIGOXIN"), v.word_id("digoxin"));
  EXPECT_NE(v.word_id("digoxin"), Vocab::kUnk);
  EXPECT_EQ(v.word_id("never-seen"), Vocab::kUnk);
  EXPECT_EQ(v.char_ids("abc").size(), 3u);
  EXPECT_EQ(v.char_ids("abc")[0], Vocab::kUnk);
  for (int id : v.char_ids("igo")) EXPECT_GT(id, Vocab::kUnk);
}

TEST(Vocab, SerializeRoundTrip) {
  Vocab v;
  v.fit({corpus::Sentence::from_text("Ketoconazole increases the AUC of digoxin by 86%.")});
  const auto text = v.serialize();
  const auto back = Vocab::parse(text);
  EXPECT_EQ(back, v);
  EXPECT_EQ(back.serialize(), text);
  for (int i = 0; i < v.word_count(); ++i) EXPECT_EQ(back.word_id(v.word(i)), v.word_id(v.word(i)));
  EXPECT_THROW(Vocab::parse("garbage"), Error);
}

TEST(Rows, Step1AndStep2) {
  Vocab v;
  auto s = corpus::Sentence::from_text("Digoxin with ketoconazole raises digoxin levels");
  v.fit({s});
  auto none = build_step1_features(s, {}, v);
  ASSERT_EQ(static_cast<int>(none.size()), s.size());
  for (const auto& r : none) EXPECT_EQ(r.position, kAbsentAnchor);
  auto first = build_step1_features(s, {Span::contiguous(0, 0)}, v);
  EXPECT_EQ(first[0].position, 0);
  EXPECT_EQ(first[0].shape, ShapeClass::UpperFirst);

  auto a = build_step2_features(s, Span::contiguous(2, 2), v);
  auto b = build_step2_features(s, Span::contiguous(0, 0), v);
  EXPECT_EQ(a[3].position, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].word_id, b[i].word_id);
    EXPECT_EQ(a[i].shape, b[i].shape);
    EXPECT_EQ(a[i].char_ids, b[i].char_ids);
    EXPECT_FALSE(a[i].char_ids.empty());
  }
}
