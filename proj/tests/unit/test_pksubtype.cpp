#include <gtest/gtest.h>

#include <set>

#include "ddix/pksubtype.hpp"

using namespace ddix;
using namespace ddix::pksubtype;

namespace {

std::vector<std::string> words(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& t : corpus::tokenize(text)) out.push_back(t.text);
  return out;
}

struct Row {
  const char* phrase;
  Trend trend;
  PkParameter param;
};

const Row kKeywordRows[] = {
    {"increases exposure", Trend::Increased, PkParameter::Level},
    {"elevated plasma concentrations", Trend::Increased, PkParameter::Level},
    {"decreases exposure", Trend::Decreased, PkParameter::Level},
    {"lower serum levels", Trend::Decreased, PkParameter::Level},
    {"increased Cmax", Trend::Increased, PkParameter::Cmax},
};

}  // namespace

TEST(Dictionaries, KeywordRowsMatchExactly) {
  const auto d = Dictionaries::seed();
  for (const auto& row : kKeywordRows) {
    EXPECT_EQ(match_trend(words(row.phrase), d), row.trend) << row.phrase;
    EXPECT_EQ(match_param(words(row.phrase), d), row.param) << row.phrase;
  }
}

TEST(Dictionaries, MissesThrow) {
  const auto d = Dictionaries::seed();
  EXPECT_THROW(match_trend(words("serum levels"), d), NoTrendMatch);
  EXPECT_THROW(match_param(words("increases"), d), NoParamMatch);
}

TEST(Dictionaries, FirstTokenWinsAndCaseIsIgnored) {
  const auto d = Dictionaries::seed();
  EXPECT_EQ(match_trend(words("DECREASED then increased"), d), Trend::Decreased);
  EXPECT_EQ(match_param(words("AUC and Cmax"), d), PkParameter::Auc);
  EXPECT_EQ(match_param(words("prolonged half-life"), d), PkParameter::HalfLife);
  EXPECT_EQ(match_param(words("shorter Tmax"), d), PkParameter::Tmax);
}

TEST(Dictionaries, AreData) {
  auto d = Dictionaries::from_text("boosts\tINCREASED\n# comment\n", "Exposure\tAUC\n");
  EXPECT_EQ(match_trend(words("boosts exposure"), d), Trend::Increased);
  EXPECT_EQ(match_param(words("boosts exposure"), d), PkParameter::Auc);
  EXPECT_THROW(match_trend(words("increases"), d), NoTrendMatch);
  EXPECT_THROW(Dictionaries::from_text("x\tSIDEWAYS\n", ""), ParseError);
  EXPECT_THROW(Dictionaries::from_text("x\tINCREASED\nx\tDECREASED\n", ""), ParseError);
  EXPECT_THROW(Dictionaries::load("/nonexistent/t.tsv", "/nonexistent/p.tsv"), Error);
}

TEST(Object, DistanceRule) {
  // 0 digoxin 1 levels 2 rise 3 a 4 b 5 c 6 d 7 e 8 f 9 with 10 ketoconazole
  auto s = corpus::Sentence::from_text("digoxin levels rise a b c d e f with ketoconazole");
  const auto trigger = Span::contiguous(1, 2);
  const auto precipitant = Span::contiguous(10, 10);
  EXPECT_EQ(resolve_object(s, trigger, precipitant, {}), PkObject::ConcomitantDrug);
  EXPECT_EQ(resolve_object(s, trigger, precipitant, {Span::contiguous(0, 0)}), PkObject::Drug);
  // Precipitant closer than the label drug.
  EXPECT_EQ(resolve_object(s, Span::contiguous(8, 9), precipitant, {Span::contiguous(0, 0)}),
            PkObject::ConcomitantDrug);
  // Equal gaps go to the label drug.
  EXPECT_EQ(resolve_object(s, Span::contiguous(5, 5), Span::contiguous(8, 8),
                           {Span::contiguous(2, 2)}),
            PkObject::Drug);
}

TEST(Object, OnlyDistancesMatter) {
  auto a = corpus::Sentence::from_text("digoxin levels rise a b c with ketoconazole");
  auto b = corpus::Sentence::from_text("zzz yyy xxx q r s t uuu");
  for (int p = 3; p < 8; ++p) {
    EXPECT_EQ(resolve_object(a, Span::contiguous(1, 2), Span::contiguous(p, p),
                             {Span::contiguous(0, 0)}),
              resolve_object(b, Span::contiguous(1, 2), Span::contiguous(p, p),
                             {Span::contiguous(0, 0)}));
  }
}

TEST(Classify, ComposesAndDefaults) {
  const auto d = Dictionaries::seed();
  auto s = corpus::Sentence::from_text("Ketoconazole decreases exposure .");
  auto c = classify(s, Span::contiguous(1, 2), Span::contiguous(0, 0), {}, d);
  EXPECT_EQ(c.subtype.code(), "DECREASED LEVEL OF CONCOMITANT_DRUG");
  EXPECT_FALSE(c.low_confidence());

  auto s2 = corpus::Sentence::from_text("Digoxin increased Cmax with a b c ketoconazole");
  c = classify(s2, Span::contiguous(1, 2), Span::contiguous(7, 7), {Span::contiguous(0, 0)}, d);
  EXPECT_EQ(c.subtype.code(), "INCREASED CMAX OF DRUG");

  auto s3 = corpus::Sentence::from_text("Ketoconazole alters digoxin pharmacokinetics");
  c = classify(s3, Span::contiguous(1, 1), Span::contiguous(0, 0), {Span::contiguous(2, 2)}, d);
  EXPECT_EQ(c.subtype.parameter, PkParameter::Level);
  EXPECT_EQ(c.subtype.trend, Trend::Increased);
  EXPECT_TRUE(c.trend_defaulted);
  EXPECT_TRUE(c.param_defaulted);
  EXPECT_TRUE(c.low_confidence());
}

TEST(Classify, AllTwentyCodesReachable) {
  const auto d = Dictionaries::seed();
  const char* trend_words[] = {"increases", "decreases"};
  const char* param_words[] = {"AUC", "Cmax", "half-life", "levels", "Tmax"};
  std::set<std::string> codes;
  for (const char* t : trend_words) {
    for (const char* p : param_words) {
      auto s = corpus::Sentence::from_text(std::string("digoxin ") + t + " " + p +
                                           " when given with ketoconazole");
      const Span trigger = Span::contiguous(1, 2), precipitant = Span::contiguous(6, 6);
      codes.insert(classify(s, trigger, precipitant, {Span::contiguous(0, 0)}, d).subtype.code());
      codes.insert(classify(s, trigger, precipitant, {}, d).subtype.code());
    }
  }
  EXPECT_EQ(codes.size(), 20u);
  std::set<std::string> grid;
  for (const auto& st : all_subtypes()) grid.insert(st.code());
  EXPECT_EQ(codes, grid);
}

TEST(Subtype, CodesParseBack) {
  for (const auto& st : all_subtypes()) EXPECT_EQ(PkSubtype::parse(st.code()), st);
  EXPECT_EQ(PkSubtype::parse("INCREASED SPEED OF DRUG"), std::nullopt);
}

TEST(CodeTable, RendersMappedCodes) {
  auto t = CodeTable::parse("# external ids\nINCREASED AUC OF DRUG\tC54355\n");
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.render({Trend::Increased, PkParameter::Auc, PkObject::Drug}), "C54355");
  EXPECT_EQ(t.render({Trend::Decreased, PkParameter::Auc, PkObject::Drug}),
            "DECREASED AUC OF DRUG");
  EXPECT_THROW(CodeTable::parse("NOT A CODE\tX\n"), ParseError);
}
