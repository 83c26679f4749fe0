#include <gtest/gtest.h>

#include <random>

#include "depositlag/errors.h"
#include "depositlag/normalize.h"
#include "test_support.h"

using namespace depositlag;
using depositlag::testing::family;
using depositlag::testing::raw_name;

TEST(NormalizeText, Examples) {
  EXPECT_EQ(normalize_text("François"), "francois");
  EXPECT_EQ(normalize_text(""), "");
  EXPECT_EQ(normalize_text("Deep-Learning: A Survey!"), "deeplearningasurvey");
}

TEST(NormalizeText, TransliterationTable) {
  EXPECT_EQ(normalize_text("Straße"), "strasse");
  EXPECT_EQ(normalize_text("Søren Kierkegaard"), "sorenkierkegaard");
  EXPECT_EQ(normalize_text("Æsop"), "aesop");
  EXPECT_EQ(normalize_text("Façade"), "facade");
  EXPECT_EQ(normalize_text("Dvořák Łódź"), "dvoraklodz");
  EXPECT_EQ(normalize_text("naïve café"), "naivecafe");
  EXPECT_EQ(normalize_text("snake_case 42"), "snake_case42");
}

TEST(NormalizeText, DropsUnmappedScripts) {
  EXPECT_EQ(normalize_text("量子 computing"), "computing");
  EXPECT_EQ(normalize_text("\xff\xfe abc"), "abc");
}

TEST(NormalizeText, DecomposedAndComposedAgree) {
  EXPECT_EQ(normalize_text("Franc\xcc\xa7ois"), normalize_text("François"));
}

TEST(NormalizeText, OutputAlphabetAndIdempotence) {
  const std::vector<std::string> pieces = {"A", "z", "É", "ß", "ø", "-", " ", "!", "9", "_", "量", "ı", "Œ", "\t", "ü"};
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int len = static_cast<int>(rng() % 12);
    for (int k = 0; k < len; ++k) s += pieces[rng() % pieces.size()];
    const std::string n = normalize_text(s);
    for (char c : n) {
      ASSERT_TRUE((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') << s;
    }
    ASSERT_EQ(normalize_text(n), n);
  }
}

TEST(NormalizeDoi, Examples) {
  EXPECT_EQ(normalize_doi("https://doi.org/10.1002/2016JD026252"), "10.1002/2016jd026252");
  EXPECT_EQ(normalize_doi("10.1002/2016jd026252/abstract"), "10.1002/2016jd026252/abstract");
  EXPECT_EQ(normalize_doi("   doi:10.1088/0031-8949 "), "10.1088/0031-8949");
  EXPECT_EQ(normalize_doi("HTTP://DX.DOI.ORG/10.1/X"), "10.1/x");
}

TEST(NormalizeDoi, EmptyIsRejected) {
  for (const char* raw : {"", "   ", "doi:", "https://doi.org/"}) {
    try {
      normalize_doi(raw);
      ADD_FAILURE() << "accepted '" << raw << "'";
    } catch (const RecordRejected& e) {
      EXPECT_EQ(e.reason(), RejectReason::kInvalidDoi);
    }
    EXPECT_FALSE(try_normalize_doi(raw).has_value());
  }
}

TEST(NormalizeDoi, Idempotent) {
  for (const char* raw : {"https://doi.org/10.1002/ABC", " doi:10.5/x ", "10.1/y"}) {
    const std::string once = normalize_doi(raw);
    EXPECT_EQ(normalize_doi(once), once);
  }
}

TEST(ImputePublicationDate, Examples) {
  EXPECT_EQ(impute_publication_date(2017, 9, std::nullopt), CalendarDate(2017, 9, 1));
  EXPECT_EQ(impute_publication_date(2017, 9, 14), CalendarDate(2017, 9, 14));
  try {
    impute_publication_date(2017, std::nullopt, std::nullopt);
    ADD_FAILURE();
  } catch (const RecordRejected& e) {
    EXPECT_EQ(e.reason(), RejectReason::kMissingMonth);
  }
  try {
    impute_publication_date(std::nullopt, 3, 1);
    ADD_FAILURE();
  } catch (const RecordRejected& e) {
    EXPECT_EQ(e.reason(), RejectReason::kMissingYear);
  }
  try {
    impute_publication_date(2017, 2, 30);
    ADD_FAILURE();
  } catch (const RecordRejected& e) {
    EXPECT_EQ(e.reason(), RejectReason::kInvalidDate);
  }
}

TEST(FirstAuthorFamily, Examples) {
  const std::vector<AuthorName> a = {AuthorName{"Petr", "Knoth", std::nullopt}};
  EXPECT_EQ(first_author_family(a), "Knoth");
  const std::vector<AuthorName> b = {raw_name("Drahomira Herrmannova")};
  EXPECT_EQ(first_author_family(b), "Herrmannova");
  const std::vector<AuthorName> c = {raw_name("  Ada   Lovelace  ")};
  EXPECT_EQ(first_author_family(c), "Lovelace");
  const std::vector<AuthorName> d = {AuthorName{"X", "  ", "Grace Hopper"}};
  EXPECT_EQ(first_author_family(d), "Hopper");
}

TEST(FirstAuthorFamily, Rejections) {
  try {
    first_author_family({});
    ADD_FAILURE();
  } catch (const RecordRejected& e) {
    EXPECT_EQ(e.reason(), RejectReason::kMissingAuthors);
  }
  const std::vector<AuthorName> nameless = {AuthorName{"Only", std::nullopt, std::nullopt}};
  try {
    first_author_family(nameless);
    ADD_FAILURE();
  } catch (const RecordRejected& e) {
    EXPECT_EQ(e.reason(), RejectReason::kMissingFamily);
  }
}

TEST(BuildMatchKey, Examples) {
  const std::vector<AuthorName> muller = {family("Müller")};
  EXPECT_EQ(build_match_key("François & Co.", 2017, muller), (MatchKey{"francoisco", 2017, "muller"}));
  const std::vector<AuthorName> b = {family("B")};
  EXPECT_EQ(build_match_key("A", 2013, b), (MatchKey{"a", 2013, "b"}));
  const std::vector<AuthorName> ng = {family("Ng")};
  try {
    build_match_key("!!!", 2015, ng);
    ADD_FAILURE();
  } catch (const RecordRejected& e) {
    EXPECT_EQ(e.reason(), RejectReason::kEmptyTitleKey);
  }
  const std::vector<AuthorName> cjk = {family("王")};
  try {
    build_match_key("Title", 2015, cjk);
    ADD_FAILURE();
  } catch (const RecordRejected& e) {
    EXPECT_EQ(e.reason(), RejectReason::kEmptyFamilyKey);
  }
}

TEST(BuildMatchKey, NoiseInvariant) {
  const std::vector<AuthorName> a = {family("García")};
  const std::vector<AuthorName> b = {raw_name("Tomás GARCIA")};
  EXPECT_EQ(build_match_key("Résumé: graph-based methods.", 2016, a),
            build_match_key("RESUME GRAPH BASED METHODS", 2016, b));
}
