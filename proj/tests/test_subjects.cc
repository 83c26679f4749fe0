#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "depositlag/errors.h"
#include "depositlag/harvest.h"
#include "depositlag/subjects.h"
#include "test_support.h"

using namespace depositlag;
using depositlag::testing::FixtureServer;
using depositlag::testing::make_publication;

namespace {

SubjectProfile profile(std::map<std::string, long long> counts) { return SubjectProfile{"10.1/x", std::move(counts)}; }

double total(const std::map<std::string, double>& counts) {
  double sum = 0;
  for (const auto& [k, v] : counts) sum += v;
  return sum;
}

}  // namespace

TEST(TagSubjects, Examples) {
  EXPECT_EQ(tag_subjects(profile({{"Medicine and Dentistry", 20}, {"Immunology", 5}})),
            (std::set<std::string>{"Medicine and Dentistry"}));
  EXPECT_EQ(tag_subjects(profile({{"A", 7}, {"B", 7}})), (std::set<std::string>{"A", "B"}));
  EXPECT_EQ(tag_subjects(profile({{"A", 1}})), (std::set<std::string>{"A"}));
  EXPECT_TRUE(tag_subjects(profile({{"A", 0}, {"B", 0}})).empty());
  EXPECT_TRUE(tag_subjects(profile({})).empty());
}

TEST(FractionalCounts, Examples) {
  const std::vector<std::set<std::string>> one = {{"A", "B"}};
  EXPECT_EQ(fractional_counts(one), (std::map<std::string, double>{{"A", 0.5}, {"B", 0.5}}));
  const std::vector<std::set<std::string>> single = {{"A"}};
  EXPECT_EQ(fractional_counts(single), (std::map<std::string, double>{{"A", 1.0}}));
  const std::vector<std::set<std::string>> mixed = {{"A"}, {"A", "B", "C"}};
  const auto counts = fractional_counts(mixed);
  EXPECT_NEAR(counts.at("A"), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(counts.at("B"), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(counts.at("C"), 1.0 / 3.0, 1e-12);
}

TEST(FractionalCounts, ConservesPublicationCount) {
  const auto& labels = PanelMapping::builtin().table();
  std::vector<std::string> names;
  for (const auto& [k, v] : labels) names.push_back(k);
  std::mt19937_64 rng(12);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::set<std::string>> tagged;
    const int n = 1 + static_cast<int>(rng() % 500);
    for (int i = 0; i < n; ++i) {
      std::set<std::string> tags;
      const int k = 1 + static_cast<int>(rng() % 5);
      while (static_cast<int>(tags.size()) < k) tags.insert(names[rng() % names.size()]);
      tagged.push_back(tags);
    }
    ASSERT_NEAR(total(fractional_counts(tagged)), static_cast<double>(n), 1e-9);
  }
}

TEST(PanelMapping, BuiltinRows) {
  const PanelMapping& m = PanelMapping::builtin();
  EXPECT_EQ(m.size(), 29u);
  EXPECT_EQ(m.map_to_panel("Computer Science"), "B");
  EXPECT_EQ(m.map_to_panel("Psychology"), "A");
  EXPECT_EQ(m.map_to_panel("Unspecified"), "n/a");
  EXPECT_EQ(m.map_to_panel("Economics, Econometrics and Finance"), "C");
  EXPECT_EQ(m.map_to_panel("Philosophy"), "D");
  try {
    m.map_to_panel("Alchemy");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("Alchemy"), std::string::npos);
  }
  EXPECT_EQ(m.panels_for({"Computer Science", "Physics and Astronomy", "Psychology"}),
            (std::set<std::string>{"A", "B"}));
}

TEST(PanelMapping, FromCsvValidates) {
  std::istringstream ok("subject,panel\nX,A\n\"Y, Z\",n/a\n");
  EXPECT_EQ(PanelMapping::from_csv(ok).map_to_panel("Y, Z"), "n/a");
  std::istringstream bad_panel("subject,panel\nX,E\n");
  EXPECT_THROW(PanelMapping::from_csv(bad_panel), DataError);
  std::istringstream duplicate("subject,panel\nX,A\nX,B\n");
  EXPECT_THROW(PanelMapping::from_csv(duplicate), DataError);
}

TEST(ReaderProfiles, ReadJsonl) {
  std::istringstream in(
      "{\"doi\":\"https://doi.org/10.1/ABC\",\"counts\":{\"Chemistry\":3,\"Physics and Astronomy\":1}}\n\n"
      "{\"doi\":\"10.1/def\",\"counts\":{}}\n");
  const auto profiles = read_reader_profiles(in);
  ASSERT_EQ(profiles.size(), 2u);
  EXPECT_EQ(profiles.at("10.1/abc").reader_counts.at("Chemistry"), 3);
  std::istringstream negative("{\"doi\":\"10.1/a\",\"counts\":{\"Chemistry\":-1}}\n");
  EXPECT_THROW(read_reader_profiles(negative), DataError);
}

TEST(ReaderCountClient, FixtureService) {
  FixtureServer server([](const httplib::Request& req, httplib::Response& res) {
    if (req.path != "/catalog" || req.get_param_value("view") != "stats") {
      res.status = 400;
      return;
    }
    if (req.get_param_value("doi") == "10.1/known") {
      res.set_content(R"([{"title":"x","reader_count_by_subject_area":{"Computer Science":12,"Mathematics":4}}])",
                      "application/json");
    } else {
      res.status = 404;
    }
  });
  auto http = make_http_client();
  ReaderCountClient client(*http, server.base_url());
  const auto known = client.fetch("10.1/known");
  ASSERT_TRUE(known);
  EXPECT_EQ(known->reader_counts.at("Computer Science"), 12);
  EXPECT_EQ(tag_subjects(*known), (std::set<std::string>{"Computer Science"}));
  EXPECT_FALSE(client.fetch("10.1/unknown"));
}

TEST(TagPublications, FillsSubjectsAndPanels) {
  std::vector<LinkedPublication> pubs = {
      make_publication("10.1/a", CalendarDate(2016, 1, 1), {}),
      make_publication("10.1/b", CalendarDate(2016, 1, 1), {}),
      make_publication("10.1/c", CalendarDate(2016, 1, 1), {}),
  };
  const std::map<std::string, SubjectProfile> profiles = {
      {"10.1/a", SubjectProfile{"10.1/a", {{"Computer Science", 5}, {"Psychology", 5}}}},
      {"10.1/b", SubjectProfile{"10.1/b", {{"Computer Science", 0}}}},
  };
  const SubjectTagSummary summary = tag_publications(pubs, profiles, PanelMapping::builtin());
  EXPECT_EQ(summary.tagged, 1u);
  EXPECT_EQ(summary.untagged, 2u);
  EXPECT_EQ(*pubs[0].panels, (std::set<std::string>{"A", "B"}));
  EXPECT_FALSE(pubs[1].subjects);
  EXPECT_FALSE(pubs[2].subjects);
}
