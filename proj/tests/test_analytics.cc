#include <gtest/gtest.h>

#include <random>

#include "depositlag/analytics.h"
#include "depositlag/errors.h"
#include "depositlag/reports.h"
#include "test_support.h"

using namespace depositlag;
using depositlag::testing::make_publication;

namespace {

// Publication on 2016-01-01 whose only deposit lies `lag` days later.
LinkedPublication with_lag(const std::string& doi, int lag, bool issn = true,
                           std::set<std::string> countries = {"GB"}, const std::string& repo = "R") {
  const CalendarDate pub(2016, 1, 1);
  return make_publication(doi, pub, {Deposit{repo, pub.plus_days(lag), doi + ":" + repo}}, issn, std::move(countries));
}

}  // namespace

TEST(DepositLag, Examples) {
  const CalendarDate pub(2016, 1, 1);
  const LinkedPublication p = make_publication(
      "10.1/a", pub, {Deposit{"A", CalendarDate(2016, 4, 1), "a"}, Deposit{"B", CalendarDate(2016, 2, 1), "b"}});
  EXPECT_EQ(deposit_lag(p, LagScope::any()), 31);
  EXPECT_EQ(deposit_lag(p, LagScope::single("A")), 91);
  EXPECT_THROW(deposit_lag(p, LagScope::single("C")), DataError);
  const LinkedPublication same = make_publication("10.1/b", pub, {Deposit{"A", pub, "x"}});
  EXPECT_EQ(deposit_lag(same, LagScope::any()), 0);
}

TEST(DepositLag, SingleUsesEarliestRecordInRepository) {
  const CalendarDate pub(2016, 1, 1);
  const LinkedPublication p = make_publication(
      "10.1/a", pub, {Deposit{"A", CalendarDate(2016, 4, 1), "a1"}, Deposit{"A", CalendarDate(2016, 3, 1), "a2"}});
  EXPECT_EQ(deposit_lag(p, LagScope::single("A")), 60);
}

TEST(ClassifyCompliance, Examples) {
  EXPECT_EQ(classify_compliance(90, true), Compliance::kLikelyCompliant);
  EXPECT_EQ(classify_compliance(91, true), Compliance::kDefinitelyNonCompliant);
  EXPECT_EQ(classify_compliance(-30, false), Compliance::kNotApplicableNoIssn);
  EXPECT_EQ(classify_compliance(-3000, true), Compliance::kLikelyCompliant);
  EXPECT_EQ(classify_compliance(30, true, 29), Compliance::kDefinitelyNonCompliant);
}

TEST(AggregateLag, CapExamples) {
  const std::vector<LinkedPublication> pubs = {with_lag("a", 10), with_lag("b", 20), with_lag("c", 400)};
  AggregateOptions capped;
  capped.per_year = false;
  capped.cap_days = 365;
  auto rows = aggregate_lag(pubs, capped);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].count, 2u);
  EXPECT_DOUBLE_EQ(rows[0].mean_lag_days, 15.0);

  AggregateOptions uncapped;
  uncapped.per_year = false;
  rows = aggregate_lag(pubs, uncapped);
  EXPECT_EQ(rows[0].count, 3u);
  EXPECT_NEAR(rows[0].mean_lag_days, 143.33, 0.005);
  EXPECT_EQ(rows[0].min_days, 10);
  EXPECT_EQ(rows[0].max_days, 400);
}

TEST(AggregateLag, MultiCountryCountsFully) {
  const std::vector<LinkedPublication> pubs = {with_lag("a", 10, true, {"GB", "US"})};
  const auto rows = aggregate_lag(pubs, AggregateOptions{});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].group_key, "GB");
  EXPECT_EQ(rows[0].count, 1u);
  EXPECT_EQ(rows[1].group_key, "US");
  EXPECT_EQ(rows[1].count, 1u);
  EXPECT_EQ(rows[0].year, 2016);
}

TEST(AggregateLag, SubjectsCountFractionally) {
  LinkedPublication a = with_lag("a", 10);
  a.subjects = std::set<std::string>{"X", "Y"};
  LinkedPublication b = with_lag("b", 40);
  b.subjects = std::set<std::string>{"X"};
  LinkedPublication untagged = with_lag("c", 1000);
  const std::vector<LinkedPublication> pubs = {a, b, untagged};
  AggregateOptions options;
  options.group_by = GroupBy::kSubject;
  const auto rows = aggregate_lag(pubs, options);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].weight, 1.5);
  EXPECT_DOUBLE_EQ(rows[0].mean_lag_days, (0.5 * 10 + 40) / 1.5);
  EXPECT_DOUBLE_EQ(rows[1].weight, 0.5);
  EXPECT_DOUBLE_EQ(rows[1].mean_lag_days, 10.0);
}

TEST(AggregateLag, ExcludedYearsAndEmptyGroups) {
  const std::vector<LinkedPublication> pubs = {with_lag("a", 500)};
  AggregateOptions options;
  options.cap_days = 365;
  EXPECT_TRUE(aggregate_lag(pubs, options).empty());
  AggregateOptions excluded;
  excluded.excluded_years = {2016};
  EXPECT_TRUE(aggregate_lag(pubs, excluded).empty());
  AggregateOptions invalid;
  invalid.single_scope = true;
  EXPECT_THROW(aggregate_lag(pubs, invalid), std::invalid_argument);
}

TEST(AggregateLag, InputOrderDoesNotMatter) {
  std::mt19937_64 rng(4);
  std::vector<LinkedPublication> pubs;
  for (int i = 0; i < 200; ++i) pubs.push_back(with_lag("d" + std::to_string(i), static_cast<int>(rng() % 3000) - 500));
  const auto reference = render_lag_csv(aggregate_lag(pubs, AggregateOptions{}));
  for (int i = 0; i < 5; ++i) {
    std::shuffle(pubs.begin(), pubs.end(), rng);
    EXPECT_EQ(render_lag_csv(aggregate_lag(pubs, AggregateOptions{})), reference);
  }
}

TEST(ComplianceProportions, Examples) {
  const std::vector<LinkedPublication> pubs = {with_lag("a", 0), with_lag("b", 30), with_lag("c", 120),
                                               with_lag("d", 500), with_lag("e", 5, false)};
  const ComplianceReport report = compliance_proportions(pubs, ComplianceOptions{});
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_DOUBLE_EQ(report.rows[0].likely_fraction, 0.5);
  EXPECT_DOUBLE_EQ(report.rows[0].non_compliant_fraction, 0.5);
  EXPECT_EQ(report.rows[0].excluded_no_issn, 1u);

  const std::vector<LinkedPublication> fast = {with_lag("a", 0), with_lag("b", 90)};
  EXPECT_DOUBLE_EQ(compliance_proportions(fast, ComplianceOptions{}).rows[0].likely_fraction, 1.0);

  const std::vector<LinkedPublication> no_issn = {with_lag("a", 0, false), with_lag("b", 9, false)};
  const ComplianceReport omitted = compliance_proportions(no_issn, ComplianceOptions{});
  EXPECT_TRUE(omitted.rows.empty());
  ASSERT_EQ(omitted.omitted.size(), 1u);
  EXPECT_EQ(omitted.omitted[0].excluded_no_issn, 2u);
}

TEST(RepoProfiles, Examples) {
  const CalendarDate pub(2016, 1, 1);
  const std::vector<LinkedPublication> pubs = {make_publication(
      "a", pub, {Deposit{"R", CalendarDate(2016, 6, 1), "r"}, Deposit{"S", CalendarDate(2016, 2, 1), "s"}})};
  const auto rows = repo_profiles(pubs, 2016, 0, ProfileMetric::kLag);
  ASSERT_EQ(rows.size(), 2u);
  const RepoProfile& r = rows[0].repo_id == "R" ? rows[0] : rows[1];
  EXPECT_DOUBLE_EQ(r.single_value, 152);
  EXPECT_DOUBLE_EQ(r.any_value, 31);
  const RepoProfile& s = rows[0].repo_id == "S" ? rows[0] : rows[1];
  EXPECT_DOUBLE_EQ(s.single_value, s.any_value);
}

TEST(RepoProfiles, MinCountIsStrict) {
  std::vector<LinkedPublication> pubs;
  for (int i = 0; i < 100; ++i) pubs.push_back(with_lag("p" + std::to_string(i), i));
  EXPECT_EQ(repo_profiles(pubs, 2016, 100).size(), 0u);
  pubs.pop_back();
  EXPECT_EQ(repo_profiles(pubs, 2016, 98).size(), 1u);
  EXPECT_EQ(repo_profiles(pubs, 2016, 99).size(), 0u);
  EXPECT_EQ(repo_profiles(pubs, 2015, 0).size(), 0u);
}

TEST(RepoProfiles, Ordering) {
  std::vector<LinkedPublication> pubs;
  for (int i = 0; i < 3; ++i) pubs.push_back(with_lag("slow" + std::to_string(i), 200, true, {"GB"}, "SLOW"));
  for (int i = 0; i < 3; ++i) pubs.push_back(with_lag("fast" + std::to_string(i), 2, true, {"GB"}, "FAST"));
  auto lag = repo_profiles(pubs, 2016, 2, ProfileMetric::kLag);
  ASSERT_EQ(lag.size(), 2u);
  EXPECT_EQ(lag[0].repo_id, "FAST");
  auto comp = repo_profiles(pubs, 2016, 2, ProfileMetric::kCompliance);
  EXPECT_EQ(comp[0].repo_id, "FAST");
  EXPECT_DOUBLE_EQ(comp[0].any_value, 1.0);
  EXPECT_DOUBLE_EQ(comp[1].any_value, 0.0);
}

TEST(Dispersion, Examples) {
  const std::vector<double> flat = {10, 10, 10};
  EXPECT_DOUBLE_EQ(dispersion(flat).range_days, 0);
  EXPECT_DOUBLE_EQ(dispersion(flat).stddev_days, 0);
  const std::vector<double> two = {0, 10};
  EXPECT_DOUBLE_EQ(dispersion(two).range_days, 10);
  EXPECT_DOUBLE_EQ(dispersion(two).stddev_days, 5);
  const std::vector<double> three = {3, 7, 11};
  EXPECT_DOUBLE_EQ(dispersion(three).range_days, 8);
  EXPECT_NEAR(dispersion(three).stddev_days, 3.266, 0.001);
  EXPECT_NEAR(dispersion(three, StdDevConvention::kSample).stddev_days, 4.0, 1e-12);
  const std::vector<double> one = {1};
  EXPECT_THROW(dispersion(one), DataError);
}

TEST(Histogram, Examples) {
  const std::vector<std::int64_t> a = {0, 6, 7};
  const Histogram h = lag_histogram(a, 7);
  EXPECT_EQ(h.bins, (std::vector<HistogramBin>{{0, 7, 2}, {7, 14, 1}}));
  const std::vector<std::int64_t> b = {-1};
  EXPECT_EQ(lag_histogram(b, 7).bins, (std::vector<HistogramBin>{{-7, 0, 1}}));
  EXPECT_TRUE(lag_histogram({}, 30).bins.empty());
  EXPECT_THROW(lag_histogram(a, 0), std::invalid_argument);
}

TEST(Histogram, ContiguousAndConserving) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::int64_t> lags;
    const int n = 1 + static_cast<int>(rng() % 200);
    for (int i = 0; i < n; ++i) lags.push_back(static_cast<std::int64_t>(rng() % 4000) - 1500);
    const int width = 1 + static_cast<int>(rng() % 60);
    const Histogram h = lag_histogram(lags, width);
    std::size_t total = 0;
    for (std::size_t i = 0; i < h.bins.size(); ++i) {
      total += h.bins[i].count;
      ASSERT_EQ(h.bins[i].upper_exclusive - h.bins[i].lower_inclusive, width);
      ASSERT_EQ(h.bins[i].lower_inclusive % width, 0);
      if (i > 0) ASSERT_EQ(h.bins[i].lower_inclusive, h.bins[i - 1].upper_exclusive);
    }
    ASSERT_EQ(total, lags.size());
  }
}

TEST(AcceptanceAudit, Examples) {
  AcceptanceAudit reported{975, 684, 0, 0};
  EXPECT_NEAR(*reported.equal_share(), 0.702, 0.0005);

  RegistryRecord early;
  early.published = CalendarDate(2017, 3, 1);
  early.accepted = CalendarDate(2017, 1, 1);
  RegistryRecord none;
  none.published = CalendarDate(2017, 3, 1);
  const std::vector<RegistryRecord> records = {early, none};
  const AcceptanceAudit audit = audit_acceptance_dates(records);
  EXPECT_EQ(audit.populated, 1u);
  EXPECT_EQ(audit.earlier_than_published, 1u);

  const std::vector<RegistryRecord> empty = {none};
  const AcceptanceAudit zero = audit_acceptance_dates(empty);
  EXPECT_EQ(zero.populated, 0u);
  EXPECT_EQ(zero.equal_to_published + zero.later_than_published + zero.earlier_than_published, 0u);
  EXPECT_FALSE(zero.equal_share().has_value());
}

TEST(Reports, LagCsvFormat) {
  LagAggregate row{"GB", 2016, 3, 3.0, 143.3333, 10.5, 10, 400};
  const std::vector<LagAggregate> rows = {row};
  EXPECT_EQ(render_lag_csv(rows),
            "group_key,year,count,mean_lag_days,stddev_days,min_days,max_days,weight\n"
            "GB,2016,3,143.33,10.50,10,400,3.0000\n");
  const Histogram h{7, {{-7, 0, 1}}, 90};
  EXPECT_EQ(render_histogram_csv(h), "bin_lower,bin_upper,count\n-7,0,1\n");
}
