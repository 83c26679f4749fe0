#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "depositlag/errors.h"
#include "depositlag/ledger.h"
#include "depositlag/oai.h"
#include "test_support.h"

using namespace depositlag;
using depositlag::testing::fixture_path;
using depositlag::testing::read_file;

TEST(ParseOai, PageWithToken) {
  const OaiPage page = parse_oai_response(read_file(fixture_path("oai/page1.xml")));
  ASSERT_EQ(page.records.size(), 5u);
  EXPECT_EQ(page.resumption_token, "t1");
  EXPECT_EQ(page.records[0].identifier, "oai:repo.example.org:1");
  EXPECT_EQ(page.records[0].datestamp, CalendarDate(2016, 3, 1));
  EXPECT_EQ(page.records[0].metadata.at("title"), (std::vector<std::string>{"Record number 1"}));
  EXPECT_EQ(page.records[0].metadata.at("identifier").at(0), "https://doi.org/10.1000/example.1");
  EXPECT_TRUE(page.record_errors.empty());
  EXPECT_FALSE(page.error_code);
}

TEST(ParseOai, FinalPageHasNoToken) {
  const OaiPage page = parse_oai_response(read_file(fixture_path("oai/page3.xml")));
  EXPECT_EQ(page.records.size(), 5u);
  EXPECT_FALSE(page.resumption_token.has_value());
}

TEST(ParseOai, DatestampWithTime) {
  const OaiPage page = parse_oai_response(read_file(fixture_path("oai/page2.xml")));
  EXPECT_EQ(page.records[1].datestamp, CalendarDate(2017, 1, 5));
}

TEST(ParseOai, NoRecordsMatch) {
  const OaiPage page = parse_oai_response(read_file(fixture_path("oai/no_records_match.xml")));
  EXPECT_TRUE(page.records.empty());
  EXPECT_FALSE(page.resumption_token);
  EXPECT_FALSE(page.error_code);
}

TEST(ParseOai, ProtocolError) {
  const OaiPage page = parse_oai_response(read_file(fixture_path("oai/bad_resumption_token.xml")));
  EXPECT_EQ(page.error_code, "badResumptionToken");
}

TEST(ParseOai, MissingDatestampIsRecordLevel) {
  const OaiPage page = parse_oai_response(read_file(fixture_path("oai/missing_datestamp.xml")));
  EXPECT_EQ(page.records.size(), 2u);
  ASSERT_EQ(page.record_errors.size(), 1u);
  EXPECT_EQ(page.record_errors[0].identifier, "oai:repo.example.org:2");
}

TEST(ParseOai, MalformedXmlReportsOffset) {
  const std::string xml = read_file(fixture_path("oai/malformed.xml"));
  try {
    parse_oai_response(xml);
    FAIL();
  } catch (const XmlParseError& e) {
    EXPECT_GT(e.byte_offset(), 0u);
    EXPECT_LE(e.byte_offset(), xml.size());
  }
}

TEST(Ledger, ObserveExamples) {
  HarvestLedger ledger;
  ledger = ledger_observe(ledger, "r", CalendarDate(2018, 3, 1));
  EXPECT_EQ(ledger.find("r")->first_seen, CalendarDate(2018, 3, 1));
  ledger = ledger_observe(ledger, "r", CalendarDate(2018, 6, 1));
  EXPECT_EQ(ledger.find("r")->first_seen, CalendarDate(2018, 3, 1));
  EXPECT_EQ(ledger.find("r")->updates, (std::vector<CalendarDate>{CalendarDate(2018, 6, 1)}));
  ledger = ledger_observe(ledger, "r", CalendarDate(2017, 12, 1));
  EXPECT_EQ(ledger.find("r")->first_seen, CalendarDate(2017, 12, 1));
  EXPECT_EQ(ledger.find("r")->updates,
            (std::vector<CalendarDate>{CalendarDate(2018, 3, 1), CalendarDate(2018, 6, 1)}));
  EXPECT_EQ(ledger.find("missing"), nullptr);
}

TEST(Ledger, RepeatedObservationIsNoOp) {
  HarvestLedger a;
  a.observe("r", CalendarDate(2018, 3, 1));
  a.observe("r", CalendarDate(2018, 6, 1));
  HarvestLedger b = a;
  b.observe("r", CalendarDate(2018, 3, 1));
  b.observe("r", CalendarDate(2018, 6, 1));
  EXPECT_EQ(a, b);
}

TEST(Ledger, FirstSeenIsMinimumUnderPermutation) {
  std::mt19937_64 rng(21);
  std::vector<CalendarDate> dates;
  for (int i = 0; i < 12; ++i) dates.push_back(CalendarDate(2015, 1, 1).plus_days(static_cast<int>(rng() % 900)));
  const CalendarDate minimum = *std::min_element(dates.begin(), dates.end());
  std::optional<HarvestLedger> reference;
  for (int perm = 0; perm < 50; ++perm) {
    std::shuffle(dates.begin(), dates.end(), rng);
    HarvestLedger ledger;
    for (const CalendarDate& d : dates) ledger.observe("r", d);
    ASSERT_EQ(ledger.find("r")->first_seen, minimum);
    if (!reference) reference = ledger;
    ASSERT_EQ(ledger, *reference);
  }
}

TEST(Ledger, JsonlRoundTrip) {
  HarvestLedger ledger;
  ledger.observe("b", CalendarDate(2016, 1, 2));
  ledger.observe("a", CalendarDate(2017, 5, 1));
  ledger.observe("a", CalendarDate(2017, 8, 1));
  std::ostringstream out;
  ledger.write_jsonl(out);
  EXPECT_EQ(out.str(),
            "{\"record_id\":\"a\",\"first_seen\":\"2017-05-01\",\"updates\":[\"2017-08-01\"]}\n"
            "{\"record_id\":\"b\",\"first_seen\":\"2016-01-02\",\"updates\":[]}\n");
  std::istringstream in(out.str());
  EXPECT_EQ(HarvestLedger::read_jsonl(in), ledger);
}

TEST(Ledger, RejectsMalformedLine) {
  std::istringstream in("{\"record_id\":\"a\"}\n");
  EXPECT_THROW(HarvestLedger::read_jsonl(in), DataError);
}
