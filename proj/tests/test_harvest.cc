#include <gtest/gtest.h>

#include <atomic>
#include <sstream>

#include "depositlag/errors.h"
#include "depositlag/harvest.h"
#include "depositlag/ledger.h"
#include "test_support.h"

using namespace depositlag;
using namespace std::chrono_literals;
using depositlag::testing::FixtureServer;
using depositlag::testing::fixture_path;
using depositlag::testing::read_file;

namespace {

// Three-page OAI-PMH endpoint with optional fault injection.
struct OaiEndpoint {
  std::atomic<int> page2_failures{0};
  std::atomic<int> bad_tokens{0};
  std::atomic<int> requests{0};
  int status_for_page2 = 500;

  void handle(const httplib::Request& req, httplib::Response& res) {
    ++requests;
    const std::string token = req.has_param("resumptionToken") ? req.get_param_value("resumptionToken") : "";
    std::string file = "oai/page1.xml";
    if (token == "t1") {
      if (page2_failures > 0) {
        --page2_failures;
        res.status = status_for_page2;
        res.set_content("unavailable", "text/plain");
        return;
      }
      file = "oai/page2.xml";
    } else if (token == "t2") {
      if (bad_tokens > 0) {
        --bad_tokens;
        file = "oai/bad_resumption_token.xml";
      } else {
        file = "oai/page3.xml";
      }
    } else if (!token.empty()) {
      file = "oai/bad_resumption_token.xml";
    }
    res.set_content(read_file(fixture_path(file)), "text/xml");
  }
};

HarvestOptions fast_options() {
  HarvestOptions o;
  o.initial_backoff = 1ms;
  return o;
}

}  // namespace

TEST(Harvest, UrlBuilders) {
  HarvestRequest r{"http://x.org/oai", std::string("a b"), std::string("2016-01-01")};
  EXPECT_EQ(list_records_url(r), "http://x.org/oai?verb=ListRecords&metadataPrefix=oai_dc&set=a%20b&from=2016-01-01");
  EXPECT_EQ(resume_url("http://x.org/oai", "t/1"), "http://x.org/oai?verb=ListRecords&resumptionToken=t%2F1");
  EXPECT_EQ(url_encode("a-Z_0.~"), "a-Z_0.~");
}

TEST(Harvest, ThreePagesFillLedger) {
  OaiEndpoint endpoint;
  FixtureServer server([&](const auto& req, auto& res) { endpoint.handle(req, res); });
  auto http = make_http_client();
  HarvestLedger ledger;
  const HarvestReport report = harvest_endpoint(*http, {server.base_url() + "/oai"}, ledger, fast_options());
  EXPECT_FALSE(report.aborted) << report.error;
  EXPECT_EQ(report.pages, 3u);
  EXPECT_EQ(report.records, 15u);
  EXPECT_EQ(ledger.size(), 15u);
  EXPECT_EQ(ledger.find("oai:repo.example.org:7")->first_seen, CalendarDate(2017, 1, 5));
}

TEST(Harvest, ReharvestIsIdempotent) {
  OaiEndpoint endpoint;
  FixtureServer server([&](const auto& req, auto& res) { endpoint.handle(req, res); });
  auto http = make_http_client();
  HarvestLedger ledger;
  harvest_endpoint(*http, {server.base_url() + "/oai"}, ledger, fast_options());
  std::ostringstream first;
  ledger.write_jsonl(first);
  harvest_endpoint(*http, {server.base_url() + "/oai"}, ledger, fast_options());
  std::ostringstream second;
  ledger.write_jsonl(second);
  EXPECT_EQ(first.str(), second.str());
}

TEST(Harvest, RetriesTransientServerErrors) {
  OaiEndpoint endpoint;
  endpoint.page2_failures = 2;
  FixtureServer server([&](const auto& req, auto& res) { endpoint.handle(req, res); });
  auto http = make_http_client();
  HarvestLedger ledger;
  const HarvestReport report = harvest_endpoint(*http, {server.base_url() + "/oai"}, ledger, fast_options());
  EXPECT_FALSE(report.aborted);
  EXPECT_EQ(report.retries, 2u);
  EXPECT_EQ(ledger.size(), 15u);
}

TEST(Harvest, GivesUpAfterThreeAttempts) {
  OaiEndpoint endpoint;
  endpoint.page2_failures = 10;
  FixtureServer server([&](const auto& req, auto& res) { endpoint.handle(req, res); });
  auto http = make_http_client();
  HarvestLedger ledger;
  const HarvestReport report = harvest_endpoint(*http, {server.base_url() + "/oai"}, ledger, fast_options());
  EXPECT_TRUE(report.aborted);
  EXPECT_TRUE(report.network_failure);
  EXPECT_EQ(report.retries, 2u);
  EXPECT_EQ(report.pages, 1u);
  EXPECT_EQ(ledger.size(), 5u);
  EXPECT_EQ(endpoint.requests, 4);
}

TEST(Harvest, ClientErrorIsNotRetried) {
  OaiEndpoint endpoint;
  endpoint.page2_failures = 1;
  endpoint.status_for_page2 = 404;
  FixtureServer server([&](const auto& req, auto& res) { endpoint.handle(req, res); });
  auto http = make_http_client();
  HarvestLedger ledger;
  const HarvestReport report = harvest_endpoint(*http, {server.base_url() + "/oai"}, ledger, fast_options());
  EXPECT_TRUE(report.aborted);
  EXPECT_EQ(report.retries, 0u);
  EXPECT_EQ(endpoint.requests, 2);
}

TEST(Harvest, BadResumptionTokenRestartsOnce) {
  OaiEndpoint endpoint;
  endpoint.bad_tokens = 1;
  FixtureServer server([&](const auto& req, auto& res) { endpoint.handle(req, res); });
  auto http = make_http_client();
  HarvestLedger ledger;
  const HarvestReport report = harvest_endpoint(*http, {server.base_url() + "/oai"}, ledger, fast_options());
  EXPECT_FALSE(report.aborted);
  EXPECT_EQ(report.restarts, 1u);
  EXPECT_EQ(ledger.size(), 15u);

  OaiEndpoint stubborn;
  stubborn.bad_tokens = 5;
  FixtureServer server2([&](const auto& req, auto& res) { stubborn.handle(req, res); });
  HarvestLedger ledger2;
  const HarvestReport report2 = harvest_endpoint(*http, {server2.base_url() + "/oai"}, ledger2, fast_options());
  EXPECT_TRUE(report2.aborted);
  EXPECT_FALSE(report2.network_failure);
  EXPECT_EQ(report2.restarts, 1u);
}

TEST(Harvest, MalformedPageAborts) {
  FixtureServer server([](const auto&, auto& res) {
    res.set_content(read_file(fixture_path("oai/malformed.xml")), "text/xml");
  });
  auto http = make_http_client();
  HarvestLedger ledger;
  const HarvestReport report = harvest_endpoint(*http, {server.base_url()}, ledger, fast_options());
  EXPECT_TRUE(report.aborted);
  EXPECT_FALSE(report.network_failure);
}

TEST(Harvest, UnreachableHostIsNetworkFailure) {
  auto http = make_http_client(200ms);
  HarvestLedger ledger;
  const HarvestReport report = harvest_endpoint(*http, {"http://127.0.0.1:1/oai"}, ledger, fast_options());
  EXPECT_TRUE(report.aborted);
  EXPECT_TRUE(report.network_failure);
}

TEST(Harvest, ParallelEndpointsShareLedger) {
  OaiEndpoint a, b;
  FixtureServer sa([&](const auto& req, auto& res) { a.handle(req, res); });
  FixtureServer sb([&](const auto& req, auto& res) { b.handle(req, res); });
  SharedLedger ledger;
  const std::vector<HarvestRequest> requests = {{sa.base_url()}, {sb.base_url()}};
  const auto reports = harvest_endpoints(requests, ledger, 2, fast_options(), [] { return make_http_client(); });
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].base_url, sa.base_url());
  EXPECT_EQ(reports[1].records, 15u);
  EXPECT_EQ(ledger.snapshot().size(), 15u);
}

TEST(ResolveDepositDates, Precedence) {
  RepositoryRecord both;
  both.record_id = "both";
  both.deposit_date = CalendarDate(2016, 6, 1);
  RepositoryRecord self = both;
  self.record_id = "self";
  self.deposit_date = CalendarDate(2017, 1, 1);
  RepositoryRecord ledger_only = both;
  ledger_only.record_id = "ledger";
  ledger_only.deposit_date.reset();
  RepositoryRecord none = ledger_only;
  none.record_id = "none";

  HarvestLedger ledger;
  ledger.observe("both", CalendarDate(2016, 5, 1));
  ledger.observe("ledger", CalendarDate(2015, 2, 3));
  const std::map<std::string, CalendarDate> scraped = {{"both", CalendarDate(2016, 4, 20)}};
  const std::vector<RepositoryRecord> in = {both, self, ledger_only, none};
  const ResolveResult out = resolve_deposit_dates(in, ledger, scraped);
  ASSERT_EQ(out.records.size(), 3u);
  EXPECT_EQ(out.records[0].deposit_date, CalendarDate(2016, 4, 20));
  EXPECT_EQ(out.records[0].provenance, DateProvenance::kScraped);
  EXPECT_EQ(out.records[1].deposit_date, CalendarDate(2017, 1, 1));
  EXPECT_EQ(out.records[1].provenance, DateProvenance::kSelf);
  EXPECT_EQ(out.records[2].deposit_date, CalendarDate(2015, 2, 3));
  EXPECT_EQ(out.records[2].provenance, DateProvenance::kLedger);
  ASSERT_EQ(out.dropped.size(), 1u);
  EXPECT_EQ(out.dropped[0].reason, RejectReason::kNoDepositDate);
}
