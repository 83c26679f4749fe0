#include "depositlag/harvest.h"

#include <atomic>
#include <cstdio>
#include <functional>
#include <thread>

#include <httplib.h>

#include "depositlag/errors.h"
#include "depositlag/log.h"
#include "depositlag/oai.h"

namespace depositlag {
namespace {

class HttplibClient final : public HttpClient {
 public:
  explicit HttplibClient(std::chrono::milliseconds timeout) : timeout_(timeout) {}

  HttpResponse get(const std::string& url) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw NetworkError("not an absolute URL: " + url);
    const auto path_start = url.find_first_of("/?#", scheme_end + 3);
    const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (path.front() != '/') path.insert(path.begin(), '/');

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);
    auto result = client.Get(path);
    if (!result) throw NetworkError("GET " + url + " failed: " + httplib::to_string(result.error()));
    return HttpResponse{result->status, result->body};
  }

 private:
  std::chrono::milliseconds timeout_;
};

// Fetch with bounded exponential backoff. Returns nullopt once attempts are exhausted.
std::optional<std::string> fetch_with_retry(HttpClient& http, const std::string& url,
                                            const HarvestOptions& options, HarvestReport& report) {
  auto backoff = options.initial_backoff;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    std::string failure;
    try {
      HttpResponse response = http.get(url);
      if (response.status >= 200 && response.status < 300) return std::move(response.body);
      failure = "HTTP " + std::to_string(response.status);
      if (response.status >= 400 && response.status < 500) {
        report.error = failure + " for " + url;
        report.network_failure = true;
        return std::nullopt;
      }
    } catch (const NetworkError& e) {
      failure = e.what();
    }
    log_event(LogLevel::kWarn, "harvest.fetch_failed",
              {{"url", url}, {"attempt", attempt}, {"error", failure}});
    report.error = failure + " for " + url;
    if (attempt < options.max_attempts) {
      ++report.retries;
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  report.network_failure = true;
  return std::nullopt;
}

template <typename Observe>
HarvestReport run_chain(HttpClient& http, const HarvestRequest& request, const HarvestOptions& options,
                        Observe&& observe) {
  HarvestReport report;
  report.base_url = request.base_url;
  std::string url = list_records_url(request);
  bool first_request = true;
  while (true) {
    if (!first_request && options.polite_delay.count() > 0) std::this_thread::sleep_for(options.polite_delay);
    first_request = false;

    auto body = fetch_with_retry(http, url, options, report);
    if (!body) {
      report.aborted = true;
      return report;
    }
    OaiPage page;
    try {
      page = parse_oai_response(*body);
    } catch (const XmlParseError& e) {
      report.aborted = true;
      report.error = e.what();
      return report;
    }
    if (page.error_code) {
      if (*page.error_code == "badResumptionToken" &&
          report.restarts < static_cast<std::size_t>(options.max_chain_restarts)) {
        ++report.restarts;
        log_event(LogLevel::kWarn, "harvest.chain_restart", {{"url", url}});
        url = list_records_url(request);
        continue;
      }
      report.aborted = true;
      report.error = "OAI-PMH error " + *page.error_code + ": " + page.error_message;
      return report;
    }
    ++report.pages;
    report.record_errors += page.record_errors.size();
    for (const OaiRecord& record : page.records) {
      observe(record.identifier, record.datestamp);
      ++report.records;
    }
    if (!page.resumption_token) break;
    url = resume_url(request.base_url, *page.resumption_token);
  }
  return report;
}

std::string join_query(const std::string& base_url) {
  return base_url + (base_url.find('?') == std::string::npos ? "?" : "&");
}

}  // namespace

std::unique_ptr<HttpClient> make_http_client(std::chrono::milliseconds timeout) {
  return std::make_unique<HttplibClient>(timeout);
}

std::string url_encode(std::string_view value) {
  std::string out;
  for (unsigned char c : value) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

std::string list_records_url(const HarvestRequest& request) {
  std::string url = join_query(request.base_url) + "verb=ListRecords&metadataPrefix=oai_dc";
  if (request.set) url += "&set=" + url_encode(*request.set);
  if (request.from) url += "&from=" + url_encode(*request.from);
  return url;
}

std::string resume_url(const std::string& base_url, const std::string& token) {
  return join_query(base_url) + "verb=ListRecords&resumptionToken=" + url_encode(token);
}

HarvestReport harvest_endpoint(HttpClient& http, const HarvestRequest& request, HarvestLedger& ledger,
                               const HarvestOptions& options) {
  return run_chain(http, request, options,
                   [&](const std::string& id, const CalendarDate& d) { ledger.observe(id, d); });
}

HarvestReport harvest_endpoint(HttpClient& http, const HarvestRequest& request, SharedLedger& ledger,
                               const HarvestOptions& options) {
  return run_chain(http, request, options,
                   [&](const std::string& id, const CalendarDate& d) { ledger.observe(id, d); });
}

std::vector<HarvestReport> harvest_endpoints(const std::vector<HarvestRequest>& requests, SharedLedger& ledger,
                                             unsigned workers, const HarvestOptions& options,
                                             const std::function<std::unique_ptr<HttpClient>()>& make_client) {
  std::vector<HarvestReport> reports(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    auto http = make_client();
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      reports[i] = harvest_endpoint(*http, requests[i], ledger, options);
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(requests.size())));
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return reports;
}

ResolveResult resolve_deposit_dates(std::span<const RepositoryRecord> records, const HarvestLedger& ledger,
                                    const std::map<std::string, CalendarDate>& scraped) {
  ResolveResult result;
  for (const RepositoryRecord& rec : records) {
    RepositoryRecord out = rec;
    if (auto s = scraped.find(rec.record_id); s != scraped.end()) {
      out.deposit_date = s->second;
      out.provenance = DateProvenance::kScraped;
    } else if (const LedgerEntry* entry = ledger.find(rec.record_id)) {
      out.deposit_date = entry->first_seen;
      out.provenance = DateProvenance::kLedger;
    } else if (rec.deposit_date) {
      out.provenance = DateProvenance::kSelf;
    } else {
      result.dropped.push_back(Rejection{rec.record_id, RejectReason::kNoDepositDate, "no candidate deposit date"});
      continue;
    }
    result.records.push_back(std::move(out));
  }
  return result;
}

}  // namespace depositlag
