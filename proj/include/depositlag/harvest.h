#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depositlag/ledger.h"
#include "depositlag/linkage.h"
#include "depositlag/model.h"

namespace depositlag {

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Minimal GET interface so harvesting can run against fixtures.
class HttpClient {
 public:
  virtual ~HttpClient() = default;
  // Throws NetworkError when no response could be obtained at all.
  virtual HttpResponse get(const std::string& url) = 0;
};

// cpp-httplib backed client for http:// and https:// URLs.
std::unique_ptr<HttpClient> make_http_client(std::chrono::milliseconds timeout = std::chrono::seconds(30));

std::string url_encode(std::string_view value);

struct HarvestRequest {
  std::string base_url;
  std::optional<std::string> set;
  std::optional<std::string> from;  // YYYY-MM-DD
};

struct HarvestOptions {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::milliseconds polite_delay{0};
  int max_chain_restarts = 1;
};

struct HarvestReport {
  std::string base_url;
  std::size_t pages = 0;
  std::size_t records = 0;
  std::size_t record_errors = 0;
  std::size_t retries = 0;
  std::size_t restarts = 0;
  bool aborted = false;
  bool network_failure = false;  // no usable HTTP response (transport error or status >= 400)
  std::string error;
};

std::string list_records_url(const HarvestRequest& request);
std::string resume_url(const std::string& base_url, const std::string& token);

// Follows the resumption-token chain to exhaustion, feeding every record
// header through the ledger. Failures abort the chain and are reported,
// never thrown; records observed before the failure stay in the ledger.
HarvestReport harvest_endpoint(HttpClient& http, const HarvestRequest& request, HarvestLedger& ledger,
                               const HarvestOptions& options = {});
HarvestReport harvest_endpoint(HttpClient& http, const HarvestRequest& request, SharedLedger& ledger,
                               const HarvestOptions& options = {});

// Harvests several endpoints on at most `workers` threads; each worker builds
// its own client through `make_client`. Reports come back in request order.
std::vector<HarvestReport> harvest_endpoints(const std::vector<HarvestRequest>& requests, SharedLedger& ledger,
                                             unsigned workers, const HarvestOptions& options,
                                             const std::function<std::unique_ptr<HttpClient>()>& make_client);

struct ResolveResult {
  std::vector<RepositoryRecord> records;  // deposit_date set, provenance recorded
  std::vector<Rejection> dropped;
};

// Deposit date precedence: scraped page > ledger first_seen > the record's own field.
ResolveResult resolve_deposit_dates(std::span<const RepositoryRecord> records, const HarvestLedger& ledger,
                                    const std::map<std::string, CalendarDate>& scraped);

}  // namespace depositlag
