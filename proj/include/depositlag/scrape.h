#pragma once

#include <string_view>
#include <vector>

#include "depositlag/date.h"
#include "depositlag/model.h"

namespace depositlag {

struct ScrapeResult {
  CalendarDate deposit_date;          // earliest candidate
  std::vector<CalendarDate> candidates;
  bool ambiguous = false;             // more than one distinct candidate date
};

// Marker each platform scraper looks for; reported in ExtractionError.
std::string_view scrape_marker(Platform platform);

// Extracts the deposit (accession) date from a repository record page.
// Throws ExtractionError naming the missing marker, or DataError for
// platforms without a scraper.
ScrapeResult scrape_deposit_date(std::string_view html, Platform platform);

}  // namespace depositlag
