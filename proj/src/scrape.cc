#include "depositlag/scrape.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <string>

#include <json.hpp>

#include "depositlag/errors.h"

namespace depositlag {
namespace {

constexpr std::array<std::string_view, 12> kMonths = {"jan", "feb", "mar", "apr", "may", "jun",
                                                      "jul", "aug", "sep", "oct", "nov", "dec"};

int month_from_name(std::string_view name) {
  if (name.size() < 3) return 0;
  std::string prefix;
  for (char c : name.substr(0, 3)) prefix.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (kMonths[i] == prefix) return static_cast<int>(i) + 1;
  }
  return 0;
}

// "15 Mar 2016", "15 March 2016 10:22", "Tue, 2 Jan 2018 18:01:22 UTC"
std::optional<CalendarDate> parse_day_month_year(const std::string& text) {
  static const std::regex pattern(R"((\d{1,2})\s+([A-Za-z]{3,9})\.?\s+(\d{4}))");
  std::smatch m;
  if (!std::regex_search(text, m, pattern)) return std::nullopt;
  const int month = month_from_name(m[2].str());
  const int day = std::stoi(m[1].str());
  const int year = std::stoi(m[3].str());
  if (month == 0 || !CalendarDate::is_valid(year, month, day)) return std::nullopt;
  return CalendarDate(year, month, day);
}

std::optional<CalendarDate> parse_iso_prefix(const std::string& text) {
  try {
    return CalendarDate::parse_iso(text);
  } catch (const DataError&) {
    return std::nullopt;
  }
}

template <typename Parse>
std::vector<CalendarDate> collect(std::string_view html, const std::regex& pattern, Parse&& parse) {
  std::vector<CalendarDate> dates;
  const std::string text(html);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), pattern); it != std::sregex_iterator(); ++it) {
    if (auto d = parse((*it)[1].str())) dates.push_back(*d);
  }
  return dates;
}

std::vector<CalendarDate> eprints_dates(std::string_view html) {
  static const std::regex row(
      R"(<th[^>]*>\s*Deposited(?:\s+On)?\s*:?\s*</th>\s*<td[^>]*>\s*([^<]+?)\s*</td>)",
      std::regex::icase);
  return collect(html, row, parse_day_month_year);
}

std::vector<CalendarDate> dspace_dates(std::string_view html) {
  static const std::regex cell(
      R"(<td[^>]*>\s*dc\.date\.accessioned\s*</td>\s*<td[^>]*>\s*([^<]+?)\s*</td>)", std::regex::icase);
  return collect(html, cell, parse_iso_prefix);
}

void collect_jsonld_created(const nlohmann::json& node, std::vector<CalendarDate>& out) {
  if (node.is_array()) {
    for (const auto& item : node) collect_jsonld_created(item, out);
    return;
  }
  if (!node.is_object()) return;
  for (const char* key : {"dateCreated", "created"}) {
    auto it = node.find(key);
    if (it != node.end() && it->is_string()) {
      if (auto d = parse_iso_prefix(it->get<std::string>())) out.push_back(*d);
    }
  }
  if (auto graph = node.find("@graph"); graph != node.end()) collect_jsonld_created(*graph, out);
}

std::vector<CalendarDate> jsonld_dates(std::string_view html) {
  static const std::regex script(
      R"(<script[^>]*type\s*=\s*["']application/ld\+json["'][^>]*>([\s\S]*?)</script>)", std::regex::icase);
  std::vector<CalendarDate> dates;
  const std::string text(html);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), script); it != std::sregex_iterator(); ++it) {
    const auto doc = nlohmann::json::parse((*it)[1].str(), nullptr, false);
    if (!doc.is_discarded()) collect_jsonld_created(doc, dates);
  }
  return dates;
}

std::vector<CalendarDate> arxiv_dates(std::string_view html) {
  static const std::regex v1(R"(\[v1\]\s*(?:</[a-z]+>\s*)*([^<\n]+))", std::regex::icase);
  return collect(html, v1, parse_day_month_year);
}

}  // namespace

std::string_view scrape_marker(Platform platform) {
  switch (platform) {
    case Platform::kEprints: return "Deposited On";
    case Platform::kDspace: return "dc.date.accessioned";
    case Platform::kInvenio:
    case Platform::kZenodo: return "application/ld+json dateCreated";
    case Platform::kArxiv: return "submission history [v1]";
    case Platform::kOther: return "";
  }
  return "";
}

ScrapeResult scrape_deposit_date(std::string_view html, Platform platform) {
  std::vector<CalendarDate> dates;
  switch (platform) {
    case Platform::kEprints: dates = eprints_dates(html); break;
    case Platform::kDspace: dates = dspace_dates(html); break;
    case Platform::kInvenio:
    case Platform::kZenodo: dates = jsonld_dates(html); break;
    case Platform::kArxiv: dates = arxiv_dates(html); break;
    case Platform::kOther: throw DataError("no deposit date scraper for platform OTHER");
  }
  if (dates.empty()) throw ExtractionError(std::string(scrape_marker(platform)));
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
  return ScrapeResult{dates.front(), dates, dates.size() > 1};
}

}  // namespace depositlag
