#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "depositlag/date.h"

namespace depositlag {

inline constexpr std::string_view kNoCountry = "n/a";

struct AuthorName {
  std::optional<std::string> given;
  std::optional<std::string> family;
  std::optional<std::string> raw;

  friend bool operator==(const AuthorName&, const AuthorName&) = default;
};

// Date as it arrives from the registry: any component may be missing.
struct PartialDate {
  std::optional<int> year;
  std::optional<int> month;
  std::optional<int> day;

  friend bool operator==(const PartialDate&, const PartialDate&) = default;
};

// Registry record before filtering.
struct RawRegistryRecord {
  std::string doi;
  std::string title;
  std::vector<AuthorName> authors;
  PartialDate published;
  std::vector<std::string> issn;
  std::optional<PartialDate> accepted;
  std::vector<std::string> affiliation_countries;
};

// Publisher-side metadata after filtering; doi is normalized.
struct RegistryRecord {
  std::string doi;
  std::string title;
  std::vector<AuthorName> authors;
  CalendarDate published;
  std::vector<std::string> issn;
  std::optional<CalendarDate> accepted;
  std::vector<std::string> affiliation_countries;

  bool has_issn() const noexcept { return !issn.empty(); }
};

enum class Platform { kDspace, kEprints, kInvenio, kArxiv, kZenodo, kOther };

std::string_view to_string(Platform platform);
// Case-insensitive; unknown names map to kOther.
Platform platform_from_string(std::string_view name);

struct RepositoryInfo {
  std::string repo_id;
  std::string name;
  std::optional<std::string> country;
  Platform platform = Platform::kOther;
};

// Which source supplied a repository record's deposit date.
enum class DateProvenance { kUnresolved, kSelf, kLedger, kScraped };

std::string_view to_string(DateProvenance provenance);

struct RepositoryRecord {
  std::string record_id;
  std::string repo_id;
  std::string title;
  std::vector<AuthorName> authors;
  std::optional<int> year;
  std::optional<std::string> doi;
  std::optional<CalendarDate> deposit_date;
  DateProvenance provenance = DateProvenance::kUnresolved;
};

struct Deposit {
  std::string repo_id;
  CalendarDate deposit_date;
  std::string record_id;
};

struct LinkedPublication {
  std::string doi;
  RegistryRecord registry;
  std::vector<Deposit> deposits;
  std::set<std::string> countries;
  std::optional<std::set<std::string>> subjects;
  std::optional<std::set<std::string>> panels;

  CalendarDate earliest_deposit() const;
};

}  // namespace depositlag
