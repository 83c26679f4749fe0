#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depositlag/harvest.h"
#include "depositlag/model.h"

namespace depositlag {

struct SubjectProfile {
  std::string doi;
  std::map<std::string, long long> reader_counts;
};

// Subjects with the most readers; ties keep every tied subject. Empty when
// the profile has no positive count.
std::set<std::string> tag_subjects(const SubjectProfile& profile);

// Each publication contributes 1/|tags| to each of its tags. Empty tag sets are skipped.
std::map<std::string, double> fractional_counts(std::span<const std::set<std::string>> tagged);

// Subject label -> REF main panel ("A".."D" or "n/a").
class PanelMapping {
 public:
  // Two-column CSV with header "subject,panel".
  static PanelMapping from_csv(std::istream& in);
  // The mapping shipped in data/panel_mapping_v1.csv.
  static const PanelMapping& builtin();

  // Throws DataError naming an unknown label.
  const std::string& map_to_panel(std::string_view subject) const;
  std::set<std::string> panels_for(const std::set<std::string>& subjects) const;

  std::size_t size() const noexcept { return table_.size(); }
  const std::map<std::string, std::string, std::less<>>& table() const noexcept { return table_; }

 private:
  std::map<std::string, std::string, std::less<>> table_;
};

// Line-delimited JSON {doi, counts:{label:int}}; DOIs are normalized.
std::map<std::string, SubjectProfile> read_reader_profiles(std::istream& in);

// Client for a reader-statistics service that answers
// GET <base>/catalog?doi=<doi>&view=stats with {"reader_count_by_subject_area": {...}}.
// Returns nullopt on 404 (publication unknown to the service).
class ReaderCountClient {
 public:
  ReaderCountClient(HttpClient& http, std::string base_url) : http_(http), base_url_(std::move(base_url)) {}

  std::optional<SubjectProfile> fetch(const std::string& doi);

 private:
  HttpClient& http_;
  std::string base_url_;
};

struct SubjectTagSummary {
  std::size_t tagged = 0;
  std::size_t untagged = 0;  // no profile, or no positive count
};

// Fills subjects and panels on each publication from the profiles.
SubjectTagSummary tag_publications(std::vector<LinkedPublication>& publications,
                                   const std::map<std::string, SubjectProfile>& profiles,
                                   const PanelMapping& mapping);

}  // namespace depositlag
