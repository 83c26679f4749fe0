#include "depositlag/subjects.h"

#include <algorithm>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "depositlag/csv.h"
#include "depositlag/errors.h"
#include "depositlag/normalize.h"
#include "panel_mapping_data.h"

namespace depositlag {
namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

SubjectProfile profile_from_counts(std::string doi, const nlohmann::json& counts) {
  SubjectProfile profile{std::move(doi), {}};
  if (!counts.is_object()) throw DataError("reader counts must be an object for " + profile.doi);
  for (const auto& [label, value] : counts.items()) {
    if (!value.is_number_integer() || value.get<long long>() < 0) {
      throw DataError("reader count for '" + label + "' must be a non-negative integer");
    }
    profile.reader_counts[label] = value.get<long long>();
  }
  return profile;
}

}  // namespace

std::set<std::string> tag_subjects(const SubjectProfile& profile) {
  long long best = 0;
  for (const auto& [label, count] : profile.reader_counts) best = std::max(best, count);
  std::set<std::string> tags;
  if (best <= 0) return tags;
  for (const auto& [label, count] : profile.reader_counts) {
    if (count == best) tags.insert(label);
  }
  return tags;
}

std::map<std::string, double> fractional_counts(std::span<const std::set<std::string>> tagged) {
  std::map<std::string, double> counts;
  for (const auto& tags : tagged) {
    if (tags.empty()) continue;
    const double share = 1.0 / static_cast<double>(tags.size());
    for (const std::string& t : tags) counts[t] += share;
  }
  return counts;
}

PanelMapping PanelMapping::from_csv(std::istream& in) {
  PanelMapping mapping;
  const auto rows = csv::read_rows(in);
  if (rows.empty()) throw DataError("panel mapping is empty");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 2) throw DataError("panel mapping row " + std::to_string(i + 1) + " needs two columns");
    std::string subject = trim(row[0]);
    std::string panel = trim(row[1]);
    if (panel != "A" && panel != "B" && panel != "C" && panel != "D" && panel != "n/a") {
      throw DataError("unknown panel '" + panel + "' for subject '" + subject + "'");
    }
    if (!mapping.table_.emplace(std::move(subject), std::move(panel)).second) {
      throw DataError("subject listed twice in panel mapping: " + trim(row[0]));
    }
  }
  return mapping;
}

const PanelMapping& PanelMapping::builtin() {
  static const PanelMapping mapping = [] {
    std::istringstream in(detail::kBuiltinPanelMappingCsv);
    return from_csv(in);
  }();
  return mapping;
}

const std::string& PanelMapping::map_to_panel(std::string_view subject) const {
  auto it = table_.find(subject);
  if (it == table_.end()) throw DataError("subject not in panel mapping: '" + std::string(subject) + "'");
  return it->second;
}

std::set<std::string> PanelMapping::panels_for(const std::set<std::string>& subjects) const {
  std::set<std::string> panels;
  for (const std::string& s : subjects) panels.insert(map_to_panel(s));
  return panels;
}

std::map<std::string, SubjectProfile> read_reader_profiles(std::istream& in) {
  std::map<std::string, SubjectProfile> profiles;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto line = nlohmann::json::parse(text);
      std::string doi = normalize_doi(line.at("doi").get<std::string>());
      SubjectProfile profile = profile_from_counts(doi, line.at("counts"));
      profiles.insert_or_assign(std::move(doi), std::move(profile));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("reader profiles line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return profiles;
}

std::optional<SubjectProfile> ReaderCountClient::fetch(const std::string& doi) {
  const std::string url = base_url_ + "/catalog?doi=" + url_encode(doi) + "&view=stats";
  const HttpResponse response = http_.get(url);
  if (response.status == 404) return std::nullopt;
  if (response.status != 200) throw NetworkError("HTTP " + std::to_string(response.status) + " for " + url);
  const auto body = nlohmann::json::parse(response.body, nullptr, false);
  if (body.is_discarded()) throw DataError("reader statistics response is not JSON: " + url);
  // The service answers with a list of catalog entries; take the first.
  const nlohmann::json& entry = body.is_array() ? (body.empty() ? nlohmann::json() : body.front()) : body;
  if (!entry.is_object()) return std::nullopt;
  return profile_from_counts(normalize_doi(doi),
                             entry.value("reader_count_by_subject_area", nlohmann::json::object()));
}

SubjectTagSummary tag_publications(std::vector<LinkedPublication>& publications,
                                   const std::map<std::string, SubjectProfile>& profiles,
                                   const PanelMapping& mapping) {
  SubjectTagSummary summary;
  for (LinkedPublication& pub : publications) {
    auto it = profiles.find(pub.doi);
    std::set<std::string> tags = it == profiles.end() ? std::set<std::string>{} : tag_subjects(it->second);
    if (tags.empty()) {
      pub.subjects.reset();
      pub.panels.reset();
      ++summary.untagged;
      continue;
    }
    pub.panels = mapping.panels_for(tags);
    pub.subjects = std::move(tags);
    ++summary.tagged;
  }
  return summary;
}

}  // namespace depositlag
