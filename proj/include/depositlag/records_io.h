#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "depositlag/linkage.h"
#include "depositlag/model.h"

namespace depositlag {

// Line-delimited JSON readers. Malformed lines throw DataError naming the line.
std::vector<RawRegistryRecord> read_registry_jsonl(std::istream& in);
std::vector<RepositoryRecord> read_repository_jsonl(std::istream& in);
// JSON array of {repo_id, name, country, platform}.
std::map<std::string, RepositoryInfo> read_repository_registry(std::istream& in);
std::vector<LinkedPublication> read_linked_jsonl(std::istream& in);
// CSV "record_id,deposit_date".
std::map<std::string, CalendarDate> read_date_overrides_csv(std::istream& in);

void write_registry_jsonl(std::ostream& out, std::span<const RawRegistryRecord> records);
void write_repository_jsonl(std::ostream& out, std::span<const RepositoryRecord> records);
void write_repository_registry(std::ostream& out, const std::map<std::string, RepositoryInfo>& repositories);
void write_linked_jsonl(std::ostream& out, std::span<const LinkedPublication> publications);
void write_date_overrides_csv(std::ostream& out, const std::map<std::string, CalendarDate>& dates);

void write_rejections_csv(std::ostream& out, std::span<const Rejection> rejections, std::string_view kind);
void write_ambiguous_csv(std::ostream& out, std::span<const AmbiguousKey> ambiguous);
std::string accuracy_report_json(const MatchingAccuracyReport& report);

}  // namespace depositlag
