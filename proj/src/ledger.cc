#include "depositlag/ledger.h"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "depositlag/errors.h"

namespace depositlag {
namespace {

void insert_sorted_unique(std::vector<CalendarDate>& dates, const CalendarDate& date) {
  auto it = std::lower_bound(dates.begin(), dates.end(), date);
  if (it == dates.end() || *it != date) dates.insert(it, date);
}

}  // namespace

void HarvestLedger::observe(const std::string& record_id, const CalendarDate& datestamp) {
  auto it = entries_.find(record_id);
  if (it == entries_.end()) {
    entries_.emplace(record_id, LedgerEntry{datestamp, {}});
    return;
  }
  LedgerEntry& entry = it->second;
  if (datestamp > entry.first_seen) {
    insert_sorted_unique(entry.updates, datestamp);
  } else if (datestamp < entry.first_seen) {
    insert_sorted_unique(entry.updates, entry.first_seen);
    entry.first_seen = datestamp;
  }
}

const LedgerEntry* HarvestLedger::find(const std::string& record_id) const {
  auto it = entries_.find(record_id);
  return it == entries_.end() ? nullptr : &it->second;
}

void HarvestLedger::write_jsonl(std::ostream& out) const {
  for (const auto& [id, entry] : entries_) {
    nlohmann::ordered_json line;
    line["record_id"] = id;
    line["first_seen"] = entry.first_seen.iso();
    line["updates"] = nlohmann::ordered_json::array();
    for (const CalendarDate& d : entry.updates) line["updates"].push_back(d.iso());
    out << line.dump() << '\n';
  }
}

HarvestLedger HarvestLedger::read_jsonl(std::istream& in) {
  HarvestLedger ledger;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto line = nlohmann::json::parse(text);
      const std::string id = line.at("record_id").get<std::string>();
      ledger.observe(id, CalendarDate::parse_iso(line.at("first_seen").get<std::string>()));
      for (const auto& u : line.value("updates", nlohmann::json::array())) {
        ledger.observe(id, CalendarDate::parse_iso(u.get<std::string>()));
      }
    } catch (const nlohmann::json::exception& e) {
      throw DataError("ledger line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return ledger;
}

HarvestLedger ledger_observe(HarvestLedger ledger, const std::string& record_id, const CalendarDate& datestamp) {
  ledger.observe(record_id, datestamp);
  return ledger;
}

void SharedLedger::observe(const std::string& record_id, const CalendarDate& datestamp) {
  std::lock_guard lock(mutex_);
  ledger_.observe(record_id, datestamp);
}

HarvestLedger SharedLedger::snapshot() const {
  std::lock_guard lock(mutex_);
  return ledger_;
}

}  // namespace depositlag
