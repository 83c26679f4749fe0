#pragma once

#include <iosfwd>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "depositlag/date.h"

namespace depositlag {

struct LedgerEntry {
  CalendarDate first_seen;
  std::vector<CalendarDate> updates;  // sorted, unique, all > first_seen

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

// First-seen datestamp per record. OAI-PMH only exposes a last-update
// datestamp, so the earliest one ever observed stands in for the deposit date.
class HarvestLedger {
 public:
  void observe(const std::string& record_id, const CalendarDate& datestamp);

  const LedgerEntry* find(const std::string& record_id) const;
  const std::map<std::string, LedgerEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  // Line-delimited JSON {record_id, first_seen, updates[]}, ordered by record_id.
  void write_jsonl(std::ostream& out) const;
  static HarvestLedger read_jsonl(std::istream& in);

  friend bool operator==(const HarvestLedger&, const HarvestLedger&) = default;

 private:
  std::map<std::string, LedgerEntry> entries_;
};

HarvestLedger ledger_observe(HarvestLedger ledger, const std::string& record_id, const CalendarDate& datestamp);

// Single-writer wrapper used when several endpoints are harvested at once.
class SharedLedger {
 public:
  explicit SharedLedger(HarvestLedger initial = {}) : ledger_(std::move(initial)) {}

  void observe(const std::string& record_id, const CalendarDate& datestamp);
  HarvestLedger snapshot() const;

 private:
  mutable std::mutex mutex_;
  HarvestLedger ledger_;
};

}  // namespace depositlag
