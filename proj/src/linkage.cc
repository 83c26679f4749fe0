#include "depositlag/linkage.h"

#include <algorithm>
#include <future>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace depositlag {
namespace {

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::optional<CalendarDate> impute_optional(const PartialDate& date) {
  if (!date.year || !date.month) return std::nullopt;
  if (!CalendarDate::is_valid(*date.year, *date.month, date.day.value_or(1))) return std::nullopt;
  return CalendarDate(*date.year, *date.month, date.day.value_or(1));
}

struct KeyedRecord {
  MatchKey key;
  std::size_t index;
};

struct PartitionResult {
  std::vector<LinkPair> pairs;
  std::vector<AmbiguousKey> ambiguous;
  std::size_t unmatched = 0;
};

PartitionResult link_partition(const std::vector<KeyedRecord>& registry_keys,
                               const std::vector<KeyedRecord>& repository_keys,
                               std::span<const RegistryRecord> registry,
                               std::span<const RepositoryRecord> repository) {
  PartitionResult out;
  std::unordered_map<MatchKey, std::vector<std::size_t>, MatchKeyHash> by_key;
  by_key.reserve(registry_keys.size());
  for (const KeyedRecord& r : registry_keys) by_key[r.key].push_back(r.index);

  for (const auto& [key, indices] : by_key) {
    if (indices.size() > 1) {
      AmbiguousKey amb{key, {}};
      for (std::size_t i : indices) amb.registry_dois.push_back(registry[i].doi);
      std::sort(amb.registry_dois.begin(), amb.registry_dois.end());
      out.ambiguous.push_back(std::move(amb));
    }
  }
  for (const KeyedRecord& r : repository_keys) {
    auto it = by_key.find(r.key);
    if (it == by_key.end()) {
      ++out.unmatched;
      continue;
    }
    if (it->second.size() != 1) continue;
    out.pairs.push_back(LinkPair{registry[it->second.front()].doi, repository[r.index].record_id, r.key});
  }
  return out;
}

}  // namespace

RegistryFilterResult filter_registry(std::span<const RawRegistryRecord> records) {
  RegistryFilterResult result;
  std::unordered_set<std::string> seen_dois;
  for (const RawRegistryRecord& raw : records) {
    try {
      std::string doi = normalize_doi(raw.doi);
      if (blank(raw.title)) throw RecordRejected(RejectReason::kMissingTitle, "empty title");
      if (raw.authors.empty()) throw RecordRejected(RejectReason::kMissingAuthors, "no authors");
      const CalendarDate published =
          impute_publication_date(raw.published.year, raw.published.month, raw.published.day);
      if (published.year() < kEarliestPublicationYear) {
        throw RecordRejected(RejectReason::kPre2013, "published " + published.iso());
      }
      if (!seen_dois.insert(doi).second) {
        throw RecordRejected(RejectReason::kDuplicateDoi, "repeated DOI " + doi);
      }
      RegistryRecord rec{std::move(doi),
                         raw.title,
                         raw.authors,
                         published,
                         raw.issn,
                         raw.accepted ? impute_optional(*raw.accepted) : std::nullopt,
                         raw.affiliation_countries};
      std::erase_if(rec.issn, [](const std::string& s) { return blank(s); });
      result.kept.push_back(std::move(rec));
    } catch (const RecordRejected& e) {
      result.rejected.push_back(Rejection{raw.doi, e.reason(), e.what()});
    }
  }
  return result;
}

RepositoryFilterResult filter_repository(std::span<const RepositoryRecord> records) {
  RepositoryFilterResult result;
  std::unordered_set<std::string> seen_ids;
  for (const RepositoryRecord& rec : records) {
    auto reject = [&](RejectReason reason, std::string detail) {
      result.rejected.push_back(Rejection{rec.record_id, reason, std::move(detail)});
    };
    if (blank(rec.title)) {
      reject(RejectReason::kMissingTitle, "empty title");
    } else if (rec.authors.empty()) {
      reject(RejectReason::kMissingAuthors, "no authors");
    } else if (!rec.year) {
      reject(RejectReason::kMissingYear, "year missing");
    } else if (*rec.year < kEarliestPublicationYear) {
      reject(RejectReason::kPre2013, "year " + std::to_string(*rec.year));
    } else if (!seen_ids.insert(rec.record_id).second) {
      reject(RejectReason::kDuplicateRecordId, "repeated record id");
    } else {
      result.kept.push_back(rec);
    }
  }
  return result;
}

LinkResult link(std::span<const RegistryRecord> registry, std::span<const RepositoryRecord> repository,
                unsigned jobs) {
  jobs = std::max(1u, jobs);
  LinkResult result;
  std::vector<std::vector<KeyedRecord>> registry_parts(jobs), repository_parts(jobs);
  const MatchKeyHash hasher;

  for (std::size_t i = 0; i < registry.size(); ++i) {
    const RegistryRecord& rec = registry[i];
    try {
      MatchKey key = build_match_key(rec.title, rec.published.year(), rec.authors);
      const std::size_t part = hasher(key) % jobs;
      registry_parts[part].push_back(KeyedRecord{std::move(key), i});
    } catch (const RecordRejected& e) {
      result.unkeyed.push_back(Rejection{rec.doi, e.reason(), e.what()});
    }
  }
  for (std::size_t i = 0; i < repository.size(); ++i) {
    const RepositoryRecord& rec = repository[i];
    try {
      if (!rec.year) throw RecordRejected(RejectReason::kMissingYear, "year missing");
      MatchKey key = build_match_key(rec.title, *rec.year, rec.authors);
      const std::size_t part = hasher(key) % jobs;
      repository_parts[part].push_back(KeyedRecord{std::move(key), i});
    } catch (const RecordRejected& e) {
      result.unkeyed.push_back(Rejection{rec.record_id, e.reason(), e.what()});
    }
  }

  std::vector<PartitionResult> parts(jobs);
  if (jobs == 1) {
    parts[0] = link_partition(registry_parts[0], repository_parts[0], registry, repository);
  } else {
    std::vector<std::future<PartitionResult>> futures;
    for (unsigned p = 0; p < jobs; ++p) {
      futures.push_back(std::async(std::launch::async, [&, p] {
        return link_partition(registry_parts[p], repository_parts[p], registry, repository);
      }));
    }
    for (unsigned p = 0; p < jobs; ++p) parts[p] = futures[p].get();
  }

  for (PartitionResult& part : parts) {
    std::move(part.pairs.begin(), part.pairs.end(), std::back_inserter(result.pairs));
    std::move(part.ambiguous.begin(), part.ambiguous.end(), std::back_inserter(result.ambiguous));
    result.unmatched_repository += part.unmatched;
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  result.pairs.erase(std::unique(result.pairs.begin(), result.pairs.end()), result.pairs.end());
  std::sort(result.ambiguous.begin(), result.ambiguous.end(),
            [](const AmbiguousKey& a, const AmbiguousKey& b) { return a.key < b.key; });
  return result;
}

std::vector<LinkedPublication> group_by_doi(std::span<const LinkPair> pairs,
                                            std::span<const RegistryRecord> registry,
                                            std::span<const RepositoryRecord> repository,
                                            const std::map<std::string, RepositoryInfo>& repositories) {
  std::unordered_map<std::string_view, const RegistryRecord*> registry_by_doi;
  for (const RegistryRecord& r : registry) registry_by_doi.emplace(r.doi, &r);
  std::unordered_map<std::string_view, const RepositoryRecord*> repository_by_id;
  for (const RepositoryRecord& r : repository) repository_by_id.emplace(r.record_id, &r);

  std::map<std::string, LinkedPublication> grouped;
  std::set<std::pair<std::string, std::string>> seen_deposits;
  for (const LinkPair& pair : pairs) {
    auto reg = registry_by_doi.find(pair.registry_doi);
    auto rep = repository_by_id.find(pair.repository_record_id);
    if (reg == registry_by_doi.end() || rep == repository_by_id.end()) continue;
    const RepositoryRecord& record = *rep->second;
    if (!record.deposit_date) continue;

    auto [it, inserted] = grouped.try_emplace(pair.registry_doi);
    LinkedPublication& pub = it->second;
    if (inserted) {
      pub.doi = pair.registry_doi;
      pub.registry = *reg->second;
    }
    if (!seen_deposits.emplace(pair.registry_doi + '\n' + record.repo_id, record.record_id).second) {
      continue;
    }
    pub.deposits.push_back(Deposit{record.repo_id, *record.deposit_date, record.record_id});
    auto info = repositories.find(record.repo_id);
    if (info != repositories.end() && info->second.country && !info->second.country->empty()) {
      pub.countries.insert(*info->second.country);
    } else {
      pub.countries.insert(std::string(kNoCountry));
    }
  }

  std::vector<LinkedPublication> out;
  out.reserve(grouped.size());
  for (auto& [doi, pub] : grouped) {
    std::sort(pub.deposits.begin(), pub.deposits.end(), [](const Deposit& a, const Deposit& b) {
      return std::tie(a.repo_id, a.record_id) < std::tie(b.repo_id, b.record_id);
    });
    out.push_back(std::move(pub));
  }
  return out;
}

std::string_view to_string(DoiComparison comparison) {
  switch (comparison) {
    case DoiComparison::kNoRepoDoi: return "NO_REPO_DOI";
    case DoiComparison::kExact: return "EXACT";
    case DoiComparison::kSubstring: return "SUBSTRING";
    case DoiComparison::kMismatch: return "MISMATCH";
  }
  return "MISMATCH";
}

DoiComparison compare_dois(std::string_view registry_doi, const std::optional<std::string>& repository_doi) {
  if (!repository_doi) return DoiComparison::kNoRepoDoi;
  const auto repo = try_normalize_doi(*repository_doi);
  if (!repo) return DoiComparison::kNoRepoDoi;
  const auto reg = try_normalize_doi(registry_doi);
  if (!reg) return DoiComparison::kMismatch;
  if (*reg == *repo) return DoiComparison::kExact;
  if (repo->find(*reg) != std::string::npos) return DoiComparison::kSubstring;
  return DoiComparison::kMismatch;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MatchingAccuracyReport MatchingAccuracyReport::from_counts(std::size_t total_pairs, std::size_t no_repo_doi,
                                                           std::size_t exact_match,
                                                           std::size_t substring_match, std::size_t mismatch) {
  if (no_repo_doi > total_pairs) throw DataError("no_repo_doi exceeds total_pairs");
  MatchingAccuracyReport r;
  r.total_pairs = total_pairs;
  r.no_repo_doi = no_repo_doi;
  r.both_doi = total_pairs - no_repo_doi;
  r.exact_match = exact_match;
  r.substring_match = substring_match;
  r.mismatch = mismatch;
  if (r.exact_match + r.substring_match + r.mismatch != r.both_doi) {
    throw DataError("exact + substring + mismatch must equal total_pairs - no_repo_doi");
  }
  r.accuracy = ratio(r.exact_match + r.substring_match, r.both_doi);
  return r;
}

std::optional<double> MatchingAccuracyReport::no_repo_doi_share() const {
  return ratio(no_repo_doi, total_pairs);
}

std::optional<double> MatchingAccuracyReport::exact_share() const { return ratio(exact_match, both_doi); }

std::optional<double> MatchingAccuracyReport::non_exact_share() const {
  return ratio(substring_match + mismatch, both_doi);
}

std::optional<double> MatchingAccuracyReport::substring_share_of_non_exact() const {
  return ratio(substring_match, substring_match + mismatch);
}

MatchingAccuracyReport validate_links_by_doi(std::span<const LinkPair> pairs,
                                             std::span<const RepositoryRecord> repository) {
  std::unordered_map<std::string_view, const RepositoryRecord*> by_id;
  for (const RepositoryRecord& r : repository) by_id.emplace(r.record_id, &r);
  std::size_t no_doi = 0, exact = 0, substring = 0, mismatch = 0;
  for (const LinkPair& pair : pairs) {
    auto it = by_id.find(pair.repository_record_id);
    const std::optional<std::string> repo_doi = it == by_id.end() ? std::nullopt : it->second->doi;
    switch (compare_dois(pair.registry_doi, repo_doi)) {
      case DoiComparison::kNoRepoDoi: ++no_doi; break;
      case DoiComparison::kExact: ++exact; break;
      case DoiComparison::kSubstring: ++substring; break;
      case DoiComparison::kMismatch: ++mismatch; break;
    }
  }
  return MatchingAccuracyReport::from_counts(pairs.size(), no_doi, exact, substring, mismatch);
}

}  // namespace depositlag
