#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depositlag/errors.h"
#include "depositlag/model.h"
#include "depositlag/normalize.h"

namespace depositlag {

inline constexpr int kEarliestPublicationYear = 2013;

struct Rejection {
  std::string id;  // DOI for registry records, record_id for repository records
  RejectReason reason;
  std::string detail;
};

struct RegistryFilterResult {
  std::vector<RegistryRecord> kept;
  std::vector<Rejection> rejected;
};

struct RepositoryFilterResult {
  std::vector<RepositoryRecord> kept;
  std::vector<Rejection> rejected;
};

RegistryFilterResult filter_registry(std::span<const RawRegistryRecord> records);
RepositoryFilterResult filter_repository(std::span<const RepositoryRecord> records);

struct LinkPair {
  std::string registry_doi;
  std::string repository_record_id;
  MatchKey key;

  friend auto operator<=>(const LinkPair&, const LinkPair&) = default;
  friend bool operator==(const LinkPair&, const LinkPair&) = default;
};

// A key carried by more than one registry record; none of them is linked.
struct AmbiguousKey {
  MatchKey key;
  std::vector<std::string> registry_dois;
};

struct LinkResult {
  std::vector<LinkPair> pairs;              // sorted by (registry_doi, record_id)
  std::vector<AmbiguousKey> ambiguous;      // sorted by key
  std::vector<Rejection> unkeyed;           // records whose key could not be built
  std::size_t unmatched_repository = 0;     // keyed repository records with no partner
};

// Exact join on MatchKey. jobs > 1 partitions the key space over worker threads;
// the result is identical for every jobs value.
LinkResult link(std::span<const RegistryRecord> registry, std::span<const RepositoryRecord> repository,
                unsigned jobs = 1);

// One publication per registry DOI. Repository records must carry a deposit
// date; pairs whose repository record is unknown or undated are skipped.
// Repositories missing from `repositories` count as country-less.
std::vector<LinkedPublication> group_by_doi(std::span<const LinkPair> pairs,
                                            std::span<const RegistryRecord> registry,
                                            std::span<const RepositoryRecord> repository,
                                            const std::map<std::string, RepositoryInfo>& repositories);

enum class DoiComparison { kNoRepoDoi, kExact, kSubstring, kMismatch };

std::string_view to_string(DoiComparison comparison);

// Registry DOI against the repository's DOI. The substring test is one-way:
// only a repository DOI that extends the registry DOI counts.
DoiComparison compare_dois(std::string_view registry_doi, const std::optional<std::string>& repository_doi);

struct MatchingAccuracyReport {
  std::size_t total_pairs = 0;
  std::size_t no_repo_doi = 0;
  std::size_t both_doi = 0;
  std::size_t exact_match = 0;
  std::size_t substring_match = 0;
  std::size_t mismatch = 0;
  // (exact + substring) / both_doi; empty when both_doi == 0.
  std::optional<double> accuracy;

  // Throws DataError if the counts are inconsistent.
  static MatchingAccuracyReport from_counts(std::size_t total_pairs, std::size_t no_repo_doi,
                                            std::size_t exact_match, std::size_t substring_match,
                                            std::size_t mismatch);

  // Shares used when describing the DOI check; all empty on a zero denominator.
  std::optional<double> no_repo_doi_share() const;
  std::optional<double> exact_share() const;
  std::optional<double> non_exact_share() const;
  std::optional<double> substring_share_of_non_exact() const;
};

MatchingAccuracyReport validate_links_by_doi(std::span<const LinkPair> pairs,
                                             std::span<const RepositoryRecord> repository);

}  // namespace depositlag
