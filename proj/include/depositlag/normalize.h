#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "depositlag/date.h"
#include "depositlag/model.h"

namespace depositlag {

// Exact-match join key. Both strings are over [a-z0-9_].
struct MatchKey {
  std::string norm_title;
  int year = 0;
  std::string norm_family;

  friend auto operator<=>(const MatchKey&, const MatchKey&) = default;
  friend bool operator==(const MatchKey&, const MatchKey&) = default;
};

struct MatchKeyHash {
  std::size_t operator()(const MatchKey& key) const noexcept;
};

// Folds Latin letters to ASCII, lowercases, and drops everything outside
// [a-z0-9_]. Invalid UTF-8 sequences are dropped.
std::string normalize_text(std::string_view text);

// Latin-to-ASCII folding only; case, spacing and punctuation are kept.
std::string fold_to_ascii(std::string_view text);

// Strips resolver prefixes (doi.org URLs, "doi:") and whitespace, lowercases.
// Throws RecordRejected(kInvalidDoi) when nothing is left.
std::string normalize_doi(std::string_view raw);

// Same as normalize_doi but returns nullopt instead of throwing.
std::optional<std::string> try_normalize_doi(std::string_view raw);

// Missing day becomes the first of the month. A missing month rejects the
// date (kMissingMonth), a missing year rejects with kMissingYear.
CalendarDate impute_publication_date(std::optional<int> year, std::optional<int> month,
                                     std::optional<int> day);

// The first author's family name, or the last whitespace token of the raw name.
std::string first_author_family(std::span<const AuthorName> authors);

MatchKey build_match_key(std::string_view title, int year, std::span<const AuthorName> authors);

}  // namespace depositlag
