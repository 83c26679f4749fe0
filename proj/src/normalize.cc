#include "depositlag/normalize.h"

#include <unicode/translit.h>
#include <unicode/unistr.h>

#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "depositlag/errors.h"

namespace depositlag {
namespace {

// Decompose, drop combining marks, then map the remaining Latin letters
// (ß, ø, æ, ł, ligatures, ...) with ICU's Latin-ASCII table.
constexpr const char* kFoldRules = "NFD; [:Nonspacing Mark:] Remove; NFC; Latin-ASCII";

const icu::Transliterator& folding_transliterator() {
  // ICU transliterators are not safe for concurrent transliterate() calls.
  thread_local std::unique_ptr<icu::Transliterator> instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::Transliterator> t(
        icu::Transliterator::createInstance(kFoldRules, UTRANS_FORWARD, status));
    if (U_FAILURE(status) || !t) {
      throw std::runtime_error(std::string("cannot create transliterator: ") + u_errorName(status));
    }
    return t;
  }();
  return *instance;
}

bool is_ascii(std::string_view text) {
  for (unsigned char c : text) {
    if (c >= 0x80) return false;
  }
  return true;
}

std::string keep_key_chars(std::string_view ascii) {
  std::string out;
  out.reserve(ascii.size());
  for (unsigned char c : ascii) {
    if (c >= 'A' && c <= 'Z') {
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

constexpr std::string_view kDoiPrefixes[] = {
    "https://doi.org/", "http://doi.org/", "https://dx.doi.org/", "http://dx.doi.org/", "doi:",
};

}  // namespace

std::size_t MatchKeyHash::operator()(const MatchKey& key) const noexcept {
  std::size_t h = std::hash<std::string>{}(key.norm_title);
  h ^= std::hash<int>{}(key.year) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= std::hash<std::string>{}(key.norm_family) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::string fold_to_ascii(std::string_view text) {
  if (is_ascii(text)) return std::string(text);
  icu::UnicodeString u =
      icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  folding_transliterator().transliterate(u);
  std::string folded;
  u.toUTF8String(folded);
  return folded;
}

std::string normalize_text(std::string_view text) { return keep_key_chars(fold_to_ascii(text)); }

std::optional<std::string> try_normalize_doi(std::string_view raw) {
  std::string_view s = trim(raw);
  bool stripped = true;
  while (stripped) {
    stripped = false;
    for (std::string_view prefix : kDoiPrefixes) {
      if (starts_with_icase(s, prefix)) {
        s = trim(s.substr(prefix.size()));
        stripped = true;
      }
    }
  }
  if (s.empty()) return std::nullopt;
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string normalize_doi(std::string_view raw) {
  auto doi = try_normalize_doi(raw);
  if (!doi) throw RecordRejected(RejectReason::kInvalidDoi, "empty DOI '" + std::string(raw) + "'");
  return *std::move(doi);
}

CalendarDate impute_publication_date(std::optional<int> year, std::optional<int> month,
                                     std::optional<int> day) {
  if (!year) throw RecordRejected(RejectReason::kMissingYear, "publication year missing");
  if (!month) {
    throw RecordRejected(RejectReason::kMissingMonth,
                         "only the year " + std::to_string(*year) + " is known");
  }
  return CalendarDate(*year, *month, day.value_or(1));
}

std::string first_author_family(std::span<const AuthorName> authors) {
  if (authors.empty()) throw RecordRejected(RejectReason::kMissingAuthors, "no authors");
  const AuthorName& first = authors.front();
  if (first.family && !trim(*first.family).empty()) return std::string(trim(*first.family));
  if (first.raw) {
    std::istringstream tokens{*first.raw};
    std::string token, last;
    while (tokens >> token) last = token;
    if (!last.empty()) return last;
  }
  throw RecordRejected(RejectReason::kMissingFamily, "first author has no family or raw name");
}

MatchKey build_match_key(std::string_view title, int year, std::span<const AuthorName> authors) {
  MatchKey key;
  key.norm_title = normalize_text(title);
  if (key.norm_title.empty()) {
    throw RecordRejected(RejectReason::kEmptyTitleKey, "title '" + std::string(title) + "'");
  }
  key.year = year;
  const std::string family = first_author_family(authors);
  key.norm_family = normalize_text(family);
  if (key.norm_family.empty()) {
    throw RecordRejected(RejectReason::kEmptyFamilyKey, "family '" + family + "'");
  }
  return key;
}

}  // namespace depositlag
