#include "depositlag/model.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace depositlag {

std::string_view to_string(Platform platform) {
  switch (platform) {
    case Platform::kDspace: return "DSPACE";
    case Platform::kEprints: return "EPRINTS";
    case Platform::kInvenio: return "INVENIO";
    case Platform::kArxiv: return "ARXIV";
    case Platform::kZenodo: return "ZENODO";
    case Platform::kOther: return "OTHER";
  }
  return "OTHER";
}

Platform platform_from_string(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "DSPACE") return Platform::kDspace;
  if (upper == "EPRINTS") return Platform::kEprints;
  if (upper == "INVENIO") return Platform::kInvenio;
  if (upper == "ARXIV") return Platform::kArxiv;
  if (upper == "ZENODO") return Platform::kZenodo;
  return Platform::kOther;
}

std::string_view to_string(DateProvenance provenance) {
  switch (provenance) {
    case DateProvenance::kUnresolved: return "UNRESOLVED";
    case DateProvenance::kSelf: return "SELF";
    case DateProvenance::kLedger: return "LEDGER";
    case DateProvenance::kScraped: return "SCRAPED";
  }
  return "UNRESOLVED";
}

CalendarDate LinkedPublication::earliest_deposit() const {
  if (deposits.empty()) throw std::logic_error("publication " + doi + " has no deposits");
  auto it = std::min_element(deposits.begin(), deposits.end(), [](const Deposit& a, const Deposit& b) {
    return a.deposit_date < b.deposit_date;
  });
  return it->deposit_date;
}

}  // namespace depositlag
