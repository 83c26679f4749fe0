#include "depositlag/errors.h"

namespace depositlag {

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kInvalidDoi: return "INVALID_DOI";
    case RejectReason::kDuplicateDoi: return "DUPLICATE_DOI";
    case RejectReason::kDuplicateRecordId: return "DUPLICATE_RECORD_ID";
    case RejectReason::kMissingTitle: return "MISSING_TITLE";
    case RejectReason::kMissingAuthors: return "MISSING_AUTHORS";
    case RejectReason::kMissingYear: return "MISSING_YEAR";
    case RejectReason::kMissingMonth: return "MISSING_MONTH";
    case RejectReason::kInvalidDate: return "INVALID_DATE";
    case RejectReason::kPre2013: return "PRE_2013";
    case RejectReason::kMissingFamily: return "MISSING_FAMILY";
    case RejectReason::kEmptyTitleKey: return "EMPTY_TITLE_KEY";
    case RejectReason::kEmptyFamilyKey: return "EMPTY_FAMILY_KEY";
    case RejectReason::kNoDepositDate: return "NO_DEPOSIT_DATE";
  }
  return "UNKNOWN";
}

RecordRejected::RecordRejected(RejectReason reason, const std::string& detail)
    : DataError(std::string(to_string(reason)) + ": " + detail), reason_(reason) {}

XmlParseError::XmlParseError(const std::string& message, std::size_t byte_offset)
    : DataError("XML parse error at byte " + std::to_string(byte_offset) + ": " + message),
      byte_offset_(byte_offset) {}

ExtractionError::ExtractionError(std::string marker)
    : DataError("deposit date marker not found: " + marker), marker_(std::move(marker)) {}

}  // namespace depositlag
