#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depositlag/date.h"

namespace depositlag {

struct OaiRecord {
  std::string identifier;
  CalendarDate datestamp;
  // Dublin Core element name (without namespace prefix) -> values in document order.
  std::map<std::string, std::vector<std::string>> metadata;
};

struct OaiRecordError {
  std::string identifier;  // may be empty when the header had none
  std::string message;
};

struct OaiPage {
  std::vector<OaiRecord> records;
  std::vector<OaiRecordError> record_errors;
  std::optional<std::string> resumption_token;
  std::optional<std::string> error_code;  // protocol <error code="...">, except noRecordsMatch
  std::string error_message;
};

// Parses a ListRecords response. Malformed XML throws XmlParseError carrying
// the byte offset; per-record problems land in record_errors.
OaiPage parse_oai_response(std::string_view xml);

}  // namespace depositlag
