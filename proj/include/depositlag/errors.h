#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace depositlag {

// Process exit codes shared by every CLI subcommand.
enum class ExitCode : int {
  kSuccess = 0,
  kDataValidation = 1,
  kIo = 2,
  kNetwork = 3,
};

// Why a record was dropped on its way into the linked dataset.
enum class RejectReason {
  kInvalidDoi,
  kDuplicateDoi,
  kDuplicateRecordId,
  kMissingTitle,
  kMissingAuthors,
  kMissingYear,
  kMissingMonth,
  kInvalidDate,
  kPre2013,
  kMissingFamily,
  kEmptyTitleKey,
  kEmptyFamilyKey,
  kNoDepositDate,
};

std::string_view to_string(RejectReason reason);

// Input data violates a contract. Maps to ExitCode::kDataValidation.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A single record cannot be used; callers usually collect these rather than abort.
class RecordRejected : public DataError {
 public:
  RecordRejected(RejectReason reason, const std::string& detail);
  RejectReason reason() const noexcept { return reason_; }

 private:
  RejectReason reason_;
};

class XmlParseError : public DataError {
 public:
  XmlParseError(const std::string& message, std::size_t byte_offset);
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// A scraper could not find the marker it looks for on a record page.
class ExtractionError : public DataError {
 public:
  explicit ExtractionError(std::string marker);
  const std::string& marker() const noexcept { return marker_; }

 private:
  std::string marker_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace depositlag
