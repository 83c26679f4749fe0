#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "depositlag/analytics.h"
#include "depositlag/errors.h"

namespace depositlag {

// Keys accepted in the config file (one "key = value" per line, '#'
// comments). List values are comma separated. Every key has a CLI flag.
struct PipelineConfig {
  std::filesystem::path registry;
  std::filesystem::path repository;
  std::filesystem::path repo_registry;
  std::filesystem::path reader_profiles;  // optional
  std::filesystem::path panel_mapping;    // optional; built-in table otherwise
  std::filesystem::path ledger;           // optional
  std::filesystem::path scraped;          // optional CSV record_id,deposit_date
  std::filesystem::path output_dir;
  int cutoff_days = kDefaultCutoffDays;
  std::vector<int> caps{365, 730};
  std::size_t min_repo_count = 100;
  std::set<int> excluded_years;
  std::vector<std::string> endpoints;
  int polite_delay_ms = 0;
  std::vector<int> histogram_widths{7, 30};
  unsigned jobs = 1;
  bool force = false;
  StdDevConvention stddev = StdDevConvention::kPopulation;

  static PipelineConfig from_file(const std::filesystem::path& path);
  static std::vector<std::string_view> keys();

  // Throws DataError for unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
  // Checks value ranges; file existence is checked when stages open them.
  void validate() const;
};

struct ManifestEntry {
  std::string file;
  std::size_t rows = 0;
  std::string sha256;
};

struct PipelineResult {
  ExitCode exit_code = ExitCode::kSuccess;
  std::string failed_stage;
  std::string error;
  std::vector<ManifestEntry> files;
  std::string digest;
};

// filter -> link -> validate-doi -> resolve-dates -> group -> tag-subjects
// -> analyze -> report. Outputs are staged as "<name>.partial" and renamed
// on success; failures keep the partial files. manifest.json is always written.
PipelineResult run_pipeline(const PipelineConfig& config);

ExitCode exit_code_for(const std::exception& error);

std::string sha256_hex(std::string_view data);

}  // namespace depositlag
