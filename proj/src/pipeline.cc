#include "depositlag/pipeline.h"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "depositlag/csv.h"
#include "depositlag/harvest.h"
#include "depositlag/linkage.h"
#include "depositlag/log.h"
#include "depositlag/records_io.h"
#include "depositlag/reports.h"
#include "depositlag/subjects.h"

namespace depositlag {
namespace fs = std::filesystem;
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(value)};
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long parse_integer(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw DataError("config key '" + std::string(key) + "' expects an integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DataError("config key '" + std::string(key) + "' expects true/false");
}

std::ifstream open_input(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open ") + what + " '" + path.string() + "'");
  return in;
}

std::size_t count_rows(const std::string& name, const std::string& content) {
  const auto lines = static_cast<std::size_t>(std::count(content.begin(), content.end(), '\n'));
  if (name.ends_with(".csv")) return lines == 0 ? 0 : lines - 1;
  if (name.ends_with(".jsonl")) return lines;
  return 1;
}

// Stages every output next to its final name and remembers what was written.
class OutputSet {
 public:
  OutputSet(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {}

  void write(const std::string& name, const std::string& content) {
    const fs::path final_path = dir_ / name;
    if (!force_ && fs::exists(final_path)) {
      throw IoError(final_path.string() + " exists; pass --force to overwrite");
    }
    const fs::path partial = dir_ / (name + ".partial");
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + partial.string());
    out << content;
    out.close();
    if (!out) throw IoError("write failed for " + partial.string());
    entries_.push_back(ManifestEntry{name, count_rows(name, content), sha256_hex(content)});
  }

  void commit() {
    for (const ManifestEntry& e : entries_) {
      std::error_code ec;
      fs::rename(dir_ / (e.file + ".partial"), dir_ / e.file, ec);
      if (ec) throw IoError("cannot finalize " + e.file + ": " + ec.message());
    }
  }

  std::vector<ManifestEntry> sorted_entries() const {
    auto out = entries_;
    std::sort(out.begin(), out.end(), [](const ManifestEntry& a, const ManifestEntry& b) { return a.file < b.file; });
    return out;
  }

 private:
  fs::path dir_;
  bool force_;
  std::vector<ManifestEntry> entries_;
};

std::string digest_of(const std::vector<ManifestEntry>& entries) {
  std::string text;
  for (const ManifestEntry& e : entries) text += e.file + '\t' + std::to_string(e.rows) + '\t' + e.sha256 + '\n';
  return sha256_hex(text);
}

void write_manifest(const fs::path& dir, const PipelineResult& result, const nlohmann::ordered_json& summary) {
  nlohmann::ordered_json m;
  m["status"] = result.exit_code == ExitCode::kSuccess ? "ok" : "failed";
  m["failed_stage"] = result.failed_stage.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(result.failed_stage);
  m["error"] = result.error.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(result.error);
  m["digest"] = result.digest;
  m["files"] = nlohmann::ordered_json::array();
  for (const ManifestEntry& e : result.files) {
    m["files"].push_back({{"file", e.file}, {"rows", e.rows}, {"sha256", e.sha256}});
  }
  m["summary"] = summary;
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest in " + dir.string());
  out << m.dump(2) << '\n';
}

std::string rejections_csv(const std::vector<std::pair<std::string_view, std::vector<Rejection>>>& groups) {
  std::ostringstream out;
  csv::write_row(out, {"kind", "id", "reason", "detail"});
  for (const auto& [kind, rejections] : groups) write_rejections_csv(out, rejections, kind);
  return out.str();
}

std::vector<DispersionRow> repository_dispersion(std::span<const LinkedPublication> pubs, const std::set<int>& years,
                                                 std::size_t min_count, StdDevConvention convention) {
  std::vector<DispersionRow> rows;
  for (int year : years) {
    const auto profiles = repo_profiles(pubs, year, min_count, ProfileMetric::kLag);
    if (profiles.size() < 2) continue;
    std::vector<double> single, any;
    for (const RepoProfile& p : profiles) {
      single.push_back(p.single_value);
      any.push_back(p.any_value);
    }
    rows.push_back({year, "repository_single_lag", profiles.size(), dispersion(single, convention)});
    rows.push_back({year, "repository_any_lag", profiles.size(), dispersion(any, convention)});
  }
  return rows;
}

std::vector<DispersionRow> subject_dispersion(std::span<const LagAggregate> subject_rows, StdDevConvention convention) {
  std::map<int, std::vector<double>> by_year;
  for (const LagAggregate& a : subject_rows) {
    if (a.year) by_year[*a.year].push_back(a.mean_lag_days);
  }
  std::vector<DispersionRow> rows;
  for (const auto& [year, means] : by_year) {
    if (means.size() < 2) continue;
    rows.push_back({year, "subject_mean_lag", means.size(), dispersion(means, convention)});
  }
  return rows;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::vector<std::string_view> PipelineConfig::keys() {
  return {"registry", "repository", "repo_registry", "reader_profiles", "panel_mapping", "ledger", "scraped",
          "output_dir", "cutoff_days", "caps", "min_repo_count", "exclude_years", "endpoints", "polite_delay_ms",
          "histogram_widths", "jobs", "force", "stddev"};
}

void PipelineConfig::set(std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  auto int_list = [&](std::vector<int>& out) {
    out.clear();
    for (const std::string& item : split_list(value)) out.push_back(static_cast<int>(parse_integer(key, item)));
  };
  if (key == "registry") registry = value;
  else if (key == "repository") repository = value;
  else if (key == "repo_registry") repo_registry = value;
  else if (key == "reader_profiles") reader_profiles = value;
  else if (key == "panel_mapping") panel_mapping = value;
  else if (key == "ledger") ledger = value;
  else if (key == "scraped") scraped = value;
  else if (key == "output_dir") output_dir = value;
  else if (key == "cutoff_days") cutoff_days = static_cast<int>(parse_integer(key, value));
  else if (key == "caps") int_list(caps);
  else if (key == "min_repo_count") {
    const long long v = parse_integer(key, value);
    if (v < 0) throw DataError("min_repo_count must be non-negative");
    min_repo_count = static_cast<std::size_t>(v);
  } else if (key == "exclude_years") {
    std::vector<int> years;
    int_list(years);
    excluded_years = std::set<int>(years.begin(), years.end());
  } else if (key == "endpoints") endpoints = split_list(value);
  else if (key == "polite_delay_ms") polite_delay_ms = static_cast<int>(parse_integer(key, value));
  else if (key == "histogram_widths") int_list(histogram_widths);
  else if (key == "jobs") {
    const long long v = parse_integer(key, value);
    if (v < 1) throw DataError("jobs must be at least 1");
    jobs = static_cast<unsigned>(v);
  } else if (key == "force") force = parse_bool(key, value);
  else if (key == "stddev") {
    if (value == "population") stddev = StdDevConvention::kPopulation;
    else if (value == "sample") stddev = StdDevConvention::kSample;
    else throw DataError("stddev must be 'population' or 'sample'");
  } else {
    throw DataError("unknown config key '" + std::string(key) + "'");
  }
}

PipelineConfig PipelineConfig::from_file(const fs::path& path) {
  std::ifstream in = open_input(path, "config file");
  PipelineConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line.substr(0, line.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    config.set(trim(text.substr(0, eq)), text.substr(eq + 1));
  }
  return config;
}

void PipelineConfig::validate() const {
  if (cutoff_days <= 0) throw DataError("cutoff_days must be positive");
  for (int cap : caps) {
    if (cap <= 0) throw DataError("caps must be positive");
  }
  for (int w : histogram_widths) {
    if (w <= 0) throw DataError("histogram widths must be positive");
  }
  if (polite_delay_ms < 0) throw DataError("polite_delay_ms must be non-negative");
}

ExitCode exit_code_for(const std::exception& error) {
  if (dynamic_cast<const DataError*>(&error)) return ExitCode::kDataValidation;
  if (dynamic_cast<const IoError*>(&error)) return ExitCode::kIo;
  if (dynamic_cast<const NetworkError*>(&error)) return ExitCode::kNetwork;
  if (dynamic_cast<const std::invalid_argument*>(&error)) return ExitCode::kDataValidation;
  return ExitCode::kIo;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult result;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::string stage = "config";

  if (config.output_dir.empty()) {
    result.exit_code = ExitCode::kDataValidation;
    result.failed_stage = stage;
    result.error = "output_dir is not set";
    return result;
  }
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    result.exit_code = ExitCode::kIo;
    result.failed_stage = stage;
    result.error = "cannot create output directory: " + ec.message();
    return result;
  }
  if (!config.force && fs::exists(config.output_dir / "manifest.json")) {
    result.exit_code = ExitCode::kIo;
    result.failed_stage = stage;
    result.error = "output directory already holds a run; pass --force to overwrite";
    return result;
  }

  OutputSet outputs(config.output_dir, config.force);
  try {
    config.validate();

    stage = "ingest";
    log_event(LogLevel::kInfo, "pipeline.stage", {{"stage", stage}});
    std::vector<RawRegistryRecord> raw_registry;
    std::vector<RepositoryRecord> raw_repository;
    std::map<std::string, RepositoryInfo> repositories;
    {
      auto in = open_input(config.registry, "registry");
      raw_registry = read_registry_jsonl(in);
    }
    {
      auto in = open_input(config.repository, "repository");
      raw_repository = read_repository_jsonl(in);
    }
    {
      auto in = open_input(config.repo_registry, "repository registry");
      repositories = read_repository_registry(in);
    }
    HarvestLedger ledger;
    if (!config.ledger.empty()) {
      auto in = open_input(config.ledger, "ledger");
      ledger = HarvestLedger::read_jsonl(in);
    }
    std::map<std::string, CalendarDate> scraped;
    if (!config.scraped.empty()) {
      auto in = open_input(config.scraped, "scraped dates");
      scraped = read_date_overrides_csv(in);
    }

    stage = "filter";
    log_event(LogLevel::kInfo, "pipeline.stage", {{"stage", stage}});
    if (raw_registry.empty()) throw DataError("registry input contains no records");
    const RegistryFilterResult registry = filter_registry(raw_registry);
    const RepositoryFilterResult repository = filter_repository(raw_repository);
    if (registry.kept.empty()) throw DataError("no registry record survived filtering");
    summary["registry_records"] = raw_registry.size();
    summary["registry_kept"] = registry.kept.size();
    summary["repository_records"] = raw_repository.size();
    summary["repository_kept"] = repository.kept.size();

    stage = "link";
    log_event(LogLevel::kInfo, "pipeline.stage", {{"stage", stage}, {"jobs", config.jobs}});
    const LinkResult links = link(registry.kept, repository.kept, config.jobs);
    summary["link_pairs"] = links.pairs.size();
    summary["ambiguous_keys"] = links.ambiguous.size();
    summary["unmatched_repository_records"] = links.unmatched_repository;
    {
      std::ostringstream out;
      write_ambiguous_csv(out, links.ambiguous);
      outputs.write("ambiguous_keys.csv", out.str());
    }

    stage = "validate-doi";
    const MatchingAccuracyReport accuracy = validate_links_by_doi(links.pairs, repository.kept);
    outputs.write("accuracy_report.json", accuracy_report_json(accuracy));
    {
      std::unordered_map<std::string_view, const RepositoryRecord*> by_id;
      for (const RepositoryRecord& r : repository.kept) by_id.emplace(r.record_id, &r);
      std::ostringstream out;
      csv::write_row(out, {"registry_doi", "repository_record_id", "doi_comparison"});
      for (const LinkPair& p : links.pairs) {
        csv::write_row(out, {p.registry_doi, p.repository_record_id,
                             std::string(to_string(compare_dois(p.registry_doi, by_id.at(p.repository_record_id)->doi)))});
      }
      outputs.write("link_pairs.csv", out.str());
    }

    stage = "resolve-dates";
    log_event(LogLevel::kInfo, "pipeline.stage", {{"stage", stage}});
    const ResolveResult resolved = resolve_deposit_dates(repository.kept, ledger, scraped);
    {
      std::ostringstream out;
      csv::write_row(out, {"record_id", "repo_id", "deposit_date", "provenance"});
      for (const RepositoryRecord& r : resolved.records) {
        csv::write_row(out, {r.record_id, r.repo_id, r.deposit_date->iso(), std::string(to_string(r.provenance))});
      }
      outputs.write("deposit_dates.csv", out.str());
    }
    outputs.write("rejections.csv", rejections_csv({{"registry", registry.rejected},
                                                    {"repository", repository.rejected},
                                                    {"unkeyed", links.unkeyed},
                                                    {"deposit_date", resolved.dropped}}));

    stage = "group";
    std::vector<LinkedPublication> pubs = group_by_doi(links.pairs, registry.kept, resolved.records, repositories);
    summary["publications"] = pubs.size();
    if (pubs.empty()) throw DataError("no linked publication has a deposit date");

    stage = "tag-subjects";
    std::map<std::string, SubjectProfile> profiles;
    if (!config.reader_profiles.empty()) {
      auto in = open_input(config.reader_profiles, "reader profiles");
      profiles = read_reader_profiles(in);
    }
    PanelMapping custom_mapping;
    const PanelMapping* mapping = &PanelMapping::builtin();
    if (!config.panel_mapping.empty()) {
      auto in = open_input(config.panel_mapping, "panel mapping");
      custom_mapping = PanelMapping::from_csv(in);
      mapping = &custom_mapping;
    }
    const SubjectTagSummary tagging = tag_publications(pubs, profiles, *mapping);
    summary["subject_tagged"] = tagging.tagged;
    summary["subject_untagged"] = tagging.untagged;
    {
      std::ostringstream out;
      write_linked_jsonl(out, pubs);
      outputs.write("linked_publications.jsonl", out.str());
    }

    stage = "analyze";
    log_event(LogLevel::kInfo, "pipeline.stage", {{"stage", stage}, {"publications", pubs.size()}});
    AggregateOptions lag_options;
    lag_options.group_by = GroupBy::kCountry;
    lag_options.excluded_years = config.excluded_years;
    lag_options.stddev = config.stddev;
    outputs.write("lag_country_year.csv", render_lag_csv(aggregate_lag(pubs, lag_options)));
    for (int cap : config.caps) {
      AggregateOptions capped = lag_options;
      capped.cap_days = cap;
      outputs.write("lag_country_year_cap" + std::to_string(cap) + ".csv", render_lag_csv(aggregate_lag(pubs, capped)));
    }
    for (bool single : {false, true}) {
      AggregateOptions repo_options = lag_options;
      repo_options.group_by = GroupBy::kRepository;
      repo_options.single_scope = single;
      outputs.write(single ? "lag_repository_year_single.csv" : "lag_repository_year_any.csv",
                    render_lag_csv(aggregate_lag(pubs, repo_options)));
    }
    AggregateOptions subject_options = lag_options;
    subject_options.group_by = GroupBy::kSubject;
    const auto subject_rows = aggregate_lag(pubs, subject_options);
    outputs.write("lag_subject_year.csv", render_lag_csv(subject_rows));

    ComplianceOptions compliance;
    compliance.cutoff_days = config.cutoff_days;
    compliance.excluded_years = config.excluded_years;
    for (GroupBy g : {GroupBy::kCountry, GroupBy::kPanel, GroupBy::kSubject}) {
      compliance.group_by = g;
      const ComplianceReport report = compliance_proportions(pubs, compliance);
      outputs.write("compliance_" + std::string(to_string(g)) + "_year.csv", render_compliance_csv(report));
    }

    std::set<int> years;
    for (const LinkedPublication& p : pubs) {
      if (!config.excluded_years.contains(p.registry.published.year())) years.insert(p.registry.published.year());
    }
    for (ProfileMetric metric : {ProfileMetric::kLag, ProfileMetric::kCompliance}) {
      std::vector<RepoProfile> rows;
      for (int year : years) {
        auto part = repo_profiles(pubs, year, config.min_repo_count, metric, config.cutoff_days);
        std::move(part.begin(), part.end(), std::back_inserter(rows));
      }
      outputs.write(metric == ProfileMetric::kLag ? "repo_profiles_lag.csv" : "repo_profiles_compliance.csv",
                    render_repo_profiles_csv(rows));
    }
    auto dispersion_rows = repository_dispersion(pubs, years, config.min_repo_count, config.stddev);
    const auto subject_disp = subject_dispersion(subject_rows, config.stddev);
    dispersion_rows.insert(dispersion_rows.end(), subject_disp.begin(), subject_disp.end());
    outputs.write("dispersion.csv", render_dispersion_csv(dispersion_rows));

    std::vector<std::set<std::string>> tag_sets;
    for (const LinkedPublication& p : pubs) {
      if (p.subjects) tag_sets.push_back(*p.subjects);
    }
    outputs.write("subject_counts.csv", render_fractional_counts_csv(fractional_counts(tag_sets)));

    std::vector<std::int64_t> lags;
    for (const LinkedPublication& p : pubs) {
      if (!config.excluded_years.contains(p.registry.published.year())) lags.push_back(deposit_lag(p, LagScope::any()));
    }
    for (int width : config.histogram_widths) {
      Histogram h = lag_histogram(lags, width);
      h.cutoff_marker_days = config.cutoff_days;
      outputs.write("histogram_w" + std::to_string(width) + ".csv", render_histogram_csv(h));
    }
    outputs.write("acceptance_audit.json", render_acceptance_audit_json(audit_acceptance_dates(registry.kept)));
    summary["cutoff_marker_days"] = config.cutoff_days;

    stage = "report";
    outputs.write("summary.json", summary.dump(2) + "\n");
    outputs.commit();
    result.files = outputs.sorted_entries();
    result.digest = digest_of(result.files);
    write_manifest(config.output_dir, result, summary);
    log_event(LogLevel::kInfo, "pipeline.done", {{"digest", result.digest}, {"files", result.files.size()}});
    return result;
  } catch (const std::exception& e) {
    result.exit_code = exit_code_for(e);
    result.failed_stage = stage;
    result.error = e.what();
    result.files = outputs.sorted_entries();
    for (ManifestEntry& entry : result.files) entry.file += ".partial";
    result.digest = digest_of(result.files);
    log_event(LogLevel::kError, "pipeline.failed", {{"stage", stage}, {"error", result.error}});
    try {
      write_manifest(config.output_dir, result, summary);
    } catch (const std::exception&) {
      // the original failure is what gets reported
    }
    return result;
  }
}

}  // namespace depositlag
