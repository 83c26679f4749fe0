#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "depositlag/csv.h"
#include "depositlag/harvest.h"
#include "depositlag/linkage.h"
#include "depositlag/log.h"
#include "depositlag/pipeline.h"
#include "depositlag/records_io.h"
#include "depositlag/reports.h"
#include "depositlag/scrape.h"
#include "depositlag/subjects.h"
#include "depositlag/synth.h"

namespace fs = std::filesystem;
using namespace depositlag;

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
  bool list = false;
};

// One flag per config key.
constexpr FlagSpec kConfigFlags[] = {
    {"--registry", "registry", "registry records (JSONL)"},
    {"--repository", "repository", "repository records (JSONL)"},
    {"--repo-registry", "repo_registry", "repository registry (JSON array)"},
    {"--reader-profiles", "reader_profiles", "reader-count profiles (JSONL)"},
    {"--panel-mapping", "panel_mapping", "subject to panel CSV"},
    {"--ledger", "ledger", "first-seen ledger (JSONL)"},
    {"--scraped", "scraped", "scraped deposit dates (CSV record_id,deposit_date)"},
    {"--out", "output_dir", "output directory"},
    {"--cutoff-days", "cutoff_days", "compliance cutoff in days"},
    {"--cap-days", "caps", "lag caps, comma separated or repeated", true},
    {"--min-repo-count", "min_repo_count", "repositories need strictly more publications than this"},
    {"--exclude-years", "exclude_years", "publication years left out of reports", true},
    {"--endpoints", "endpoints", "OAI-PMH base URLs", true},
    {"--polite-delay-ms", "polite_delay_ms", "pause between requests to one endpoint"},
    {"--bin-width", "histogram_widths", "histogram bin widths in days", true},
    {"--jobs", "jobs", "worker threads within a stage"},
    {"--stddev", "stddev", "population or sample"},
};

struct ConfigArgs {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> overrides;
  bool force = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "config file of key = value lines");
    for (const FlagSpec& spec : kConfigFlags) {
      const std::string key = spec.key;
      if (spec.list) {
        app->add_option_function<std::vector<std::string>>(
               spec.flag,
               [this, key](const std::vector<std::string>& values) {
                 std::string joined;
                 for (const std::string& v : values) joined += (joined.empty() ? "" : ",") + v;
                 overrides.emplace_back(key, joined);
               },
               spec.help)
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
      } else {
        app->add_option_function<std::string>(
            spec.flag, [this, key](const std::string& value) { overrides.emplace_back(key, value); }, spec.help);
      }
    }
    app->add_flag("--force", force, "overwrite existing outputs");
  }

  PipelineConfig resolve() const {
    PipelineConfig config = config_file.empty() ? PipelineConfig{} : PipelineConfig::from_file(config_file);
    for (const auto& [key, value] : overrides) config.set(key, value);
    if (force) config.force = true;
    config.validate();
    return config;
  }
};

void require(const fs::path& path, const char* key) {
  if (path.empty()) throw DataError(std::string("missing required setting '") + key + "'");
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

void write_file(const fs::path& path, const std::string& content, bool force) {
  if (!force && fs::exists(path)) throw IoError(path.string() + " exists; pass --force to overwrite");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path partial = path;
  partial += ".partial";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + partial.string());
    out << content;
    if (!out) throw IoError("write failed for " + partial.string());
  }
  fs::rename(partial, path);
  log_event(LogLevel::kInfo, "output.written", {{"path", path.string()}});
}

struct Filtered {
  RegistryFilterResult registry;
  RepositoryFilterResult repository;
};

Filtered ingest_inputs(const PipelineConfig& config) {
  require(config.registry, "registry");
  require(config.repository, "repository");
  auto reg_in = open_input(config.registry);
  auto repo_in = open_input(config.repository);
  const auto raw_registry = read_registry_jsonl(reg_in);
  const auto raw_repository = read_repository_jsonl(repo_in);
  if (raw_registry.empty()) throw DataError("registry input contains no records");
  Filtered out{filter_registry(raw_registry), filter_repository(raw_repository)};
  if (out.registry.kept.empty()) throw DataError("no registry record survived filtering");
  log_event(LogLevel::kInfo, "ingest.filtered",
            {{"registry_in", raw_registry.size()},
             {"registry_kept", out.registry.kept.size()},
             {"repository_in", raw_repository.size()},
             {"repository_kept", out.repository.kept.size()}});
  return out;
}

std::string rejections_csv(const Filtered& filtered, std::span<const Rejection> unkeyed = {}) {
  std::ostringstream out;
  csv::write_row(out, {"kind", "id", "reason", "detail"});
  write_rejections_csv(out, filtered.registry.rejected, "registry");
  write_rejections_csv(out, filtered.repository.rejected, "repository");
  write_rejections_csv(out, unkeyed, "unkeyed");
  return out.str();
}

int cmd_ingest(const ConfigArgs& args) {
  const PipelineConfig config = args.resolve();
  require(config.output_dir, "output_dir");
  const Filtered filtered = ingest_inputs(config);
  write_file(config.output_dir / "rejections.csv", rejections_csv(filtered), config.force);
  return 0;
}

int cmd_link(const ConfigArgs& args) {
  const PipelineConfig config = args.resolve();
  require(config.output_dir, "output_dir");
  const Filtered filtered = ingest_inputs(config);
  const LinkResult links = link(filtered.registry.kept, filtered.repository.kept, config.jobs);
  std::ostringstream pairs;
  csv::write_row(pairs, {"registry_doi", "repository_record_id", "norm_title", "year", "norm_family"});
  for (const LinkPair& p : links.pairs) {
    csv::write_row(pairs, {p.registry_doi, p.repository_record_id, p.key.norm_title, std::to_string(p.key.year),
                           p.key.norm_family});
  }
  std::ostringstream ambiguous;
  write_ambiguous_csv(ambiguous, links.ambiguous);
  write_file(config.output_dir / "link_pairs.csv", pairs.str(), config.force);
  write_file(config.output_dir / "ambiguous_keys.csv", ambiguous.str(), config.force);
  write_file(config.output_dir / "rejections.csv", rejections_csv(filtered, links.unkeyed), config.force);
  log_event(LogLevel::kInfo, "link.done",
            {{"pairs", links.pairs.size()},
             {"ambiguous_keys", links.ambiguous.size()},
             {"unmatched_repository_records", links.unmatched_repository}});
  return 0;
}

int cmd_validate_doi(const ConfigArgs& args, const std::vector<std::size_t>& counts, bool to_stdout) {
  const PipelineConfig config = args.resolve();
  MatchingAccuracyReport report;
  if (!counts.empty()) {
    if (counts.size() != 5) throw DataError("--counts expects total,no_repo_doi,exact,substring,mismatch");
    report = MatchingAccuracyReport::from_counts(counts[0], counts[1], counts[2], counts[3], counts[4]);
  } else {
    const Filtered filtered = ingest_inputs(config);
    const LinkResult links = link(filtered.registry.kept, filtered.repository.kept, config.jobs);
    report = validate_links_by_doi(links.pairs, filtered.repository.kept);
  }
  const std::string json = accuracy_report_json(report);
  if (to_stdout) {
    std::cout << json;
    return 0;
  }
  require(config.output_dir, "output_dir");
  write_file(config.output_dir / "accuracy_report.json", json, config.force);
  return 0;
}

int cmd_analyze(const ConfigArgs& args) {
  const PipelineConfig config = args.resolve();
  require(config.registry, "registry");
  require(config.repository, "repository");
  require(config.repo_registry, "repo_registry");
  const PipelineResult result = run_pipeline(config);
  if (result.exit_code != ExitCode::kSuccess) {
    std::cerr << "error: " << result.failed_stage << ": " << result.error << '\n';
  }
  return static_cast<int>(result.exit_code);
}

int cmd_harvest(const ConfigArgs& args, const std::optional<std::string>& set, const std::optional<std::string>& from,
                const std::string& scrape_manifest) {
  const PipelineConfig config = args.resolve();
  if (config.endpoints.empty() && scrape_manifest.empty()) {
    throw DataError("nothing to harvest: set endpoints or --scrape-manifest");
  }
  bool network_failure = false;
  bool data_failure = false;

  if (!config.endpoints.empty()) {
    require(config.ledger, "ledger");
    HarvestLedger initial;
    if (fs::exists(config.ledger)) {
      auto in = open_input(config.ledger);
      initial = HarvestLedger::read_jsonl(in);
    }
    SharedLedger ledger(std::move(initial));
    std::vector<HarvestRequest> requests;
    for (const std::string& url : config.endpoints) requests.push_back({url, set, from});
    HarvestOptions options;
    options.polite_delay = std::chrono::milliseconds(config.polite_delay_ms);
    const auto reports = harvest_endpoints(requests, ledger, config.jobs, options, [] { return make_http_client(); });
    for (const HarvestReport& r : reports) {
      log_event(r.aborted ? LogLevel::kError : LogLevel::kInfo, "harvest.endpoint",
                {{"url", r.base_url},
                 {"pages", r.pages},
                 {"records", r.records},
                 {"record_errors", r.record_errors},
                 {"retries", r.retries},
                 {"restarts", r.restarts},
                 {"aborted", r.aborted},
                 {"error", r.error}});
      if (r.aborted) (r.network_failure ? network_failure : data_failure) = true;
    }
    // The ledger is a state file and is updated in place.
    std::ostringstream out;
    ledger.snapshot().write_jsonl(out);
    write_file(config.ledger, out.str(), true);
  }

  if (!scrape_manifest.empty()) {
    require(config.scraped, "scraped");
    auto in = open_input(scrape_manifest);
    const auto rows = csv::read_rows(in);
    auto http = make_http_client();
    std::map<std::string, CalendarDate> dates;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (i == 0 && !row.empty() && row[0] == "record_id") continue;
      if (row.size() < 3) throw DataError("scrape manifest row " + std::to_string(i + 1) + ": expected record_id,url,platform");
      try {
        const HttpResponse page = http->get(row[1]);
        if (page.status < 200 || page.status >= 300) {
          throw NetworkError("HTTP " + std::to_string(page.status) + " for " + row[1]);
        }
        const ScrapeResult scraped = scrape_deposit_date(page.body, platform_from_string(row[2]));
        dates[row[0]] = scraped.deposit_date;
        if (scraped.ambiguous) log_event(LogLevel::kWarn, "scrape.ambiguous", {{"record_id", row[0]}});
      } catch (const NetworkError& e) {
        network_failure = true;
        log_event(LogLevel::kError, "scrape.failed", {{"record_id", row[0]}, {"error", e.what()}});
      } catch (const DataError& e) {
        data_failure = true;
        log_event(LogLevel::kError, "scrape.failed", {{"record_id", row[0]}, {"error", e.what()}});
      }
    }
    std::ostringstream out;
    write_date_overrides_csv(out, dates);
    write_file(config.scraped, out.str(), config.force);
  }
  if (network_failure) return static_cast<int>(ExitCode::kNetwork);
  if (data_failure) return static_cast<int>(ExitCode::kDataValidation);
  return 0;
}

const std::vector<std::string> kReportTypes = {
    "lag-country",        "lag-repository",         "lag-subject",   "lag-panel",
    "compliance-country", "compliance-repository",  "compliance-subject", "compliance-panel",
    "repo-profiles-lag",  "repo-profiles-compliance", "histogram",   "subject-counts"};

GroupBy group_from(const std::string& type) {
  const std::string tail = type.substr(type.find('-') + 1);
  if (tail == "country") return GroupBy::kCountry;
  if (tail == "repository") return GroupBy::kRepository;
  if (tail == "subject") return GroupBy::kSubject;
  return GroupBy::kPanel;
}

int cmd_report(const ConfigArgs& args, const std::string& type, const std::string& linked_path, bool single_scope,
               bool to_stdout) {
  const PipelineConfig config = args.resolve();
  auto in = open_input(linked_path);
  const std::vector<LinkedPublication> pubs = read_linked_jsonl(in);
  std::string content;
  std::string name = type;
  if (type.starts_with("lag-")) {
    AggregateOptions options;
    options.group_by = group_from(type);
    options.single_scope = single_scope;
    options.excluded_years = config.excluded_years;
    options.stddev = config.stddev;
    const bool capped = std::any_of(args.overrides.begin(), args.overrides.end(),
                                    [](const auto& kv) { return kv.first == "caps"; });
    if (capped) {
      if (config.caps.size() != 1) throw DataError("report takes exactly one --cap-days value");
      options.cap_days = config.caps.front();
      name += "_cap" + std::to_string(config.caps.front());
    }
    content = render_lag_csv(aggregate_lag(pubs, options));
  } else if (type.starts_with("compliance-")) {
    ComplianceOptions options;
    options.group_by = group_from(type);
    options.single_scope = single_scope;
    options.cutoff_days = config.cutoff_days;
    options.excluded_years = config.excluded_years;
    content = render_compliance_csv(compliance_proportions(pubs, options));
  } else if (type.starts_with("repo-profiles-")) {
    const ProfileMetric metric = type.ends_with("lag") ? ProfileMetric::kLag : ProfileMetric::kCompliance;
    std::set<int> years;
    for (const LinkedPublication& p : pubs) years.insert(p.registry.published.year());
    std::vector<RepoProfile> rows;
    for (int year : years) {
      if (config.excluded_years.contains(year)) continue;
      auto part = repo_profiles(pubs, year, config.min_repo_count, metric, config.cutoff_days);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    content = render_repo_profiles_csv(rows);
  } else if (type == "histogram") {
    if (config.histogram_widths.size() != 1) throw DataError("histogram report takes exactly one --bin-width");
    std::vector<std::int64_t> lags;
    for (const LinkedPublication& p : pubs) {
      if (!config.excluded_years.contains(p.registry.published.year())) lags.push_back(deposit_lag(p, LagScope::any()));
    }
    Histogram h = lag_histogram(lags, config.histogram_widths.front());
    h.cutoff_marker_days = config.cutoff_days;
    content = render_histogram_csv(h);
    name += "_w" + std::to_string(config.histogram_widths.front());
  } else {
    std::vector<std::set<std::string>> tags;
    for (const LinkedPublication& p : pubs) {
      if (p.subjects) tags.push_back(*p.subjects);
    }
    content = render_fractional_counts_csv(fractional_counts(tags));
  }
  if (to_stdout) {
    std::cout << content;
    return 0;
  }
  require(config.output_dir, "output_dir");
  write_file(config.output_dir / (name + ".csv"), content, config.force);
  return 0;
}

int cmd_audit(const ConfigArgs& args, bool to_stdout) {
  const PipelineConfig config = args.resolve();
  require(config.registry, "registry");
  auto in = open_input(config.registry);
  const auto raw = read_registry_jsonl(in);
  const RegistryFilterResult filtered = filter_registry(raw);
  const std::string json = render_acceptance_audit_json(audit_acceptance_dates(filtered.kept));
  if (to_stdout) {
    std::cout << json;
    return 0;
  }
  require(config.output_dir, "output_dir");
  write_file(config.output_dir / "acceptance_audit.json", json, config.force);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"depositlag: repository deposit lag and compliance analytics"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "debug, info, warn or error")
      ->check(CLI::IsMember({"debug", "info", "warn", "error"}));

  ConfigArgs ingest_args, link_args, validate_args, analyze_args, harvest_args, report_args, audit_args;

  auto* ingest = app.add_subcommand("ingest", "read and filter inputs, write rejections.csv");
  ingest_args.attach(ingest);

  auto* harvest = app.add_subcommand("harvest", "harvest OAI-PMH endpoints into the ledger, scrape deposit dates");
  harvest_args.attach(harvest);
  std::optional<std::string> oai_set, oai_from;
  std::string scrape_manifest;
  harvest->add_option("--set", oai_set, "OAI-PMH set spec");
  harvest->add_option("--from", oai_from, "OAI-PMH from date (YYYY-MM-DD)");
  harvest->add_option("--scrape-manifest", scrape_manifest, "CSV record_id,url,platform of pages to scrape");

  auto* link_cmd = app.add_subcommand("link", "match registry and repository records");
  link_args.attach(link_cmd);

  auto* validate = app.add_subcommand("validate-doi", "estimate matching accuracy from DOIs");
  validate_args.attach(validate);
  std::vector<std::size_t> counts;
  bool validate_stdout = false;
  validate->add_option("--counts", counts, "total,no_repo_doi,exact,substring,mismatch")->delimiter(',');
  validate->add_flag("--stdout", validate_stdout, "print the report instead of writing a file");

  auto* analyze = app.add_subcommand("analyze", "run the full pipeline and write every report");
  analyze_args.attach(analyze);

  auto* report = app.add_subcommand("report", "render one report from linked_publications.jsonl");
  report_args.attach(report);
  std::string report_type, linked_path;
  bool report_single = false, report_stdout = false;
  report->add_option("--type", report_type, "report type")->required()->check(CLI::IsMember(kReportTypes));
  report->add_option("--linked", linked_path, "linked_publications.jsonl from analyze")->required();
  report->add_flag("--single", report_single, "single-repository lag scope (repository grouping only)");
  report->add_flag("--stdout", report_stdout, "print the report instead of writing a file");

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
  SynthConfig synth_config;
  std::string synth_out, lag_spec = "mixture";
  bool synth_force = false, noiseless = false;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--n", synth_config.n_publications, "publications")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_config.seed, "RNG seed");
  synth->add_option("--repositories", synth_config.n_repositories, "repositories");
  synth->add_option("--p-missing-repo-doi", synth_config.p_missing_repo_doi);
  synth->add_option("--p-doi-suffix-noise", synth_config.p_doi_suffix_noise);
  synth->add_option("--p-accent-noise", synth_config.p_accent_noise);
  synth->add_option("--p-decoy", synth_config.p_decoy);
  synth->add_option("--p-no-issn", synth_config.p_no_issn);
  synth->add_option("--p-accepted", synth_config.p_accepted);
  synth->add_option("--p-reader-profile", synth_config.p_reader_profile);
  synth->add_option("--year-min", synth_config.year_min);
  synth->add_option("--year-max", synth_config.year_max);
  synth->add_option("--lag", lag_spec, "mixture[:w0:w1:w2] | uniform:lo:hi | constant:days");
  synth->add_flag("--noiseless", noiseless, "disable accent, DOI and decoy noise");
  synth->add_flag("--force", synth_force, "overwrite existing outputs");

  auto* audit = app.add_subcommand("audit-acceptance", "compare acceptance and publication dates");
  audit_args.attach(audit);
  bool audit_stdout = false;
  audit->add_flag("--stdout", audit_stdout, "print the audit instead of writing a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kDataValidation);
  }

  set_min_log_level(log_level == "debug"  ? LogLevel::kDebug
                    : log_level == "warn" ? LogLevel::kWarn
                    : log_level == "error" ? LogLevel::kError
                                           : LogLevel::kInfo);
  try {
    if (*ingest) return cmd_ingest(ingest_args);
    if (*harvest) return cmd_harvest(harvest_args, oai_set, oai_from, scrape_manifest);
    if (*link_cmd) return cmd_link(link_args);
    if (*validate) return cmd_validate_doi(validate_args, counts, validate_stdout);
    if (*analyze) return cmd_analyze(analyze_args);
    if (*report) return cmd_report(report_args, report_type, linked_path, report_single, report_stdout);
    if (*audit) return cmd_audit(audit_args, audit_stdout);
    if (*synth) {
      synth_config.lag = LagDistribution::parse(lag_spec);
      if (noiseless) {
        synth_config.p_accent_noise = 0.0;
        synth_config.p_doi_suffix_noise = 0.0;
        synth_config.p_decoy = 0.0;
      }
      synth_config.validate();
      write_corpus(generate(synth_config), synth_out, synth_force);
      log_event(LogLevel::kInfo, "synth.done", {{"out", synth_out}, {"n", synth_config.n_publications}});
      return 0;
    }
  } catch (const std::exception& e) {
    log_event(LogLevel::kError, "command.failed", {{"error", e.what()}});
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(exit_code_for(e));
  }
  return 0;
}
