#include "depositlag/reports.h"

#include <sstream>

#include <json.hpp>

#include "depositlag/csv.h"

namespace depositlag {
namespace {

std::string year_field(const std::optional<int>& year) { return year ? std::to_string(*year) : "all"; }

}  // namespace

std::string render_lag_csv(std::span<const LagAggregate> rows) {
  std::ostringstream out;
  csv::write_row(out, {"group_key", "year", "count", "mean_lag_days", "stddev_days", "min_days", "max_days",
                       "weight"});
  for (const LagAggregate& r : rows) {
    csv::write_row(out, {r.group_key, year_field(r.year), std::to_string(r.count), csv::format_fixed(r.mean_lag_days, 2),
                         csv::format_fixed(r.stddev_days, 2), std::to_string(r.min_days), std::to_string(r.max_days),
                         csv::format_fixed(r.weight, 4)});
  }
  return out.str();
}

std::string render_compliance_csv(const ComplianceReport& report) {
  std::ostringstream out;
  csv::write_row(out, {"group_key", "year", "likely_fraction", "non_compliant_fraction", "excluded_no_issn"});
  for (const ComplianceRow& r : report.rows) {
    csv::write_row(out, {r.group_key, year_field(r.year), csv::format_fixed(r.likely_fraction, 4),
                         csv::format_fixed(r.non_compliant_fraction, 4), std::to_string(r.excluded_no_issn)});
  }
  return out.str();
}

std::string render_repo_profiles_csv(std::span<const RepoProfile> rows) {
  std::ostringstream out;
  csv::write_row(out, {"repo_id", "year", "count", "single_value", "any_value"});
  for (const RepoProfile& r : rows) {
    csv::write_row(out, {r.repo_id, std::to_string(r.year), std::to_string(r.count), csv::format_fixed(r.single_value, 4),
                         csv::format_fixed(r.any_value, 4)});
  }
  return out.str();
}

std::string render_histogram_csv(const Histogram& histogram) {
  std::ostringstream out;
  csv::write_row(out, {"bin_lower", "bin_upper", "count"});
  for (const HistogramBin& b : histogram.bins) {
    csv::write_row(out, {std::to_string(b.lower_inclusive), std::to_string(b.upper_exclusive), std::to_string(b.count)});
  }
  return out.str();
}

std::string render_fractional_counts_csv(const std::map<std::string, double>& counts) {
  std::ostringstream out;
  csv::write_row(out, {"subject", "fractional_count"});
  for (const auto& [subject, count] : counts) csv::write_row(out, {subject, csv::format_fixed(count, 4)});
  return out.str();
}

std::string render_acceptance_audit_json(const AcceptanceAudit& audit) {
  nlohmann::ordered_json o;
  o["populated"] = audit.populated;
  o["equal_to_published"] = audit.equal_to_published;
  o["later_than_published"] = audit.later_than_published;
  o["earlier_than_published"] = audit.earlier_than_published;
  const auto share = audit.equal_share();
  o["equal_share"] = share ? nlohmann::ordered_json(*share) : nlohmann::ordered_json();
  return o.dump(2) + "\n";
}

std::string render_dispersion_csv(std::span<const DispersionRow> rows) {
  std::ostringstream out;
  csv::write_row(out, {"year", "metric", "groups", "range_days", "stddev_days"});
  for (const DispersionRow& r : rows) {
    csv::write_row(out, {std::to_string(r.year), r.metric, std::to_string(r.groups),
                         csv::format_fixed(r.value.range_days, 2), csv::format_fixed(r.value.stddev_days, 2)});
  }
  return out.str();
}

}  // namespace depositlag
