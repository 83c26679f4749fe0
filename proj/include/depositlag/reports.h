#pragma once

#include <span>
#include <string>

#include "depositlag/analytics.h"
#include "depositlag/subjects.h"

namespace depositlag {

// CSV renderings with stable column order. Means and standard deviations
// carry two decimals, fractions four; year is "all" when not split by year.
std::string render_lag_csv(std::span<const LagAggregate> rows);
std::string render_compliance_csv(const ComplianceReport& report);
std::string render_repo_profiles_csv(std::span<const RepoProfile> rows);
std::string render_histogram_csv(const Histogram& histogram);
std::string render_fractional_counts_csv(const std::map<std::string, double>& counts);
std::string render_acceptance_audit_json(const AcceptanceAudit& audit);

struct DispersionRow {
  int year = 0;
  std::string metric;  // e.g. "repository_single_lag"
  std::size_t groups = 0;
  Dispersion value;
};

std::string render_dispersion_csv(std::span<const DispersionRow> rows);

}  // namespace depositlag
