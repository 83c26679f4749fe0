#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "depositlag/model.h"

namespace depositlag {

inline constexpr int kDefaultCutoffDays = 90;

enum class Compliance { kLikelyCompliant, kDefinitelyNonCompliant, kNotApplicableNoIssn };

std::string_view to_string(Compliance compliance);

// ANY uses the earliest deposit anywhere; SINGLE the deposit in one repository.
struct LagScope {
  std::optional<std::string> repo_id;

  static LagScope any() { return {}; }
  static LagScope single(std::string repo) { return {std::move(repo)}; }
};

// Publication-to-deposit lag in days. For SINGLE, a repository holding
// several records of the publication contributes its earliest one.
// Throws DataError if SINGLE names a repository without a deposit.
std::int64_t deposit_lag(const LinkedPublication& publication, const LagScope& scope);

Compliance classify_compliance(std::int64_t lag_days, bool has_issn, int cutoff_days = kDefaultCutoffDays);

enum class GroupBy { kCountry, kRepository, kSubject, kPanel };
enum class StdDevConvention { kPopulation, kSample };

std::string_view to_string(GroupBy group_by);

struct AggregateOptions {
  GroupBy group_by = GroupBy::kCountry;
  bool per_year = true;
  std::optional<int> cap_days;        // drop observations with lag > cap
  bool single_scope = false;          // only meaningful for kRepository
  std::set<int> excluded_years;
  StdDevConvention stddev = StdDevConvention::kPopulation;
};

struct LagAggregate {
  std::string group_key;
  std::optional<int> year;
  std::size_t count = 0;   // contributing publications
  double weight = 0.0;     // fractional count; equals count except for subjects
  double mean_lag_days = 0.0;
  double stddev_days = 0.0;
  std::int64_t min_days = 0;
  std::int64_t max_days = 0;
};

// Countries and panels count a publication fully in each of its groups;
// subjects count it 1/k in each of its k subjects. Sorted by (key, year).
std::vector<LagAggregate> aggregate_lag(std::span<const LinkedPublication> publications,
                                        const AggregateOptions& options);

struct ComplianceOptions {
  GroupBy group_by = GroupBy::kCountry;
  bool per_year = true;
  bool single_scope = false;
  int cutoff_days = kDefaultCutoffDays;
  std::set<int> excluded_years;
};

struct ComplianceRow {
  std::string group_key;
  std::optional<int> year;
  double likely_fraction = 0.0;
  double non_compliant_fraction = 0.0;
  std::size_t excluded_no_issn = 0;
  double weight = 0.0;  // ISSN-bearing publications behind the fractions
};

struct ComplianceReport {
  std::vector<ComplianceRow> rows;
  // Groups with no ISSN-bearing publication: (key, year) -> excluded count.
  std::vector<ComplianceRow> omitted;
};

ComplianceReport compliance_proportions(std::span<const LinkedPublication> publications,
                                        const ComplianceOptions& options);

enum class ProfileMetric { kLag, kCompliance };

struct RepoProfile {
  std::string repo_id;
  int year = 0;
  std::size_t count = 0;
  double single_value = 0.0;
  double any_value = 0.0;
};

// Repositories holding strictly more than min_count publications from `year`.
// kLag: mean lag, ascending. kCompliance: likely-compliant share over
// ISSN-bearing publications, descending.
std::vector<RepoProfile> repo_profiles(std::span<const LinkedPublication> publications, int year,
                                       std::size_t min_count = 100, ProfileMetric metric = ProfileMetric::kLag,
                                       int cutoff_days = kDefaultCutoffDays);

struct Dispersion {
  double range_days = 0.0;
  double stddev_days = 0.0;
};

// Throws DataError for fewer than two values.
Dispersion dispersion(std::span<const double> values, StdDevConvention convention = StdDevConvention::kPopulation);

struct HistogramBin {
  std::int64_t lower_inclusive = 0;
  std::int64_t upper_exclusive = 0;
  std::size_t count = 0;

  friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

struct Histogram {
  int bin_width_days = 0;
  std::vector<HistogramBin> bins;  // contiguous; one bin boundary at lag 0
  std::int64_t cutoff_marker_days = kDefaultCutoffDays;
};

Histogram lag_histogram(std::span<const std::int64_t> lags, int bin_width_days);

struct AcceptanceAudit {
  std::size_t populated = 0;
  std::size_t equal_to_published = 0;
  std::size_t later_than_published = 0;
  std::size_t earlier_than_published = 0;

  std::optional<double> equal_share() const;
};

AcceptanceAudit audit_acceptance_dates(std::span<const RegistryRecord> records);

}  // namespace depositlag
