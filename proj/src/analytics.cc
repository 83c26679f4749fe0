#include "depositlag/analytics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "depositlag/errors.h"

namespace depositlag {
namespace {

struct Membership {
  std::string key;
  double weight;
  std::int64_t lag;
};

using GroupId = std::pair<std::string, std::optional<int>>;

std::vector<Membership> memberships(const LinkedPublication& pub, GroupBy group_by, bool single_scope) {
  if (single_scope && group_by != GroupBy::kRepository) {
    throw std::invalid_argument("single-repository scope requires repository grouping");
  }
  std::vector<Membership> out;
  switch (group_by) {
    case GroupBy::kCountry: {
      const std::int64_t lag = deposit_lag(pub, LagScope::any());
      for (const std::string& c : pub.countries) out.push_back({c, 1.0, lag});
      break;
    }
    case GroupBy::kRepository: {
      std::set<std::string> repos;
      for (const Deposit& d : pub.deposits) repos.insert(d.repo_id);
      const std::int64_t any_lag = deposit_lag(pub, LagScope::any());
      for (const std::string& r : repos) {
        out.push_back({r, 1.0, single_scope ? deposit_lag(pub, LagScope::single(r)) : any_lag});
      }
      break;
    }
    case GroupBy::kSubject: {
      if (!pub.subjects || pub.subjects->empty()) break;
      const std::int64_t lag = deposit_lag(pub, LagScope::any());
      const double w = 1.0 / static_cast<double>(pub.subjects->size());
      for (const std::string& s : *pub.subjects) out.push_back({s, w, lag});
      break;
    }
    case GroupBy::kPanel: {
      if (!pub.panels) break;
      const std::int64_t lag = deposit_lag(pub, LagScope::any());
      for (const std::string& p : *pub.panels) {
        if (p != kNoCountry) out.push_back({p, 1.0, lag});
      }
      break;
    }
  }
  return out;
}

struct Observation {
  std::int64_t lag;
  double weight;
  friend auto operator<=>(const Observation&, const Observation&) = default;
};

// Sorted before summation so the floating-point result does not depend on input order.
LagAggregate summarize(const GroupId& id, std::vector<Observation> obs, StdDevConvention convention) {
  std::sort(obs.begin(), obs.end());
  LagAggregate agg;
  agg.group_key = id.first;
  agg.year = id.second;
  agg.count = obs.size();
  agg.min_days = obs.front().lag;
  agg.max_days = obs.back().lag;
  double weighted_sum = 0.0;
  for (const Observation& o : obs) {
    agg.weight += o.weight;
    weighted_sum += o.weight * static_cast<double>(o.lag);
  }
  agg.mean_lag_days = weighted_sum / agg.weight;
  double ss = 0.0;
  for (const Observation& o : obs) {
    const double d = static_cast<double>(o.lag) - agg.mean_lag_days;
    ss += o.weight * d * d;
  }
  const double denom = convention == StdDevConvention::kPopulation ? agg.weight : agg.weight - 1.0;
  agg.stddev_days = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;
  // Keep the mean inside [min, max] despite rounding.
  agg.mean_lag_days = std::clamp(agg.mean_lag_days, static_cast<double>(agg.min_days),
                                 static_cast<double>(agg.max_days));
  return agg;
}

}  // namespace

std::string_view to_string(Compliance compliance) {
  switch (compliance) {
    case Compliance::kLikelyCompliant: return "LIKELY_COMPLIANT";
    case Compliance::kDefinitelyNonCompliant: return "DEFINITELY_NON_COMPLIANT";
    case Compliance::kNotApplicableNoIssn: return "NOT_APPLICABLE_NO_ISSN";
  }
  return "NOT_APPLICABLE_NO_ISSN";
}

std::string_view to_string(GroupBy group_by) {
  switch (group_by) {
    case GroupBy::kCountry: return "country";
    case GroupBy::kRepository: return "repository";
    case GroupBy::kSubject: return "subject";
    case GroupBy::kPanel: return "panel";
  }
  return "country";
}

std::int64_t deposit_lag(const LinkedPublication& publication, const LagScope& scope) {
  const CalendarDate& published = publication.registry.published;
  if (!scope.repo_id) return date_diff_days(published, publication.earliest_deposit());
  std::optional<CalendarDate> earliest;
  for (const Deposit& d : publication.deposits) {
    if (d.repo_id == *scope.repo_id && (!earliest || d.deposit_date < *earliest)) earliest = d.deposit_date;
  }
  if (!earliest) {
    throw DataError("publication " + publication.doi + " has no deposit in repository " + *scope.repo_id);
  }
  return date_diff_days(published, *earliest);
}

Compliance classify_compliance(std::int64_t lag_days, bool has_issn, int cutoff_days) {
  if (!has_issn) return Compliance::kNotApplicableNoIssn;
  return lag_days <= cutoff_days ? Compliance::kLikelyCompliant : Compliance::kDefinitelyNonCompliant;
}

std::vector<LagAggregate> aggregate_lag(std::span<const LinkedPublication> publications,
                                        const AggregateOptions& options) {
  std::map<GroupId, std::vector<Observation>> groups;
  for (const LinkedPublication& pub : publications) {
    const int year = pub.registry.published.year();
    if (options.excluded_years.contains(year)) continue;
    for (Membership& m : memberships(pub, options.group_by, options.single_scope)) {
      if (options.cap_days && m.lag > *options.cap_days) continue;
      groups[{m.key, options.per_year ? std::optional<int>(year) : std::nullopt}].push_back({m.lag, m.weight});
    }
  }
  std::vector<LagAggregate> out;
  out.reserve(groups.size());
  for (auto& [id, obs] : groups) out.push_back(summarize(id, std::move(obs), options.stddev));
  return out;
}

ComplianceReport compliance_proportions(std::span<const LinkedPublication> publications,
                                        const ComplianceOptions& options) {
  struct Tally {
    std::vector<std::pair<double, bool>> applicable;  // (weight, likely)
    std::size_t excluded = 0;
  };
  std::map<GroupId, Tally> groups;
  for (const LinkedPublication& pub : publications) {
    const int year = pub.registry.published.year();
    if (options.excluded_years.contains(year)) continue;
    const bool has_issn = pub.registry.has_issn();
    for (const Membership& m : memberships(pub, options.group_by, options.single_scope)) {
      Tally& t = groups[{m.key, options.per_year ? std::optional<int>(year) : std::nullopt}];
      const Compliance c = classify_compliance(m.lag, has_issn, options.cutoff_days);
      if (c == Compliance::kNotApplicableNoIssn) {
        ++t.excluded;
      } else {
        t.applicable.emplace_back(m.weight, c == Compliance::kLikelyCompliant);
      }
    }
  }
  ComplianceReport report;
  for (auto& [id, tally] : groups) {
    ComplianceRow row;
    row.group_key = id.first;
    row.year = id.second;
    row.excluded_no_issn = tally.excluded;
    if (tally.applicable.empty()) {
      report.omitted.push_back(row);
      continue;
    }
    std::sort(tally.applicable.begin(), tally.applicable.end());
    double likely = 0.0;
    for (const auto& [w, is_likely] : tally.applicable) {
      row.weight += w;
      if (is_likely) likely += w;
    }
    row.likely_fraction = likely / row.weight;
    row.non_compliant_fraction = 1.0 - row.likely_fraction;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<RepoProfile> repo_profiles(std::span<const LinkedPublication> publications, int year,
                                       std::size_t min_count, ProfileMetric metric, int cutoff_days) {
  struct Acc {
    std::vector<std::int64_t> single_lags, any_lags;
    std::size_t count = 0, applicable = 0, single_likely = 0, any_likely = 0;
  };
  std::map<std::string, Acc> per_repo;
  for (const LinkedPublication& pub : publications) {
    if (pub.registry.published.year() != year) continue;
    std::set<std::string> repos;
    for (const Deposit& d : pub.deposits) repos.insert(d.repo_id);
    const std::int64_t any_lag = deposit_lag(pub, LagScope::any());
    for (const std::string& repo : repos) {
      Acc& acc = per_repo[repo];
      const std::int64_t single_lag = deposit_lag(pub, LagScope::single(repo));
      ++acc.count;
      acc.single_lags.push_back(single_lag);
      acc.any_lags.push_back(any_lag);
      if (pub.registry.has_issn()) {
        ++acc.applicable;
        if (single_lag <= cutoff_days) ++acc.single_likely;
        if (any_lag <= cutoff_days) ++acc.any_likely;
      }
    }
  }

  auto mean = [](std::vector<std::int64_t>& v) {
    std::sort(v.begin(), v.end());
    double s = 0.0;
    for (std::int64_t x : v) s += static_cast<double>(x);
    return s / static_cast<double>(v.size());
  };

  std::vector<RepoProfile> out;
  for (auto& [repo, acc] : per_repo) {
    if (acc.count <= min_count) continue;
    RepoProfile p{repo, year, acc.count, 0.0, 0.0};
    if (metric == ProfileMetric::kLag) {
      p.single_value = mean(acc.single_lags);
      p.any_value = mean(acc.any_lags);
    } else {
      if (acc.applicable == 0) continue;
      p.single_value = static_cast<double>(acc.single_likely) / static_cast<double>(acc.applicable);
      p.any_value = static_cast<double>(acc.any_likely) / static_cast<double>(acc.applicable);
    }
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [metric](const RepoProfile& a, const RepoProfile& b) {
    if (a.single_value != b.single_value) {
      return metric == ProfileMetric::kLag ? a.single_value < b.single_value : a.single_value > b.single_value;
    }
    return a.repo_id < b.repo_id;
  });
  return out;
}

Dispersion dispersion(std::span<const double> values, StdDevConvention convention) {
  if (values.size() < 2) throw DataError("dispersion needs at least two values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  const double mean = sum / static_cast<double>(sorted.size());
  double ss = 0.0;
  for (double v : sorted) ss += (v - mean) * (v - mean);
  const double n = static_cast<double>(sorted.size());
  const double denom = convention == StdDevConvention::kPopulation ? n : n - 1.0;
  return Dispersion{sorted.back() - sorted.front(), std::sqrt(ss / denom)};
}

Histogram lag_histogram(std::span<const std::int64_t> lags, int bin_width_days) {
  if (bin_width_days <= 0) throw std::invalid_argument("histogram bin width must be positive");
  Histogram h;
  h.bin_width_days = bin_width_days;
  if (lags.empty()) return h;
  const std::int64_t w = bin_width_days;
  auto bin_of = [w](std::int64_t lag) {
    std::int64_t q = lag / w;
    if (lag % w != 0 && lag < 0) --q;
    return q;
  };
  const auto [lo_it, hi_it] = std::minmax_element(lags.begin(), lags.end());
  const std::int64_t first = bin_of(*lo_it);
  const std::int64_t last = bin_of(*hi_it);
  h.bins.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t b = first; b <= last; ++b) h.bins.push_back(HistogramBin{b * w, (b + 1) * w, 0});
  for (std::int64_t lag : lags) ++h.bins[static_cast<std::size_t>(bin_of(lag) - first)].count;
  return h;
}

std::optional<double> AcceptanceAudit::equal_share() const {
  if (populated == 0) return std::nullopt;
  return static_cast<double>(equal_to_published) / static_cast<double>(populated);
}

AcceptanceAudit audit_acceptance_dates(std::span<const RegistryRecord> records) {
  AcceptanceAudit audit;
  for (const RegistryRecord& r : records) {
    if (!r.accepted) continue;
    ++audit.populated;
    if (*r.accepted == r.published) {
      ++audit.equal_to_published;
    } else if (*r.accepted > r.published) {
      ++audit.later_than_published;
    } else {
      ++audit.earlier_than_published;
    }
  }
  return audit;
}

}  // namespace depositlag
