#include "depositlag/synth.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "depositlag/csv.h"
#include "depositlag/errors.h"
#include "depositlag/normalize.h"
#include "depositlag/records_io.h"
#include "synth_words.h"

namespace depositlag {
namespace {

// std::mt19937_64 output is fully specified by the standard; the std
// distributions are not, so sampling is done by hand.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return p >= 1.0 || (p > 0.0 && uniform01() < p); }

  // Inclusive range, unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  template <typename T, std::size_t N>
  const T& pick(const T (&items)[N]) {
    return items[static_cast<std::size_t>(uniform_int(0, N - 1))];
  }

  std::size_t weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (u < weights[i]) return i;
      u -= weights[i];
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

std::int64_t sample_lag(const LagDistribution& dist, Sampler& rng) {
  switch (dist.kind) {
    case LagDistribution::Kind::kConstant: return dist.constant_days;
    case LagDistribution::Kind::kUniform: return rng.uniform_int(dist.uniform_min, dist.uniform_max);
    case LagDistribution::Kind::kMixture: break;
  }
  switch (rng.weighted(dist.weights)) {
    case 0: return rng.uniform_int(dist.near_zero_min, dist.near_zero_max);
    case 1:
      // Triangular on [0, 2*mean]: sum of two uniforms, no libm involved.
      return rng.uniform_int(0, dist.short_mean_days) + rng.uniform_int(0, dist.short_mean_days);
    default: return rng.uniform_int(dist.tail_min, dist.tail_max);
  }
}

struct CountryWeight {
  std::string_view country;  // empty = no country (subject repository)
  double weight;
};

constexpr CountryWeight kCountries[] = {
    {"GB", 0.34}, {"US", 0.14}, {"IT", 0.08}, {"CH", 0.05}, {"NL", 0.05}, {"DE", 0.08},
    {"FR", 0.05}, {"ES", 0.05}, {"AU", 0.04}, {"", 0.12},
};

constexpr std::string_view kDoiPrefixes[] = {"10.1002", "10.1016", "10.1088", "10.1103", "10.1371", "10.3390"};
constexpr std::string_view kDoiSuffixNoise[] = {"/abstract", "/full", "/pdf", "/epdf"};

std::map<std::string, RepositoryInfo> make_repositories(const SynthConfig& config, Sampler& rng) {
  std::map<std::string, RepositoryInfo> repos;
  std::vector<double> weights;
  for (const auto& c : kCountries) weights.push_back(c.weight);
  for (std::size_t i = 0; i < config.n_repositories; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "repo-%03zu", i + 1);
    RepositoryInfo info;
    info.repo_id = id;
    const auto& country = kCountries[rng.weighted(weights)];
    if (country.country.empty()) {
      info.platform = rng.bernoulli(0.5) ? Platform::kArxiv : Platform::kZenodo;
      info.name = std::string(info.platform == Platform::kArxiv ? "Preprint Server " : "General Archive ") + id;
    } else {
      info.country = std::string(country.country);
      constexpr Platform kInstitutional[] = {Platform::kDspace, Platform::kEprints, Platform::kInvenio,
                                             Platform::kOther};
      info.platform = rng.pick(kInstitutional);
      info.name = "Institutional Repository " + std::string(country.country) + " " + id;
    }
    repos.emplace(info.repo_id, std::move(info));
  }
  return repos;
}

std::string make_title(Sampler& rng) {
  const auto words = rng.uniform_int(5, 11);
  std::string title;
  for (std::int64_t w = 0; w < words; ++w) {
    std::string word(rng.pick(detail::kTitleWords));
    if (w == 0 && !word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 32);
    if (!title.empty()) title += ' ';
    title += word;
  }
  return title;
}

// Variation a repository might introduce; normalization folds all of it away.
std::string perturb_text(const std::string& text, Sampler& rng) {
  std::string out = fold_to_ascii(text);
  switch (rng.uniform_int(0, 2)) {
    case 0:
      for (char& c : out) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
      }
      break;
    case 1:
      for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
      }
      break;
    default: break;
  }
  std::string spaced;
  for (char c : out) {
    if (c == ' ' && rng.bernoulli(0.15)) {
      spaced += rng.bernoulli(0.5) ? "-" : ": ";
    } else {
      spaced.push_back(c);
    }
  }
  if (rng.bernoulli(0.3)) spaced += '.';
  return spaced;
}

std::string decorate_doi(const std::string& doi, Sampler& rng) {
  switch (rng.uniform_int(0, 3)) {
    case 0: return "https://doi.org/" + doi;
    case 1: return "doi:" + doi;
    case 2: {
      std::string upper = doi;
      for (char& c : upper) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
      }
      return upper;
    }
    default: return " " + doi + " ";
  }
}

SubjectProfile make_profile(const std::string& doi, Sampler& rng) {
  SubjectProfile profile{doi, {}};
  const auto n_subjects = rng.uniform_int(1, 4);
  const long long top = rng.uniform_int(1, 60);
  for (std::int64_t s = 0; s < n_subjects; ++s) {
    const std::string label(rng.pick(detail::kSubjectLabels));
    long long count = s == 0 || rng.bernoulli(0.12) ? top : rng.uniform_int(0, top - 1 < 0 ? 0 : top - 1);
    auto [it, inserted] = profile.reader_counts.emplace(label, count);
    if (!inserted) it->second = std::max(it->second, count);
  }
  return profile;
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw DataError(std::string(name) + " must be a probability in [0,1]");
}

}  // namespace

LagDistribution LagDistribution::parse(std::string_view spec) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in{std::string(spec)};
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.empty()) throw DataError("empty lag distribution");
  LagDistribution dist;
  try {
    if (parts[0] == "mixture") {
      if (parts.size() == 4) {
        for (int i = 0; i < 3; ++i) dist.weights[i] = std::stod(parts[i + 1]);
      } else if (parts.size() != 1) {
        throw DataError("mixture takes three weights");
      }
    } else if (parts[0] == "uniform" && parts.size() == 3) {
      dist.kind = Kind::kUniform;
      dist.uniform_min = std::stoi(parts[1]);
      dist.uniform_max = std::stoi(parts[2]);
    } else if (parts[0] == "constant" && parts.size() == 2) {
      dist.kind = Kind::kConstant;
      dist.constant_days = std::stoi(parts[1]);
    } else {
      throw DataError("unknown lag distribution '" + std::string(spec) + "'");
    }
  } catch (const std::logic_error&) {
    throw DataError("bad number in lag distribution '" + std::string(spec) + "'");
  }
  return dist;
}

void SynthConfig::validate() const {
  if (n_publications == 0) throw DataError("n_publications must be positive");
  if (n_repositories == 0) throw DataError("n_repositories must be positive");
  check_probability(p_missing_repo_doi, "p_missing_repo_doi");
  check_probability(p_doi_suffix_noise, "p_doi_suffix_noise");
  check_probability(p_accent_noise, "p_accent_noise");
  check_probability(p_decoy, "p_decoy");
  check_probability(p_no_issn, "p_no_issn");
  check_probability(p_accepted, "p_accepted");
  check_probability(p_reader_profile, "p_reader_profile");
  if (year_min < 2013 || year_max < year_min) throw DataError("year range must lie within [2013, ...] and be ordered");
  if (multi_deposit_distribution.empty()) throw DataError("multi_deposit_distribution is empty");
  double total = 0.0;
  for (const auto& [k, p] : multi_deposit_distribution) {
    if (k < 1) throw DataError("deposit counts must be >= 1");
    if (static_cast<std::size_t>(k) > n_repositories) throw DataError("deposit count exceeds repository count");
    check_probability(p, "multi_deposit_distribution entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DataError("multi_deposit_distribution must sum to 1");
  if (lag.kind == LagDistribution::Kind::kMixture) {
    double w = 0.0;
    for (double x : lag.weights) {
      if (x < 0.0) throw DataError("lag mixture weights must be non-negative");
      w += x;
    }
    if (std::abs(w - 1.0) > 1e-9) throw DataError("lag mixture weights must sum to 1");
    if (lag.near_zero_max < lag.near_zero_min || lag.tail_max < lag.tail_min || lag.short_mean_days < 0) {
      throw DataError("lag mixture ranges are inverted");
    }
  } else if (lag.kind == LagDistribution::Kind::kUniform && lag.uniform_max < lag.uniform_min) {
    throw DataError("uniform lag range is inverted");
  }
}

SynthCorpus generate(const SynthConfig& config) {
  config.validate();
  Sampler rng(config.seed);
  SynthCorpus corpus;
  corpus.repositories = make_repositories(config, rng);
  std::vector<std::string> repo_ids;
  for (const auto& [id, info] : corpus.repositories) repo_ids.push_back(id);

  std::vector<int> deposit_counts;
  std::vector<double> deposit_weights;
  for (const auto& [k, p] : config.multi_deposit_distribution) {
    deposit_counts.push_back(k);
    deposit_weights.push_back(p);
  }

  std::unordered_set<std::string> used_keys;
  for (std::size_t i = 0; i < config.n_publications; ++i) {
    RawRegistryRecord reg;
    char doi[96];
    std::snprintf(doi, sizeof(doi), "%s/synth.%llu.%07zu", std::string(rng.pick(kDoiPrefixes)).c_str(),
                  static_cast<unsigned long long>(config.seed), i);
    reg.doi = doi;

    const int year = static_cast<int>(rng.uniform_int(config.year_min, config.year_max));
    const int month = static_cast<int>(rng.uniform_int(1, 12));
    const bool day_known = rng.bernoulli(0.8);
    const int day = day_known ? static_cast<int>(rng.uniform_int(1, 28)) : 1;
    const CalendarDate published(year, month, day);

    const auto n_authors = rng.uniform_int(1, 5);
    for (std::int64_t a = 0; a < n_authors; ++a) {
      reg.authors.push_back(AuthorName{std::string(rng.pick(detail::kGivenNames)),
                                       std::string(rng.pick(detail::kFamilyNames)), std::nullopt});
    }
    // Unique exact-match keys so that every miss is attributable to noise.
    std::string key;
    do {
      reg.title = make_title(rng);
      key = normalize_text(reg.title) + '|' + std::to_string(year) + '|' + normalize_text(*reg.authors[0].family);
    } while (!used_keys.insert(key).second);

    reg.published = PartialDate{year, month, day_known ? std::optional<int>(day) : std::nullopt};
    if (!rng.bernoulli(config.p_no_issn)) {
      char issn[16];
      std::snprintf(issn, sizeof(issn), "%04lld-%04lld", static_cast<long long>(rng.uniform_int(1000, 9999)),
                    static_cast<long long>(rng.uniform_int(1000, 9999)));
      reg.issn.push_back(issn);
    }
    if (rng.bernoulli(config.p_accepted)) {
      const CalendarDate accepted = published.plus_days(rng.bernoulli(0.7) ? 0 : rng.uniform_int(-120, 60));
      reg.accepted = PartialDate{accepted.year(), accepted.month(), accepted.day()};
    }

    if (rng.bernoulli(config.p_decoy)) {
      RawRegistryRecord decoy = reg;
      decoy.doi = reg.doi + ".decoy";
      reg.published.month.reset();
      reg.published.day.reset();
      corpus.registry.push_back(std::move(decoy));
    }

    // Deposits in distinct repositories.
    const int n_deposits = deposit_counts[rng.weighted(deposit_weights)];
    std::vector<std::string> pool = repo_ids;
    for (int d = 0; d < n_deposits; ++d) {
      const auto pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
      const std::string repo = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));

      RepositoryRecord rec;
      rec.repo_id = repo;
      rec.record_id = "oai:" + repo + ":" + std::to_string(i) + "-" + std::to_string(d);
      rec.year = year;
      const std::int64_t lag = sample_lag(config.lag, rng);
      rec.deposit_date = published.plus_days(lag);
      rec.provenance = DateProvenance::kSelf;

      const bool noisy = rng.bernoulli(config.p_accent_noise);
      rec.title = noisy ? perturb_text(reg.title, rng) : reg.title;
      for (const AuthorName& a : reg.authors) {
        if (rng.bernoulli(0.3)) {
          const std::string raw = *a.given + " " + *a.family;
          rec.authors.push_back(AuthorName{std::nullopt, std::nullopt, noisy ? fold_to_ascii(raw) : raw});
        } else {
          rec.authors.push_back(AuthorName{a.given, noisy ? fold_to_ascii(*a.family) : *a.family, std::nullopt});
        }
      }
      if (!rng.bernoulli(config.p_missing_repo_doi)) {
        std::string repo_doi = reg.doi;
        if (rng.bernoulli(config.p_doi_suffix_noise)) repo_doi += rng.pick(kDoiSuffixNoise);
        if (noisy) repo_doi = decorate_doi(repo_doi, rng);
        rec.doi = repo_doi;
      }

      const auto link = std::make_pair(reg.doi, rec.record_id);
      corpus.truth.true_links.insert(link);
      corpus.truth.true_lags[link] = lag;
      corpus.repository.push_back(std::move(rec));
    }

    if (rng.bernoulli(config.p_reader_profile)) corpus.reader_profiles.push_back(make_profile(reg.doi, rng));
    corpus.registry.push_back(std::move(reg));
  }
  return corpus;
}

LinkageMetrics evaluate_linkage(std::span<const LinkPair> predicted, const GroundTruth& truth) {
  if (truth.true_links.empty()) throw DataError("ground truth has no links");
  std::set<std::pair<std::string, std::string>> predicted_set;
  for (const LinkPair& p : predicted) predicted_set.emplace(p.registry_doi, p.repository_record_id);
  LinkageMetrics m;
  m.predicted = predicted_set.size();
  m.truth = truth.true_links.size();
  for (const auto& p : predicted_set) {
    if (truth.true_links.contains(p)) ++m.true_positives;
  }
  m.precision = m.predicted == 0 ? 0.0 : static_cast<double>(m.true_positives) / static_cast<double>(m.predicted);
  m.recall = static_cast<double>(m.true_positives) / static_cast<double>(m.truth);
  m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir, bool force) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name) {
    const fs::path path = dir / name;
    if (!force && fs::exists(path)) throw IoError(path.string() + " exists; pass --force to overwrite");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
  };
  {
    auto out = open("registry.jsonl");
    write_registry_jsonl(out, corpus.registry);
  }
  {
    auto out = open("repository.jsonl");
    write_repository_jsonl(out, corpus.repository);
  }
  {
    auto out = open("repositories.json");
    write_repository_registry(out, corpus.repositories);
  }
  {
    auto out = open("reader_profiles.jsonl");
    for (const SubjectProfile& p : corpus.reader_profiles) {
      nlohmann::ordered_json line;
      line["doi"] = p.doi;
      line["counts"] = p.reader_counts;
      out << line.dump() << '\n';
    }
  }
  {
    auto out = open("ground_truth.csv");
    csv::write_row(out, {"registry_doi", "repository_record_id", "true_lag_days"});
    for (const auto& link : corpus.truth.true_links) {
      csv::write_row(out, {link.first, link.second, std::to_string(corpus.truth.true_lags.at(link))});
    }
  }
}

}  // namespace depositlag
