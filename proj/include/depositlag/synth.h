#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "depositlag/linkage.h"
#include "depositlag/model.h"
#include "depositlag/subjects.h"

namespace depositlag {

// Deposit lag model. The default mixture has a mass around publication day,
// a short mode of a few weeks and a long retrospective tail.
struct LagDistribution {
  enum class Kind { kMixture, kUniform, kConstant };

  Kind kind = Kind::kMixture;
  std::array<double, 3> weights{0.35, 0.40, 0.25};  // near-zero, short, tail
  int near_zero_min = -60;
  int near_zero_max = 7;
  int short_mean_days = 30;
  int tail_min = 91;
  int tail_max = 2000;
  int uniform_min = 0;
  int uniform_max = 365;
  int constant_days = 0;

  // "mixture", "mixture:w0:w1:w2", "uniform:lo:hi", "constant:v"
  static LagDistribution parse(std::string_view spec);
};

struct SynthConfig {
  std::size_t n_publications = 1000;
  std::uint64_t seed = 42;
  double p_missing_repo_doi = 0.36;
  double p_doi_suffix_noise = 0.01;
  double p_accent_noise = 0.2;
  // A decoy registry record shares the key of a publication whose own
  // registry entry lacks a publication month, so linkage picks the decoy.
  double p_decoy = 0.0;
  std::map<int, double> multi_deposit_distribution{{1, 0.86}, {2, 0.10}, {3, 0.04}};
  LagDistribution lag;
  double p_no_issn = 0.07;
  double p_accepted = 0.01;
  double p_reader_profile = 0.82;
  int year_min = 2013;
  int year_max = 2018;
  std::size_t n_repositories = 30;

  // Throws DataError describing the first invalid field.
  void validate() const;
};

struct GroundTruth {
  std::set<std::pair<std::string, std::string>> true_links;  // (registry_doi, record_id)
  std::map<std::pair<std::string, std::string>, std::int64_t> true_lags;
};

struct SynthCorpus {
  std::vector<RawRegistryRecord> registry;
  std::vector<RepositoryRecord> repository;
  std::map<std::string, RepositoryInfo> repositories;
  std::vector<SubjectProfile> reader_profiles;
  GroundTruth truth;
};

// Deterministic for a given config; uses only integer RNG output so the
// corpus is identical across platforms.
SynthCorpus generate(const SynthConfig& config);

struct LinkageMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t truth = 0;
};

// Throws DataError on empty truth. Empty predictions score precision 0.
LinkageMetrics evaluate_linkage(std::span<const LinkPair> predicted, const GroundTruth& truth);

// Writes registry.jsonl, repository.jsonl, repositories.json,
// reader_profiles.jsonl and ground_truth.csv into `dir`.
void write_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir, bool force);

}  // namespace depositlag
