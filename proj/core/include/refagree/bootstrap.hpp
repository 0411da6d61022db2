#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "refagree/domain.hpp"
#include "refagree/peer_model.hpp"
#include "refagree/stats.hpp"

namespace refagree {

enum class PerspectiveSelection { size_independent, size_dependent, both };

/// How resampled outcomes are scaled before being compared with the
/// observed ones: `ratio` re-estimates total observed 4* per resampled 4*
/// on every sample, `unit` compares them as they are.
enum class SlopeRule { ratio, unit };

std::vector<Perspective> expand(PerspectiveSelection selection);

struct BootstrapConfig {
  std::size_t n_samples = 1000;
  std::uint64_t seed = 0;
  ModelConfig model;
  PerspectiveSelection perspective = PerspectiveSelection::both;
  SlopeRule slope = SlopeRule::ratio;
  /// Worker threads; 0 picks the hardware concurrency. Results do not
  /// depend on this value.
  unsigned threads = 1;

  void validate() const;
};

struct Interval {
  double median = 0.0;
  double lower = 0.0;  // 2.5% quantile
  double upper = 0.0;  // 97.5% quantile
};

Interval summarize(std::span<const double> values);

struct SampleStatistics {
  double slope = 1.0;
  double pearson_r = 0.0;
  double mad = 0.0;
  double mapd = 0.0;
};

struct PerspectiveSummary {
  Perspective perspective = Perspective::size_independent;
  Interval pearson_r;
  Interval mad;
  Interval mapd;
  std::vector<SampleStatistics> samples;  // in sample-index order
};

struct InstitutionInterval {
  std::string institution;
  std::string submission_label;
  double pp_4star = 0.0;
  double pp_top10 = 0.0;
  Interval pp_prime;
  /// (P'(4*) - P(4*)) / P(4*); empty when the institution has no 4* outputs.
  std::optional<Interval> rel_diff;
};

struct BootstrapSummary {
  int uoa_id = 0;
  std::string uoa_name;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  ModelConfig model;
  SlopeRule slope = SlopeRule::ratio;
  std::size_t n_institutions = 0;
  std::size_t excluded = 0;
  std::vector<PerspectiveSummary> perspectives;
  std::vector<InstitutionInterval> institutions;
};

/// One calibrated model per record, capability fitted to its PP(4*) with
/// n_pubs = n_outputs.
std::vector<InstitutionModel> calibrate(const UoaDataset& dataset, const ModelConfig& model);

/// Agreement statistics between observed and one set of resampled PP'(4*)
/// values (parallel to the evaluable records).
SampleStatistics compare_resample(const UoaDataset& evaluable, std::span<const double> pp_prime,
                                  Perspective perspective, SlopeRule slope);

/// Resamples every institution n_samples times. Each (sample, institution)
/// pair draws from its own stream derived from (seed, sample, institution),
/// so the result is identical for any thread count.
BootstrapSummary run_bootstrap(const UoaDataset& dataset, const BootstrapConfig& config);

/// Signed relative gap between the metric-implied and the peer-review 4*
/// count: (b * n_top10 - P(4*)) / P(4*).
double institution_relative_difference(const SubmissionRecord& record, double b);

}  // namespace refagree
