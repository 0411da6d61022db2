#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "refagree/domain.hpp"

namespace refagree {

/// Two independent uniform proportions scaled by a common log-normal size.
struct SpuriousConfig {
  std::size_t n_obs = 1000;
  std::uint64_t seed = 0;
  /// Log-scale standard deviation of the size factor; 1 is the standard
  /// log-normal, 0 makes every size exactly 1.
  double size_sigma = 1.0;

  void validate() const;
};

struct SpuriousSample {
  double x = 0, y = 0, n = 0, xn = 0, yn = 0;
};

struct SpuriousResult {
  double r_independent = 0.0;
  double r_dependent = 0.0;
  std::vector<SpuriousSample> samples;
};

SpuriousResult spurious_demo(const SpuriousConfig& config);

struct SyntheticConfig {
  int uoa_id = 1;
  std::string uoa_name = "Synthetic";
  std::size_t n_institutions = 20;
  double mu_lo = -0.8;
  double mu_hi = 0.6;
  /// n_outputs ~ round(LogNormal(size_location, size_scale^2)), floored at
  /// min_outputs.
  double size_location = 4.8;
  double size_scale = 0.5;
  std::int64_t min_outputs = 30;
  double sigma2_eps = 0.1;
  double p_threshold = 1.0;
  double coverage = 0.9;
  /// 0: top-10% status is pure noise at rate 0.1; 1: top-10% exactly when
  /// the value exceeds the pooled 90th percentile.
  double top10_link = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Simulates every publication of every institution: value, review error and
/// rating, citation-database match, and top-10% status. The draw sequence
/// comes from the stream (seed, uoa_id, 0).
UoaDataset generate_synthetic(const SyntheticConfig& config);

}  // namespace refagree
