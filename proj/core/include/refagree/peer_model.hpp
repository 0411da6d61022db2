#pragma once

#include <cstdint>

#include "refagree/random.hpp"

namespace refagree {

/// Review-noise scenario. Publication values are LogNormal(mu, 1); review
/// errors are LogNormal(-sigma2_eps/2, sigma2_eps) so they average to 1; a
/// publication is rated 4* when value * error exceeds p_threshold.
struct ModelConfig {
  double sigma2_eps = 0.0;
  double p_threshold = 1.0;

  /// Throws DataError on sigma2_eps < 0 or p_threshold <= 0.
  void validate() const;
};

struct InstitutionModel {
  double mu = 0.0;            // capability
  std::int64_t n_pubs = 0;
  double n_4star = 0.0;       // observed count; may be fractional
};

/// Location and variance of a log-normal in log space.
struct LogNormalParams {
  double location = 0.0;
  double scale2 = 1.0;
};

/// Distribution of the perceived value p = v * eps for capability mu.
LogNormalParams perceived_value_params(double mu, const ModelConfig& config);

/// Probability of a 4* rating for capability mu: 1 - F(p_threshold).
double prob_4star(double mu, const ModelConfig& config);

/// PP clamped to [1/(2n), 1 - 1/(2n)] so the ML capability stays finite.
double clamp_proportion(double pp, std::int64_t n_pubs);

/// Capability whose 4* probability equals the (clamped) observed PP:
/// mu = ln p + s/2 - sqrt(1 + s) * quantile(1 - PP).
double ml_estimate_mu(double pp_4star, std::int64_t n_pubs, const ModelConfig& config);

/// Pr(4* | value v) = Pr(eps > p_threshold / v). A step at p_threshold when
/// sigma2_eps == 0.
double prob_4star_given_value(double v, const ModelConfig& config);

inline constexpr std::int64_t kMaxRejectionAttempts = 1'000'000;

/// Draws ln v from the value distribution conditioned on the observed rating,
/// by joint rejection on (v, eps). Throws ComputeError after
/// kMaxRejectionAttempts rejected proposals.
double sample_conditional_log_value(double mu, bool has_4star, const ModelConfig& config,
                                    RandomSource& rng);

double sample_conditional_value(double mu, bool has_4star, const ModelConfig& config,
                                RandomSource& rng);

/// One review error draw, in log space.
double sample_log_error(const ModelConfig& config, RandomSource& rng);

/// Round-half-to-even of a fractional 4* count, clamped to [0, n_pubs].
std::int64_t rounded_4star_count(double n_4star, std::int64_t n_pubs);

/// Re-reviews every publication of the institution: values are drawn given
/// the observed ratings, each gets a fresh error, and the share whose
/// perceived value clears the threshold is returned (PP').
double resample_institution(const InstitutionModel& model, const ModelConfig& config,
                            RandomSource& rng);

}  // namespace refagree
