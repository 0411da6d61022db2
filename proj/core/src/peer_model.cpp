#include "refagree/peer_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "refagree/errors.hpp"
#include "refagree/normal.hpp"

namespace refagree {

void ModelConfig::validate() const {
  if (!(sigma2_eps >= 0.0) || !std::isfinite(sigma2_eps)) {
    throw DataError("sigma2_eps must be a finite nonnegative number");
  }
  if (!(p_threshold > 0.0) || !std::isfinite(p_threshold)) {
    throw DataError("p_threshold must be a finite positive number");
  }
}

LogNormalParams perceived_value_params(double mu, const ModelConfig& config) {
  return {mu - config.sigma2_eps / 2.0, 1.0 + config.sigma2_eps};
}

double prob_4star(double mu, const ModelConfig& config) {
  const auto [location, scale2] = perceived_value_params(mu, config);
  return normal::ccdf((std::log(config.p_threshold) - location) / std::sqrt(scale2));
}

double clamp_proportion(double pp, std::int64_t n_pubs) {
  const double eps = 1.0 / (2.0 * static_cast<double>(std::max<std::int64_t>(n_pubs, 1)));
  return std::clamp(pp, eps, 1.0 - eps);
}

double ml_estimate_mu(double pp_4star, std::int64_t n_pubs, const ModelConfig& config) {
  const double pp = clamp_proportion(pp_4star, n_pubs);
  const double s = config.sigma2_eps;
  // quantile(1 - pp) == -quantile(pp); the latter keeps precision for small pp
  return std::log(config.p_threshold) + s / 2.0 + std::sqrt(1.0 + s) * normal::quantile(pp);
}

double prob_4star_given_value(double v, const ModelConfig& config) {
  if (!(v > 0.0)) throw ComputeError("prob_4star_given_value: value must be positive");
  const double s = config.sigma2_eps;
  if (s == 0.0) return v > config.p_threshold ? 1.0 : 0.0;
  return normal::ccdf((std::log(config.p_threshold / v) + s / 2.0) / std::sqrt(s));
}

double sample_log_error(const ModelConfig& config, RandomSource& rng) {
  const double s = config.sigma2_eps;
  return -s / 2.0 + std::sqrt(s) * rng.gaussian();
}

double sample_conditional_log_value(double mu, bool has_4star, const ModelConfig& config,
                                    RandomSource& rng) {
  const double log_threshold = std::log(config.p_threshold);
  for (std::int64_t attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    const double log_value = mu + rng.gaussian();
    const double log_error = sample_log_error(config, rng);
    if ((log_value + log_error > log_threshold) == has_4star) return log_value;
  }
  std::ostringstream msg;
  msg << "conditional value sampler exhausted " << kMaxRejectionAttempts
      << " attempts (mu=" << mu << ", sigma2_eps=" << config.sigma2_eps
      << ", has_4star=" << (has_4star ? "true" : "false") << ")";
  throw ComputeError(msg.str());
}

double sample_conditional_value(double mu, bool has_4star, const ModelConfig& config,
                                RandomSource& rng) {
  return std::exp(sample_conditional_log_value(mu, has_4star, config, rng));
}

std::int64_t rounded_4star_count(double n_4star, std::int64_t n_pubs) {
  const double lower = std::floor(n_4star);
  const double frac = n_4star - lower;
  double rounded = lower;
  if (frac > 0.5 || (frac == 0.5 && std::fmod(lower, 2.0) != 0.0)) rounded = lower + 1.0;
  return std::clamp(static_cast<std::int64_t>(rounded), std::int64_t{0}, n_pubs);
}

double resample_institution(const InstitutionModel& model, const ModelConfig& config,
                            RandomSource& rng) {
  if (model.n_pubs <= 0) throw ComputeError("resample_institution: no publications");
  const std::int64_t k = rounded_4star_count(model.n_4star, model.n_pubs);
  const double log_threshold = std::log(config.p_threshold);
  std::int64_t awarded = 0;
  for (std::int64_t i = 0; i < model.n_pubs; ++i) {
    const double log_value = sample_conditional_log_value(model.mu, i < k, config, rng);
    if (log_value + sample_log_error(config, rng) > log_threshold) ++awarded;
  }
  return static_cast<double>(awarded) / static_cast<double>(model.n_pubs);
}

}  // namespace refagree
