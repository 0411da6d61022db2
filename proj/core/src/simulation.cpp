#include "refagree/simulation.hpp"

#include <cmath>

#include "refagree/errors.hpp"
#include "refagree/random.hpp"
#include "refagree/stats.hpp"

namespace refagree {

void SpuriousConfig::validate() const {
  if (n_obs < 3) throw DataError("spurious demo needs at least 3 observations");
  if (!(size_sigma >= 0.0) || !std::isfinite(size_sigma)) {
    throw DataError("size_sigma must be finite and nonnegative");
  }
}

SpuriousResult spurious_demo(const SpuriousConfig& config) {
  config.validate();
  RandomSource rng(derive_stream(config.seed, 0, 0));
  SpuriousResult out;
  out.samples.resize(config.n_obs);
  std::vector<double> x(config.n_obs), y(config.n_obs), xn(config.n_obs), yn(config.n_obs);
  for (std::size_t i = 0; i < config.n_obs; ++i) {
    auto& s = out.samples[i];
    s.x = rng.uniform();
    s.y = rng.uniform();
    s.n = std::exp(config.size_sigma * rng.gaussian());
    s.xn = s.x * s.n;
    s.yn = s.y * s.n;
    x[i] = s.x;
    y[i] = s.y;
    xn[i] = s.xn;
    yn[i] = s.yn;
  }
  out.r_independent = pearson_r(x, y);
  out.r_dependent = pearson_r(xn, yn);
  return out;
}

void SyntheticConfig::validate() const {
  if (uoa_id <= 0) throw DataError("uoa_id must be positive");
  if (n_institutions < 1) throw DataError("n_institutions must be positive");
  if (!(mu_lo <= mu_hi) || !std::isfinite(mu_lo) || !std::isfinite(mu_hi)) {
    throw DataError("mu range must be finite with lo <= hi");
  }
  if (!std::isfinite(size_location) || !(size_scale >= 0.0) || !std::isfinite(size_scale)) {
    throw DataError("size distribution parameters must be finite, scale nonnegative");
  }
  if (min_outputs < 1) throw DataError("min_outputs must be at least 1");
  if (!(sigma2_eps >= 0.0) || !std::isfinite(sigma2_eps)) {
    throw DataError("sigma2_eps must be finite and nonnegative");
  }
  if (!(p_threshold > 0.0) || !std::isfinite(p_threshold)) {
    throw DataError("p_threshold must be positive");
  }
  if (!(coverage > 0.0 && coverage <= 1.0)) throw DataError("coverage must lie in (0,1]");
  if (!(top10_link >= 0.0 && top10_link <= 1.0)) throw DataError("top10_link must lie in [0,1]");
}

UoaDataset generate_synthetic(const SyntheticConfig& config) {
  config.validate();
  RandomSource rng(derive_stream(config.seed, static_cast<std::uint64_t>(config.uoa_id), 0));
  const double log_threshold = std::log(config.p_threshold);
  const double error_sd = std::sqrt(config.sigma2_eps);

  struct Draft {
    std::int64_t n = 0;
    std::int64_t four_star = 0;
    std::vector<double> log_values;
  };
  std::vector<Draft> drafts(config.n_institutions);
  std::vector<double> pooled;
  for (auto& d : drafts) {
    const double size = std::exp(config.size_location + config.size_scale * rng.gaussian());
    d.n = std::max<std::int64_t>(config.min_outputs, std::llround(size));
    const double mu = config.mu_lo + (config.mu_hi - config.mu_lo) * rng.uniform();
    d.log_values.resize(static_cast<std::size_t>(d.n));
    for (auto& lv : d.log_values) {
      lv = mu + rng.gaussian();
      const double log_error = -config.sigma2_eps / 2.0 + error_sd * rng.gaussian();
      if (lv + log_error > log_threshold) ++d.four_star;
    }
    pooled.insert(pooled.end(), d.log_values.begin(), d.log_values.end());
  }
  const double top_cut = quantile(pooled, 0.9);
  const double lambda = config.top10_link;

  UoaDataset ds;
  ds.uoa_id = config.uoa_id;
  ds.uoa_name = config.uoa_name;
  ds.records.reserve(drafts.size());
  for (std::size_t k = 0; k < drafts.size(); ++k) {
    const auto& d = drafts[k];
    SubmissionRecord r;
    r.institution = "Institution " + std::to_string(k + 1);
    r.n_outputs = d.n;
    r.pp_4star = static_cast<double>(d.four_star) / static_cast<double>(d.n);
    for (double lv : d.log_values) {
      const bool matched = rng.uniform() < config.coverage;
      const double p_top = (1.0 - lambda) * 0.1 + (lv > top_cut ? lambda : 0.0);
      const bool top = rng.uniform() < p_top;
      if (matched) {
        ++r.n_matched;
        if (top) ++r.n_top10;
      }
    }
    validate_record(r, "synthetic institution " + std::to_string(k + 1));
    ds.records.push_back(std::move(r));
  }
  return ds;
}

}  // namespace refagree
