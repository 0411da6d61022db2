#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "refagree/random.hpp"

namespace refagree::testing::oracle {
namespace {

double density(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

double normal_lower_tail(double z) {
  if (z > 0) return 1.0 - normal_lower_tail(-z);
  return simpson(density, z - 12.0, z, 40000);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("oracle quantile needs p in (0,1)");
  if (p > 0.5) return -normal_quantile(1.0 - p);
  double lo = -40.0, hi = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_lower_tail(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double rating_probability(double log_value, double sigma2_eps, double p_threshold) {
  if (sigma2_eps == 0.0) return log_value > std::log(p_threshold) ? 1.0 : 0.0;
  const double z = (std::log(p_threshold) - log_value + sigma2_eps / 2.0) / std::sqrt(sigma2_eps);
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

ConditionalLogValueCdf::ConditionalLogValueCdf(double mu, bool has_4star, double sigma2_eps,
                                               double p_threshold) {
  constexpr int kPoints = 200001;
  lo_ = mu - 12.0;
  step_ = 24.0 / (kPoints - 1);
  std::vector<double> w(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double u = lo_ + i * step_;
    const double q = rating_probability(u, sigma2_eps, p_threshold);
    w[i] = density(u - mu) * (has_4star ? q : 1.0 - q);
  }
  cdf_.assign(kPoints, 0.0);
  for (int i = 1; i < kPoints; ++i) cdf_[i] = cdf_[i - 1] + 0.5 * (w[i] + w[i - 1]) * step_;
  const double total = cdf_.back();
  for (auto& c : cdf_) c /= total;
}

double ConditionalLogValueCdf::operator()(double u) const {
  const double pos = (u - lo_) / step_;
  if (pos <= 0) return 0.0;
  if (pos >= static_cast<double>(cdf_.size() - 1)) return 1.0;
  const auto i = static_cast<std::size_t>(pos);
  const double f = pos - static_cast<double>(i);
  return cdf_[i] + f * (cdf_[i + 1] - cdf_[i]);
}

double rerating_probability(double mu, bool has_4star, double sigma2_eps, double p_threshold) {
  auto weight = [&](double u) {
    const double q = rating_probability(u, sigma2_eps, p_threshold);
    return density(u - mu) * (has_4star ? q : 1.0 - q);
  };
  const double num = simpson([&](double u) { return weight(u) * rating_probability(u, sigma2_eps, p_threshold); },
                             mu - 12.0, mu + 12.0, 200000);
  const double den = simpson(weight, mu - 12.0, mu + 12.0, 200000);
  return num / den;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - f), std::abs(static_cast<double>(i) / n - f)});
  }
  return d;
}

double sorted_quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = static_cast<double>(values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

double sorted_median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BootstrapSummary straight_line_bootstrap(const UoaDataset& dataset, const BootstrapConfig& config) {
  std::vector<SubmissionRecord> records;
  std::size_t excluded = 0;
  for (const auto& r : dataset.records) {
    if (r.n_matched > 0 && r.n_outputs > 0) {
      records.push_back(r);
    } else {
      ++excluded;
    }
  }
  const std::size_t n_inst = records.size();
  std::vector<InstitutionModel> models;
  for (const auto& r : records) {
    models.push_back({ml_estimate_mu(r.pp_4star, r.n_outputs, config.model), r.n_outputs,
                      r.pp_4star * static_cast<double>(r.n_outputs)});
  }

  std::vector<std::vector<double>> pp(config.n_samples, std::vector<double>(n_inst));
  for (std::size_t s = 0; s < config.n_samples; ++s) {
    for (std::size_t k = 0; k < n_inst; ++k) {
      RandomSource rng(derive_stream(config.seed, s, k));
      pp[s][k] = resample_institution(models[k], config.model, rng);
    }
  }

  UoaDataset evaluable{dataset.uoa_id, dataset.uoa_name, records};
  BootstrapSummary out;
  out.uoa_id = dataset.uoa_id;
  out.uoa_name = dataset.uoa_name;
  out.n_samples = config.n_samples;
  out.seed = config.seed;
  out.model = config.model;
  out.slope = config.slope;
  out.n_institutions = n_inst;
  out.excluded = excluded;

  auto interval = [](const std::vector<double>& v) {
    return Interval{sorted_quantile(v, 0.5), sorted_quantile(v, 0.025), sorted_quantile(v, 0.975)};
  };
  for (auto p : expand(config.perspective)) {
    PerspectiveSummary ps;
    ps.perspective = p;
    std::vector<double> r, mad_v, mapd_v;
    for (std::size_t s = 0; s < config.n_samples; ++s) {
      std::vector<double> x, y;
      double obs = 0, res = 0;
      for (std::size_t k = 0; k < n_inst; ++k) {
        const auto n = static_cast<double>(records[k].n_outputs);
        obs += records[k].pp_4star * n;
        res += pp[s][k] * n;
        const bool dep = p == Perspective::size_dependent;
        x.push_back(dep ? pp[s][k] * n : pp[s][k]);
        y.push_back(dep ? records[k].pp_4star * n : records[k].pp_4star);
      }
      SampleStatistics st;
      st.slope = config.slope == SlopeRule::ratio ? obs / res : 1.0;
      std::vector<double> y_hat;
      for (double v : x) y_hat.push_back(st.slope * v);
      st.pearson_r = pearson_r(x, y);
      st.mad = mad(y_hat, y);
      st.mapd = mapd(y_hat, y);
      r.push_back(st.pearson_r);
      mad_v.push_back(st.mad);
      mapd_v.push_back(st.mapd);
      ps.samples.push_back(st);
    }
    ps.pearson_r = interval(r);
    ps.mad = interval(mad_v);
    ps.mapd = interval(mapd_v);
    out.perspectives.push_back(std::move(ps));
  }
  for (std::size_t k = 0; k < n_inst; ++k) {
    const auto& rec = records[k];
    InstitutionInterval ii;
    ii.institution = rec.institution;
    ii.submission_label = rec.submission_label;
    ii.pp_4star = rec.pp_4star;
    ii.pp_top10 = static_cast<double>(rec.n_top10) / static_cast<double>(rec.n_matched);
    std::vector<double> col, rel;
    for (std::size_t s = 0; s < config.n_samples; ++s) {
      col.push_back(pp[s][k]);
      rel.push_back((pp[s][k] - rec.pp_4star) / rec.pp_4star);
    }
    ii.pp_prime = interval(col);
    if (rec.pp_4star > 0) ii.rel_diff = interval(rel);
    out.institutions.push_back(std::move(ii));
  }
  return out;
}

}  // namespace refagree::testing::oracle
