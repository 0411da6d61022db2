#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace refagree::testing {
namespace {

/// Largest-remainder apportionment of `total` by weights.
std::vector<std::int64_t> apportion(std::int64_t total, const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::int64_t> out(weights.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::int64_t>(std::floor(exact));
    assigned += out[i];
    rem.emplace_back(exact - std::floor(exact), i);
  }
  std::sort(rem.begin(), rem.end(), [](auto a, auto b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  for (std::int64_t k = 0; k < total - assigned; ++k) ++out[rem[static_cast<std::size_t>(k)].second];
  return out;
}

/// Moves units so that part[i] <= cap[i] while keeping the total.
void enforce_cap(std::vector<std::int64_t>& part, const std::vector<std::int64_t>& cap) {
  for (std::size_t i = 0; i < part.size(); ++i) {
    while (part[i] > cap[i]) {
      std::size_t j = 0;
      while (j < part.size() && part[j] >= cap[j]) ++j;
      if (j == part.size()) throw std::logic_error("cannot satisfy cap");
      --part[i];
      ++part[j];
    }
  }
}

}  // namespace

UoaDataset field_totals_dataset(const FieldTotalsRow& row) {
  const auto k = static_cast<std::size_t>(
      std::max(2L, std::lround(static_cast<double>(row.n_submissions) / row.avg_submissions)));
  std::vector<double> size_w(k), quality_w(k);
  for (std::size_t i = 0; i < k; ++i) {
    size_w[i] = 1.0 + static_cast<double>((i * 7) % 11);
    quality_w[i] = size_w[i] * (0.5 + 0.1 * static_cast<double>((i * 3) % 8));
  }
  const auto matched_total = std::llround(row.n_submissions * row.coverage_pct / 100.0);
  auto outputs = apportion(row.n_submissions, size_w);
  auto matched = apportion(matched_total, size_w);
  enforce_cap(matched, outputs);
  auto top10 = apportion(row.n_top10, quality_w);
  enforce_cap(top10, matched);
  auto four = apportion(row.n_4star, quality_w);
  enforce_cap(four, outputs);

  UoaDataset ds;
  ds.uoa_id = row.uoa_id;
  ds.uoa_name = std::string(row.name);
  for (std::size_t i = 0; i < k; ++i) {
    SubmissionRecord r;
    r.institution = "Institution " + std::to_string(i + 1);
    r.n_outputs = outputs[i];
    r.n_matched = matched[i];
    r.n_top10 = top10[i];
    r.pp_4star = static_cast<double>(four[i]) / static_cast<double>(outputs[i]);
    ds.records.push_back(r);
  }
  return ds;
}

SyntheticConfig standard_synthetic(std::uint64_t seed, int uoa_id) {
  SyntheticConfig c;
  c.uoa_id = uoa_id;
  c.uoa_name = "Synthetic " + std::to_string(uoa_id);
  c.n_institutions = 20;
  c.mu_lo = -0.8;
  c.mu_hi = 0.6;
  c.size_location = 4.8;
  c.size_scale = 0.5;
  c.min_outputs = 30;
  c.sigma2_eps = 0.1;
  c.coverage = 0.9;
  c.top10_link = 0.5;
  c.seed = seed;
  return c;
}

UoaDataset uniform_size_dataset(std::size_t institutions, std::int64_t n_outputs, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::int64_t> count(n_outputs / 10, n_outputs * 7 / 10);
  UoaDataset ds;
  ds.uoa_id = 1;
  ds.uoa_name = "Uniform";
  for (std::size_t i = 0; i < institutions; ++i) {
    SubmissionRecord r;
    r.institution = "Inst " + std::to_string(i);
    r.n_outputs = n_outputs;
    r.n_matched = n_outputs;
    r.n_top10 = n_outputs / 10;
    r.pp_4star = static_cast<double>(count(gen)) / static_cast<double>(n_outputs);
    ds.records.push_back(r);
  }
  return ds;
}

UoaDataset rounded_profile_dataset(std::size_t institutions, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::int64_t> size(40, 400);
  std::uniform_int_distribution<int> percent(8, 60);
  UoaDataset ds;
  ds.uoa_id = 2;
  ds.uoa_name = "Rounded";
  for (std::size_t i = 0; i < institutions; ++i) {
    SubmissionRecord r;
    r.institution = "Inst " + std::to_string(i);
    r.n_outputs = size(gen);
    r.n_matched = r.n_outputs * 9 / 10;
    r.n_top10 = r.n_matched / 8;
    r.pp_4star = percent(gen) / 100.0;
    ds.records.push_back(r);
  }
  return ds;
}

}  // namespace refagree::testing
