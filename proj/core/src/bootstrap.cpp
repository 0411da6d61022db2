#include "refagree/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>

#include "refagree/errors.hpp"
#include "refagree/random.hpp"

namespace refagree {

std::vector<Perspective> expand(PerspectiveSelection selection) {
  switch (selection) {
    case PerspectiveSelection::size_independent:
      return {Perspective::size_independent};
    case PerspectiveSelection::size_dependent:
      return {Perspective::size_dependent};
    case PerspectiveSelection::both:
      break;
  }
  return {Perspective::size_independent, Perspective::size_dependent};
}

void BootstrapConfig::validate() const {
  if (n_samples < 1) throw DataError("bootstrap needs at least one sample");
  model.validate();
}

Interval summarize(std::span<const double> values) {
  static constexpr double kProbs[] = {0.5, 0.025, 0.975};
  const auto q = quantiles(values, kProbs);
  return {q[0], q[1], q[2]};
}

std::vector<InstitutionModel> calibrate(const UoaDataset& dataset, const ModelConfig& model) {
  model.validate();
  std::vector<InstitutionModel> out;
  out.reserve(dataset.records.size());
  for (const auto& r : dataset.records) {
    if (r.n_outputs <= 0) throw DataError(record_key(r) + ": cannot calibrate without outputs");
    out.push_back({ml_estimate_mu(r.pp_4star, r.n_outputs, model), r.n_outputs,
                   derive(r).p_4star});
  }
  return out;
}

SampleStatistics compare_resample(const UoaDataset& evaluable, std::span<const double> pp_prime,
                                  Perspective perspective, SlopeRule slope) {
  const auto& records = evaluable.records;
  if (pp_prime.size() != records.size()) throw ComputeError("compare_resample: length mismatch");

  std::vector<double> x(records.size());
  std::vector<double> y(records.size());
  double observed_total = 0.0;
  double resampled_total = 0.0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto n = static_cast<double>(records[k].n_outputs);
    observed_total += records[k].pp_4star * n;
    resampled_total += pp_prime[k] * n;
    if (perspective == Perspective::size_independent) {
      x[k] = pp_prime[k];
      y[k] = records[k].pp_4star;
    } else {
      x[k] = pp_prime[k] * n;
      y[k] = records[k].pp_4star * n;
    }
  }

  SampleStatistics s;
  if (slope == SlopeRule::ratio) {
    if (resampled_total == 0.0) throw ComputeError("resample produced no 4* outputs in UoA");
    s.slope = observed_total / resampled_total;
  }
  const auto y_hat = predict(x, s.slope);
  s.pearson_r = pearson_r(x, y);
  s.mad = mad(y_hat, y);
  s.mapd = mapd(y_hat, y);
  return s;
}

namespace {

/// Runs body(i) for i in [0, count) on `threads` workers. The exception of
/// the lowest failing index is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
            failed = true;
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

BootstrapSummary run_bootstrap(const UoaDataset& dataset, const BootstrapConfig& config) {
  config.validate();
  const auto split = filter_evaluable(dataset);
  const auto& evaluable = split.dataset;
  const std::size_t n_inst = evaluable.records.size();
  if (n_inst < 2) {
    throw ComputeError("uoa " + std::to_string(dataset.uoa_id) +
                       ": bootstrap needs at least two evaluable records");
  }
  const auto models = calibrate(evaluable, config.model);
  const auto perspectives = expand(config.perspective);
  const std::size_t n_samples = config.n_samples;

  // pp_prime[s * n_inst + k]
  std::vector<double> pp_prime(n_samples * n_inst);
  std::vector<std::vector<SampleStatistics>> stats(perspectives.size(),
                                                   std::vector<SampleStatistics>(n_samples));

  parallel_for(n_samples, config.threads, [&](std::size_t s) {
    const std::span<double> row(pp_prime.data() + s * n_inst, n_inst);
    for (std::size_t k = 0; k < n_inst; ++k) {
      RandomSource rng(derive_stream(config.seed, s, k));
      row[k] = resample_institution(models[k], config.model, rng);
    }
    for (std::size_t p = 0; p < perspectives.size(); ++p) {
      stats[p][s] = compare_resample(evaluable, row, perspectives[p], config.slope);
    }
  });

  BootstrapSummary summary;
  summary.uoa_id = dataset.uoa_id;
  summary.uoa_name = dataset.uoa_name;
  summary.n_samples = n_samples;
  summary.seed = config.seed;
  summary.model = config.model;
  summary.slope = config.slope;
  summary.n_institutions = n_inst;
  summary.excluded = split.excluded;

  std::vector<double> column(n_samples);
  for (std::size_t p = 0; p < perspectives.size(); ++p) {
    PerspectiveSummary ps;
    ps.perspective = perspectives[p];
    const auto& st = stats[p];
    auto pick = [&](auto member) {
      for (std::size_t s = 0; s < n_samples; ++s) column[s] = st[s].*member;
      return summarize(column);
    };
    ps.pearson_r = pick(&SampleStatistics::pearson_r);
    ps.mad = pick(&SampleStatistics::mad);
    ps.mapd = pick(&SampleStatistics::mapd);
    ps.samples = std::move(stats[p]);
    summary.perspectives.push_back(std::move(ps));
  }

  summary.institutions.reserve(n_inst);
  for (std::size_t k = 0; k < n_inst; ++k) {
    const auto& r = evaluable.records[k];
    InstitutionInterval ii;
    ii.institution = r.institution;
    ii.submission_label = r.submission_label;
    ii.pp_4star = r.pp_4star;
    ii.pp_top10 = *derive(r).pp_top10;
    for (std::size_t s = 0; s < n_samples; ++s) column[s] = pp_prime[s * n_inst + k];
    ii.pp_prime = summarize(column);
    if (r.pp_4star > 0.0) {
      for (std::size_t s = 0; s < n_samples; ++s) {
        column[s] = (pp_prime[s * n_inst + k] - r.pp_4star) / r.pp_4star;
      }
      ii.rel_diff = summarize(column);
    }
    summary.institutions.push_back(std::move(ii));
  }
  return summary;
}

double institution_relative_difference(const SubmissionRecord& record, double b) {
  const double p_4star = derive(record).p_4star;
  if (!(p_4star > 0.0)) {
    throw ComputeError(record_key(record) + ": undefined relative difference (no 4* outputs)");
  }
  return (b * static_cast<double>(record.n_top10) - p_4star) / p_4star;
}

}  // namespace refagree
