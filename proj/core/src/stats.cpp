#include "refagree/stats.hpp"

#include <algorithm>
#include <cmath>

#include "refagree/errors.hpp"

namespace refagree {
namespace {

void require_same_length(std::span<const double> a, std::span<const double> b,
                         std::string_view what) {
  if (a.size() != b.size()) {
    throw ComputeError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                       " vs " + std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw ComputeError(std::string(what) + ": empty input");
}

double interpolate_sorted(const std::vector<double>& sorted, double q) {
  const double pos = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string_view to_string(Perspective p) {
  return p == Perspective::size_independent ? "size_independent" : "size_dependent";
}

double median(std::span<const double> values) {
  if (values.empty()) throw ComputeError("median: empty input");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

double quantile(std::span<const double> values, double q) {
  const double qs[] = {q};
  return quantiles(values, qs).front();
}

std::vector<double> quantiles(std::span<const double> values, std::span<const double> qs) {
  if (values.empty()) throw ComputeError("quantile: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(qs.size());
  for (double q : qs) {
    if (!(q >= 0.0 && q <= 1.0)) throw ComputeError("quantile: q outside [0,1]");
    out.push_back(interpolate_sorted(sorted, q));
  }
  return out;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y, "pearson_r");
  if (x.size() < 2) throw ComputeError("pearson_r: need at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ComputeError("pearson_r: degenerate series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_r(const PairedSeries& s) { return pearson_r(s.x, s.y); }

double estimate_b(const UoaDataset& dataset) {
  double total_4star = 0.0;
  std::int64_t total_top10 = 0;
  for (const auto& r : dataset.records) {
    if (r.n_matched <= 0 || r.n_outputs <= 0) continue;
    total_4star += derive(r).p_4star;
    total_top10 += r.n_top10;
  }
  if (total_top10 == 0) {
    throw ComputeError("uoa " + std::to_string(dataset.uoa_id) + ": no top-10% publications in UoA");
  }
  return total_4star / static_cast<double>(total_top10);
}

std::vector<double> predict(std::span<const double> x, double b) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [b](double v) { return b * v; });
  return out;
}

double mad(std::span<const double> y_hat, std::span<const double> y) {
  require_same_length(y_hat, y, "mad");
  std::vector<double> diffs(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) diffs[i] = std::abs(y_hat[i] - y[i]);
  return median(diffs);
}

double mapd(std::span<const double> y_hat, std::span<const double> y) {
  require_same_length(y_hat, y, "mapd");
  std::vector<double> rel(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0.0) throw ComputeError("mapd: negative observed value");
    if (y[i] == 0.0) {
      if (y_hat[i] != 0.0) {
        throw ComputeError("mapd: undefined relative difference at point " + std::to_string(i));
      }
      rel[i] = 0.0;
    } else {
      rel[i] = std::abs(y_hat[i] - y[i]) / y[i];
    }
  }
  return median(rel);
}

PairedSeries paired_series(const UoaDataset& evaluable, Perspective perspective) {
  PairedSeries s;
  s.x.reserve(evaluable.records.size());
  s.y.reserve(evaluable.records.size());
  s.labels.reserve(evaluable.records.size());
  for (const auto& r : evaluable.records) {
    const auto d = derive(r);
    if (!d.pp_top10) throw ComputeError(record_key(r) + ": no matched publications");
    if (perspective == Perspective::size_independent) {
      s.x.push_back(*d.pp_top10);
      s.y.push_back(r.pp_4star);
    } else {
      s.x.push_back(d.p_top10);
      s.y.push_back(d.p_4star);
    }
    s.labels.push_back(record_key(r));
  }
  return s;
}

AgreementReport agreement_report(const UoaDataset& dataset, Perspective perspective) {
  const auto split = filter_evaluable(dataset);
  if (split.dataset.records.size() < 2) {
    throw ComputeError("uoa " + std::to_string(dataset.uoa_id) +
                       ": agreement needs at least two evaluable records");
  }
  AgreementReport report;
  report.perspective = perspective;
  report.b = estimate_b(split.dataset);
  const auto series = paired_series(split.dataset, perspective);
  const auto y_hat = predict(series.x, report.b);
  report.pearson_r = pearson_r(series);
  report.mad = mad(y_hat, series.y);
  try {
    report.mapd = mapd(y_hat, series.y);
  } catch (const ComputeError&) {
    for (std::size_t i = 0; i < series.y.size(); ++i) {
      if (series.y[i] == 0.0 && y_hat[i] != 0.0) {
        throw ComputeError("uoa " + std::to_string(dataset.uoa_id) + ", " + series.labels[i] +
                           ": undefined relative difference (no 4* outputs but metric predicts some)");
      }
    }
    throw;
  }
  report.n_points = series.x.size();
  report.excluded = split.excluded;
  return report;
}

}  // namespace refagree
