#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refagree/domain.hpp"

namespace refagree {

enum class Perspective { size_independent, size_dependent };

std::string_view to_string(Perspective p);

/// Parallel metric (x) / peer-review (y) values with identifiers.
struct PairedSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> labels;
};

struct AgreementReport {
  Perspective perspective = Perspective::size_independent;
  double b = 0.0;
  double pearson_r = 0.0;
  double mad = 0.0;
  double mapd = 0.0;
  std::size_t n_points = 0;
  std::size_t excluded = 0;
};

/// Sample median; even lengths average the two central order statistics.
double median(std::span<const double> values);

/// Empirical quantile, linear interpolation between order statistics at
/// zero-based position (n-1)q.
double quantile(std::span<const double> values, double q);

/// Quantiles for several probabilities from one sort.
std::vector<double> quantiles(std::span<const double> values, std::span<const double> qs);

/// Product-moment correlation. Throws ComputeError on zero variance.
double pearson_r(std::span<const double> x, std::span<const double> y);
double pearson_r(const PairedSeries& series);

/// Equivalence slope: total 4* outputs per top-10% output over the
/// evaluable records.
double estimate_b(const UoaDataset& dataset);

std::vector<double> predict(std::span<const double> x, double b);

/// median_i |y_hat_i - y_i|
double mad(std::span<const double> y_hat, std::span<const double> y);

/// median_i |y_hat_i - y_i| / y_i, with 0/0 counted as 0.
double mapd(std::span<const double> y_hat, std::span<const double> y);

/// Builds the (x, y) series for one perspective from evaluable records:
/// size-independent pairs PP(top 10%) with PP(4*), size-dependent pairs the
/// corresponding totals.
PairedSeries paired_series(const UoaDataset& evaluable, Perspective perspective);

AgreementReport agreement_report(const UoaDataset& dataset, Perspective perspective);

}  // namespace refagree
