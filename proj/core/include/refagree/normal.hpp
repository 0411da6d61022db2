#pragma once

namespace refagree::normal {

/// Standard normal CDF.
double cdf(double z);

/// Upper tail 1 - cdf(z), computed without cancellation.
double ccdf(double z);

/// Standard normal quantile (Wichura AS 241). Returns -inf/+inf at 0/1;
/// throws std::domain_error outside [0,1].
double quantile(double p);

}  // namespace refagree::normal
