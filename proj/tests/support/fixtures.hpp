#pragma once

#include <cstdint>
#include <vector>

#include "refagree/domain.hpp"
#include "refagree/simulation.hpp"
#include "field_totals.hpp"

namespace refagree::testing {

/// Splits the published UoA totals over round(submissions / average)
/// institutions with uneven integer shares. Totals of outputs, matched
/// outputs, 4* and top-10% outputs are preserved exactly.
UoaDataset field_totals_dataset(const FieldTotalsRow& row);

/// The 20-institution synthetic UoA used by several acceptance checks.
SyntheticConfig standard_synthetic(std::uint64_t seed, int uoa_id = 1);

/// Records with integral 4* counts and equal sizes.
UoaDataset uniform_size_dataset(std::size_t institutions, std::int64_t n_outputs,
                                std::uint64_t seed);

/// REF-style dataset: PP(4*) published rounded to whole percent, so
/// PP * n is generally fractional.
UoaDataset rounded_profile_dataset(std::size_t institutions, std::uint64_t seed);

}  // namespace refagree::testing
