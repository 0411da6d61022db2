#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace refagree {

/// One institution's submission to one unit of assessment (UoA).
struct SubmissionRecord {
  std::string institution;
  std::string submission_label;  // distinguishes separate submissions; may be empty
  std::int64_t n_outputs = 0;    // outputs submitted to peer review
  std::int64_t n_matched = 0;    // outputs matched to the citation database
  double pp_4star = 0.0;         // proportion of n_outputs rated 4*
  std::int64_t n_top10 = 0;      // matched outputs in the top 10% most cited

  // Lower star levels are carried for validation only.
  std::optional<double> pp_3star;
  std::optional<double> pp_2star;
  std::optional<double> pp_1star;

  bool operator==(const SubmissionRecord&) const = default;
};

struct UoaDataset {
  int uoa_id = 0;
  std::string uoa_name;
  std::vector<SubmissionRecord> records;
};

struct DerivedQuantities {
  std::optional<double> pp_top10;  // empty exactly when n_matched == 0
  double p_4star = 0.0;
  double p_top10 = 0.0;
  double wos_coverage = 0.0;
};

/// Throws DataError if the record breaks a field invariant. `context` is
/// prefixed to the message (e.g. "row 7").
void validate_record(const SubmissionRecord& record, const std::string& context);

/// Parses the submission CSV. One UoaDataset per distinct uoa_id, ordered by
/// uoa_id; records keep file order. Errors name the 1-based line number.
std::vector<UoaDataset> parse_datasets(std::istream& in);

/// Convenience for single-UoA input; throws DataError if the stream holds
/// more than one uoa_id.
UoaDataset parse_dataset(std::istream& in);

/// Writes datasets in the same CSV schema. Star columns for 3*/2*/1* are
/// emitted only if some record carries them.
void write_datasets(std::ostream& out, const std::vector<UoaDataset>& datasets);

DerivedQuantities derive(const SubmissionRecord& record);

struct EvaluableSplit {
  UoaDataset dataset;
  std::size_t excluded = 0;
};

/// Keeps records with n_matched > 0 and n_outputs > 0. Throws DataError when
/// nothing remains.
EvaluableSplit filter_evaluable(const UoaDataset& dataset);

/// Display key "institution" or "institution [label]".
std::string record_key(const SubmissionRecord& record);

}  // namespace refagree
