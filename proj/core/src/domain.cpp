#include "refagree/domain.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <utility>

#include "refagree/csv.hpp"
#include "refagree/errors.hpp"

namespace refagree {
namespace {

constexpr std::array<std::string_view, 8> kRequiredColumns = {
    "uoa_id", "uoa_name", "institution", "submission_label",
    "n_outputs", "n_matched", "pp_4star", "n_top10"};
constexpr std::array<std::string_view, 3> kStarColumns = {"pp_3star", "pp_2star", "pp_1star"};
constexpr double kProfileSlack = 1e-6;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError("row " + std::to_string(line) + ": " + what);
}

std::int64_t parse_int(std::string_view text, std::string_view column, std::size_t line) {
  text = trim(text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(line, "column " + std::string(column) + " is not an integer: '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view text, std::string_view column, std::size_t line) {
  text = trim(text);
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(line, "column " + std::string(column) + " is not a number: '" + std::string(text) + "'");
  }
  return value;
}

void check_proportion(double value, std::string_view name, const std::string& context) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DataError(context + ": " + std::string(name) + " = " + csv::format_double(value) +
                    " outside [0,1]");
  }
}

}  // namespace

void validate_record(const SubmissionRecord& r, const std::string& context) {
  if (r.institution.empty()) throw DataError(context + ": empty institution");
  if (r.n_outputs < 0) throw DataError(context + ": n_outputs is negative");
  if (r.n_matched < 0) throw DataError(context + ": n_matched is negative");
  if (r.n_top10 < 0) throw DataError(context + ": n_top10 is negative");
  if (r.n_matched > r.n_outputs) {
    throw DataError(context + ": n_matched (" + std::to_string(r.n_matched) +
                    ") exceeds n_outputs (" + std::to_string(r.n_outputs) + ")");
  }
  if (r.n_top10 > r.n_matched) {
    throw DataError(context + ": n_top10 (" + std::to_string(r.n_top10) +
                    ") exceeds n_matched (" + std::to_string(r.n_matched) + ")");
  }
  check_proportion(r.pp_4star, "pp_4star", context);
  double profile = r.pp_4star;
  for (const auto& [value, name] : {std::pair{r.pp_3star, "pp_3star"},
                                    std::pair{r.pp_2star, "pp_2star"},
                                    std::pair{r.pp_1star, "pp_1star"}}) {
    if (value) {
      check_proportion(*value, name, context);
      profile += *value;
    }
  }
  if (profile > 1.0 + kProfileSlack) {
    throw DataError(context + ": star profile sums to " + csv::format_double(profile));
  }
}

std::vector<UoaDataset> parse_datasets(std::istream& in) {
  std::size_t line = 0;
  auto header = csv::read_row(in, line);
  if (!header) throw DataError("row 1: missing header");
  for (auto& h : *header) h = std::string(trim(h));
  if (!header->empty() && header->front().starts_with("\xEF\xBB\xBF")) {
    header->front().erase(0, 3);
  }

  const bool has_stars = header->size() == kRequiredColumns.size() + kStarColumns.size();
  if (header->size() != kRequiredColumns.size() && !has_stars) {
    fail(1, "expected 8 or 11 columns in header, found " + std::to_string(header->size()));
  }
  for (std::size_t i = 0; i < header->size(); ++i) {
    const std::string_view want =
        i < kRequiredColumns.size() ? kRequiredColumns[i] : kStarColumns[i - kRequiredColumns.size()];
    if ((*header)[i] != want) {
      fail(1, "column " + std::to_string(i + 1) + " must be '" + std::string(want) + "', found '" +
                  (*header)[i] + "'");
    }
  }

  std::map<int, UoaDataset> by_id;
  std::map<int, std::set<std::pair<std::string, std::string>>> seen;

  while (true) {
    const std::size_t row_line = line + 1;
    auto row = csv::read_row(in, line);
    if (!row) break;
    if (row->size() == 1 && trim(row->front()).empty()) continue;  // blank line
    if (row->size() != header->size()) {
      fail(row_line, "expected " + std::to_string(header->size()) + " columns, found " +
                         std::to_string(row->size()));
    }
    const auto& f = *row;
    const auto uoa_id = parse_int(f[0], "uoa_id", row_line);
    if (uoa_id <= 0 || uoa_id > std::numeric_limits<int>::max()) {
      fail(row_line, "uoa_id must be a positive integer");
    }

    SubmissionRecord r;
    r.institution = std::string(trim(f[2]));
    r.submission_label = std::string(trim(f[3]));
    r.n_outputs = parse_int(f[4], "n_outputs", row_line);
    r.n_matched = parse_int(f[5], "n_matched", row_line);
    r.pp_4star = parse_real(f[6], "pp_4star", row_line);
    r.n_top10 = parse_int(f[7], "n_top10", row_line);
    if (has_stars) {
      std::optional<double>* slots[] = {&r.pp_3star, &r.pp_2star, &r.pp_1star};
      for (std::size_t k = 0; k < 3; ++k) {
        if (!trim(f[8 + k]).empty()) *slots[k] = parse_real(f[8 + k], kStarColumns[k], row_line);
      }
    }
    const std::string context = "row " + std::to_string(row_line);
    validate_record(r, context);

    const int id = static_cast<int>(uoa_id);
    auto [it, inserted] = by_id.try_emplace(id);
    UoaDataset& ds = it->second;
    const std::string name(trim(f[1]));
    if (inserted) {
      ds.uoa_id = id;
      ds.uoa_name = name;
    } else if (ds.uoa_name != name) {
      fail(row_line, "uoa_name '" + name + "' conflicts with '" + ds.uoa_name + "' for uoa_id " +
                         std::to_string(id));
    }
    if (!seen[id].emplace(r.institution, r.submission_label).second) {
      fail(row_line, "duplicate submission " + record_key(r) + " in uoa_id " + std::to_string(id));
    }
    ds.records.push_back(std::move(r));
  }

  std::vector<UoaDataset> out;
  out.reserve(by_id.size());
  for (auto& [id, ds] : by_id) out.push_back(std::move(ds));
  return out;
}

UoaDataset parse_dataset(std::istream& in) {
  auto all = parse_datasets(in);
  if (all.empty()) throw DataError("input holds no records");
  if (all.size() > 1) {
    throw DataError("input holds " + std::to_string(all.size()) + " units of assessment, expected one");
  }
  return std::move(all.front());
}

void write_datasets(std::ostream& out, const std::vector<UoaDataset>& datasets) {
  bool stars = false;
  for (const auto& ds : datasets) {
    for (const auto& r : ds.records) stars = stars || r.pp_3star || r.pp_2star || r.pp_1star;
  }
  std::vector<std::string> header(kRequiredColumns.begin(), kRequiredColumns.end());
  if (stars) header.insert(header.end(), kStarColumns.begin(), kStarColumns.end());
  csv::write_row(out, header);

  auto opt = [](const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string{}; };
  for (const auto& ds : datasets) {
    for (const auto& r : ds.records) {
      std::vector<std::string> row = {std::to_string(ds.uoa_id), ds.uoa_name, r.institution,
                                      r.submission_label,        std::to_string(r.n_outputs),
                                      std::to_string(r.n_matched), csv::format_double(r.pp_4star),
                                      std::to_string(r.n_top10)};
      if (stars) {
        row.push_back(opt(r.pp_3star));
        row.push_back(opt(r.pp_2star));
        row.push_back(opt(r.pp_1star));
      }
      csv::write_row(out, row);
    }
  }
}

DerivedQuantities derive(const SubmissionRecord& r) {
  DerivedQuantities d;
  if (r.n_matched > 0) {
    d.pp_top10 = static_cast<double>(r.n_top10) / static_cast<double>(r.n_matched);
  }
  d.p_4star = r.pp_4star * static_cast<double>(r.n_outputs);
  // n_top10 / n_matched * n_matched, taken exactly
  d.p_top10 = static_cast<double>(r.n_top10);
  d.wos_coverage =
      r.n_outputs > 0 ? static_cast<double>(r.n_matched) / static_cast<double>(r.n_outputs) : 0.0;
  return d;
}

EvaluableSplit filter_evaluable(const UoaDataset& dataset) {
  EvaluableSplit split;
  split.dataset.uoa_id = dataset.uoa_id;
  split.dataset.uoa_name = dataset.uoa_name;
  for (const auto& r : dataset.records) {
    if (r.n_matched > 0 && r.n_outputs > 0) {
      split.dataset.records.push_back(r);
    } else {
      ++split.excluded;
    }
  }
  if (split.dataset.records.empty()) {
    throw DataError("uoa " + std::to_string(dataset.uoa_id) + ": no evaluable records");
  }
  return split;
}

std::string record_key(const SubmissionRecord& r) {
  return r.submission_label.empty() ? r.institution : r.institution + " [" + r.submission_label + "]";
}

}  // namespace refagree
