#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "refagree/bootstrap.hpp"
#include "refagree/domain.hpp"
#include "refagree/simulation.hpp"
#include "refagree/stats.hpp"

namespace refagree::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

/// Provenance block embedded in every report. Two runs with equal manifests
/// produce byte-identical reports.
struct RunManifest {
  std::string command;
  Json parameters = Json::object();
  std::optional<std::uint64_t> seed;
  std::optional<std::string> input_digest;  // "sha256:<hex>"
  std::string tool_version = kToolVersion;
  std::optional<std::string> timestamp;     // caller-supplied, never the wall clock

  Json to_json() const;
};

struct InstitutionAgreement {
  std::string institution;
  std::string submission_label;
  std::int64_t n_outputs = 0;
  double pp_4star = 0.0;
  double pp_top10 = 0.0;
  double metric_pp_4star = 0.0;               // b * PP(top 10%)
  std::optional<double> relative_difference;  // empty when P(4*) == 0
};

struct UoaAgreement {
  int uoa_id = 0;
  std::string uoa_name;
  std::size_t n_records = 0;
  std::size_t excluded = 0;
  std::int64_t total_outputs = 0;
  std::int64_t total_matched = 0;
  double total_4star = 0.0;
  std::int64_t total_top10 = 0;
  double b = 0.0;
  double coverage = 0.0;
  std::vector<AgreementReport> reports;
  std::vector<InstitutionAgreement> institutions;
};

UoaAgreement compute_agreement(const UoaDataset& dataset, PerspectiveSelection perspectives);

Json agreement_json(const RunManifest& manifest, const std::vector<UoaAgreement>& uoas);
std::string agreement_csv(const std::vector<UoaAgreement>& uoas);

Json bootstrap_json(const RunManifest& manifest, const std::vector<BootstrapSummary>& summaries,
                    const std::vector<std::string>& interval_files);

/// Per-institution interval table; blank rel_diff cells for institutions
/// without 4* outputs.
std::string intervals_csv(const BootstrapSummary& summary);

std::string spurious_csv(const SpuriousResult& result);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& json);

}  // namespace refagree::cli
