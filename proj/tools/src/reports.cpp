#include "refagree/cli/reports.hpp"

#include <sstream>

#include "refagree/csv.hpp"

namespace refagree::cli {
namespace {

Json interval_json(const Interval& iv) {
  return Json{{"median", iv.median}, {"lower", iv.lower}, {"upper", iv.upper}};
}

std::string_view slope_name(SlopeRule rule) { return rule == SlopeRule::ratio ? "ratio" : "unit"; }

}  // namespace

Json RunManifest::to_json() const {
  Json j;
  j["command"] = command;
  j["parameters"] = parameters;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["input_digest"] = input_digest ? Json(*input_digest) : Json(nullptr);
  j["tool_version"] = tool_version;
  j["timestamp"] = timestamp ? Json(*timestamp) : Json(nullptr);
  return j;
}

UoaAgreement compute_agreement(const UoaDataset& dataset, PerspectiveSelection perspectives) {
  UoaAgreement out;
  out.uoa_id = dataset.uoa_id;
  out.uoa_name = dataset.uoa_name;
  out.n_records = dataset.records.size();
  for (const auto& r : dataset.records) {
    out.total_outputs += r.n_outputs;
    out.total_matched += r.n_matched;
  }
  out.coverage = out.total_outputs > 0 ? static_cast<double>(out.total_matched) /
                                             static_cast<double>(out.total_outputs)
                                       : 0.0;

  const auto split = filter_evaluable(dataset);
  out.excluded = split.excluded;
  for (const auto& r : split.dataset.records) {
    out.total_4star += derive(r).p_4star;
    out.total_top10 += r.n_top10;
  }
  out.b = estimate_b(split.dataset);
  for (auto p : expand(perspectives)) out.reports.push_back(agreement_report(dataset, p));

  for (const auto& r : split.dataset.records) {
    const auto d = derive(r);
    InstitutionAgreement ia;
    ia.institution = r.institution;
    ia.submission_label = r.submission_label;
    ia.n_outputs = r.n_outputs;
    ia.pp_4star = r.pp_4star;
    ia.pp_top10 = *d.pp_top10;
    ia.metric_pp_4star = out.b * *d.pp_top10;
    if (d.p_4star > 0.0) ia.relative_difference = institution_relative_difference(r, out.b);
    out.institutions.push_back(std::move(ia));
  }
  return out;
}

Json agreement_json(const RunManifest& manifest, const std::vector<UoaAgreement>& uoas) {
  Json root;
  root["schema_version"] = kSchemaVersion;
  root["kind"] = "agreement";
  root["manifest"] = manifest.to_json();
  Json list = Json::array();
  for (const auto& u : uoas) {
    Json ju;
    ju["uoa_id"] = u.uoa_id;
    ju["uoa_name"] = u.uoa_name;
    ju["n_records"] = u.n_records;
    ju["excluded"] = u.excluded;
    ju["total_outputs"] = u.total_outputs;
    ju["total_matched"] = u.total_matched;
    ju["total_4star"] = u.total_4star;
    ju["total_top10"] = u.total_top10;
    ju["b"] = u.b;
    ju["coverage"] = u.coverage;
    Json reports = Json::array();
    for (const auto& r : u.reports) {
      reports.push_back(Json{{"perspective", to_string(r.perspective)},
                             {"b", r.b},
                             {"pearson_r", r.pearson_r},
                             {"mad", r.mad},
                             {"mapd", r.mapd},
                             {"n_points", r.n_points},
                             {"excluded", r.excluded}});
    }
    ju["reports"] = std::move(reports);
    Json insts = Json::array();
    for (const auto& i : u.institutions) {
      insts.push_back(Json{{"institution", i.institution},
                           {"submission_label", i.submission_label},
                           {"n_outputs", i.n_outputs},
                           {"pp_4star", i.pp_4star},
                           {"pp_top10", i.pp_top10},
                           {"metric_pp_4star", i.metric_pp_4star},
                           {"relative_difference", i.relative_difference
                                                       ? Json(*i.relative_difference)
                                                       : Json(nullptr)}});
    }
    ju["institutions"] = std::move(insts);
    list.push_back(std::move(ju));
  }
  root["uoas"] = std::move(list);
  return root;
}

std::string agreement_csv(const std::vector<UoaAgreement>& uoas) {
  std::ostringstream out;
  csv::write_row(out, {"uoa_id", "uoa_name", "perspective", "n_points", "excluded", "b", "coverage",
                       "pearson_r", "mad", "mapd"});
  for (const auto& u : uoas) {
    for (const auto& r : u.reports) {
      csv::write_row(out, {std::to_string(u.uoa_id), u.uoa_name, std::string(to_string(r.perspective)),
                           std::to_string(r.n_points), std::to_string(r.excluded),
                           csv::format_double(r.b), csv::format_double(u.coverage),
                           csv::format_double(r.pearson_r), csv::format_double(r.mad),
                           csv::format_double(r.mapd)});
    }
  }
  return std::move(out).str();
}

Json bootstrap_json(const RunManifest& manifest, const std::vector<BootstrapSummary>& summaries,
                    const std::vector<std::string>& interval_files) {
  Json root;
  root["schema_version"] = kSchemaVersion;
  root["kind"] = "bootstrap";
  root["manifest"] = manifest.to_json();
  Json list = Json::array();
  for (std::size_t u = 0; u < summaries.size(); ++u) {
    const auto& s = summaries[u];
    Json ju;
    ju["uoa_id"] = s.uoa_id;
    ju["uoa_name"] = s.uoa_name;
    ju["n_samples"] = s.n_samples;
    ju["seed"] = s.seed;
    ju["sigma2_eps"] = s.model.sigma2_eps;
    ju["p_threshold"] = s.model.p_threshold;
    ju["slope"] = slope_name(s.slope);
    ju["n_institutions"] = s.n_institutions;
    ju["excluded"] = s.excluded;
    ju["intervals_file"] = u < interval_files.size() ? Json(interval_files[u]) : Json(nullptr);
    Json stats = Json::array();
    for (const auto& p : s.perspectives) {
      stats.push_back(Json{{"perspective", to_string(p.perspective)},
                           {"pearson_r", interval_json(p.pearson_r)},
                           {"mad", interval_json(p.mad)},
                           {"mapd", interval_json(p.mapd)}});
    }
    ju["statistics"] = std::move(stats);
    Json insts = Json::array();
    for (const auto& i : s.institutions) {
      insts.push_back(Json{{"institution", i.institution},
                           {"submission_label", i.submission_label},
                           {"pp_4star", i.pp_4star},
                           {"pp_top10", i.pp_top10},
                           {"pp_prime", interval_json(i.pp_prime)},
                           {"rel_diff", i.rel_diff ? interval_json(*i.rel_diff) : Json(nullptr)}});
    }
    ju["institutions"] = std::move(insts);
    list.push_back(std::move(ju));
  }
  root["uoas"] = std::move(list);
  return root;
}

std::string intervals_csv(const BootstrapSummary& summary) {
  std::ostringstream out;
  csv::write_row(out, {"institution", "submission_label", "pp_4star", "pp_top10", "pp_prime_median",
                       "pp_prime_lo", "pp_prime_hi", "rel_diff_median", "rel_diff_lo",
                       "rel_diff_hi"});
  for (const auto& i : summary.institutions) {
    std::vector<std::string> row = {i.institution,
                                    i.submission_label,
                                    csv::format_double(i.pp_4star),
                                    csv::format_double(i.pp_top10),
                                    csv::format_double(i.pp_prime.median),
                                    csv::format_double(i.pp_prime.lower),
                                    csv::format_double(i.pp_prime.upper)};
    if (i.rel_diff) {
      row.push_back(csv::format_double(i.rel_diff->median));
      row.push_back(csv::format_double(i.rel_diff->lower));
      row.push_back(csv::format_double(i.rel_diff->upper));
    } else {
      row.insert(row.end(), 3, std::string{});
    }
    csv::write_row(out, row);
  }
  return std::move(out).str();
}

std::string spurious_csv(const SpuriousResult& result) {
  std::ostringstream out;
  csv::write_row(out, {"x", "y", "n", "xn", "yn"});
  for (const auto& s : result.samples) {
    csv::write_row(out, {csv::format_double(s.x), csv::format_double(s.y), csv::format_double(s.n),
                         csv::format_double(s.xn), csv::format_double(s.yn)});
  }
  return std::move(out).str();
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace refagree::cli
