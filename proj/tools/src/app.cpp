#include "refagree/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "refagree/cli/io.hpp"
#include "refagree/cli/reports.hpp"
#include "refagree/csv.hpp"
#include "refagree/errors.hpp"

namespace refagree::cli {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string input;
  std::string output;
  std::string format = "json";
  std::vector<int> uoas;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> timestamp;
};

struct BootstrapOptions {
  double sigma2 = 0.1;
  double threshold = 1.0;
  std::size_t samples = 1000;
  std::string slope = "ratio";
  std::string perspective = "both";
  std::string intervals;
  unsigned threads = 0;
};

struct SpuriousOptions {
  std::size_t n = 1000;
  double size_sigma = 1.0;
};

struct SynthOptions {
  SyntheticConfig config;
  int n_uoas = 1;
};

PerspectiveSelection parse_perspective(const std::string& s) {
  if (s == "independent") return PerspectiveSelection::size_independent;
  if (s == "dependent") return PerspectiveSelection::size_dependent;
  return PerspectiveSelection::both;
}

struct LoadedInput {
  std::vector<UoaDataset> datasets;
  std::string digest;
};

LoadedInput load_input(const CommonOptions& opt) {
  const std::string bytes = read_file(opt.input);
  std::istringstream in(bytes);
  LoadedInput loaded{parse_datasets(in), "sha256:" + sha256_hex(bytes)};
  if (!opt.uoas.empty()) {
    const std::set<int> wanted(opt.uoas.begin(), opt.uoas.end());
    std::erase_if(loaded.datasets, [&](const UoaDataset& d) { return !wanted.contains(d.uoa_id); });
  }
  if (loaded.datasets.empty()) {
    throw DataError(opt.uoas.empty() ? "input holds no records"
                                     : "no records match the --uoa selection");
  }
  return loaded;
}

Json uoa_param(const CommonOptions& opt) {
  if (opt.uoas.empty()) return Json(nullptr);
  std::vector<int> ids(opt.uoas);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return Json(ids);
}

RunManifest base_manifest(const std::string& command, const CommonOptions& opt) {
  RunManifest m;
  m.command = command;
  m.seed = opt.seed;
  m.timestamp = opt.timestamp;
  return m;
}

void emit(AtomicOutputs& outputs, const std::string& path, std::string contents, std::ostream& out) {
  if (path == "-") {
    out << contents;
  } else {
    outputs.add(path, std::move(contents));
  }
}

fs::path sidecar_manifest(const std::string& output) {
  fs::path p(output);
  p += ".manifest.json";
  return p;
}

Json sidecar_json(const RunManifest& manifest, std::string_view kind, Json extra = Json::object()) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["manifest"] = manifest.to_json();
  for (auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

int cmd_agreement(const CommonOptions& opt, const std::string& perspective, std::ostream& out) {
  const auto input = load_input(opt);
  RunManifest manifest = base_manifest("agreement", opt);
  manifest.seed.reset();
  manifest.input_digest = input.digest;
  manifest.parameters = Json{{"input", opt.input},     {"output", opt.output},
                             {"format", opt.format},   {"uoa", uoa_param(opt)},
                             {"perspective", perspective}};

  std::vector<UoaAgreement> results;
  for (const auto& ds : input.datasets) results.push_back(compute_agreement(ds, parse_perspective(perspective)));

  AtomicOutputs outputs;
  if (opt.format == "json") {
    emit(outputs, opt.output, dump(agreement_json(manifest, results)), out);
  } else {
    emit(outputs, opt.output, agreement_csv(results), out);
    if (opt.output != "-") outputs.add(sidecar_manifest(opt.output), dump(sidecar_json(manifest, "agreement")));
  }
  outputs.commit();
  return kOk;
}

std::vector<std::string> interval_paths(const CommonOptions& opt, const BootstrapOptions& bo,
                                        const std::vector<UoaDataset>& datasets) {
  fs::path base;
  if (!bo.intervals.empty()) {
    base = bo.intervals;
  } else if (opt.output != "-") {
    base = fs::path(opt.output).replace_extension(".institutions.csv");
  } else {
    return {};
  }
  std::vector<std::string> paths;
  if (datasets.size() == 1) {
    paths.push_back(base.string());
    return paths;
  }
  for (const auto& ds : datasets) {
    fs::path p = base.parent_path() / base.stem();
    p += "_uoa" + std::to_string(ds.uoa_id);
    p += base.extension();
    paths.push_back(p.string());
  }
  return paths;
}

int cmd_bootstrap(const CommonOptions& opt, const BootstrapOptions& bo, std::ostream& out) {
  if (!opt.seed) throw UsageError("bootstrap requires --seed");
  const auto input = load_input(opt);

  BootstrapConfig config;
  config.n_samples = bo.samples;
  config.seed = *opt.seed;
  config.model = {bo.sigma2, bo.threshold};
  config.perspective = parse_perspective(bo.perspective);
  config.slope = bo.slope == "unit" ? SlopeRule::unit : SlopeRule::ratio;
  config.threads = bo.threads;
  try {
    config.validate();
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }

  const auto paths = interval_paths(opt, bo, input.datasets);
  RunManifest manifest = base_manifest("bootstrap", opt);
  manifest.input_digest = input.digest;
  manifest.parameters = Json{{"input", opt.input},
                             {"output", opt.output},
                             {"intervals", paths.empty() ? Json(nullptr) : Json(paths)},
                             {"uoa", uoa_param(opt)},
                             {"sigma2", bo.sigma2},
                             {"threshold", bo.threshold},
                             {"samples", bo.samples},
                             {"slope", bo.slope},
                             {"perspective", bo.perspective}};

  std::vector<BootstrapSummary> summaries;
  for (const auto& ds : input.datasets) summaries.push_back(run_bootstrap(ds, config));

  AtomicOutputs outputs;
  emit(outputs, opt.output, dump(bootstrap_json(manifest, summaries, paths)), out);
  for (std::size_t i = 0; i < paths.size(); ++i) outputs.add(paths[i], intervals_csv(summaries[i]));
  outputs.commit();
  return kOk;
}

int cmd_spurious(const CommonOptions& opt, const SpuriousOptions& so, std::ostream& out) {
  if (!opt.seed) throw UsageError("spurious requires --seed");
  SpuriousConfig config{so.n, *opt.seed, so.size_sigma};
  try {
    config.validate();
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  const auto result = spurious_demo(config);

  RunManifest manifest = base_manifest("spurious", opt);
  manifest.parameters = Json{{"n", so.n}, {"size_sigma", so.size_sigma}, {"output", opt.output}};

  AtomicOutputs outputs;
  emit(outputs, opt.output, spurious_csv(result), out);
  if (opt.output != "-") {
    outputs.add(sidecar_manifest(opt.output),
                dump(sidecar_json(manifest, "spurious",
                                  Json{{"r_independent", result.r_independent},
                                       {"r_dependent", result.r_dependent}})));
  }
  outputs.commit();
  // summary goes to stderr when the CSV itself is on stdout
  std::ostream& summary = opt.output == "-" ? std::cerr : out;
  summary << "r_independent=" << csv::format_double(result.r_independent)
          << " r_dependent=" << csv::format_double(result.r_dependent) << '\n';
  return kOk;
}

int cmd_synth(const CommonOptions& opt, const SynthOptions& so, std::ostream& out) {
  if (!opt.seed) throw UsageError("synth requires --seed");
  if (so.n_uoas < 1) throw UsageError("--uoas must be at least 1");
  std::vector<UoaDataset> datasets;
  for (int u = 1; u <= so.n_uoas; ++u) {
    SyntheticConfig c = so.config;
    c.seed = *opt.seed;
    c.uoa_id = so.config.uoa_id + u - 1;
    if (so.n_uoas > 1) c.uoa_name = so.config.uoa_name + " " + std::to_string(c.uoa_id);
    try {
      datasets.push_back(generate_synthetic(c));
    } catch (const DataError& e) {
      throw UsageError(e.what());
    }
  }
  std::ostringstream csv_out;
  write_datasets(csv_out, datasets);

  const auto& c = so.config;
  RunManifest manifest = base_manifest("synth", opt);
  manifest.parameters = Json{{"output", opt.output},
                             {"uoas", so.n_uoas},
                             {"first_uoa_id", c.uoa_id},
                             {"uoa_name", c.uoa_name},
                             {"institutions", c.n_institutions},
                             {"mu_lo", c.mu_lo},
                             {"mu_hi", c.mu_hi},
                             {"size_location", c.size_location},
                             {"size_scale", c.size_scale},
                             {"min_outputs", c.min_outputs},
                             {"sigma2", c.sigma2_eps},
                             {"threshold", c.p_threshold},
                             {"coverage", c.coverage},
                             {"top10_link", c.top10_link}};
  AtomicOutputs outputs;
  emit(outputs, opt.output, std::move(csv_out).str(), out);
  if (opt.output != "-") outputs.add(sidecar_manifest(opt.output), dump(sidecar_json(manifest, "synth")));
  outputs.commit();
  return kOk;
}

void add_seed(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--seed", opt.seed, "Seed for all randomness (u64)");
}

void add_timestamp(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--timestamp", opt.timestamp, "Timestamp recorded verbatim in the manifest");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Agreement between citation metrics and peer review", "refagree"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonOptions common;
  BootstrapOptions boot;
  SpuriousOptions spur;
  SynthOptions synth;
  std::string agreement_perspective = "both";

  const auto perspectives = CLI::IsMember({"independent", "dependent", "both"});

  auto* agreement = app.add_subcommand("agreement", "Metric vs peer-review agreement per UoA");
  agreement->add_option("--input", common.input, "Submission CSV")->required();
  agreement->add_option("--output", common.output, "Report path, '-' for stdout")->required();
  agreement->add_option("--format", common.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  agreement->add_option("--uoa", common.uoas, "UoA ids to process")->delimiter(',');
  agreement->add_option("--perspective", agreement_perspective)->check(perspectives);
  add_timestamp(agreement, common);

  auto* bootstrap = app.add_subcommand("bootstrap", "Resample peer review to estimate its own agreement");
  bootstrap->add_option("--input", common.input, "Submission CSV")->required();
  bootstrap->add_option("--output", common.output, "Summary JSON path, '-' for stdout")->required();
  bootstrap->add_option("--format", common.format, "Summary format")->check(CLI::IsMember({"json"}));
  bootstrap->add_option("--intervals", boot.intervals,
                        "Per-institution interval CSV (default: <output>.institutions.csv)");
  bootstrap->add_option("--uoa", common.uoas, "UoA ids to process")->delimiter(',');
  add_seed(bootstrap, common);
  bootstrap->add_option("--sigma2", boot.sigma2, "Review error variance");
  bootstrap->add_option("--threshold", boot.threshold, "Perceived-value threshold for 4*");
  bootstrap->add_option("--samples", boot.samples, "Number of resamples");
  bootstrap->add_option("--slope", boot.slope)->check(CLI::IsMember({"ratio", "unit"}));
  bootstrap->add_option("--perspective", boot.perspective)->check(perspectives);
  bootstrap->add_option("--threads", boot.threads, "Worker threads, 0 = all cores (output is unaffected)");
  add_timestamp(bootstrap, common);

  auto* spurious = app.add_subcommand("spurious", "Size-dependent correlation of independent proportions");
  spurious->add_option("--n", spur.n, "Number of observations");
  spurious->add_option("--size-sigma", spur.size_sigma, "Log-scale sd of the size factor");
  spurious->add_option("--output", common.output, "Sample CSV path, '-' for stdout")->required();
  add_seed(spurious, common);
  add_timestamp(spurious, common);

  auto* synthcmd = app.add_subcommand("synth", "Generate a synthetic submission dataset");
  auto& sc = synth.config;
  synthcmd->add_option("--output", common.output, "Dataset CSV path, '-' for stdout")->required();
  add_seed(synthcmd, common);
  synthcmd->add_option("--uoas", synth.n_uoas, "Number of UoAs");
  synthcmd->add_option("--uoa-id", sc.uoa_id, "First UoA id");
  synthcmd->add_option("--uoa-name", sc.uoa_name, "UoA name (suffixed with the id when --uoas > 1)");
  synthcmd->add_option("--institutions", sc.n_institutions, "Institutions per UoA");
  synthcmd->add_option("--mu-lo", sc.mu_lo, "Lower bound of capability");
  synthcmd->add_option("--mu-hi", sc.mu_hi, "Upper bound of capability");
  synthcmd->add_option("--size-location", sc.size_location, "Log-normal location of n_outputs");
  synthcmd->add_option("--size-scale", sc.size_scale, "Log-normal scale of n_outputs");
  synthcmd->add_option("--min-outputs", sc.min_outputs, "Minimum n_outputs");
  synthcmd->add_option("--sigma2", sc.sigma2_eps, "Review error variance");
  synthcmd->add_option("--threshold", sc.p_threshold, "Perceived-value threshold for 4*");
  synthcmd->add_option("--coverage", sc.coverage, "Citation-database match rate");
  synthcmd->add_option("--top10-link", sc.top10_link, "Link between value and top-10% status");
  add_timestamp(synthcmd, common);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("refagree");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*agreement) return cmd_agreement(common, agreement_perspective, out);
    if (*bootstrap) return cmd_bootstrap(common, boot, out);
    if (*spurious) return cmd_spurious(common, spur, out);
    if (*synthcmd) return cmd_synth(common, synth, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const ComputeError& e) {
    err << "computation error: " << e.what() << '\n';
    return kCompute;
  } catch (const std::exception& e) {
    err << "computation error: " << e.what() << '\n';
    return kCompute;
  }
  return kUsage;
}

}  // namespace refagree::cli
