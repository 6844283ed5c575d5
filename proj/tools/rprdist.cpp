#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rpr/config.hpp"
#include "rpr/pipeline.hpp"
#include "rpr/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rprdist: intrinsic singularity distances of a 3-RPR manipulator"};
  std::string config_path, interps, extra, precision, cache, out;
  std::optional<int> poses;
  std::optional<uint64_t> seed;
  bool ab_only = false, skip_gated = false, experimental = false, no_timing = false, quiet = false;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--interpretations", interps, "comma separated list such as rigid/rigid,bar/rigid, or all");
  app.add_option("--poses", poses, "number of poses on the motion interval (endpoints included)");
  app.add_option("--extra-poses", extra, "comma separated extra phi values");
  app.add_option("--seed", seed, "seed of the generic instances and gamma");
  app.add_option("--precision", precision, "double or dd")->check(CLI::IsMember({"double", "dd"}));
  app.add_option("--cache", cache, "cache directory (default PREFIX.cache)");
  app.add_option("--out", out, "output prefix for PREFIX.csv and PREFIX.json");
  app.add_flag("--ab-initio-only", ab_only, "compute or load the generic solution sets and stop");
  app.add_flag("--skip-gated-strata", skip_gated, "record gate decisions without solving the gated strata");
  app.add_flag("--experimental", experimental, "allow the 10-unknown systems");
  app.add_flag("--no-timing", no_timing, "write 0 in wall_ms so reruns are byte-identical");
  app.add_flag("-q,--quiet", quiet, "no progress output");
  CLI11_PARSE(app, argc, argv);

  rpr::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = rpr::load_config(config_path);
    if (!interps.empty()) cfg.interpretations = rpr::parse_interpretation_list(interps);
    if (poses) cfg.poses = *poses;
    if (!extra.empty()) cfg.extra_poses = rpr::parse_number_list(extra);
    if (seed) cfg.tracker.seed = *seed;
    if (!precision.empty()) cfg.tracker.precision = rpr::parse_precision(precision);
    if (!cache.empty()) cfg.cache_dir = cache;
    if (!out.empty()) cfg.out_prefix = out;
    cfg.ab_initio_only = cfg.ab_initio_only || ab_only;
    cfg.skip_gated = cfg.skip_gated || skip_gated;
    cfg.experimental = cfg.experimental || experimental;
    if (no_timing) cfg.timing = false;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "rprdist: configuration error: " << e.what() << "\n";
    return 2;
  }

  std::ostream* log = quiet ? nullptr : &std::cerr;
  try {
    if (cfg.ab_initio_only) {
      for (const auto& r : rpr::run_ab_initio(cfg, log))
        std::cout << r.key << ": " << r.finite << " finite, " << r.real << " real, " << r.failures << " failures, "
                  << r.paths << " paths\n";
      return 0;
    }
    const rpr::DistanceReport rep = rpr::run_pipeline(cfg, log);
    rpr::emit_report(rep, cfg.out_prefix);
    int failures = 0, unmatched = 0;
    for (const auto& r : rep.rows) {
      failures += r.path_failures;
      unmatched += r.winner_stratum == "no_match" ? 1 : 0;
    }
    std::cout << "wrote " << cfg.out_prefix << ".csv and " << cfg.out_prefix << ".json (" << rep.rows.size()
              << " rows, " << failures << " path failures, " << unmatched << " rows without a match)\n";
  } catch (const std::exception& e) {
    std::cerr << "rprdist: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
