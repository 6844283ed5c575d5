#pragma once

#include <map>
#include <string>
#include <vector>

#include "rpr/model.hpp"
#include "rpr/tracker.hpp"

namespace rpr {

struct RunConfig {
  ManipulatorDesign design = example_design();
  std::string motion_kind = "example56";  // or "table"
  MotionSpec motion = MotionSpec::example56();
  std::vector<Interpretation> interpretations{Interpretation{Kind::rigid, Kind::rigid}};
  int poses = 90;
  std::vector<double> extra_poses;
  TrackerSettings tracker;
  double delta = 1e-8;     // match threshold of the identification step
  double imag_tol = 1e-6;  // relative to 1 + |x|
  double scale = 14.142135623730951;  // s in the s * sqrt(D) column
  std::string out_prefix = "rprdist";
  std::string cache_dir;  // empty: PREFIX.cache
  bool ab_initio_only = false;
  bool skip_gated = false;
  bool experimental = false;
  bool timing = true;

  void validate() const;  // throws std::invalid_argument
  std::string effective_cache_dir() const { return cache_dir.empty() ? out_prefix + ".cache" : cache_dir; }
};

/// Flat "section.key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies recognized keys on top of `base`; unknown keys are errors.
RunConfig config_from_text(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// "all" or a comma separated list such as "rigid/rigid,bar/rigid".
std::vector<Interpretation> parse_interpretation_list(const std::string& s);
std::vector<double> parse_number_list(const std::string& s);
Precision parse_precision(const std::string& s);

/// Terms "coef cos_pow sin_pow phi_pow" separated by ';'.
std::vector<MotionTerm> parse_motion_terms(const std::string& s);

}  // namespace rpr
