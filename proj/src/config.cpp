#include "rpr/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rpr {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_num(const std::string& key, const std::string& v) {
  size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
  }
  if (used != v.size()) throw std::invalid_argument("config: " + key + " expects a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_num(key, v);
  if (x != std::floor(x) || std::abs(x) > 2e9) throw std::invalid_argument("config: " + key + " expects an integer");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: " + key + " expects true/false");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw std::invalid_argument("config: duplicate key " + key);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::vector<Interpretation> parse_interpretation_list(const std::string& s) {
  if (trim(s) == "all") return all_interpretations();
  std::vector<Interpretation> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const Interpretation i = parse_interpretation(item);
    bool dup = false;
    for (const auto& o : out) dup = dup || o == i;
    if (!dup) out.push_back(i);
  }
  if (out.empty()) throw std::invalid_argument("empty interpretation list");
  return out;
}

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_num("list", item));
  }
  return out;
}

Precision parse_precision(const std::string& s) {
  if (s == "double") return Precision::double_precision;
  if (s == "dd" || s == "double-double") return Precision::double_double;
  throw std::invalid_argument("precision must be double or dd");
}

std::vector<MotionTerm> parse_motion_terms(const std::string& s) {
  std::vector<MotionTerm> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    std::istringstream t(item);
    MotionTerm m;
    if (!(t >> m.coef >> m.cos_pow >> m.sin_pow >> m.phi_pow))
      throw std::invalid_argument("motion term needs 'coef cos_pow sin_pow phi_pow': " + item);
    std::string extra;
    if (t >> extra) throw std::invalid_argument("motion term has trailing text: " + item);
    if (m.cos_pow < 0 || m.sin_pow < 0 || m.phi_pow < 0) throw std::invalid_argument("negative motion power");
    out.push_back(m);
  }
  return out;
}

RunConfig config_from_text(const std::string& text, RunConfig c) {
  auto kv = parse_key_values(text);
  auto take = [&](const std::string& k, std::string& v) {
    const auto it = kv.find(k);
    if (it == kv.end()) return false;
    v = it->second;
    kv.erase(it);
    return true;
  };
  std::string v;
  if (take("design.x2", v)) c.design.x2 = to_num("design.x2", v);
  if (take("design.x3", v)) c.design.x3 = to_num("design.x3", v);
  if (take("design.y3", v)) c.design.y3 = to_num("design.y3", v);
  if (take("design.x5", v)) c.design.x5 = to_num("design.x5", v);
  if (take("design.x6", v)) c.design.x6 = to_num("design.x6", v);
  if (take("design.y6", v)) c.design.y6 = to_num("design.y6", v);

  if (take("motion.kind", v)) {
    if (v == "example56") {
      c.motion = MotionSpec::example56();
    } else if (v == "table") {
      c.motion = MotionSpec{};
    } else {
      throw std::invalid_argument("motion.kind must be example56 or table");
    }
    c.motion_kind = v;
  }
  const bool table = c.motion_kind == "table";
  for (const char* k : {"motion.rot_scale", "motion.rot_offset", "motion.tx", "motion.ty"})
    if (kv.count(k) && !table) throw std::invalid_argument(std::string(k) + " needs motion.kind = table");
  if (take("motion.rot_scale", v)) c.motion.rot_scale = to_num("motion.rot_scale", v);
  if (take("motion.rot_offset", v)) c.motion.rot_offset = to_num("motion.rot_offset", v);
  if (take("motion.tx", v)) c.motion.tx = parse_motion_terms(v);
  if (take("motion.ty", v)) c.motion.ty = parse_motion_terms(v);
  if (take("motion.u", v)) c.motion.u = to_num("motion.u", v);
  if (take("motion.v", v)) c.motion.v = to_num("motion.v", v);

  if (take("run.interpretations", v)) c.interpretations = parse_interpretation_list(v);
  if (take("run.poses", v)) c.poses = to_int("run.poses", v);
  if (take("run.extra_poses", v)) c.extra_poses = parse_number_list(v);
  if (take("run.experimental", v)) c.experimental = to_bool("run.experimental", v);
  if (take("run.skip_gated_strata", v)) c.skip_gated = to_bool("run.skip_gated_strata", v);
  if (take("run.timing", v)) c.timing = to_bool("run.timing", v);

  TrackerSettings& t = c.tracker;
  if (take("tracker.seed", v)) t.seed = static_cast<uint64_t>(std::stoull(v));
  if (take("tracker.tol", v)) t.tol = to_num("tracker.tol", v);
  if (take("tracker.newton_tol", v)) t.newton_tol = to_num("tracker.newton_tol", v);
  if (take("tracker.max_steps", v)) t.max_steps = to_int("tracker.max_steps", v);
  if (take("tracker.min_step", v)) t.min_step = to_num("tracker.min_step", v);
  if (take("tracker.max_step", v)) t.max_step = to_num("tracker.max_step", v);
  if (take("tracker.endgame_h", v)) t.endgame_h = to_num("tracker.endgame_h", v);
  if (take("tracker.diverge_norm", v)) t.diverge_norm = to_num("tracker.diverge_norm", v);
  if (take("tracker.finite_norm", v)) t.finite_norm = to_num("tracker.finite_norm", v);
  if (take("tracker.retries", v)) t.retries = to_int("tracker.retries", v);
  if (take("tracker.precision", v)) t.precision = parse_precision(v);
  if (take("tracker.parallel", v)) t.parallel = to_bool("tracker.parallel", v);

  if (take("postprocess.delta", v)) c.delta = to_num("postprocess.delta", v);
  if (take("postprocess.imag_tol", v)) c.imag_tol = to_num("postprocess.imag_tol", v);
  if (take("report.scale", v)) c.scale = to_num("report.scale", v);
  if (take("output.prefix", v)) c.out_prefix = v;
  if (take("output.cache", v)) c.cache_dir = v;

  if (!kv.empty()) throw std::invalid_argument("config: unknown key " + kv.begin()->first);
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return config_from_text(ss.str(), std::move(base));
}

void RunConfig::validate() const {
  design.validate();
  if (!(motion.v > motion.u)) throw std::invalid_argument("motion interval must satisfy u < v");
  if (poses < 2) throw std::invalid_argument("run.poses must be at least 2");
  for (double p : extra_poses)
    if (!(p >= motion.u && p <= motion.v)) throw std::invalid_argument("extra pose outside the motion interval");
  if (interpretations.empty()) throw std::invalid_argument("no interpretations selected");
  tracker.validate();
  if (!(delta > 0.0) || !(imag_tol > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("delta, imag_tol and scale must be positive");
  if (out_prefix.empty()) throw std::invalid_argument("output prefix is empty");
}

}  // namespace rpr
