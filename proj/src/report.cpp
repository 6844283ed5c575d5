#include "rpr/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rpr {

using nlohmann::json;

namespace {

const char* kCoordNames[12] = {"c1", "d1", "c2", "d2", "c3", "d3", "c4", "d4", "c5", "d5", "c6", "d6"};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string join(const std::vector<std::string>& v, char sep) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

// JSON has no NaN; a missing distance is written as null.
json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json coords_json(const std::array<double, 12>& c) {
  json a = json::array();
  for (double v : c) a.push_back(v);
  return a;
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << content;
    f.flush();
    if (!f) {
      f.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::vector<std::string> csv_columns() {
  std::vector<std::string> c = {"pose_index", "phi", "interpretation", "distance", "scaled_length", "winner_stratum"};
  for (const char* n : kCoordNames) c.emplace_back(n);
  for (const char* n : {"n_real", "n_minima", "n_saddles", "path_failures"}) c.emplace_back(n);
  for (BoundKind b : kBoundKinds) c.push_back("bound_" + bound_name(b));
  c.emplace_back("gates_triggered");
  c.emplace_back("wall_ms");
  return c;
}

std::string csv_header() { return join(csv_columns(), ','); }

std::string csv_line(const ReportRow& r) {
  std::vector<std::string> f = {std::to_string(r.pose_index), num(r.phi), r.interpretation, num(r.distance),
                                num(r.scaled_length), r.winner_stratum};
  for (double v : r.coords) f.push_back(num(v));
  for (int v : {r.n_real, r.n_minima, r.n_saddles, r.path_failures}) f.push_back(std::to_string(v));
  for (BoundKind b : kBoundKinds) {
    const auto it = r.bounds.find(b);
    f.push_back(it == r.bounds.end() ? "" : num(it->second));
  }
  f.push_back(join(r.gates, '|'));
  f.push_back(num(r.wall_ms));
  return join(f, ',');
}

std::string to_csv(const DistanceReport& rep) {
  std::string s = csv_header() + "\n";
  for (const auto& r : rep.rows) s += csv_line(r) + "\n";
  return s;
}

std::vector<ReportRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) throw std::invalid_argument("parse_csv: unexpected header");
  const size_t ncol = csv_columns().size();
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != ncol) throw std::invalid_argument("parse_csv: wrong field count");
    ReportRow r;
    size_t i = 0;
    r.pose_index = std::stoi(f[i++]);
    r.phi = std::stod(f[i++]);
    r.interpretation = f[i++];
    r.distance = std::stod(f[i++]);
    r.scaled_length = std::stod(f[i++]);
    r.winner_stratum = f[i++];
    for (double& v : r.coords) v = std::stod(f[i++]);
    r.n_real = std::stoi(f[i++]);
    r.n_minima = std::stoi(f[i++]);
    r.n_saddles = std::stoi(f[i++]);
    r.path_failures = std::stoi(f[i++]);
    for (BoundKind b : kBoundKinds) {
      const std::string& v = f[i++];
      if (!v.empty()) r.bounds[b] = std::stod(v);
    }
    if (!f[i].empty()) r.gates = split(f[i], '|');
    ++i;
    r.wall_ms = std::stod(f[i++]);
    rows.push_back(std::move(r));
  }
  return rows;
}

json to_json(const DistanceReport& rep) {
  json j;
  json g = json::array();
  for (const auto& s : rep.generic)
    g.push_back({{"key", s.key},
                 {"paths", s.paths},
                 {"finite", s.finite},
                 {"real", s.real},
                 {"failures", s.failures},
                 {"from_cache", s.from_cache},
                 {"seconds", s.seconds}});
  j["generic"] = g;
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json row;
    row["pose_index"] = r.pose_index;
    row["phi"] = r.phi;
    row["interpretation"] = r.interpretation;
    row["distance"] = jnum(r.distance);
    row["scaled_length"] = jnum(r.scaled_length);
    row["winner_stratum"] = r.winner_stratum;
    row["configuration"] = coords_json(r.coords);
    row["pose"] = coords_json(r.pose);
    row["n_real"] = r.n_real;
    row["n_minima"] = r.n_minima;
    row["n_saddles"] = r.n_saddles;
    row["path_failures"] = r.path_failures;
    json b = json::object();
    for (const auto& [k, v] : r.bounds) b[bound_name(k)] = v;
    row["bounds"] = b;
    row["gates_triggered"] = r.gates;
    row["notes"] = r.notes;
    json cands = json::array();
    for (const auto& c : r.candidates)
      cands.push_back({{"stratum", c.stratum},
                       {"density", c.density},
                       {"classification", c.classification},
                       {"configuration", coords_json(c.coords)},
                       {"verdict", c.verdict},
                       {"match_distance", jnum(c.match_distance)}});
    row["candidates"] = cands;
    rows.push_back(std::move(row));
  }
  j["rows"] = rows;
  return j;
}

void emit_report(const DistanceReport& rep, const std::string& prefix) {
  const std::filesystem::path p(prefix + ".csv");
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string csv = prefix + ".csv", js = prefix + ".json";
  write_atomically(csv, to_csv(rep));
  try {
    write_atomically(js, to_json(rep).dump(1) + "\n");
  } catch (...) {
    std::filesystem::remove(csv);
    throw;
  }
}

}  // namespace rpr
