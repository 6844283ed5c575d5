#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpr/bounds.hpp"

namespace rpr {

struct CandidateRecord {
  std::string stratum;
  double density = 0.0;
  std::string classification;
  std::array<double, 12> coords{};  // pose frame
  std::string verdict;              // matched, rejected, not examined, not a minimum
  double match_distance = -1.0;     // negative when not examined
};

struct ReportRow {
  int pose_index = 0;
  double phi = 0.0;
  std::string interpretation;
  double distance = 0.0;  // NaN when no candidate was matched
  double scaled_length = 0.0;
  std::string winner_stratum;  // ProblemKind key, or "no_match"
  std::array<double, 12> coords{};
  std::array<double, 12> pose{};  // the given configuration, normalized
  int n_real = 0;
  int n_minima = 0;
  int n_saddles = 0;
  int path_failures = 0;
  std::map<BoundKind, double> bounds;
  std::vector<std::string> gates;  // names of the triggered bounds
  std::vector<std::string> notes;
  double wall_ms = 0.0;
  std::vector<CandidateRecord> candidates;
};

struct GenericRecord {
  std::string key;
  long long paths = 0;
  int finite = 0;
  int real = 0;
  int failures = 0;
  bool from_cache = false;
  double seconds = 0.0;
};

struct DistanceReport {
  std::vector<ReportRow> rows;
  std::vector<GenericRecord> generic;
};

std::vector<std::string> csv_columns();
std::string csv_header();
std::string csv_line(const ReportRow& r);
std::string to_csv(const DistanceReport& rep);
/// Parses a CSV produced by to_csv (fields other than the candidates and notes).
std::vector<ReportRow> parse_csv(const std::string& text);
nlohmann::json to_json(const DistanceReport& rep);

/// Writes PREFIX.csv and PREFIX.json; on failure nothing partial is left behind.
void emit_report(const DistanceReport& rep, const std::string& prefix);

}  // namespace rpr
