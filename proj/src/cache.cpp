#include "rpr/cache.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rpr {

using nlohmann::json;

namespace {

json cvec(const cdouble* z, size_t n) {
  json a = json::array();
  for (size_t i = 0; i < n; ++i) a.push_back({z[i].real(), z[i].imag()});
  return a;
}

template <class Out>
void read_cvec(const json& a, Out& out, size_t n) {
  if (!a.is_array() || a.size() != n) throw std::runtime_error("cache: vector of wrong length");
  for (size_t i = 0; i < n; ++i) out[i] = cdouble(a[i].at(0).get<double>(), a[i].at(1).get<double>());
}

}  // namespace

std::string cache_path(const std::string& dir, const std::string& key) {
  std::string name;
  for (char c : key) name += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '+') ? c : '_';
  return (std::filesystem::path(dir) / (name + ".json")).string();
}

void save_generic(const GenericSolutionSet& G, const AssembledProblem& P, const std::string& path) {
  json j;
  j["key"] = G.key;
  j["fingerprint"] = G.fingerprint;
  j["seed"] = G.seed;
  j["paths"] = G.paths;
  j["failures"] = G.failures;
  j["diverged"] = G.diverged;
  j["generic_configuration"] = cvec(G.KC.data(), G.KC.size());
  j["primitives"] = cvec(G.primitives.data(), G.primitives.size());
  json e = json::array();
  for (const auto& p : G.endpoints) e.push_back(cvec(p.data(), p.size()));
  j["endpoints"] = e;
  j["system"] = dump_system(P.instantiate(params_of(G.primitives, P.omega)));

  const std::filesystem::path fp(path);
  if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << j.dump(1) << '\n';
    if (!f) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::optional<GenericSolutionSet> load_generic(const std::string& path, const AssembledProblem& P, uint64_t seed) {
  std::ifstream f(path);
  if (!f) return std::nullopt;
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("cache " + path + " is not valid JSON: " + e.what());
  }
  try {
    if (j.at("fingerprint").get<std::string>() != problem_fingerprint(P)) return std::nullopt;
    if (j.at("seed").get<uint64_t>() != seed) return std::nullopt;
    GenericSolutionSet G;
    G.key = j.at("key").get<std::string>();
    G.fingerprint = j.at("fingerprint").get<std::string>();
    G.seed = seed;
    G.paths = j.at("paths").get<long long>();
    G.failures = j.at("failures").get<int>();
    G.diverged = j.at("diverged").get<int>();
    read_cvec(j.at("generic_configuration"), G.KC, G.KC.size());
    read_cvec(j.at("primitives"), G.primitives, G.primitives.size());
    for (const auto& e : j.at("endpoints")) {
      std::vector<cdouble> p(P.n_unknowns);
      read_cvec(e, p, p.size());
      G.endpoints.push_back(std::move(p));
    }
    // the stored system must be the one the primitives produce
    const std::string dump = dump_system(P.instantiate(params_of(G.primitives, P.omega)));
    if (j.at("system").get<std::string>() != dump) return std::nullopt;
    return G;
  } catch (const json::exception& e) {
    throw std::runtime_error("cache " + path + " is malformed: " + e.what());
  }
}

}  // namespace rpr
