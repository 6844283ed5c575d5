#pragma once

#include <optional>
#include <string>

#include "rpr/tracker.hpp"

namespace rpr {

/// File of a generic solution set inside a cache directory.
std::string cache_path(const std::string& dir, const std::string& key);

/// Writes the set with its generic system dump; creates the directory if needed.
void save_generic(const GenericSolutionSet& G, const AssembledProblem& P, const std::string& path);

/// Loads a cached set; returns nothing when the file is missing or belongs to another
/// problem structure or seed. Malformed files throw.
std::optional<GenericSolutionSet> load_generic(const std::string& path, const AssembledProblem& P, uint64_t seed);

}  // namespace rpr
