#pragma once

#include <string>
#include <vector>

#include "mcwlan/config.hpp"

namespace mcwlan {

// Named reference topologies: path4, path5, hex7, arbitrary7, grid12.
std::vector<Topology> bundled_fixtures();
Topology bundled_fixture(const std::string& name);  // throws ConfigError

}  // namespace mcwlan
