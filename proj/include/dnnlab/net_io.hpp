#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include "dnnlab/net.hpp"

namespace dnnlab {

// Portable network file: {"dims":[...],"theta":[...],"clip":[u,v]|null}.
// theta is in T-ordering; numbers are written with 17 significant digits so
// the round trip is bit-exact. clip endpoints must be finite.
struct NetworkFile {
  VectorizedParams params;
  std::optional<std::pair<double, double>> clip;
};

std::string network_to_json(const NetworkFile& file);
NetworkFile network_from_json(const std::string& text);

void save_network(const NetworkFile& file, const std::filesystem::path& path);
NetworkFile load_network(const std::filesystem::path& path);

}  // namespace dnnlab
