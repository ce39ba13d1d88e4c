#include "dnnlab/net_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dnnlab {

namespace {

void append_double(std::string& out, double x) {
  if (!std::isfinite(x)) throw DomainError("network file: non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  out += buf;
}

}  // namespace

std::string network_to_json(const NetworkFile& file) {
  std::string out = "{\"dims\":[";
  const std::vector<std::size_t>& dims = file.params.arch.dims();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(dims[i]);
  }
  out += "],\"theta\":[";
  for (std::size_t i = 0; i < file.params.theta.size(); ++i) {
    if (i) out += ',';
    append_double(out, file.params.theta[i]);
  }
  out += "],\"clip\":";
  if (file.clip) {
    out += '[';
    append_double(out, file.clip->first);
    out += ',';
    append_double(out, file.clip->second);
    out += ']';
  } else {
    out += "null";
  }
  out += "}\n";
  return out;
}

NetworkFile network_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<std::size_t> dims = j.at("dims").get<std::vector<std::size_t>>();
  std::vector<double> theta = j.at("theta").get<std::vector<double>>();
  std::optional<std::pair<double, double>> clip;
  if (!j.at("clip").is_null()) {
    auto c = j.at("clip").get<std::vector<double>>();
    if (c.size() != 2 || !(c[1] > c[0])) throw DomainError("network file: bad clip range");
    clip = {c[0], c[1]};
  }
  return NetworkFile{VectorizedParams(std::move(theta), Architecture(std::move(dims))), clip};
}

void save_network(const NetworkFile& file, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path.string() + " for writing");
  out << network_to_json(file);
  if (!out.good()) throw DomainError("write failed: " + path.string());
}

NetworkFile load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return network_from_json(ss.str());
}

}  // namespace dnnlab
