#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlab/grid.hpp"

namespace rlab {

using json = nlohmann::json;

// %.17g round-trips doubles exactly and is locale-independent, so serialized
// artifacts are byte-identical across runs.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string config_hash(const json& cfg) {
  std::uint64_t h = fnv1a(cfg.dump());
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

inline json density_to_json(const DensityFunction& f) {
  json j;
  j["n"] = f.n();
  j["h_omega"] = f.h_omega();
  json bounds = json::array();
  for (const auto& a : f.axes()) bounds.push_back({{"lo", a.lo}, {"h", a.h}, {"count", a.count}});
  j["bounds"] = bounds;
  std::vector<double> interleaved;
  interleaved.reserve(2 * f.total_count());
  for (const auto& v : f.samples()) {
    interleaved.push_back(v.real());
    interleaved.push_back(v.imag());
  }
  j["re_im"] = interleaved;
  return j;
}

inline DensityFunction density_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  std::vector<AxisGrid> axes;
  for (const auto& b : j.at("bounds"))
    axes.push_back(AxisGrid{b.at("lo").get<double>(), b.at("h").get<double>(), b.at("count").get<int>()});
  DensityFunction f(n, axes);
  const auto& ri = j.at("re_im");
  if (ri.size() != 2 * f.total_count()) throw std::runtime_error("density_from_json: size mismatch");
  for (std::size_t i = 0; i < f.total_count(); ++i)
    f.at(i) = cplx(ri[2 * i].get<double>(), ri[2 * i + 1].get<double>());
  return f;
}

// CSV rows: x_1,...,x_n,re,im
inline std::string field_to_csv(const SampledField& field) {
  std::ostringstream os;
  if (!field.points.empty()) {
    for (std::size_t a = 0; a < field.points[0].size(); ++a) os << "x" << (a + 1) << ",";
    os << "re,im\n";
  }
  for (std::size_t i = 0; i < field.size(); ++i) {
    for (double c : field.points[i]) os << fmt_double(c) << ",";
    os << fmt_double(field.values[i].real()) << "," << fmt_double(field.values[i].imag()) << "\n";
  }
  return os.str();
}

}  // namespace rlab
