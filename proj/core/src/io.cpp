#include "gaugekit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gaugekit {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_grid_file(const std::string& path, const SampledField& f) {
  f.validate();
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << "GRID " << f.grid.dim() << " " << f.components << "\n";
  for (int a = 0; a < f.grid.dim(); ++a) out << (a ? " " : "") << f.grid.dims[a];
  out << "\n";
  for (int a = 0; a < f.grid.dim(); ++a) out << (a ? " " : "") << format_double(f.grid.spacing[a]);
  out << "\n";
  for (int a = 0; a < f.grid.dim(); ++a) out << (a ? " " : "") << format_double(f.grid.origin[a]);
  out << "\n";
  std::size_t entries = f.grid.node_count() * f.components;
  for (std::size_t i = 0; i < entries; ++i) {
    if (f.complex_valued)
      out << format_double(f.values[2 * i]) << " " << format_double(f.values[2 * i + 1]) << "\n";
    else
      out << format_double(f.values[i]) << "\n";
  }
  if (!out) throw ConfigError("write failed: " + path);
}

SampledField read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  std::string magic;
  int dim = 0, ncomp = 0;
  in >> magic >> dim >> ncomp;
  if (magic != "GRID" || dim < 1 || dim > 3 || ncomp < 1 || ncomp > 3)
    throw ConfigError("not a grid file: " + path);
  std::vector<int> dims(dim);
  std::vector<double> spacing(dim), origin(dim);
  for (int a = 0; a < dim; ++a) in >> dims[a];
  for (int a = 0; a < dim; ++a) in >> spacing[a];
  for (int a = 0; a < dim; ++a) in >> origin[a];
  if (!in) throw ConfigError("truncated grid header: " + path);
  std::string rest;
  std::getline(in, rest);
  SampledField f;
  f.grid = GridSpec(dims, spacing, origin);
  f.components = ncomp;
  // complex files carry two tokens per line
  std::string line;
  std::vector<double> vals;
  int tokens_per_line = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double a, b;
    if (ls >> a) {
      if (ls >> b) {
        if (tokens_per_line == 1) throw ConfigError("mixed real/complex rows: " + path);
        tokens_per_line = 2;
        vals.push_back(a);
        vals.push_back(b);
      } else {
        if (tokens_per_line == 2) throw ConfigError("mixed real/complex rows: " + path);
        tokens_per_line = 1;
        vals.push_back(a);
      }
    }
  }
  f.complex_valued = tokens_per_line == 2;
  f.values = std::move(vals);
  f.validate();
  return f;
}

void write_sinogram_file(const std::string& path, const Sinogram& s) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << "SINO " << s.n_angles << " " << s.n_offsets << "\n";
  out << format_double(s.angle_start) << " " << format_double(s.angle_step) << "\n";
  out << format_double(s.offset_start) << " " << format_double(s.offset_step) << "\n";
  for (double v : s.values) out << format_double(v) << "\n";
  if (!out) throw ConfigError("write failed: " + path);
}

Sinogram read_sinogram_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  std::string magic;
  Sinogram s;
  in >> magic >> s.n_angles >> s.n_offsets;
  if (magic != "SINO" || s.n_angles < 1 || s.n_offsets < 1)
    throw ConfigError("not a sinogram file: " + path);
  in >> s.angle_start >> s.angle_step;
  in >> s.offset_start >> s.offset_step;
  s.values.resize(static_cast<std::size_t>(s.n_angles) * s.n_offsets);
  for (double& v : s.values) in >> v;
  if (!in) throw ConfigError("truncated sinogram: " + path);
  return s;
}

void write_report(const std::string& path, const KeyValueMap& kv) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << serialize_key_values(kv);
  if (!out) throw ConfigError("write failed: " + path);
}

std::string serialize_key_values(const KeyValueMap& kv) {
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
  return out.str();
}

KeyValueMap read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  KeyValueMap kv;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("bad config line in " + path + ": " + line);
    kv[key] = val;
  }
  return kv;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

void write_pgm(const std::string& path, const SampledField& f, int component) {
  if (f.grid.dim() != 2) throw ConfigError("write_pgm: 2D fields only");
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  double lo = 1e300, hi = -1e300;
  auto value = [&](std::size_t n) {
    return f.complex_valued ? std::abs(f.cval(n, component)) : f.at(n, component);
  };
  for (std::size_t n = 0; n < f.grid.node_count(); ++n) {
    lo = std::min(lo, value(n));
    hi = std::max(hi, value(n));
  }
  double span = hi > lo ? hi - lo : 1.0;
  out << "P2\n" << f.grid.dims[1] << " " << f.grid.dims[0] << "\n255\n";
  for (int i = 0; i < f.grid.dims[0]; ++i) {
    for (int j = 0; j < f.grid.dims[1]; ++j) {
      int v = static_cast<int>(std::lround(255.0 * (value(f.grid.flat(i, j)) - lo) / span));
      out << v << (j + 1 == f.grid.dims[1] ? "" : " ");
    }
    out << "\n";
  }
}

}  // namespace gaugekit
