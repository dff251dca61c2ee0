#include "gaugekit/grid.hpp"

#include <cmath>

namespace gaugekit {

GridSpec::GridSpec(std::vector<int> d, std::vector<double> h, std::vector<double> o)
    : dims(std::move(d)), spacing(std::move(h)), origin(std::move(o)) {
  if (origin.empty()) origin.assign(dims.size(), 0.0);
  validate();
}

std::size_t GridSpec::node_count() const {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

void GridSpec::validate() const {
  if (dims.empty() || dims.size() > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
  if (spacing.size() != dims.size() || origin.size() != dims.size())
    throw ConfigError("grid dims/spacing/origin size mismatch");
  for (int d : dims)
    if (d < 1) throw ConfigError("grid dims must be positive");
  for (double h : spacing)
    if (!(h > 0.0)) throw ConfigError("grid spacing must be positive");
}

GridSpec make_square_grid(int dim, int n, double extent) {
  if (n < 2) throw ConfigError("grid needs at least 2 nodes per axis");
  double h = extent / (n - 1);
  return GridSpec(std::vector<int>(dim, n), std::vector<double>(dim, h));
}

SampledField make_field(const GridSpec& grid, int components, bool complex_valued) {
  SampledField f;
  f.grid = grid;
  f.components = components;
  f.complex_valued = complex_valued;
  f.values.assign(f.expected_size(), 0.0);
  return f;
}

void SampledField::validate() const {
  grid.validate();
  if (components < 1 || components > 3) throw ConfigError("field components must be 1..3");
  if (values.size() != expected_size())
    throw ConfigError("field value count does not match dims x components");
}

double max_abs_diff(const SampledField& a, const SampledField& b) {
  if (a.values.size() != b.values.size()) throw ConfigError("field size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

double rel_l2_diff(const SampledField& a, const SampledField& b) {
  if (a.values.size() != b.values.size()) throw ConfigError("field size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double d = a.values[i] - b.values[i];
    num += d * d;
    den += b.values[i] * b.values[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace gaugekit
