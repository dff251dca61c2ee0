#pragma once

#include <string>
#include <vector>

#include "gaugekit/common.hpp"

namespace gaugekit {

// Uniform origin-centered grid.  Node i along axis a sits at
//   origin[a] + (i - (n[a]-1)/2) * spacing[a].
// Flattened storage is row-major (axis 0 slowest), components fastest.
struct GridSpec {
  std::vector<int> dims;
  std::vector<double> spacing;
  std::vector<double> origin;

  GridSpec() = default;
  GridSpec(std::vector<int> d, std::vector<double> h, std::vector<double> o = {});

  int dim() const { return static_cast<int>(dims.size()); }
  std::size_t node_count() const;
  double position(int axis, int index) const {
    return origin[axis] + (index - 0.5 * (dims[axis] - 1)) * spacing[axis];
  }
  Vec2 position2(int i0, int i1) const { return {position(0, i0), position(1, i1)}; }
  Vec3 position3(int i0, int i1, int i2) const {
    return {position(0, i0), position(1, i1), position(2, i2)};
  }
  std::size_t flat(int i0, int i1) const {
    return static_cast<std::size_t>(i0) * dims[1] + i1;
  }
  std::size_t flat(int i0, int i1, int i2) const {
    return (static_cast<std::size_t>(i0) * dims[1] + i1) * static_cast<std::size_t>(dims[2]) + i2;
  }
  // total half-extent along axis: distance from origin to outermost node
  double half_extent(int axis) const { return 0.5 * (dims[axis] - 1) * spacing[axis]; }
  bool operator==(const GridSpec& other) const = default;

  void validate() const;
};

// convenience: n nodes per axis spanning [-extent/2, extent/2] in every axis
GridSpec make_square_grid(int dim, int n, double extent);

struct SampledField {
  GridSpec grid;
  int components = 1;
  bool complex_valued = false;
  std::vector<double> values;  // real: [node][comp]; complex: interleaved re,im
  std::vector<std::string> annotations;

  std::size_t expected_size() const {
    return grid.node_count() * components * (complex_valued ? 2 : 1);
  }
  double& at(std::size_t node, int comp) { return values[node * components + comp]; }
  double at(std::size_t node, int comp) const { return values[node * components + comp]; }
  cplx cval(std::size_t node, int comp) const {
    std::size_t k = 2 * (node * components + comp);
    return {values[k], values[k + 1]};
  }
  void set_cval(std::size_t node, int comp, cplx v) {
    std::size_t k = 2 * (node * components + comp);
    values[k] = v.real();
    values[k + 1] = v.imag();
  }
  void validate() const;
};

SampledField make_field(const GridSpec& grid, int components, bool complex_valued = false);

// max-norm and L2 (cell-measure weighted) differences, used all over the tests
double max_abs_diff(const SampledField& a, const SampledField& b);
double rel_l2_diff(const SampledField& a, const SampledField& b);

}  // namespace gaugekit
