#pragma once

#include <map>
#include <string>
#include <vector>

#include "gaugekit/grid.hpp"
#include "gaugekit/xray.hpp"

namespace gaugekit {

// Grid file: `GRID <dim> <ncomp>` header, then dims / spacings / origin
// lines, then one value per line, row-major with components fastest.
// Complex fields put `re im` pairs on each line.  15+ significant digits.
void write_grid_file(const std::string& path, const SampledField& f);
SampledField read_grid_file(const std::string& path);

// Sinogram file: `SINO <nangles> <noffsets>`, angle start/step, offset
// start/step, then values row-major (angle-major).
void write_sinogram_file(const std::string& path, const Sinogram& s);
Sinogram read_sinogram_file(const std::string& path);

// Line-based `key = value` reports and configs, `#` comments.
using KeyValueMap = std::map<std::string, std::string>;
void write_report(const std::string& path, const KeyValueMap& kv);
KeyValueMap read_key_value_file(const std::string& path);
std::string serialize_key_values(const KeyValueMap& kv);

// CSV with a header row.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Portable graymap (P2) of a scalar field, min..max stretched to 0..255.
void write_pgm(const std::string& path, const SampledField& f, int component = 0);

std::string format_double(double v);  // 17 significant digits, round-trip safe

}  // namespace gaugekit
