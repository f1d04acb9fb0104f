#pragma once

#include <iosfwd>
#include <string>

#include "hhf/types.hpp"

namespace hhf {

// Dense projector file. All fields little-endian:
//   char[8]  magic "HHFPROJ1"
//   int32    d
//   int32    L
//   float64  g
//   float64  delta
//   uint64   n            (rows = cols = 2 L^d)
//   float64  entries[2 n n]  row-major, re/im interleaved
struct ProjectorFile {
  int d = 0;
  int L = 0;
  double g = 0.0;
  double delta = 0.0;
  CMat matrix;
};

void write_projector(std::ostream& out, const ProjectorFile& f);
ProjectorFile read_projector(std::istream& in);
void save_projector(const std::string& path, const ProjectorFile& f);
ProjectorFile load_projector(const std::string& path);

}  // namespace hhf
