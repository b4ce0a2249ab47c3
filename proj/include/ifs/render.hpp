#pragma once

#include <string>

#include "ifs/geometry.hpp"

namespace ifs {

// Plain-text PGM occupancy raster: a pixel is 255 iff its cell contains at
// least one cloud point.  d=1 clouds render as a barcode strip (every row
// repeats the 1-d occupancy).  Output is byte-identical for identical input.
struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // row-major, top row first

  uint8_t at(int row, int col) const {
    return pixels[static_cast<size_t>(row) * width + col];
  }
};

RasterImage render_raster(const PointCloud& cloud, int width, int height,
                          const AmbientBox& bbox);
std::string to_pgm(const RasterImage& img);
void write_pgm(const RasterImage& img, const std::string& path);

}  // namespace ifs
