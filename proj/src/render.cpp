#include "ifs/render.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ifs {

RasterImage render_raster(const PointCloud& cloud, int width, int height,
                          const AmbientBox& bbox) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("raster dimensions must be positive");
  }
  const int d = bbox.dim();
  if (d > 2) throw std::invalid_argument("rendering supports d <= 2 only");
  RasterImage img;
  img.width = width;
  img.height = height;
  img.pixels.assign(static_cast<size_t>(width) * height, 0);

  const double wx = bbox.hi[0] - bbox.lo[0];
  const double wy = d == 2 ? bbox.hi[1] - bbox.lo[1] : 0.0;
  for (const auto& p : cloud.points) {
    if (!bbox.contains(p)) continue;
    int col = wx > 0.0 ? static_cast<int>(
                             std::floor((p[0] - bbox.lo[0]) / wx * width))
                       : 0;
    col = std::min(col, width - 1);
    if (d == 1) {
      for (int row = 0; row < height; ++row) {
        img.pixels[static_cast<size_t>(row) * width + col] = 255;
      }
      continue;
    }
    int cell_y = wy > 0.0 ? static_cast<int>(
                                std::floor((p[1] - bbox.lo[1]) / wy * height))
                          : 0;
    cell_y = std::min(cell_y, height - 1);
    const int row = height - 1 - cell_y;  // top row shows max y
    img.pixels[static_cast<size_t>(row) * width + col] = 255;
  }
  return img;
}

std::string to_pgm(const RasterImage& img) {
  std::ostringstream os;
  os << "P2\n" << img.width << ' ' << img.height << "\n255\n";
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      if (c) os << ' ';
      os << static_cast<int>(img.at(r, c));
    }
    os << '\n';
  }
  return os.str();
}

void write_pgm(const RasterImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image file: " + path);
  out << to_pgm(img);
}

}  // namespace ifs
