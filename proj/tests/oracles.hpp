// Independent reference implementations used only by the tests.
#pragma once

#include "trusslock/voronoi.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

// Exhaustive nearest-sample labelling with the same tie-break as the
// library: smallest squared distance, then label, then sample index.
inline std::vector<std::uint8_t> brute_force_labels(const std::vector<trusslock::SiteCurve>& curves,
                                                    const trusslock::Torus& t, const trusslock::VoxelGrid& g)
{
  std::vector<std::uint8_t> out(std::size_t(g.size()), trusslock::kOutside);
  for (int z = 0; z < g.dims.z(); ++z)
    for (int y = 0; y < g.dims.y(); ++y)
      for (int x = 0; x < g.dims.x(); ++x) {
        const trusslock::Vec3 c = g.origin + (trusslock::Vec3(x, y, z) + trusslock::Vec3::Constant(0.5)) * g.spacing;
        if (!trusslock::point_in_torus(c, t)) continue;
        double best = std::numeric_limits<double>::infinity();
        int best_label = -1;
        for (const auto& curve : curves)
          for (const auto& p : curve.points) {
            const double dx = c.x() - p.x();
            const double dy = c.y() - p.y();
            const double dz = c.z() - p.z();
            const double d = dx * dx + dy * dy + dz * dz;
            // Curves are visited in label order and samples in index order,
            // so a strict comparison keeps the first minimum.
            if (d < best) {
              best = d;
              best_label = curve.label;
            }
          }
        out[std::size_t(x + std::int64_t(g.dims.x()) * (y + std::int64_t(g.dims.y()) * z))] =
            std::uint8_t(best_label);
      }
  return out;
}

struct StlTriangle
{
  float normal[3];
  float v[3][3];
};

struct StlFile
{
  std::uintmax_t bytes = 0;
  std::vector<StlTriangle> triangles;
};

inline std::uint32_t read_u32(const unsigned char* p)
{
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

inline float read_f32(const unsigned char* p)
{
  const std::uint32_t bits = read_u32(p);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

// Binary STL reader written from the format description, byte by byte.
inline StlFile parse_stl(const std::string& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (data.size() < 84) throw std::runtime_error("STL shorter than header");
  StlFile f;
  f.bytes = data.size();
  const std::uint32_t count = read_u32(&data[80]);
  if (data.size() != 84 + std::size_t(count) * 50) throw std::runtime_error("STL size does not match count");
  for (std::uint32_t i = 0; i < count; ++i) {
    const unsigned char* rec = &data[84 + std::size_t(i) * 50];
    StlTriangle t{};
    for (int k = 0; k < 3; ++k) t.normal[k] = read_f32(rec + 4 * k);
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < 3; ++k) t.v[v][k] = read_f32(rec + 12 + 12 * v + 4 * k);
    if (rec[48] != 0 || rec[49] != 0) throw std::runtime_error("nonzero attribute bytes");
    f.triangles.push_back(t);
  }
  return f;
}

inline double stl_volume(const StlFile& f)
{
  double vol = 0.0;
  for (const auto& t : f.triangles) {
    const double* a = nullptr;
    double p[3][3];
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < 3; ++k) p[v][k] = t.v[v][k];
    a = p[0];
    const double* b = p[1];
    const double* c = p[2];
    vol += a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
  }
  return vol / 6.0;
}

}  // namespace oracle
