// Shared low-resolution vertex builds, computed once per test binary.
#pragma once

#include "trusslock/pipeline.hpp"

#include <map>

namespace fixture {

inline const trusslock::VertexBuild& vertex(int resolution = 16, int valence = 3)
{
  static std::map<std::pair<int, int>, trusslock::VertexBuild> cache;
  const auto key = std::make_pair(resolution, valence);
  auto it = cache.find(key);
  if (it == cache.end()) {
    trusslock::RunConfig c = trusslock::RunConfig::defaults();
    c.resolution = resolution;
    c.curves = trusslock::CurveParams::defaults_for(c.torus(), valence);
    c.threads = 4;
    it = cache.emplace(key, trusslock::build_vertex(c)).first;
  }
  return it->second;
}

}  // namespace fixture
