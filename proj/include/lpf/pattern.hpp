#pragma once

#include <cstdint>
#include <vector>

#include "lpf/geometry.hpp"

namespace lpf {

/// Planar sampling pattern: M offset vectors in the canonical plane (z = 0),
/// all inside the disk of the given radius.
struct Pattern {
  std::vector<Vec3> offsets;
  double radius = 0.0;
  double tau_s = 0.0; // node spacing for grids, r/sqrt(M) estimate otherwise

  int size() const { return static_cast<int>(offsets.size()); }
};

/// Regular grid with a node at the origin and step 2r/grid_n, intersected
/// with the open disk of radius r. This convention yields M = 193 / 793 /
/// 3205 for grid_n = 16 / 32 / 64 (verified by tests), and is symmetric:
/// whenever u is an offset so is -u.
Pattern grid_pattern(int grid_n, double r);

/// m offsets drawn uniformly in the disk of radius r.
Pattern random_pattern(int m, double r, std::uint64_t rng_seed);

/// Mean inter-point distance estimate for m points uniform in a disk of
/// radius r: r / sqrt(m).
double spacing_for(double r, int m);

} // namespace lpf
