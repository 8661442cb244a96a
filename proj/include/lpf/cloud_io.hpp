#pragma once

#include <string>

#include "lpf/point_cloud.hpp"

namespace lpf {

/// ASCII XYZ: one whitespace-separated x y z triple per line. Anything after
/// a '#' is a comment; extra trailing columns are ignored on read.
PointCloud read_xyz(const std::string& path);
void write_xyz(const PointCloud& cloud, const std::string& path);

/// PLY, ASCII or binary little-endian, element "vertex" with float or double
/// x/y/z. Unknown properties and elements are skipped on read; writes are
/// positions-only (binary little-endian, double precision).
PointCloud read_ply(const std::string& path);
void write_ply(const PointCloud& cloud, const std::string& path);

/// Dispatch on file extension (.xyz / .ply, case-insensitive).
PointCloud read_cloud(const std::string& path);
void write_cloud(const PointCloud& cloud, const std::string& path);

} // namespace lpf
