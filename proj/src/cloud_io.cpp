#include "lpf/cloud_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "lpf/errors.hpp"

namespace lpf {

namespace {

std::string lower_ext(const std::string& path) {
  auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct PlyProperty {
  std::string type;
  std::string name;
  bool is_list = false;
  std::string count_type;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

std::size_t scalar_size(const std::string& type) {
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
  if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
  if (type == "int" || type == "uint" || type == "int32" || type == "uint32" ||
      type == "float" || type == "float32")
    return 4;
  if (type == "double" || type == "float64") return 8;
  throw FormatError("ply: unsupported property type '" + type + "'");
}

double read_scalar_binary(std::istream& in, const std::string& type) {
  unsigned char buf[8];
  std::size_t sz = scalar_size(type);
  in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(sz));
  if (!in) throw FormatError("ply: unexpected end of binary data");
  // assumes little-endian host for multi-byte reads (x86/arm64)
  if (type == "char" || type == "int8") return static_cast<double>(static_cast<signed char>(buf[0]));
  if (type == "uchar" || type == "uint8") return static_cast<double>(buf[0]);
  if (type == "short" || type == "int16") {
    std::int16_t v;
    std::memcpy(&v, buf, 2);
    return v;
  }
  if (type == "ushort" || type == "uint16") {
    std::uint16_t v;
    std::memcpy(&v, buf, 2);
    return v;
  }
  if (type == "int" || type == "int32") {
    std::int32_t v;
    std::memcpy(&v, buf, 4);
    return v;
  }
  if (type == "uint" || type == "uint32") {
    std::uint32_t v;
    std::memcpy(&v, buf, 4);
    return v;
  }
  if (type == "float" || type == "float32") {
    float v;
    std::memcpy(&v, buf, 4);
    return v;
  }
  double v;
  std::memcpy(&v, buf, 8);
  return v;
}

} // namespace

PointCloud read_xyz(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<Vec3> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    double x, y, z;
    if (ss >> x) {
      if (!(ss >> y >> z))
        throw FormatError(path + ":" + std::to_string(line_no) + ": expected x y z");
      pts.emplace_back(x, y, z);
    }
  }
  return PointCloud(std::move(pts));
}

void write_xyz(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  char buf[128];
  for (const Vec3& p : cloud.points()) {
    // %.17g round-trips doubles exactly
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

PointCloud read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ply") throw FormatError(path + ": not a ply file");

  std::string format;
  std::vector<PlyElement> elements;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "comment" || word == "obj_info" || word.empty()) continue;
    if (word == "format") {
      ss >> format;
      if (format != "ascii" && format != "binary_little_endian")
        throw FormatError(path + ": unsupported ply format '" + format + "'");
    } else if (word == "element") {
      PlyElement el;
      ss >> el.name >> el.count;
      elements.push_back(el);
    } else if (word == "property") {
      if (elements.empty()) throw FormatError(path + ": property before element");
      PlyProperty prop;
      ss >> prop.type;
      if (prop.type == "list") {
        prop.is_list = true;
        ss >> prop.count_type >> prop.type >> prop.name;
      } else {
        ss >> prop.name;
      }
      elements.back().properties.push_back(prop);
    } else if (word == "end_header") {
      break;
    } else {
      throw FormatError(path + ": unexpected header line '" + line + "'");
    }
  }
  if (format.empty()) throw FormatError(path + ": missing format line");

  std::vector<Vec3> pts;
  bool ascii = format == "ascii";
  for (const PlyElement& el : elements) {
    int ix = -1, iy = -1, iz = -1;
    if (el.name == "vertex") {
      for (std::size_t i = 0; i < el.properties.size(); ++i) {
        const auto& p = el.properties[i];
        if (p.is_list) continue;
        if (p.name == "x") ix = static_cast<int>(i);
        if (p.name == "y") iy = static_cast<int>(i);
        if (p.name == "z") iz = static_cast<int>(i);
      }
      if (ix < 0 || iy < 0 || iz < 0)
        throw FormatError(path + ": vertex element lacks x/y/z");
      pts.reserve(el.count);
    }
    for (std::size_t row = 0; row < el.count; ++row) {
      double x = 0, y = 0, z = 0;
      if (ascii) {
        std::string data_line;
        do {
          if (!std::getline(in, data_line))
            throw FormatError(path + ": unexpected end of data");
        } while (data_line.find_first_not_of(" \t\r") == std::string::npos);
        std::istringstream ss(data_line);
        for (std::size_t i = 0; i < el.properties.size(); ++i) {
          const auto& prop = el.properties[i];
          if (prop.is_list) {
            long long count;
            if (!(ss >> count)) throw FormatError(path + ": bad list count");
            double skip;
            for (long long k = 0; k < count; ++k)
              if (!(ss >> skip)) throw FormatError(path + ": bad list entry");
            continue;
          }
          double v;
          if (!(ss >> v)) throw FormatError(path + ": bad scalar value");
          if (static_cast<int>(i) == ix) x = v;
          if (static_cast<int>(i) == iy) y = v;
          if (static_cast<int>(i) == iz) z = v;
        }
      } else {
        for (std::size_t i = 0; i < el.properties.size(); ++i) {
          const auto& prop = el.properties[i];
          if (prop.is_list) {
            double count = read_scalar_binary(in, prop.count_type);
            for (long long k = 0; k < static_cast<long long>(count); ++k)
              read_scalar_binary(in, prop.type);
            continue;
          }
          double v = read_scalar_binary(in, prop.type);
          if (static_cast<int>(i) == ix) x = v;
          if (static_cast<int>(i) == iy) y = v;
          if (static_cast<int>(i) == iz) z = v;
        }
      }
      if (el.name == "vertex") pts.emplace_back(x, y, z);
    }
  }
  return PointCloud(std::move(pts));
}

void write_ply(const PointCloud& cloud, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << cloud.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "end_header\n";
  for (const Vec3& p : cloud.points()) {
    double xyz[3] = {p.x(), p.y(), p.z()};
    out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
  }
  if (!out) throw IoError("write failed: " + path);
}

PointCloud read_cloud(const std::string& path) {
  std::string ext = lower_ext(path);
  if (ext == "ply") return read_ply(path);
  if (ext == "xyz" || ext == "txt" || ext == "pts") return read_xyz(path);
  throw FormatError("unsupported cloud extension: " + path);
}

void write_cloud(const PointCloud& cloud, const std::string& path) {
  std::string ext = lower_ext(path);
  if (ext == "ply") {
    write_ply(cloud, path);
  } else if (ext == "xyz" || ext == "txt" || ext == "pts") {
    write_xyz(cloud, path);
  } else {
    throw FormatError("unsupported cloud extension: " + path);
  }
}

} // namespace lpf
