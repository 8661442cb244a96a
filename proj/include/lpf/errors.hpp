#pragma once

#include <stdexcept>
#include <string>

namespace lpf {

/// File could not be opened or read/written.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File content does not parse as the expected format.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Snapshot written by an incompatible library version.
class VersionError : public FormatError {
public:
  VersionError(int file_version, int supported_version)
      : FormatError("snapshot version " + std::to_string(file_version) +
                    " is not supported (this build reads version " +
                    std::to_string(supported_version) + ")"),
        file_version(file_version),
        supported_version(supported_version) {}
  int file_version;
  int supported_version;
};

} // namespace lpf
