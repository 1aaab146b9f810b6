#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ddix/types.hpp"

namespace ddix {

// Missing or unreadable files, failed writes. The message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace ddix
