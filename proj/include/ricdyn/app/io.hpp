#pragma once

#include <filesystem>
#include <string_view>

namespace ricdyn::app {

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never see a partial file. Throws ErrorKind::Validation when the target
/// cannot be written.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace ricdyn::app
