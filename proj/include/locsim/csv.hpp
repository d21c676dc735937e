#pragma once

#include <filesystem>
#include <string>

namespace locsim {

/// Shortest decimal representation that round-trips the double exactly.
/// Locale independent, so identical runs produce byte-identical files.
std::string format_double(double v);

/// Write text to a file, replacing any existing content. Parent directories
/// are created as needed. Throws Error on I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace locsim
