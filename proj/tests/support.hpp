#pragma once

#include "sentivol/calendar.hpp"
#include "sentivol/csv.hpp"

#include <filesystem>
#include <string>
#include <unistd.h>

namespace testing {

inline sentivol::Date day(const char* iso) {
    return *sentivol::parse_date(iso);
}

/// Fresh directory under the system temp dir, unique per process and tag.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("sentivol_" + tag + "_" + std::to_string(static_cast<long>(::getpid())));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::filesystem::path write_file(const std::filesystem::path& path, const std::string& text) {
    sentivol::write_text_file(path, text);
    return path;
}

} // namespace testing
