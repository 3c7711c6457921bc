#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sentivol {

/// A parsed comma-delimited file. Lines starting with `#` before the header are
/// metadata (`# key: value`) and are kept in `metadata`; blank lines are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers; // 1-based source line of each row
    std::map<std::string, std::string> metadata;

    /// Index of a header column, or -1 when absent.
    int find_column(std::string_view name) const;
    /// Index of a header column; throws MissingColumn when absent.
    std::size_t require_column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, const std::string& source_name = "<memory>");
CsvTable read_csv(const std::filesystem::path& path);

/// Strict full-field numeric parses; return false on any trailing garbage.
bool parse_double(std::string_view s, double& out);
bool parse_long(std::string_view s, long long& out);

/// Shortest representation that round-trips exactly.
std::string format_double(double v);

/// Writes `# key: value` lines in insertion order.
std::string metadata_block(const std::vector<std::pair<std::string, std::string>>& entries);

/// 64-bit FNV-1a, hex encoded; used for config and parameter fingerprints.
std::string fnv1a_hex(std::string_view data);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

} // namespace sentivol
