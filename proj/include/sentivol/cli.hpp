#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sentivol::cli {

inline constexpr const char* kToolVersion = "sentivol 0.1.0";

/// Effective configuration: "section.key" -> value, over documented defaults.
/// Relative paths are resolved against `base_dir` (the config file's directory).
struct RunConfig {
    std::map<std::string, std::string> values;
    std::map<std::string, std::string> external; // [external] label -> sentiment.csv path
    std::filesystem::path base_dir = ".";

    const std::string& get(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
    std::filesystem::path path(const std::string& key) const;
};

RunConfig default_config();
/// Overlays an INI text on the defaults. Unknown keys throw ConfigError.
RunConfig parse_config(std::string_view ini_text, const std::filesystem::path& base_dir);
/// Every key with its effective value and a one-line description.
std::string print_config(const RunConfig& config);
/// Fingerprint of everything that can change artifact contents.
std::string config_hash(const RunConfig& config);

/// Full command-line entry. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main_entry(int argc, char** argv);

} // namespace sentivol::cli
