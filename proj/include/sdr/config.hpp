#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sdr {

/// Flat key-value configuration.
///
///     # comment
///     input = data/wifi.csv
///     [sharpen]
///     k = 45          ; becomes key "sharpen.k"
///
/// Later assignments override earlier ones, so command-line overrides are
/// applied with `set` after parsing.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) > 0; }
    [[nodiscard]] std::optional<std::string> get(const std::string& key) const;

    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] long long get_int(const std::string& key, long long fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    [[nodiscard]] std::vector<std::string> get_list(const std::string& key,
                                                    const std::vector<std::string>& fallback) const;

    [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

std::vector<std::string> split_list(const std::string& s, char sep = ',');

} // namespace sdr
