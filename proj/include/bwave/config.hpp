#pragma once

#include "bwave/error.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bwave::config {

// Plain-text run configuration:
//
//   # comment
//   [section]
//   key = value
//
// Keys are addressed as "section.key". Keys before the first section header
// live in the empty section and are addressed by their bare name.

struct Entry {
    std::string value;
    std::string origin;  // "file:line" or "--flag"
};

inline std::string trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

inline std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

class Config {
public:
    bool contains(const std::string& key) const { return entries_.count(key) != 0; }
    const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

    void set(const std::string& key, std::string value, std::string origin) {
        entries_[key] = Entry{std::move(value), std::move(origin)};
    }
    void erase(const std::string& key) { entries_.erase(key); }

    const Entry& entry(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError("config: missing key: " + key);
        return it->second;
    }

    std::string get_string(const std::string& key) const { return entry(key).value; }

    double get_double(const std::string& key) const {
        const auto& e = entry(key);
        double v = 0.0;
        const char* b = e.value.data();
        const char* end = b + e.value.size();
        auto [p, ec] = std::from_chars(b, end, v);
        if (ec != std::errc() || p != end) fail(key, e, "expected a number");
        return v;
    }

    std::size_t get_size(const std::string& key) const {
        const auto& e = entry(key);
        return parse_size(key, e, e.value);
    }

    long get_int(const std::string& key) const {
        const auto& e = entry(key);
        long v = 0;
        const char* b = e.value.data();
        const char* end = b + e.value.size();
        auto [p, ec] = std::from_chars(b, end, v);
        if (ec != std::errc() || p != end) fail(key, e, "expected an integer");
        return v;
    }

    bool get_bool(const std::string& key) const {
        const auto& e = entry(key);
        if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
        if (e.value == "false" || e.value == "0" || e.value == "no") return false;
        fail(key, e, "expected true or false");
    }

    /// Comma-separated list of positive integers.
    std::vector<std::size_t> get_size_list(const std::string& key) const {
        const auto& e = entry(key);
        std::vector<std::size_t> out;
        std::stringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(parse_size(key, e, trim(item)));
        if (out.empty()) fail(key, e, "empty list");
        return out;
    }

    std::string get_choice(const std::string& key, const std::vector<std::string>& choices) const {
        const auto& e = entry(key);
        if (std::find(choices.begin(), choices.end(), e.value) == choices.end())
            fail(key, e, "expected one of {" + join(choices) + "}");
        return e.value;
    }

private:
    [[noreturn]] static void fail(const std::string& key, const Entry& e, const std::string& what) {
        throw ConfigError("config: " + key + " = '" + e.value + "' (" + e.origin + "): " + what);
    }
    static std::size_t parse_size(const std::string& key, const Entry& e, const std::string& s) {
        std::size_t v = 0;
        const char* b = s.data();
        const char* end = b + s.size();
        auto [p, ec] = std::from_chars(b, end, v);
        if (s.empty() || ec != std::errc() || p != end) fail(key, e, "expected a non-negative integer");
        return v;
    }

    std::map<std::string, Entry> entries_;
};

/// Parses config text. Duplicate keys are collected and reported together.
inline Config parse_text(std::string_view text, const std::string& source) {
    Config cfg;
    std::string section;
    std::vector<std::string> duplicates;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string origin = source + ":" + std::to_string(line_no);
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(origin + ": unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(origin + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(origin + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError(origin + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (cfg.contains(full)) {
            duplicates.push_back(full + " (" + cfg.entry(full).origin + ", " + origin + ")");
            continue;
        }
        cfg.set(full, value, origin);
    }
    if (!duplicates.empty()) throw ConfigError("config: duplicate keys: " + join(duplicates));
    return cfg;
}

inline Config load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path.string());
}

/// Overrides replace file values; they are validated with the rest.
inline void apply_overrides(Config& cfg, const std::vector<std::pair<std::string, std::string>>& overrides,
                            const std::string& origin = "override") {
    for (const auto& [k, v] : overrides) cfg.set(k, v, origin);
}

struct KeySpec {
    std::string key;
    bool required = false;
    std::optional<std::string> default_value;  // filled in when absent
};

inline KeySpec required_key(std::string key) { return {std::move(key), true, std::nullopt}; }
inline KeySpec optional_key(std::string key) { return {std::move(key), false, std::nullopt}; }
inline KeySpec defaulted_key(std::string key, std::string value) { return {std::move(key), false, std::move(value)}; }

/// Rejects unknown and missing keys in one error, then fills defaults.
inline void enforce_schema(Config& cfg, const std::vector<KeySpec>& schema, const std::string& what) {
    std::set<std::string> known;
    for (const auto& s : schema) known.insert(s.key);
    std::vector<std::string> unknown, missing;
    for (const auto& [k, e] : cfg.entries())
        if (!known.count(k)) unknown.push_back(k + " (" + e.origin + ")");
    for (const auto& s : schema)
        if (s.required && !cfg.contains(s.key)) missing.push_back(s.key);
    if (!unknown.empty() || !missing.empty()) {
        std::string msg = "config for " + what + ":";
        if (!unknown.empty()) msg += " unknown keys: " + join(unknown) + ";";
        if (!missing.empty()) msg += " missing keys: " + join(missing) + ";";
        msg.pop_back();
        throw ConfigError(msg);
    }
    for (const auto& s : schema)
        if (s.default_value && !cfg.contains(s.key)) cfg.set(s.key, *s.default_value, "default");
}

}  // namespace bwave::config
