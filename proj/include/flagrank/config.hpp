#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "flagrank/errors.hpp"
#include "flagrank/scalars.hpp"

namespace flagrank {

// Knobs shared by every sampling computation.  Defaults keep runs exact,
// reproducible and desk-sized; the caps guard against accidentally huge
// shapes and can be lifted explicitly.
struct EngineOptions {
    std::uint64_t prime = kDefaultPrime;
    std::uint64_t seed = 0;
    int trials = 2;                     // resamples per prime, best rank kept
    std::uint64_t max_ambient = 200000; // affine ambient coordinate cap
    std::uint64_t max_rows = 5000;      // stacked Terracini row cap
    bool force = false;                 // lift the caps
    std::string cache_path;             // JSONL rank cache; empty disables it
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw UsageError("config: bad numeric value for '" + key + "': " + value);
    }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "no") return false;
    throw UsageError("config: bad boolean value for '" + key + "': " + value);
}

} // namespace detail

// Applies `key=value` lines to a base set of options.  Blank lines and
// '#' comments pass through; unknown keys are an error.
inline EngineOptions parse_config_text(const std::string& text, EngineOptions base = {}) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        line = line.substr(a, b - a + 1);
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string v) {
            std::size_t x = v.find_first_not_of(" \t");
            std::size_t y = v.find_last_not_of(" \t");
            return x == std::string::npos ? std::string() : v.substr(x, y - x + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "prime") base.prime = detail::parse_u64(key, value);
        else if (key == "seed") base.seed = detail::parse_u64(key, value);
        else if (key == "trials") base.trials = static_cast<int>(detail::parse_u64(key, value));
        else if (key == "max_ambient") base.max_ambient = detail::parse_u64(key, value);
        else if (key == "max_rows") base.max_rows = detail::parse_u64(key, value);
        else if (key == "force") base.force = detail::parse_bool(key, value);
        else if (key == "cache") base.cache_path = value;
        else throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (base.trials < 1) throw UsageError("config: trials must be at least 1");
    if (!is_prime_u64(base.prime) || base.prime >= kMaxPrime)
        throw UsageError("config: prime must be a prime below 2^62");
    return base;
}

inline EngineOptions parse_config_file(const std::string& path, EngineOptions base = {}) {
    std::ifstream in(path);
    if (!in) throw UsageError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), base);
}

// Layered defaults: the FLAGRANK_CONFIG environment variable may point at a
// config file; command-line flags are applied on top by the caller.
inline EngineOptions options_from_env(EngineOptions base = {}) {
    const char* path = std::getenv("FLAGRANK_CONFIG");
    if (path != nullptr && *path != '\0') return parse_config_file(path, base);
    return base;
}

} // namespace flagrank
