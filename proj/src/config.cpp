#include "config.hpp"

#include <fstream>
#include <sstream>

#include "csvutil.hpp"
#include "errors.hpp"

namespace holterisk {

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

KeyValueConfig KeyValueConfig::from_string(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected `key = value`, got: " + t);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.map_[key] = value;
    }
    return cfg;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& def) const {
    auto v = get(key);
    return v ? *v : def;
}

long long KeyValueConfig::get_int(const std::string& key, long long def) const {
    auto v = get(key);
    if (!v) return def;
    auto p = parse_int(*v);
    if (!p) throw ConfigError("config key `" + key + "`: expected integer, got `" + *v + "`");
    return *p;
}

double KeyValueConfig::get_double(const std::string& key, double def) const {
    auto v = get(key);
    if (!v) return def;
    auto p = parse_double(*v);
    if (!p) throw ConfigError("config key `" + key + "`: expected number, got `" + *v + "`");
    return *p;
}

bool KeyValueConfig::get_bool(const std::string& key, bool def) const {
    auto v = get(key);
    if (!v) return def;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw ConfigError("config key `" + key + "`: expected boolean, got `" + *v + "`");
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key,
                                                    const std::vector<double>& def) const {
    auto v = get(key);
    if (!v) return def;
    std::vector<double> out;
    for (const auto& cell : split_csv_line(*v)) {
        const std::string t = trim(cell);
        if (t.empty()) continue;
        auto p = parse_double(t);
        if (!p) throw ConfigError("config key `" + key + "`: expected number list, got `" + *v + "`");
        out.push_back(*p);
    }
    if (out.empty()) throw ConfigError("config key `" + key + "`: empty list");
    return out;
}

std::vector<int> KeyValueConfig::get_int_list(const std::string& key, const std::vector<int>& def) const {
    auto v = get(key);
    if (!v) return def;
    std::vector<int> out;
    for (const auto& cell : split_csv_line(*v)) {
        const std::string t = trim(cell);
        if (t.empty()) continue;
        auto p = parse_int(t);
        if (!p) throw ConfigError("config key `" + key + "`: expected integer list, got `" + *v + "`");
        out.push_back(static_cast<int>(*p));
    }
    if (out.empty()) throw ConfigError("config key `" + key + "`: empty list");
    return out;
}

std::uint64_t KeyValueConfig::require_seed() const {
    auto v = get("seed");
    if (!v)
        throw ConfigError("`seed` is required (set it in the config file or with --seed); "
                          "runs are never seeded from the clock");
    auto p = parse_int(*v);
    if (!p || *p < 0) throw ConfigError("config key `seed`: expected non-negative integer, got `" + *v + "`");
    return static_cast<std::uint64_t>(*p);
}

void KeyValueConfig::merge(const KeyValueConfig& other) {
    for (const auto& [k, v] : other.map_) map_[k] = v;
}

} // namespace holterisk
