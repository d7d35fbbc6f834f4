#ifndef HOLTERISK_CONFIG_HPP
#define HOLTERISK_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace holterisk {

// Flat `key = value` configuration store. Lines starting with '#' are
// comments; blank lines are ignored. Later assignments win.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_string(const std::string& text);

    void set(const std::string& key, const std::string& value) { map_[key] = value; }
    bool has(const std::string& key) const { return map_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;

    // Typed getters; throw ConfigError on unparseable values.
    std::string get_string(const std::string& key, const std::string& def) const;
    long long get_int(const std::string& key, long long def) const;
    double get_double(const std::string& key, double def) const;
    bool get_bool(const std::string& key, bool def) const;
    std::vector<double> get_double_list(const std::string& key, const std::vector<double>& def) const;
    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& def) const;
    std::uint64_t require_seed() const; // key "seed"; no wall-clock fallback

    // Other's entries override this one's.
    void merge(const KeyValueConfig& other);

    const std::map<std::string, std::string>& entries() const { return map_; }

private:
    std::map<std::string, std::string> map_;
};

} // namespace holterisk

#endif
