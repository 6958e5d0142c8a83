#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace conespec {

// Flat "key = value" text; '#' starts a comment. No nesting, no includes.
class Config {
public:
    Config() = default;
    static Config parse(const std::string& text, const std::string& origin = "<string>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string str(const std::string& key) const;
    std::string str(const std::string& key, const std::string& fallback) const;
    double num(const std::string& key) const;
    double num(const std::string& key, double fallback) const;
    long integer(const std::string& key) const;
    long integer(const std::string& key, long fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::vector<double> nums(const std::string& key) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }
    const std::string& origin() const { return origin_; }
    // Directory of the file the config came from ("" for strings).
    std::string base_dir() const;

    // FNV-1a 64 over the sorted key=value lines.
    std::uint64_t digest() const;
    std::string digest_hex() const;
    std::string to_text() const;

private:
    std::string origin_;
    std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

} // namespace conespec
