#pragma once

#include <string>
#include <utility>
#include <vector>

namespace conespec {

// "# config_digest=<hex> run=<tag>" followed by the csv text.
std::string with_provenance(const std::string& csv, const std::string& digest_hex, const std::string& tag);

// Writes files into one output directory and records their FNV-1a digests.
class Manifest {
public:
    explicit Manifest(std::string dir);
    // Returns the digest of the written bytes.
    std::string write(const std::string& name, const std::string& content);
    // MANIFEST: one "<digest>  <name>" line per output, then the status lines.
    void finish(const std::string& subcommand, const std::string& config_digest, bool complete,
                const std::string& note = "") const;
    const std::string& dir() const { return dir_; }
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::string dir_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
    bool line = false; // markers otherwise
};

// Log-log plot of |y| against x.
std::string svg_loglog(const std::string& title, const std::vector<SvgSeries>& series);

} // namespace conespec
