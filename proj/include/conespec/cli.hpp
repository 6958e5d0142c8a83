#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "conespec/coneop.hpp"
#include "conespec/config.hpp"

namespace conespec {

struct RunOptions {
    std::string out_dir = "out";
    bool svg = false;
    std::uint64_t seed = 1;
    std::string tolerance_profile = "default"; // or "strict"
};

enum ExitCode { ExitOk = 0, ExitRuntime = 1, ExitValidation = 2, ExitUndecided = 3 };

// `operator = <file>` relative to the config, or the operator keys inline.
ConeOperator load_operator(const Config& cfg);

// spectrum | heat | resolvent | zeta | index | verify. Writes CSVs and a MANIFEST
// into opt.out_dir; progress lines go to log.
int run(const std::string& subcommand, const Config& cfg, const RunOptions& opt, std::ostream& log);

} // namespace conespec
