// Flat key=value configuration for the CLI; flags override file values.
#pragma once

#include <optional>
#include <string>

namespace modsurf {

struct Config {
    unsigned q_bound = 60;     // admissibility modulus bound
    double step = 0.01;        // sampling arclength spacing
    double fold_tol = 1e-12;   // fundamental-domain boundary tolerance
    double cut_tol = 1e-9;     // cutting-sequence wall tolerance
    unsigned workers = 0;      // 0 = hardware concurrency
};

// Defaults when path is empty; throws config_error on unreadable files,
// duplicate or unknown keys, or malformed values.
Config config_load(const std::string& path);

}  // namespace modsurf
