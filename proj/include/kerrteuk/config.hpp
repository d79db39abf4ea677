#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kerrteuk/geometry.hpp"

namespace ktk {

struct RunConfig {
    KerrParams params{1.0, 0.6};
    std::vector<int> spins{0, 1, 2};
    std::vector<double> omegas{0.1, 0.3};
    std::vector<int> ms{-2, -1, 0, 1, 2};
    int lmax = 6;
    double tol = 1e-8;
    std::string outdir = ".";
    std::string format = "json";  // "json" or "csv"
    std::uint64_t seed = 20240817;
    bool parallel = true;
};

// precedence: flags > file > defaults; empty path skips the file
RunConfig parse_config(const std::string& json_path,
                       const std::map<std::string, std::string>& flags);

}  // namespace ktk
