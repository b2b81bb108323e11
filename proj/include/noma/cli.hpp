// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace noma {

inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Fully resolved sweep settings; everything that shapes the CSV bytes.
struct SweepConfig {
    int N = 2;
    std::vector<double> beta;
    std::vector<double> m{1.0};
    double omega = 1.0;
    std::vector<double> ebn0_db;
    std::vector<std::string> methods;
    std::int64_t trials = 1000000;
    std::uint64_t seed = 1;
    std::string sic = "imperfect";
    std::optional<std::vector<double>> fixed_gains;
    double tol = 1e-12;
    int max_terms = 500;
    int nodes = 64;
    int oracle_strata = 1 << 15;
};

struct OptimizeConfig {
    std::string objective;
    int N = 2;
    std::vector<double> m{1.0};
    double omega = 1.0;
    std::vector<double> ebn0_db;
    std::string backend = "series";
    double tol = 1e-12;
    int max_terms = 500;
    int nodes = 64;
};

/// Parses "a,b,c" or "start:step:stop" (inclusive) into values.
std::vector<double> parse_grid(const std::string& text);

/// Runs the tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace noma
