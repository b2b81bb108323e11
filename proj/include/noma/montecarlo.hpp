// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noma/detectors.hpp"
#include "noma/model.hpp"

namespace noma {

struct SimConfig {
    int N = 2;
    PowerAllocation alloc{std::vector<double>{0.7, 0.3}};
    double m = 1.0;
    double omega = 1.0;
    std::vector<double> ebn0_db{10.0};
    std::int64_t trials = 1000000;  // symbols per grid point
    std::uint64_t seed = 1;
    SicMode sic_mode = SicMode::imperfect;
    /// Stop a grid point early once every user's relative 95% half-width is
    /// at or below this value.
    std::optional<double> max_rel_ci;
    /// Per-user gains that replace fading draws.
    std::optional<std::vector<double>> fixed_gains;
    /// Worker threads. Results do not depend on this value.
    int shards = 1;
    /// Symbols per independently seeded block.
    std::int64_t block_size = 1 << 14;

    void validate() const;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for k successes out of n with the effective sample
/// size reduced by design_effect (>= 1 for positively correlated draws).
Interval wilson_interval(double k, double n, double z = 1.959963984540054, double design_effect = 1.0);

struct BerEstimate {
    double ebn0_db = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::string provenance = "monte-carlo";
    std::vector<double> ber;                          // per user
    std::vector<std::int64_t> errors;                 // per user, both bits
    std::vector<std::array<std::int64_t, 2>> bit_errors;  // per user, (I, Q)
    std::vector<std::int64_t> both_bits_wrong;        // symbols with two bit errors
    std::vector<Interval> ci;                         // 95%
};

/// Symbol-level simulation over the configured Eb/N0 grid.
std::vector<BerEstimate> run(const SimConfig& config);

}  // namespace noma
