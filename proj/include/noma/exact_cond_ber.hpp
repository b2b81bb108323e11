// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "noma/detectors.hpp"
#include "noma/model.hpp"

namespace noma {

struct CondBerInput {
    int N = 2;
    int n = 1;                  // evaluated user
    std::vector<double> gains;  // alpha_1..alpha_N
    double sigma2 = 1.0;        // per-dimension noise variance
    PowerAllocation alloc{std::vector<double>{1.0}};

    void validate() const;
    double gain() const { return gains.at(n - 1); }
};

struct QTerm {
    int weight = 0;
    int c = 0;
};

struct QProduct {
    int weight = 0;
    int ca = 0;
    int cb = 0;
};

/// coefficient * (constant + sum w Q(sqrt g_c) + sum w Q(sqrt g_a) Q(sqrt g_b)).
struct WeightedQSum {
    int user = 1;
    double coefficient = 1.0;
    double constant = 0.0;
    std::vector<QTerm> terms;
    std::vector<QProduct> products;

    double evaluate(const GammaCatalog& catalog, double alpha, double sigma2) const;
    /// Value with every Q replaced by 1/2.
    double zero_snr_value() const;
};

/// Formula value together with a range flag. The value is never clamped.
struct CondBer {
    double value = 0.0;
    bool anomaly = false;
};

/// Intermediate SIC-outcome scenarios of the N = 3 derivation.
enum class Scenario {
    u2_first_correct,
    u2_first_wrong,
    u3_both_correct,
    u3_second_wrong,
    u3_first_wrong,
    u3_both_wrong,
};

Scenario parse_scenario(const std::string& s);
std::string to_string(Scenario s);

/// Final per-user closed formula for N in {2, 3}.
const WeightedQSum& user_formula(int N, int n);
const WeightedQSum& scenario_formula(Scenario s);

CondBer cond_ber_n2_u1(const CondBerInput& in);
CondBer cond_ber_n2_u2(const CondBerInput& in);
CondBer cond_ber_n3(const CondBerInput& in, std::optional<Scenario> intermediate = std::nullopt);

/// Exact conditional error probabilities for one user.
struct ExactBer {
    int user = 1;
    std::array<double, 2> bit{};  // inphase, quadrature
    double ber = 0.0;             // mean over the two bits
    /// Per-bit error mass split by the correctness pattern of the earlier
    /// SIC stages; bit j of the index is set when user j+1 was decided wrongly.
    std::vector<double> scenario_mass;
};

/// Enumerates sign patterns and SIC trajectories on one real dimension.
/// Refuses N > 8.
ExactBer enumerate_exact(const CondBerInput& in, SicMode mode = SicMode::imperfect);

/// Same enumeration for a single dimension with explicit gain; returns the
/// error probability of the given user's bit on that dimension.
double enumerate_dimension(const std::vector<double>& amps, int n, double gain, double sigma, SicMode mode,
                           std::vector<double>* scenario_mass = nullptr);

}  // namespace noma
