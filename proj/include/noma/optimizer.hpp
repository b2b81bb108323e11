// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "noma/model.hpp"

namespace noma {

enum class Objective { min_average, fairness };
enum class Backend { series, numeric_oracle };

Objective parse_objective(const std::string& s);
std::string to_string(Objective o);
std::string to_string(Backend b);

struct OptProblem {
    Objective objective = Objective::min_average;
    int N = 2;
    double m = 1.0;
    double omega = 1.0;
    double ebn0_db = 10.0;
    double fairness_tol = 1e-6;  // relative to the mean BER
    Backend backend = Backend::series;
    double series_tol = 1e-12;
    int max_terms = 500;
    int nodes = 64;
    int oracle_strata = 2048;

    void validate() const;
};

struct OptResult {
    PowerAllocation betas{std::vector<double>{1.0}};
    std::vector<double> ber;  // per user at betas
    /// Fairness: max pairwise BER gap. Min-average: largest feasible descent
    /// rate of the objective (finite differences).
    double residual = 0.0;
    int iterations = 0;  // objective evaluations
    bool converged = false;
    int skipped = 0;     // probes dropped for non-convergence
    std::string message;
    /// Fairness scan: (beta_1, gap) pairs, kept for infeasibility reports.
    std::vector<std::pair<double, double>> gap_profile;
};

/// Per-user average BER for an allocation, or nothing when the backend does
/// not converge there or returns a value outside [0, 1].
std::optional<std::vector<double>> user_bers(const OptProblem& problem, const PowerAllocation& alloc);

OptResult solve_min_average(const OptProblem& problem);
OptResult solve_fairness(const OptProblem& problem);
OptResult solve(const OptProblem& problem);

/// Mean BER at betas, or +inf if infeasible or not convergent.
double average_objective(const OptProblem& problem, const std::vector<double>& betas);

/// Feasible perturbations beta +/- h (e_i - 1/N) used by the local-minimum
/// certificate; infeasible ones are omitted.
std::vector<std::vector<double>> certificate_neighbours(const std::vector<double>& betas, double h);

}  // namespace noma
