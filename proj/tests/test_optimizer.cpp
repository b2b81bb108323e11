// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "noma/optimizer.hpp"

using namespace noma;

namespace {

OptProblem problem(Objective o, int N, double m, double db) {
    OptProblem p;
    p.objective = o;
    p.N = N;
    p.m = m;
    p.ebn0_db = db;
    return p;
}

void check_constraints(const PowerAllocation& a) {
    const auto& b = a.betas();
    CHECK(std::abs(std::accumulate(b.begin(), b.end(), 0.0) - 1.0) < 1e-9);
    for (std::size_t k = 1; k < b.size(); ++k) CHECK(b[k] <= b[k - 1]);
    for (double x : b) CHECK(x >= 0.0);
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST_CASE("objective names") {
    CHECK(parse_objective("fairness") == Objective::fairness);
    CHECK(parse_objective("min-average") == Objective::min_average);
    CHECK_THROWS_AS(parse_objective("min_average"), std::invalid_argument);
    CHECK(to_string(Objective::min_average) == "min-average");
    CHECK(to_string(Backend::numeric_oracle) == "numeric-oracle");
}

TEST_CASE("unsupported systems are rejected") {
    CHECK_THROWS_AS(solve(problem(Objective::fairness, 4, 1.0, 10.0)), UnsupportedSystem);
    auto p = problem(Objective::fairness, 2, 1.0, 10.0);
    p.ebn0_db = std::nan("");
    CHECK_THROWS_AS(solve(p), std::invalid_argument);
}

TEST_CASE("certificate neighbours stay on the ordered simplex") {
    const auto nb = certificate_neighbours({0.7, 0.2, 0.1}, 1e-3);
    CHECK(nb.size() == 6);
    for (const auto& y : nb) {
        CHECK(std::abs(y[0] + y[1] + y[2] - 1.0) < 1e-12);
        CHECK(y[0] >= y[1]);
        CHECK(y[1] >= y[2]);
    }
    // On the beta_1 = beta_2 edge moves that break the ordering are dropped.
    CHECK(certificate_neighbours({0.5, 0.5}, 1e-3).size() == 1);
    CHECK(certificate_neighbours({1.0, 0.0}, 1e-3).size() == 1);
}

TEST_CASE("two-user min-average solution is a feasible local minimum") {
    for (double db : {0.0, 10.0, 20.0, 30.0}) {
        CAPTURE(db);
        const auto p = problem(Objective::min_average, 2, 1.0, db);
        const auto r = solve(p);
        CHECK(r.converged);
        check_constraints(r.betas);
        const double f = average_objective(p, r.betas.betas());
        CHECK(f == doctest::Approx(mean(r.ber)).epsilon(1e-14));
        for (const auto& nb : certificate_neighbours(r.betas.betas(), 1e-3)) CHECK(f <= average_objective(p, nb));
        CHECK(r.residual < 1e-4);
    }
}

TEST_CASE("three-user min-average solution is a feasible local minimum") {
    for (double db : {10.0, 30.0}) {
        CAPTURE(db);
        const auto p = problem(Objective::min_average, 3, 1.0, db);
        const auto r = solve(p);
        CHECK(r.converged);
        check_constraints(r.betas);
        const double f = average_objective(p, r.betas.betas());
        for (const auto& nb : certificate_neighbours(r.betas.betas(), 1e-3)) CHECK(f <= average_objective(p, nb));
    }
}

TEST_CASE("fairness equalises the users") {
    for (double m : {1.0, 3.0}) {
        for (double db : {10.0, 20.0, 30.0}) {
            CAPTURE(m);
            CAPTURE(db);
            const auto r = solve(problem(Objective::fairness, 2, m, db));
            REQUIRE(r.converged);
            check_constraints(r.betas);
            CHECK(r.residual < 1e-6 * mean(r.ber));
            CHECK(std::abs(r.ber[0] - r.ber[1]) == doctest::Approx(r.residual));
        }
    }
    const auto r3 = solve(problem(Objective::fairness, 3, 1.0, 20.0));
    REQUIRE(r3.converged);
    check_constraints(r3.betas);
    CHECK(r3.residual < 1e-6 * mean(r3.ber));
}

TEST_CASE("fairness power on the weakest user grows with Eb/N0 under Rayleigh fading") {
    double prev = 0.0;
    for (double db : {0.0, 10.0, 20.0, 30.0}) {
        const auto r = solve(problem(Objective::fairness, 2, 1.0, db));
        REQUIRE(r.converged);
        CHECK(r.betas.beta(1) >= prev);
        prev = r.betas.beta(1);
    }
}

TEST_CASE("min-average never loses to the fairness allocation") {
    struct Case {
        int N;
        double m, db;
    };
    for (const Case c : {Case{2, 1.0, 10.0}, Case{2, 1.0, 30.0}, Case{2, 3.0, 20.0}, Case{3, 1.0, 20.0}}) {
        CAPTURE(c.N);
        CAPTURE(c.db);
        const auto fair = solve(problem(Objective::fairness, c.N, c.m, c.db));
        const auto best = solve(problem(Objective::min_average, c.N, c.m, c.db));
        REQUIRE(fair.converged);
        REQUIRE(best.converged);
        CHECK(mean(best.ber) <= mean(fair.ber) * (1.0 + 1e-12));
    }
}

TEST_CASE("missing bracket yields a report with the scanned gap profile") {
    const auto r = solve(problem(Objective::fairness, 2, 3.0, 0.0));
    CHECK_FALSE(r.converged);
    CHECK_FALSE(r.message.empty());
    REQUIRE(r.gap_profile.size() == 201);
    const bool first_sign = r.gap_profile.front().second > 0.0;
    for (const auto& [b1, gap] : r.gap_profile) {
        CHECK(b1 >= 0.5);
        CHECK(b1 <= 1.0);
        CHECK((gap > 0.0) == first_sign);
    }
    check_constraints(r.betas);
}

TEST_CASE("allocations where the series leaves [0, 1] are skipped") {
    // 2 sqrt(b1) - 2 sqrt(b2) - sqrt(b3) vanishes here and the third-user
    // series turns negative.
    const auto p = problem(Objective::min_average, 3, 1.0, 20.0);
    CHECK_FALSE(user_bers(p, PowerAllocation({0.5543, 0.3303, 0.1154})).has_value());
    CHECK(std::isinf(average_objective(p, {0.5543, 0.3303, 0.1154})));
    const auto r = solve(p);
    CHECK(r.skipped > 0);
    for (double v : r.ber) CHECK(v >= 0.0);
}

TEST_CASE("oracle backend tracks the series backend for two users") {
    auto p = problem(Objective::min_average, 2, 1.0, 20.0);
    const auto series = solve(p);
    p.backend = Backend::numeric_oracle;
    p.oracle_strata = 512;
    const auto oracle = solve(p);
    REQUIRE(oracle.converged);
    CHECK(std::abs(oracle.betas.beta(1) - series.betas.beta(1)) < 0.01);
}
