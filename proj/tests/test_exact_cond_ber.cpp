// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "noma/detectors.hpp"
#include "noma/exact_cond_ber.hpp"
#include "noma/special_math.hpp"

using namespace noma;

namespace {

CondBerInput input(int N, int n, std::vector<double> betas, std::vector<double> gains, double ebn0_db) {
    CondBerInput in;
    in.N = N;
    in.n = n;
    in.alloc = PowerAllocation(std::move(betas));
    in.gains = std::move(gains);
    in.sigma2 = sigma2_from_ebn0_db(ebn0_db);
    return in;
}

std::vector<double> random_betas(int N, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> b(N);
    double s = 0.0;
    for (auto& x : b) s += (x = u(rng) + 1e-3);
    for (auto& x : b) x /= s;
    std::sort(b.rbegin(), b.rend());
    return b;
}

}  // namespace

TEST_CASE("single user reduces to plain QPSK") {
    for (double a : {0.2, 1.0, 2.3}) {
        auto in = input(1, 1, {1.0}, {a}, 7.0);
        CHECK(enumerate_exact(in).ber == doctest::Approx(q_func(a / std::sqrt(in.sigma2))).epsilon(1e-15));
    }
}

TEST_CASE("N = 2 formulas at fixed points") {
    auto u1 = input(2, 1, {0.7, 0.3}, {0.0, 1.2}, 10.0);
    CHECK(cond_ber_n2_u1(u1).value == 0.5);
    auto u2 = input(2, 2, {0.7, 0.3}, {0.5, 0.0}, 10.0);
    CHECK(cond_ber_n2_u2(u2).value == 0.5);
    auto hi = input(2, 1, {0.7, 0.3}, {1.0, 1.2}, 120.0);
    CHECK(cond_ber_n2_u1(hi).value == 0.0);
    hi.n = 2;
    CHECK(cond_ber_n2_u2(hi).value == 0.0);

    auto a = input(2, 1, {0.7, 0.3}, {1.0, 1.2}, 10.0);
    CHECK(a.sigma2 == doctest::Approx(0.05));
    CHECK(std::abs(cond_ber_n2_u1(a).value - enumerate_exact(a).ber) < 1e-12);
    a.n = 2;
    CHECK(std::abs(cond_ber_n2_u2(a).value - enumerate_exact(a).ber) < 1e-12);
    CHECK_THROWS(cond_ber_n2_u2(input(2, 1, {0.7, 0.3}, {1, 1}, 0)));
}

TEST_CASE("N = 2 formulas equal the enumeration at random operating points") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> b1(0.5, 1.0), al(0.0, 3.0), eb(0.0, 30.0);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const double b = b1(rng);
        const double e = eb(rng);
        std::vector<double> g{3.0 - al(rng), 3.0 - al(rng)};
        auto in = input(2, 1, {b, 1.0 - b}, g, e);
        worst = std::max(worst, std::abs(cond_ber_n2_u1(in).value - enumerate_exact(in).ber));
        in.n = 2;
        worst = std::max(worst, std::abs(cond_ber_n2_u2(in).value - enumerate_exact(in).ber));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("N = 3 first user formula equals the enumeration") {
    auto in = input(3, 1, {0.8, 0.15, 0.05}, {1.0, 1.1, 1.3}, 10.0);
    CHECK(std::abs(cond_ber_n3(in).value - enumerate_exact(in).ber) < 1e-12);
    auto zero = input(3, 1, {0.8, 0.15, 0.05}, {0.0, 0.0, 0.0}, 10.0);
    CHECK(cond_ber_n3(zero).value == 0.5);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> al(0.01, 3.0), eb(0.0, 30.0);
    int inside = 0, outside = 0;
    for (int t = 0; t < 400; ++t) {
        const auto b = random_betas(3, rng);
        auto r = input(3, 1, b, {al(rng), al(rng), al(rng)}, eb(rng));
        const double diff = std::abs(cond_ber_n3(r).value - enumerate_exact(r).ber);
        // The formula squares A(1,-1,-1); it holds while that level is nonnegative.
        if (std::sqrt(b[0]) >= std::sqrt(b[1]) + std::sqrt(b[2])) {
            CHECK(diff < 1e-12);
            ++inside;
        } else if (diff > 1e-6) {
            ++outside;
        }
    }
    CHECK(inside > 50);
    CHECK(outside > 50);
}

TEST_CASE("second-user intermediates add up to the final second-user formula") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> al(0.0, 3.0), eb(0.0, 30.0);
    for (int t = 0; t < 100; ++t) {
        auto in = input(3, 2, random_betas(3, rng), {al(rng), al(rng), al(rng)}, eb(rng));
        const double a = cond_ber_n3(in, Scenario::u2_first_correct).value;
        const double b = cond_ber_n3(in, Scenario::u2_first_wrong).value;
        CHECK(std::abs(a + b - cond_ber_n3(in).value) < 1e-12);
    }
}

TEST_CASE("zero-SNR values of the N = 3 formulas") {
    CHECK(user_formula(2, 2).zero_snr_value() == 0.5);
    CHECK(user_formula(3, 2).zero_snr_value() == 1.0);
    CHECK(user_formula(3, 3).zero_snr_value() == 0.875);
    auto in = input(3, 3, {0.8, 0.15, 0.05}, {1, 1, 0.0}, 10.0);
    CHECK(cond_ber_n3(in).value == doctest::Approx(0.875).epsilon(1e-15));
}

TEST_CASE("scenario selectors") {
    auto in = input(3, 2, {0.8, 0.15, 0.05}, {1, 1, 1}, 10.0);
    CHECK_THROWS(cond_ber_n3(in, Scenario::u3_both_wrong));
    CHECK_THROWS(parse_scenario("u4-anything"));
    CHECK(parse_scenario("u3-first-wrong") == Scenario::u3_first_wrong);
    in.n = 3;
    for (Scenario s : {Scenario::u3_both_correct, Scenario::u3_second_wrong, Scenario::u3_first_wrong,
                       Scenario::u3_both_wrong})
        CHECK(std::isfinite(cond_ber_n3(in, s).value));
}

TEST_CASE("anomalous formula values are flagged, not clamped") {
    // Third user at a deep fade: the final formula exceeds its plausible range
    // well before reaching the zero-SNR value.
    auto in = input(3, 3, {0.8, 0.15, 0.05}, {1, 1, 1e-3}, 0.0);
    const auto r = cond_ber_n3(in);
    CHECK(r.value > 0.5);
    CHECK_FALSE(r.anomaly);
    WeightedQSum neg;
    neg.user = 1;
    neg.constant = -0.25;
    auto cat = gamma_catalog(2, PowerAllocation({0.7, 0.3}));
    CHECK(neg.evaluate(cat, 1.0, 1.0) == -0.25);
}

TEST_CASE("enumeration properties") {
    // Bit symmetry and scenario split.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> al(0.0, 2.5), eb(0.0, 25.0);
    for (int t = 0; t < 50; ++t) {
        for (int N : {2, 3, 4}) {
            std::vector<double> g(N);
            for (auto& x : g) x = al(rng);
            for (int n = 1; n <= N; ++n) {
                auto in = input(N, n, random_betas(N, rng), g, eb(rng));
                const auto r = enumerate_exact(in);
                CHECK(std::abs(r.bit[0] - r.bit[1]) < 1e-14);
                double split = 0.0;
                for (double s : r.scenario_mass) split += s;
                CHECK(split == doctest::Approx(r.bit[0]).epsilon(1e-12));
                CHECK(r.ber >= 0.0);
                CHECK(r.ber <= 1.0);
            }
        }
    }
    // First user: nonincreasing in its gain. All users: nonincreasing in 1/sigma^2.
    for (double b : {0.6, 0.75, 0.9}) {
        double prev = 1.0;
        for (double a = 0.0; a < 3.0; a += 0.05) {
            const double v = enumerate_exact(input(2, 1, {b, 1 - b}, {a, 2.0}, 10.0)).ber;
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
        for (int n = 1; n <= 2; ++n) {
            prev = 1.0;
            for (double e = 0.0; e <= 40.0; e += 1.0) {
                const double v = enumerate_exact(input(2, n, {b, 1 - b}, {1.0, 1.0}, e)).ber;
                CHECK(v <= prev + 1e-15);
                prev = v;
            }
        }
    }
    CHECK_THROWS(enumerate_exact(input(9, 1, std::vector<double>(9, 1.0 / 9), std::vector<double>(9, 1.0), 10.0)));
}

TEST_CASE("enumeration agrees with direct simulation of the detector chain") {
    // Independent path: draw symbols and noise, run detect_sic.
    for (int N : {3, 4}) {
        std::vector<double> betas = N == 3 ? std::vector<double>{0.8, 0.15, 0.05} : std::vector<double>{0.6, 0.25, 0.1, 0.05};
        std::vector<double> gains = N == 3 ? std::vector<double>{0.6, 1.0, 1.4} : std::vector<double>{0.7, 1.0, 1.3, 1.8};
        PowerAllocation alloc(betas);
        const double ebn0 = 12.0;
        const double sigma = std::sqrt(sigma2_from_ebn0_db(ebn0));
        std::mt19937_64 rng(N);
        std::normal_distribution<double> w(0.0, sigma);
        const int trials = 200000;
        for (int n = 1; n <= N; ++n) {
            long errors = 0;
            for (int t = 0; t < trials; ++t) {
                std::vector<QpskSymbol> s(N);
                for (auto& x : s) x = {static_cast<int>(rng() & 1), static_cast<int>((rng() >> 1) & 1)};
                const auto r = gains[n - 1] * superpose(s, alloc) + std::complex<double>(w(rng), w(rng));
                const auto d = detect_sic(r, gains[n - 1], alloc, n, SicMode::imperfect).decisions.back();
                errors += (d.b1 != s[n - 1].b1) + (d.b2 != s[n - 1].b2);
            }
            auto in = input(N, n, betas, gains, ebn0);
            const double p = enumerate_exact(in).ber;
            const double sd = std::sqrt(p * (1 - p) / (2.0 * trials)) * std::sqrt(2.0);
            INFO("N=" << N << " n=" << n << " p=" << p << " mc=" << errors / (2.0 * trials));
            CHECK(std::abs(errors / (2.0 * trials) - p) < 4 * sd + 1e-9);
        }
    }
}
