// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "noma/detectors.hpp"

using namespace noma;

namespace {

// Brute-force minimum distance over the four QPSK points.
QpskSymbol argmin_first(std::complex<double> r, double gain, double beta1) {
    QpskSymbol best{};
    double best_d = std::numeric_limits<double>::infinity();
    for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) {
            const double d = std::norm(r - gain * map_bits({b1, b2}, beta1));
            if (d < best_d) {
                best_d = d;
                best = {b1, b2};
            }
        }
    return best;
}

std::vector<QpskSymbol> random_symbols(int N, std::mt19937_64& rng) {
    std::vector<QpskSymbol> s(N);
    for (auto& x : s) x = {static_cast<int>(rng() & 1), static_cast<int>((rng() >> 1) & 1)};
    return s;
}

}  // namespace

TEST_CASE("detect_first decisions") {
    const double b1 = 0.7, a = 0.9;
    CHECK(detect_first(std::complex<double>(1, 1) * std::sqrt(b1) * a, a, b1) == QpskSymbol{0, 0});
    CHECK(detect_first({-0.2, 0.4}, a, b1) == QpskSymbol{1, 0});
    CHECK(detect_first({0.0, -0.0}, a, b1) == QpskSymbol{0, 0});

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.5);
    for (int i = 0; i < 10000; ++i) {
        const std::complex<double> r(g(rng), g(rng));
        const double gain = std::abs(g(rng));
        CHECK(detect_first(r, gain, b1) == argmin_first(r, gain, b1));
    }
}

TEST_CASE("noiseless SIC recovers every user") {
    PowerAllocation alloc({0.8, 0.15, 0.05});
    std::mt19937_64 rng(9);
    for (int t = 0; t < 200; ++t) {
        const auto s = random_symbols(3, rng);
        const double h = 0.3 + (t % 7) * 0.2;
        const auto r = h * superpose(s, alloc);
        for (SicMode mode : {SicMode::imperfect, SicMode::perfect}) {
            const auto out = detect_sic(r, h, alloc, 3, mode, s);
            REQUIRE(out.decisions.size() == 3);
            for (int k = 0; k < 3; ++k) CHECK(out.decisions[k] == s[k]);
            const auto expect = h * std::sqrt(0.05) * std::complex<double>(s[2].i_sign(), s[2].q_sign());
            CHECK(std::abs(out.residuals.back() - expect) < 1e-12);
        }
    }
}

TEST_CASE("first-user decisions do not depend on the SIC mode") {
    PowerAllocation alloc({0.8, 0.15, 0.05});
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g(0.0, 0.4);
    for (int t = 0; t < 5000; ++t) {
        const auto s = random_symbols(3, rng);
        const double h = std::abs(g(rng)) + 0.1;
        const auto r = h * superpose(s, alloc) + std::complex<double>(g(rng), g(rng));
        const auto a = detect_sic(r, h, alloc, 3, SicMode::imperfect);
        const auto b = detect_sic(r, h, alloc, 3, SicMode::perfect, s);
        CHECK(a.decisions[0] == b.decisions[0]);
        // Perfect mode cancels the transmitted symbols.
        CHECK(std::abs(b.residuals[1] - (r - h * std::sqrt(0.8) * std::complex<double>(s[0].i_sign(), s[0].q_sign()))) < 1e-12);
    }
}

TEST_CASE("per-dimension SIC equals the complex chain") {
    PowerAllocation alloc({0.6, 0.25, 0.1, 0.05});
    const double amps[4] = {std::sqrt(0.6), std::sqrt(0.25), std::sqrt(0.1), std::sqrt(0.05)};
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0.0, 0.5);
    for (int t = 0; t < 10000; ++t) {
        const auto s = random_symbols(4, rng);
        const double h = std::abs(g(rng)) * 2;
        const auto r = h * superpose(s, alloc) + std::complex<double>(g(rng), g(rng));
        for (SicMode mode : {SicMode::imperfect, SicMode::perfect}) {
            const auto full = detect_sic(r, h, alloc, 4, mode, s);
            int si[4], sq[4], di[4], dq[4];
            for (int k = 0; k < 4; ++k) {
                si[k] = s[k].i_sign();
                sq[k] = s[k].q_sign();
            }
            sic_decide_dimension(r.real(), h, amps, 4, mode, si, di);
            sic_decide_dimension(r.imag(), h, amps, 4, mode, sq, dq);
            for (int k = 0; k < 4; ++k) CHECK(full.decisions[k] == QpskSymbol::from_signs(di[k], dq[k]));
        }
    }
}

TEST_CASE("detect_sic argument checks") {
    PowerAllocation alloc({0.7, 0.3});
    CHECK_THROWS(detect_sic({0.1, 0.1}, 1.0, alloc, 2, SicMode::perfect));
    CHECK_THROWS(detect_sic({0.1, 0.1}, 1.0, alloc, 3, SicMode::imperfect));
    CHECK_NOTHROW(detect_sic({0.1, 0.1}, 1.0, alloc, 2, SicMode::imperfect));
    CHECK(parse_sic_mode("perfect") == SicMode::perfect);
    CHECK_THROWS(parse_sic_mode("genie"));
}
