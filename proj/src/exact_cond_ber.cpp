// SPDX-License-Identifier: Apache-2.0
#include "noma/exact_cond_ber.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "noma/special_math.hpp"

namespace noma {

namespace {

constexpr int kMaxEnumerationUsers = 8;
constexpr double kRangeSlack = 1e-14;

WeightedQSum make(int user, double coef, std::vector<QTerm> terms, std::vector<QProduct> products = {},
                  double constant = 0.0) {
    WeightedQSum s;
    s.user = user;
    s.coefficient = coef;
    s.constant = constant;
    s.terms = std::move(terms);
    s.products = std::move(products);
    return s;
}

std::vector<QTerm> weighted(const std::vector<int>& cs, const std::vector<int>& ws) {
    std::vector<QTerm> t;
    for (std::size_t i = 0; i < cs.size(); ++i) t.push_back({ws[i], cs[i]});
    return t;
}

// w * Q(c_a) * (Q1 + Q2 + Q3 + Q4)
std::vector<QProduct> times_first_four(int w, int ca) {
    return {{w, ca, 1}, {w, ca, 2}, {w, ca, 3}, {w, ca, 4}};
}

CondBer flagged(double v) { return {v, !(v >= -kRangeSlack && v <= 1.0 + kRangeSlack)}; }

struct Trajectory {
    const std::vector<double>& amps;
    int n;
    double gain;
    double sigma;
    SicMode mode;
    std::vector<double>* scenario;
    const int* signs = nullptr;
    double level = 0.0;

    // Error mass of user n over the noise interval [lo, hi].
    double walk(int k, double lo, double hi, double offset, unsigned wrong) const {
        if (lo >= hi) return 0.0;
        // Decision at stage k is + iff w >= offset - gain * level.
        const double thr = offset - gain * level;
        const int truth = signs[k];
        double total = 0.0;
        for (int d : {1, -1}) {
            const double a = d > 0 ? std::max(lo, thr) : lo;
            const double b = d > 0 ? hi : std::min(hi, thr);
            if (a >= b) continue;
            if (k == n - 1) {
                if (d != truth) {
                    const double mass = q_func_inf(a / sigma) - q_func_inf(b / sigma);
                    total += mass;
                    if (scenario) (*scenario)[wrong] += mass;
                }
            } else {
                const int cancel = mode == SicMode::perfect ? truth : d;
                const unsigned w = d != truth ? wrong | (1u << k) : wrong;
                total += walk(k + 1, a, b, offset + gain * amps[k] * cancel, w);
            }
        }
        return total;
    }

    static double q_func_inf(double x) {
        if (x == std::numeric_limits<double>::infinity()) return 0.0;
        if (x == -std::numeric_limits<double>::infinity()) return 1.0;
        return q_func(x);
    }
};

}  // namespace

void CondBerInput::validate() const {
    if (N < 1) throw std::invalid_argument("CondBerInput: N must be positive");
    if (n < 1 || n > N) throw std::invalid_argument("CondBerInput: user outside 1..N");
    if (static_cast<int>(gains.size()) != N) throw std::invalid_argument("CondBerInput: one gain per user required");
    for (double g : gains)
        if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("CondBerInput: gains must be nonnegative");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("CondBerInput: noise variance must be positive");
    if (alloc.size() != N) throw std::invalid_argument("CondBerInput: allocation size differs from N");
}

double WeightedQSum::evaluate(const GammaCatalog& catalog, double alpha, double sigma2) const {
    auto q = [&](int c) { return q_func(std::sqrt(catalog.gamma(user, c, alpha, sigma2))); };
    double acc = constant;
    for (const auto& t : terms) acc += t.weight * q(t.c);
    for (const auto& p : products) acc += p.weight * q(p.ca) * q(p.cb);
    return coefficient * acc;
}

double WeightedQSum::zero_snr_value() const {
    double acc = constant;
    for (const auto& t : terms) acc += 0.5 * t.weight;
    for (const auto& p : products) acc += 0.25 * p.weight;
    return coefficient * acc;
}

Scenario parse_scenario(const std::string& s) {
    for (Scenario sc : {Scenario::u2_first_correct, Scenario::u2_first_wrong, Scenario::u3_both_correct,
                        Scenario::u3_second_wrong, Scenario::u3_first_wrong, Scenario::u3_both_wrong})
        if (to_string(sc) == s) return sc;
    throw std::invalid_argument("unknown scenario selector '" + s + "'");
}

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::u2_first_correct: return "u2-first-correct";
        case Scenario::u2_first_wrong: return "u2-first-wrong";
        case Scenario::u3_both_correct: return "u3-both-correct";
        case Scenario::u3_second_wrong: return "u3-second-wrong";
        case Scenario::u3_first_wrong: return "u3-first-wrong";
        case Scenario::u3_both_wrong: return "u3-both-wrong";
    }
    throw std::invalid_argument("unknown scenario selector");
}

const WeightedQSum& user_formula(int N, int n) {
    static const WeightedQSum n2u1 = make(1, 0.5, weighted({1, 2}, {1, 1}));
    static const WeightedQSum n2u2 = make(2, 0.5, weighted({1, 2, 3, 4, 5}, {2, 1, -1, -1, 1}));
    static const WeightedQSum n3u1 = make(1, 0.25, weighted({1, 2, 3, 4}, {1, 1, 1, 1}));
    static const WeightedQSum n3u2 =
        make(2, 0.25, weighted({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {1, 1, -1, -1, 6, 2, -1, -1, 1, 1}));
    static const WeightedQSum n3u3 =
        make(3, 0.25, weighted({2, 4, 11, 13, 14, 15, 16, 17, 18}, {-1, -1, 12, 2, -1, -1, -1, -1, -1}));
    if (N == 2 && n == 1) return n2u1;
    if (N == 2 && n == 2) return n2u2;
    if (N == 3 && n == 1) return n3u1;
    if (N == 3 && n == 2) return n3u2;
    if (N == 3 && n == 3) return n3u3;
    throw UnsupportedSystem("closed formulas exist only for N = 2 or 3");
}

const WeightedQSum& scenario_formula(Scenario s) {
    static const WeightedQSum u2_ok =
        make(2, 0.25, weighted({5, 3, 4, 6}, {6, -1, -1, 2}), times_first_four(-1, 5));
    static const WeightedQSum u2_bad =
        make(2, 0.25, weighted({1, 2, 7, 8, 9, 10}, {1, 1, -1, -1, 1, 1}), times_first_four(1, 5));
    static const WeightedQSum u3_ok =
        make(3, 0.25, weighted({11, 2, 4}, {8, -1, 1}), times_first_four(-1, 11));
    static const WeightedQSum u3_second =
        make(3, 1.0, weighted({1, 2, 4, 14, 13, 11}, {-1, -1, -1, -1, 2, 4}), times_first_four(-1, 11), 2.0);
    static const WeightedQSum u3_first = make(3, 1.0, weighted({2, 4}, {1, 1}), times_first_four(1, 11));
    static const WeightedQSum u3_both =
        make(3, 1.0, weighted({1, 15, 16, 17, 18}, {1, -1, 1, 1, 1}), times_first_four(1, 11));
    switch (s) {
        case Scenario::u2_first_correct: return u2_ok;
        case Scenario::u2_first_wrong: return u2_bad;
        case Scenario::u3_both_correct: return u3_ok;
        case Scenario::u3_second_wrong: return u3_second;
        case Scenario::u3_first_wrong: return u3_first;
        case Scenario::u3_both_wrong: return u3_both;
    }
    throw std::invalid_argument("unknown scenario selector");
}

CondBer cond_ber_n2_u1(const CondBerInput& in) {
    in.validate();
    if (in.N != 2 || in.n != 1) throw std::invalid_argument("cond_ber_n2_u1 needs N = 2, n = 1");
    return flagged(user_formula(2, 1).evaluate(gamma_catalog(2, in.alloc), in.gain(), in.sigma2));
}

CondBer cond_ber_n2_u2(const CondBerInput& in) {
    in.validate();
    if (in.N != 2 || in.n != 2) throw std::invalid_argument("cond_ber_n2_u2 needs N = 2, n = 2");
    return flagged(user_formula(2, 2).evaluate(gamma_catalog(2, in.alloc), in.gain(), in.sigma2));
}

CondBer cond_ber_n3(const CondBerInput& in, std::optional<Scenario> intermediate) {
    in.validate();
    if (in.N != 3) throw std::invalid_argument("cond_ber_n3 needs N = 3");
    const auto catalog = gamma_catalog(3, in.alloc);
    if (!intermediate) return flagged(user_formula(3, in.n).evaluate(catalog, in.gain(), in.sigma2));
    const auto& f = scenario_formula(*intermediate);
    if (f.user != in.n)
        throw std::invalid_argument("scenario selector " + to_string(*intermediate) + " does not belong to user " +
                                    std::to_string(in.n));
    return flagged(f.evaluate(catalog, in.gain(), in.sigma2));
}

double enumerate_dimension(const std::vector<double>& amps, int n, double gain, double sigma, SicMode mode,
                           std::vector<double>* scenario_mass) {
    const int N = static_cast<int>(amps.size());
    if (N > kMaxEnumerationUsers) throw std::invalid_argument("enumeration refused for N > 8");
    if (n < 1 || n > N) throw std::invalid_argument("enumerate_dimension: user outside 1..N");
    const double inf = std::numeric_limits<double>::infinity();
    if (scenario_mass) scenario_mass->assign(std::size_t{1} << (n - 1), 0.0);

    const unsigned patterns = 1u << N;
    const double p = 1.0 / patterns;
    std::vector<int> signs(N);
    double total = 0.0;
    std::vector<double> local;
    for (unsigned pat = 0; pat < patterns; ++pat) {
        double level = 0.0;
        for (int j = 0; j < N; ++j) {
            signs[j] = (pat >> j) & 1u ? -1 : 1;
            level += amps[j] * signs[j];
        }
        if (gain == 0.0) {
            // Every statistic is zero, so every decision is +.
            unsigned wrong = 0;
            for (int j = 0; j < n - 1; ++j)
                if (signs[j] != 1) wrong |= 1u << j;
            if (signs[n - 1] != 1) {
                total += p;
                if (scenario_mass) (*scenario_mass)[wrong] += p;
            }
            continue;
        }
        Trajectory t{amps, n, gain, sigma, mode, scenario_mass ? &local : nullptr, signs.data(), level};
        if (scenario_mass) local.assign(scenario_mass->size(), 0.0);
        total += p * t.walk(0, -inf, inf, 0.0, 0u);
        if (scenario_mass)
            for (std::size_t s = 0; s < local.size(); ++s) (*scenario_mass)[s] += p * local[s];
    }
    return total;
}

ExactBer enumerate_exact(const CondBerInput& in, SicMode mode) {
    in.validate();
    if (in.N > kMaxEnumerationUsers) throw std::invalid_argument("enumeration refused for N > 8");
    std::vector<double> amps(in.N);
    for (int k = 1; k <= in.N; ++k) amps[k - 1] = in.alloc.amplitude(k);
    const double sigma = std::sqrt(in.sigma2);

    ExactBer out;
    out.user = in.n;
    // Inphase and quadrature see the same gain and independent noise of equal
    // variance, so each bit is the same one-dimensional problem.
    std::vector<double> split;
    out.bit[0] = enumerate_dimension(amps, in.n, in.gain(), sigma, mode, &split);
    out.bit[1] = enumerate_dimension(amps, in.n, in.gain(), sigma, mode);
    out.ber = 0.5 * (out.bit[0] + out.bit[1]);
    out.scenario_mass = split;
    return out;
}

}  // namespace noma
