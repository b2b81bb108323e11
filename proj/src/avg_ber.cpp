// SPDX-License-Identifier: Apache-2.0
#include "noma/avg_ber.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/binomial.hpp>

#include "noma/exact_cond_ber.hpp"
#include "noma/fading.hpp"

namespace noma {

namespace {

bool out_of_range(double v) { return !(v >= -1e-14 && v <= 1.0 + 1e-14); }

}  // namespace

std::string to_string(AvgMethod m) {
    switch (m) {
        case AvgMethod::series: return "series";
        case AvgMethod::rayleigh_closed: return "rayleigh-closed";
        case AvgMethod::numeric_oracle: return "numeric-oracle";
    }
    return "unknown";
}

void AvgBerSpec::validate() const {
    if (N < 1 || n < 1 || n > N) throw std::invalid_argument("AvgBerSpec: user outside 1..N");
    if (alloc.size() != N) throw std::invalid_argument("AvgBerSpec: allocation size differs from N");
    if (!(N0 > 0.0)) throw std::invalid_argument("AvgBerSpec: N0 must be positive");
    if (nodes < 8) throw std::invalid_argument("AvgBerSpec: at least 8 quadrature nodes required");
    if (!(tol > 0.0) || max_terms < 1) throw std::invalid_argument("AvgBerSpec: bad series controls");
    FadingSpec{m, omega, N, n}.validate();
}

AvgTerm avg_term_general(int N, int n, double gamma_bar, double m, double tol, int max_terms,
                         const QuadratureRule& rule) {
    GammaPowerSeries table(m, N - 1);
    return avg_term_general(N, n, gamma_bar, table, tol, max_terms, rule);
}

AvgTerm avg_term_general(int N, int n, double gamma_bar, GammaPowerSeries& table, double tol, int max_terms,
                         const QuadratureRule& rule) {
    if (N < 1 || n < 1 || n > N) throw std::invalid_argument("avg_term_general: user outside 1..N");
    if (!(gamma_bar >= 0.0)) throw std::domain_error("avg_term_general: gamma_bar must be nonnegative");
    if (gamma_bar == 0.0) return {0.5, true, 0};
    if (std::isinf(gamma_bar)) return {0.0, true, 0};

    const double m = table.m();
    const double rate = m / gamma_bar;
    const double pref = order_statistic_constant(N, n) / (std::numbers::pi * std::tgamma(m));

    AvgTerm out;
    double total = 0.0;
    std::vector<double> lg;
    for (int k = 0; k <= N - n; ++k) {
        const int mu = n + k - 1;
        const double t = m * (n + k);
        const double sign = (k % 2) ? -1.0 : 1.0;
        const double binom = boost::math::binomial_coefficient<double>(N - n, k);
        lg.clear();
        double integral = 0.0;
        for (int j = 0; j < rule.node_count; ++j) {
            const double s = std::sin(rule.nodes[j]);
            const double b = 1.0 / (2.0 * s * s) + (n + k) * rate;
            const double lr = std::log(rate / b);
            double sum = 0.0, prev = std::numeric_limits<double>::infinity();
            bool done = false;
            int i = 0;
            for (; i < max_terms; ++i) {
                if (i >= static_cast<int>(lg.size())) lg.push_back(std::lgamma(i + t));
                const double term = std::exp(table.log_coeff(mu, i) + lg[i] + (i + t) * lr);
                sum += term;
                if (term <= prev && term <= tol * sum) {
                    done = true;
                    break;
                }
                prev = term;
            }
            if (!done) out.converged = false;
            out.terms_used = std::max(out.terms_used, std::min(i + 1, max_terms));
            integral += rule.weights[j] * sum;
        }
        total += sign * binom * integral;
    }
    out.value = pref * total;
    return out;
}

AvgBerResult avg_ber(const AvgBerSpec& spec) {
    spec.validate();
    if (spec.N != 2 && spec.N != 3) throw UnsupportedSystem("series average exists only for N = 2 or 3");
    const auto catalog = gamma_catalog(spec.N, spec.alloc);
    const auto& formula = user_formula(spec.N, spec.n);
    const auto rule = gauss_legendre(spec.nodes);
    GammaPowerSeries table(spec.m, spec.N - 1);

    AvgBerResult r;
    r.method = AvgMethod::series;
    double acc = formula.constant;
    for (const auto& t : formula.terms) {
        const double gb = catalog.gamma_bar(spec.n, t.c, spec.omega, spec.sigma2());
        const AvgTerm a = avg_term_general(spec.N, spec.n, gb, table, spec.tol, spec.max_terms, rule);
        acc += t.weight * a.value;
        r.converged = r.converged && a.converged;
        r.terms_used = std::max(r.terms_used, a.terms_used);
    }
    r.value = formula.coefficient * acc;
    r.anomaly = out_of_range(r.value);
    return r;
}

double rayleigh_closed(int N, int user, const std::vector<double>& gamma_bars) {
    const auto& formula = user_formula(N, user);
    if (gamma_bars.size() != formula.terms.size())
        throw std::invalid_argument("rayleigh_closed: one mean SNR per formula case required");
    auto ratio = [](double num, double den) { return std::isinf(num) ? 1.0 : num / den; };
    double acc = 0.0;
    for (std::size_t i = 0; i < gamma_bars.size(); ++i) {
        const double g = gamma_bars[i];
        const double w = formula.terms[i].weight;
        if (N == 2 && user == 1) {
            acc += 0.25 * (1.0 - 1.0 / std::sqrt(1.0 / g + 1.0));
        } else if (N == 2) {
            acc += 0.5 * w * (std::sqrt(ratio(g, g + 1.0)) - std::sqrt(ratio(8.0 * g, 2.0 * g + 1.0)) + 1.0);
        } else if (user == 1) {
            acc += 0.25 * (1.0 - std::sqrt(ratio(2.0 * g, 2.0 * g + 3.0)));
        } else if (user == 2) {
            acc += 0.25 * w *
                   (std::sqrt(ratio(2.0 * g, 2.0 * g + 3.0)) - 1.5 * std::sqrt(ratio(g, g + 1.0)) + 0.5);
        } else {
            acc += 0.25 * w *
                   (-std::sqrt(ratio(2.0 * g, 2.0 * g + 3.0)) - 3.0 * std::sqrt(ratio(2.0 * g, 2.0 * g + 1.0)) +
                    3.0 * std::sqrt(ratio(g, g + 1.0)) + 0.5);
        }
    }
    return acc;
}

AvgBerResult avg_ber_rayleigh(const AvgBerSpec& spec) {
    spec.validate();
    if (spec.m != 1.0) throw std::invalid_argument("closed Rayleigh forms need m = 1");
    if (spec.N != 2 && spec.N != 3) throw UnsupportedSystem("closed forms exist only for N = 2 or 3");
    const auto catalog = gamma_catalog(spec.N, spec.alloc);
    const auto& formula = user_formula(spec.N, spec.n);
    std::vector<double> g;
    for (const auto& t : formula.terms) g.push_back(0.25 * catalog.gamma_bar(spec.n, t.c, spec.omega, spec.sigma2()));
    AvgBerResult r;
    r.method = AvgMethod::rayleigh_closed;
    r.value = rayleigh_closed(spec.N, spec.n, g);
    r.anomaly = out_of_range(r.value);
    return r;
}

AvgBerResult avg_numeric_oracle(const AvgBerSpec& spec, const OracleOptions& opt) {
    spec.validate();
    if (opt.strata < 1) throw std::invalid_argument("avg_numeric_oracle: strata must be positive");
    std::vector<double> amps(spec.N);
    for (int k = 1; k <= spec.N; ++k) amps[k - 1] = spec.alloc.amplitude(k);
    const double sigma = std::sqrt(spec.sigma2());
    const FadingSpec fs{spec.m, spec.omega, spec.N, spec.n};

    // Strata are uniform in v with u = v^p. Near zero u ~ alpha^(2 m n), so
    // this spreads the deep-fade region that dominates at high SNR.
    const double p = 2.0 * spec.m * spec.n;
    Rng rng(opt.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int M = opt.strata;
    auto eval = [&](int s) {
        const double v = (s + unif(rng)) / M;
        const double jac = p * std::pow(v, p - 1.0);
        const double u = std::min(std::max(std::pow(v, p), 1e-300), 1.0 - 1e-16);
        if (jac == 0.0) return 0.0;
        const double alpha = ordered_gain_quantile(fs, u);
        const double g = std::isinf(alpha) ? enumerate_dimension(amps, spec.n, 1e300, sigma, SicMode::imperfect)
                                           : enumerate_dimension(amps, spec.n, alpha, sigma, SicMode::imperfect);
        return g * jac;
    };
    double sum = 0.0, var = 0.0;
    for (int s = 0; s < M; ++s) {
        const double y1 = eval(s);
        const double y2 = eval(s);
        sum += 0.5 * (y1 + y2);
        var += 0.25 * (y1 - y2) * (y1 - y2);
    }
    AvgBerResult r;
    r.method = AvgMethod::numeric_oracle;
    r.value = sum / M;
    // Each stratum mean has variance about (y1 - y2)^2 / 4.
    r.std_error = std::sqrt(var) / M;
    r.terms_used = 2 * M;
    r.anomaly = out_of_range(r.value);
    return r;
}

}  // namespace noma
