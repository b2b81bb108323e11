// SPDX-License-Identifier: Apache-2.0
#include "noma/fading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "noma/special_math.hpp"

namespace noma {

void FadingSpec::validate() const {
    if (!(m >= 0.5)) throw std::domain_error("Nakagami shape m must be at least 0.5");
    if (!(omega > 0.0)) throw std::domain_error("Nakagami spread omega must be positive");
    if (N < 1 || n < 1 || n > N) throw std::domain_error("user rank must lie in 1..N");
}

NakagamiSampler::NakagamiSampler(double m, double omega) : power_(m, omega / m) {
    FadingSpec{m, omega, 1, 1}.validate();
}

double sample_nakagami(double m, double omega, Rng& rng) {
    NakagamiSampler s(m, omega);
    return s(rng);
}

OrderedGains sample_ordered(int N, double m, double omega, Rng& rng) {
    if (N < 1) throw std::domain_error("sample_ordered: N must be positive");
    NakagamiSampler s(m, omega);
    OrderedGains g;
    g.alphas.resize(N);
    for (auto& a : g.alphas) a = s(rng);
    std::sort(g.alphas.begin(), g.alphas.end());
    return g;
}

double nakagami_pdf(double m, double omega, double alpha) {
    if (alpha < 0.0) return 0.0;
    if (alpha == 0.0) return m == 0.5 ? std::sqrt(2.0 / (std::numbers::pi * omega)) : 0.0;
    const double x = m * alpha * alpha / omega;
    const double logf = std::log(2.0) + m * std::log(m / omega) + (2.0 * m - 1.0) * std::log(alpha) - x - std::lgamma(m);
    return std::exp(logf);
}

double nakagami_cdf(double m, double omega, double alpha) {
    if (alpha <= 0.0) return 0.0;
    return boost::math::gamma_p(m, m * alpha * alpha / omega);
}

double order_statistic_constant(int N, int n) {
    return std::exp(std::lgamma(N + 1.0) - std::lgamma(static_cast<double>(n)) - std::lgamma(N - n + 1.0));
}

double ordered_gain_pdf(const FadingSpec& spec, double alpha) {
    spec.validate();
    if (alpha < 0.0) return 0.0;
    const double f = nakagami_pdf(spec.m, spec.omega, alpha);
    if (f == 0.0) return 0.0;
    const double x = spec.m * alpha * alpha / spec.omega;
    const double F = boost::math::gamma_p(spec.m, x);
    const double Fc = boost::math::gamma_q(spec.m, x);
    return order_statistic_constant(spec.N, spec.n) * f * std::pow(F, spec.n - 1) * std::pow(Fc, spec.N - spec.n);
}

double ordered_gain_cdf(const FadingSpec& spec, double alpha) {
    spec.validate();
    if (alpha <= 0.0) return 0.0;
    if (std::isinf(alpha)) return 1.0;
    const double x = spec.m * alpha * alpha / spec.omega;
    const double F = boost::math::gamma_p(spec.m, x);
    return boost::math::ibeta(spec.n, spec.N - spec.n + 1, F);
}

double ordered_gain_quantile(const FadingSpec& spec, double u) {
    spec.validate();
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("ordered_gain_quantile: u must lie in (0,1)");
    const double p = boost::math::ibeta_inv(spec.n, spec.N - spec.n + 1, u);
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(boost::math::gamma_p_inv(spec.m, p) * spec.omega / spec.m);
}

double ordered_gamma_pdf(const FadingSpec& spec, double gamma_bar, double gamma, double tol, int max_terms) {
    spec.validate();
    if (!(gamma_bar > 0.0)) throw std::domain_error("ordered_gamma_pdf: gamma_bar must be positive");
    if (!(gamma >= 0.0)) throw std::domain_error("ordered_gamma_pdf: gamma must be nonnegative");

    const double m = spec.m;
    const int N = spec.N, n = spec.n;
    const double rate = m / gamma_bar;
    const double log_pref = std::log(order_statistic_constant(N, n)) - std::lgamma(m);

    if (gamma == 0.0) {
        // Only the leading power gamma^{m n - 1} survives.
        const double t = m * n;
        if (t < 1.0) return std::numeric_limits<double>::infinity();
        if (t > 1.0) return 0.0;
        GammaPowerSeries table(m, n - 1);
        return std::exp(log_pref + table.log_coeff(n - 1, 0) + t * std::log(rate));
    }

    GammaPowerSeries table(m, N - 1);
    const double log_g = std::log(gamma);
    const double log_rate = std::log(rate);
    double total = 0.0;
    for (int k = 0; k <= N - n; ++k) {
        const int mu = n + k - 1;
        const double t = m * (n + k);
        const double sign = (k % 2) ? -1.0 : 1.0;
        const double log_c = std::log(boost::math::binomial_coefficient<double>(N - n, k));
        double sum = 0.0, prev = std::numeric_limits<double>::infinity();
        bool done = false;
        for (int i = 0; i < max_terms; ++i) {
            const double lt = table.log_coeff(mu, i) + (i + t) * log_rate + (i + t - 1.0) * log_g - (n + k) * rate * gamma;
            const double term = std::exp(lt);
            sum += term;
            if (term <= prev && term <= tol * sum) {
                done = true;
                break;
            }
            prev = term;
        }
        if (!done) throw SeriesNotConverged("ordered_gamma_pdf: series needs more than max_terms terms");
        total += sign * std::exp(log_pref + log_c) * sum;
    }
    return total;
}

}  // namespace noma
