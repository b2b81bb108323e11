// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>

#include <boost/random/gamma_distribution.hpp>
#include <stdexcept>
#include <vector>

namespace noma {

using Rng = std::mt19937_64;

/// Thrown when an infinite series does not settle within its term budget.
struct SeriesNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FadingSpec {
    double m = 1.0;      // shape, >= 0.5
    double omega = 1.0;  // E[alpha^2]
    int N = 1;           // users
    int n = 1;           // rank, 1 = weakest

    void validate() const;
};

/// Gains sorted ascending; alphas[0] belongs to user 1.
struct OrderedGains {
    std::vector<double> alphas;
};

/// Nakagami-m amplitude sampler; alpha^2 ~ Gamma(m, omega / m).
class NakagamiSampler {
public:
    NakagamiSampler(double m, double omega);
    double operator()(Rng& rng) { return std::sqrt(power_(rng)); }

private:
    boost::random::gamma_distribution<double> power_;
};

double sample_nakagami(double m, double omega, Rng& rng);
OrderedGains sample_ordered(int N, double m, double omega, Rng& rng);

double nakagami_pdf(double m, double omega, double alpha);
double nakagami_cdf(double m, double omega, double alpha);

/// Density of the n-th smallest of N i.i.d. Nakagami gains.
double ordered_gain_pdf(const FadingSpec& spec, double alpha);
/// CDF of the same order statistic.
double ordered_gain_cdf(const FadingSpec& spec, double alpha);
/// Inverse of ordered_gain_cdf for u in (0, 1).
double ordered_gain_quantile(const FadingSpec& spec, double u);

/// Density of gamma = alpha_n^2 * gamma_bar / omega for the n-th ordered gain,
/// evaluated through the incomplete-gamma power series. Throws
/// SeriesNotConverged when the series needs more than max_terms terms.
double ordered_gamma_pdf(const FadingSpec& spec, double gamma_bar, double gamma, double tol = 1e-12,
                         int max_terms = 500);

/// N! / ((n-1)! (N-n)!).
double order_statistic_constant(int N, int n);

}  // namespace noma
