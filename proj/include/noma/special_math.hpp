// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace noma {

/// Gauss-Legendre rule mapped onto (0, pi/2).
struct QuadratureRule {
    int node_count = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Coefficients S_0..S_I of the power series
///   (sum_z a_z y^z)^mu,  a_z = rate^z / Gamma(m + z + 1),
/// which together with the prefactor x^{m mu} e^{-mu x} Gamma(m)^mu
/// represents the mu-th power of the lower incomplete gamma function.
struct SeriesCoefficients {
    double mu = 0.0;
    double m = 1.0;
    double rate = 1.0;
    std::vector<double> values;
    int truncation_index = 0;
    bool converged = false;
};

/// Standard normal tail probability. Throws std::domain_error on non-finite x.
double q_func(double x);

/// Q(x) through the finite-range integral
///   (1/pi) int_0^{pi/2} exp(-x^2 / (2 sin^2 psi)) dpsi.
double q_func_craig(double x, const QuadratureRule& rule);

/// Unnormalised lower incomplete gamma int_0^z t^{a-1} e^{-t} dt.
double lower_incomplete_gamma(double a, double z);

/// Series coefficients for the given exponent. Integer mu uses an exact
/// convolution of positive terms; other mu fall back to the J.C.P. Miller
/// recursion, which loses accuracy geometrically with the index.
/// converged is set once S_i <= tol * sum_{j<=i} S_j past the peak.
SeriesCoefficients series_S(double mu, double m, double rate, double tol = 1e-12,
                            int max_terms = 500);

/// n-point Gauss-Legendre rule on (0, pi/2).
QuadratureRule gauss_legendre(int n);

/// Log-domain coefficients of (sum_z y^z / Gamma(m+z+1))^mu for integer
/// mu = 0..max_mu at unit rate. Entries are computed on demand; the object is
/// meant to live inside a single computation and is not thread-safe.
class GammaPowerSeries {
public:
    GammaPowerSeries(double m, int max_mu);

    /// log of the i-th coefficient for exponent mu (-inf when it is zero).
    double log_coeff(int mu, int i);

    double m() const { return m_; }

private:
    void extend(int length);

    double m_;
    int max_mu_;
    std::vector<double> log_a_;
    std::vector<std::vector<double>> table_;
};

/// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

}  // namespace noma
