// SPDX-License-Identifier: Apache-2.0
#include "noma/special_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace noma {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool is_small_integer(double mu) {
    return mu == std::floor(mu) && mu <= 4096.0;
}

}  // namespace

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

double q_func(double x) {
    if (!std::isfinite(x)) throw std::domain_error("q_func: non-finite argument");
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_func_craig(double x, const QuadratureRule& rule) {
    if (!(x >= 0.0)) throw std::domain_error("q_func_craig: negative argument");
    double sum = 0.0;
    for (int j = 0; j < rule.node_count; ++j) {
        const double s = std::sin(rule.nodes[j]);
        sum += rule.weights[j] * std::exp(-x * x / (2.0 * s * s));
    }
    return sum / std::numbers::pi;
}

double lower_incomplete_gamma(double a, double z) {
    if (!(a > 0.0)) throw std::domain_error("lower_incomplete_gamma: a must be positive");
    if (!(z >= 0.0)) throw std::domain_error("lower_incomplete_gamma: z must be nonnegative");
    if (std::isinf(z)) return std::tgamma(a);
    return boost::math::tgamma_lower(a, z);
}

GammaPowerSeries::GammaPowerSeries(double m, int max_mu)
    : m_(m), max_mu_(max_mu), table_(static_cast<std::size_t>(max_mu) + 1) {
    if (!(m > 0.0)) throw std::domain_error("GammaPowerSeries: m must be positive");
    if (max_mu < 0) throw std::domain_error("GammaPowerSeries: negative exponent");
}

double GammaPowerSeries::log_coeff(int mu, int i) {
    if (mu < 0 || mu > max_mu_) throw std::out_of_range("GammaPowerSeries: exponent out of range");
    if (i >= static_cast<int>(log_a_.size())) {
        extend(std::max(i + 1, 2 * static_cast<int>(log_a_.size())));
    }
    return table_[mu][i];
}

void GammaPowerSeries::extend(int length) {
    const int old = static_cast<int>(log_a_.size());
    log_a_.resize(length);
    for (int z = old; z < length; ++z) log_a_[z] = -std::lgamma(m_ + z + 1.0);

    table_[0].resize(length, kNegInf);
    if (old == 0) table_[0][0] = 0.0;

    std::vector<double> buf;
    for (int mu = 1; mu <= max_mu_; ++mu) {
        auto& cur = table_[mu];
        const auto& prev = table_[mu - 1];
        cur.resize(length);
        for (int i = old; i < length; ++i) {
            // Cauchy product in log space; every term is positive.
            buf.resize(i + 1);
            double peak = kNegInf;
            for (int z = 0; z <= i; ++z) {
                buf[z] = log_a_[z] + prev[i - z];
                peak = std::max(peak, buf[z]);
            }
            if (peak == kNegInf) {
                cur[i] = kNegInf;
                continue;
            }
            double acc = 0.0;
            for (int z = 0; z <= i; ++z) acc += std::exp(buf[z] - peak);
            cur[i] = peak + std::log(acc);
        }
    }
}

SeriesCoefficients series_S(double mu, double m, double rate, double tol, int max_terms) {
    if (!(mu >= 0.0)) throw std::domain_error("series_S: mu must be nonnegative");
    if (!(m > 0.0)) throw std::domain_error("series_S: m must be positive");
    if (!(rate > 0.0)) throw std::domain_error("series_S: rate must be positive");
    if (!(tol > 0.0)) throw std::domain_error("series_S: tol must be positive");
    if (max_terms < 1) throw std::domain_error("series_S: max_terms must be at least 1");

    SeriesCoefficients out;
    out.mu = mu;
    out.m = m;
    out.rate = rate;

    const double a0 = 1.0 / std::tgamma(m + 1.0);
    const double log_rate = std::log(rate);

    if (mu == 0.0) {
        out.values = {1.0};
        out.truncation_index = 0;
        out.converged = true;
        return out;
    }

    const bool integral = is_small_integer(mu);
    GammaPowerSeries table(m, integral ? static_cast<int>(mu) : 0);
    std::vector<double> a;  // only used by the recursion path

    double sum = 0.0;
    for (int i = 0; i < max_terms; ++i) {
        double s;
        if (i == 0) {
            s = std::pow(a0, mu);
        } else if (integral) {
            s = std::exp(table.log_coeff(static_cast<int>(mu), i) + i * log_rate);
        } else {
            while (static_cast<int>(a.size()) <= i) {
                const int z = static_cast<int>(a.size());
                a.push_back(std::exp(z * log_rate - std::lgamma(m + z + 1.0)));
            }
            double acc = 0.0;
            for (int z = 1; z <= i; ++z) acc += (z * (mu + 1.0) - i) * a[z] * out.values[i - z];
            s = acc / (i * a0);
        }
        out.values.push_back(s);
        sum += s;
        out.truncation_index = i;
        if (i > 0 && s <= out.values[i - 1] && std::abs(s) <= tol * std::abs(sum)) {
            out.converged = true;
            break;
        }
    }
    return out;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 2) throw std::domain_error("gauss_legendre: need at least 2 nodes");
    QuadratureRule rule;
    rule.node_count = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = std::numbers::pi;
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double x = std::cos(pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x runs from near +1 downwards; place the mirrored pair.
        rule.nodes[n - 1 - k] = 0.25 * pi * (1.0 + x);
        rule.weights[n - 1 - k] = 0.25 * pi * w;
        rule.nodes[k] = 0.25 * pi * (1.0 - x);
        rule.weights[k] = 0.25 * pi * w;
    }
    return rule;
}

}  // namespace noma
