// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noma/model.hpp"
#include "noma/special_math.hpp"

namespace noma {

enum class AvgMethod { series, rayleigh_closed, numeric_oracle };

std::string to_string(AvgMethod m);

struct AvgBerSpec {
    int N = 2;
    int n = 1;
    PowerAllocation alloc{std::vector<double>{0.7, 0.3}};
    double m = 1.0;
    double omega = 1.0;
    double N0 = 1.0;  // Eb/N0 = 1/N0
    double tol = 1e-12;
    int max_terms = 500;
    int nodes = 64;

    void validate() const;
    double sigma2() const { return 0.5 * N0; }
};

struct AvgBerResult {
    double value = 0.0;
    bool converged = true;
    int terms_used = 0;
    AvgMethod method = AvgMethod::series;
    bool anomaly = false;     // value outside [0, 1]
    double std_error = 0.0;   // numeric oracle only
};

struct AvgTerm {
    double value = 0.0;
    bool converged = true;
    int terms_used = 0;
};

/// E[Q(sqrt(gamma))] where gamma is the n-th smallest of N i.i.d. Gamma
/// variates of mean gamma_bar and shape m.
AvgTerm avg_term_general(int N, int n, double gamma_bar, double m, double tol, int max_terms,
                         const QuadratureRule& rule);

/// Same, reusing a coefficient table built for shape m and exponents up to N-1.
AvgTerm avg_term_general(int N, int n, double gamma_bar, GammaPowerSeries& table, double tol, int max_terms,
                         const QuadratureRule& rule);

/// Weighted combination of avg_term_general over the user's catalog cases.
AvgBerResult avg_ber(const AvgBerSpec& spec);

/// Closed Rayleigh expressions, evaluated as printed. gamma_bars follow the
/// case order of the user's closed formula (see user_formula).
double rayleigh_closed(int N, int user, const std::vector<double>& gamma_bars);

/// Closed Rayleigh expressions at the operating point of spec. The printed
/// expressions take gamma_bar / 4 of the catalog mean SNR A^2 Omega / sigma^2.
AvgBerResult avg_ber_rayleigh(const AvgBerSpec& spec);

struct OracleOptions {
    int strata = 1 << 15;
    std::uint64_t seed = 1;
};

/// Fading average of the exact enumeration by stratified sampling of the
/// user's ordered gain through its quantile function. Works for any N <= 8.
AvgBerResult avg_numeric_oracle(const AvgBerSpec& spec, const OracleOptions& opt = {});

}  // namespace noma
