// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace noma {

/// Raised for system sizes the closed formulas do not cover.
struct UnsupportedSystem : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Per-user power fractions, strongest allocation first. Sum is 1 and the
/// sequence is non-increasing, both at tolerance 1e-9.
class PowerAllocation {
public:
    explicit PowerAllocation(std::vector<double> betas);

    int size() const { return static_cast<int>(betas_.size()); }
    const std::vector<double>& betas() const { return betas_; }
    /// 1-based user index.
    double beta(int n) const { return betas_.at(n - 1); }
    double amplitude(int n) const { return amps_.at(n - 1); }

    std::string to_string() const;

private:
    std::vector<double> betas_;
    std::vector<double> amps_;
};

/// Gray QPSK symbol; bit 0 maps to +1 on its dimension.
struct QpskSymbol {
    int b1 = 0;  // inphase bit
    int b2 = 0;  // quadrature bit

    int i_sign() const { return b1 ? -1 : 1; }
    int q_sign() const { return b2 ? -1 : 1; }
    static QpskSymbol from_signs(int i_sign, int q_sign) {
        return {i_sign < 0 ? 1 : 0, q_sign < 0 ? 1 : 0};
    }
    bool operator==(const QpskSymbol&) const = default;
};

std::complex<double> map_bits(std::array<int, 2> bits, double beta_n);

/// x = sum_n sqrt(beta_n) s_n with unit total power.
std::complex<double> superpose(const std::vector<QpskSymbol>& symbols, const PowerAllocation& alloc);

/// Per-dimension level u1 sqrt(b1) + u2 sqrt(b2) + u3 sqrt(b3).
struct AmplitudeLevel {
    std::array<int, 3> u{};
    double value = 0.0;
};

AmplitudeLevel amplitude_level(std::array<int, 3> u, const PowerAllocation& alloc);

struct GammaEntry {
    int user = 0;
    int c = 0;
    AmplitudeLevel level;
    int gain_owner = 0;  // user whose gain scales this SNR
};

/// Indexed SNR cases gamma_{n,c} for N = 2 or 3.
class GammaCatalog {
public:
    GammaCatalog(int N, std::vector<GammaEntry> entries);

    int system_size() const { return N_; }
    const std::vector<GammaEntry>& entries() const { return entries_; }

    /// Level for (user, c). For N = 3 case indices bind to levels only, so
    /// user 3 resolves the shared c2 and c4 levels.
    const AmplitudeLevel& level(int user, int c) const;

    /// alpha^2 A^2 / sigma^2.
    double gamma(int user, int c, double alpha, double sigma2) const;
    /// A^2 Omega / sigma^2.
    double gamma_bar(int user, int c, double omega, double sigma2) const;

private:
    const GammaEntry* find(int user, int c) const;

    int N_;
    std::vector<GammaEntry> entries_;
};

GammaCatalog gamma_catalog(int N, const PowerAllocation& alloc);

/// N0 for a given Eb/N0 in dB (unit bit energy).
double n0_from_ebn0_db(double ebn0_db);
/// Per-dimension noise variance N0 / 2.
double sigma2_from_ebn0_db(double ebn0_db);

}  // namespace noma
