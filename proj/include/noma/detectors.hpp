// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "noma/model.hpp"

namespace noma {

enum class SicMode { imperfect, perfect };

SicMode parse_sic_mode(const std::string& s);
std::string to_string(SicMode mode);

struct DetectionOutcome {
    /// decisions[k] is the decided symbol of user k+1, for users 1..target.
    std::vector<QpskSymbol> decisions;
    /// residuals[k] is the received sample after cancelling users 1..k.
    std::vector<std::complex<double>> residuals;
    SicMode mode = SicMode::imperfect;
};

/// Minimum-distance decision for the first user; ties resolve to bit 0.
QpskSymbol detect_first(std::complex<double> received, double gain, double beta1);

/// Successive cancellation up to target_user (1-based). truth must hold one
/// symbol per user when mode is perfect.
DetectionOutcome detect_sic(std::complex<double> received, double gain, const PowerAllocation& alloc,
                            int target_user, SicMode mode,
                            const std::optional<std::vector<QpskSymbol>>& truth = std::nullopt);

/// One real dimension of the SIC chain. amps[k] = sqrt(beta_{k+1});
/// true_signs is read only in perfect mode. Writes +1/-1 decisions for users
/// 1..target into out.
void sic_decide_dimension(double received, double gain, const double* amps, int target, SicMode mode,
                          const int* true_signs, int* out);

}  // namespace noma
