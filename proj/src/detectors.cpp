// SPDX-License-Identifier: Apache-2.0
#include "noma/detectors.hpp"

#include <stdexcept>

namespace noma {

SicMode parse_sic_mode(const std::string& s) {
    if (s == "imperfect") return SicMode::imperfect;
    if (s == "perfect") return SicMode::perfect;
    throw std::invalid_argument("unknown SIC mode '" + s + "'");
}

std::string to_string(SicMode mode) { return mode == SicMode::perfect ? "perfect" : "imperfect"; }

void sic_decide_dimension(double received, double gain, const double* amps, int target, SicMode mode,
                          const int* true_signs, int* out) {
    double residual = received;
    for (int k = 0; k < target; ++k) {
        const int d = gain * residual >= 0.0 ? 1 : -1;
        out[k] = d;
        const int cancel = mode == SicMode::perfect ? true_signs[k] : d;
        residual -= gain * amps[k] * cancel;
    }
}

QpskSymbol detect_first(std::complex<double> received, double gain, double beta1) {
    if (!(gain >= 0.0)) throw std::invalid_argument("detect_first: gain must be nonnegative");
    (void)beta1;  // the decision regions do not depend on the power level
    return QpskSymbol::from_signs(gain * received.real() >= 0.0 ? 1 : -1, gain * received.imag() >= 0.0 ? 1 : -1);
}

DetectionOutcome detect_sic(std::complex<double> received, double gain, const PowerAllocation& alloc,
                            int target_user, SicMode mode, const std::optional<std::vector<QpskSymbol>>& truth) {
    if (!(gain >= 0.0)) throw std::invalid_argument("detect_sic: gain must be nonnegative");
    const int N = alloc.size();
    if (target_user < 1 || target_user > N) throw std::invalid_argument("detect_sic: target user outside 1..N");
    if (mode == SicMode::perfect && (!truth || static_cast<int>(truth->size()) != N))
        throw std::invalid_argument("detect_sic: perfect mode needs the transmitted symbols");

    DetectionOutcome out;
    out.mode = mode;
    out.residuals.push_back(received);
    std::complex<double> residual = received;
    for (int k = 1; k <= target_user; ++k) {
        const QpskSymbol d = detect_first(residual, gain, alloc.beta(k));
        out.decisions.push_back(d);
        if (k == target_user) break;
        const QpskSymbol& c = mode == SicMode::perfect ? (*truth)[k - 1] : d;
        residual -= gain * alloc.amplitude(k) * std::complex<double>(c.i_sign(), c.q_sign());
        out.residuals.push_back(residual);
    }
    return out;
}

}  // namespace noma
