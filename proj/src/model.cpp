// SPDX-License-Identifier: Apache-2.0
#include "noma/model.hpp"

#include <cmath>
#include <sstream>

namespace noma {

namespace {

constexpr double kAllocTol = 1e-9;

struct CatalogRow {
    int user;
    int c;
    std::array<int, 3> u;
};

// clang-format off
constexpr CatalogRow kCatalogN2[] = {
    {1, 1, {1, -1, 0}}, {1, 2, {1, 1, 0}},
    {2, 1, {0, 1, 0}},  {2, 2, {1, -1, 0}}, {2, 3, {1, 1, 0}},
    {2, 4, {2, -1, 0}}, {2, 5, {2, 1, 0}},
};

constexpr CatalogRow kCatalogN3[] = {
    {1, 1, {1, -1, -1}}, {1, 2, {1, -1, 1}}, {1, 3, {1, 1, -1}}, {1, 4, {1, 1, 1}},
    {2, 1, {1, -1, -1}}, {2, 2, {1, -1, 1}}, {2, 3, {1, 1, -1}}, {2, 4, {1, 1, 1}},
    {2, 5, {0, 1, 1}},   {2, 6, {0, 1, -1}}, {2, 7, {2, -1, -1}}, {2, 8, {2, -1, 1}},
    {2, 9, {2, 1, -1}},  {2, 10, {2, 1, 1}},
    {3, 11, {0, 0, 1}},  {3, 12, {0, 2, -1}}, {3, 13, {2, 0, 1}},  {3, 14, {2, 0, -1}},
    {3, 15, {2, -2, -1}}, {3, 16, {2, -2, 1}}, {3, 17, {2, 2, -1}}, {3, 18, {2, 2, 1}},
};
// clang-format on

}  // namespace

PowerAllocation::PowerAllocation(std::vector<double> betas) : betas_(std::move(betas)) {
    if (betas_.empty()) throw std::invalid_argument("power allocation is empty");
    double sum = 0.0;
    for (std::size_t k = 0; k < betas_.size(); ++k) {
        const double b = betas_[k];
        if (!std::isfinite(b) || b < 0.0) throw std::invalid_argument("power fractions must be finite and nonnegative");
        if (k > 0 && b > betas_[k - 1] + kAllocTol)
            throw std::invalid_argument("power fractions must be non-increasing");
        sum += b;
    }
    if (std::abs(sum - 1.0) > kAllocTol) throw std::invalid_argument("power fractions must sum to 1");
    amps_.reserve(betas_.size());
    for (double b : betas_) amps_.push_back(std::sqrt(b));
}

std::string PowerAllocation::to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t k = 0; k < betas_.size(); ++k) {
        if (k) os << ';';
        os << betas_[k];
    }
    return os.str();
}

std::complex<double> map_bits(std::array<int, 2> bits, double beta_n) {
    if ((bits[0] != 0 && bits[0] != 1) || (bits[1] != 0 && bits[1] != 1))
        throw std::invalid_argument("map_bits: bits must be 0 or 1");
    if (!(beta_n >= 0.0 && beta_n <= 1.0)) throw std::invalid_argument("map_bits: beta out of [0,1]");
    const double a = std::sqrt(beta_n);
    return {bits[0] ? -a : a, bits[1] ? -a : a};
}

std::complex<double> superpose(const std::vector<QpskSymbol>& symbols, const PowerAllocation& alloc) {
    if (static_cast<int>(symbols.size()) != alloc.size())
        throw std::invalid_argument("superpose: one symbol per user required");
    std::complex<double> x{0.0, 0.0};
    for (int n = 1; n <= alloc.size(); ++n) {
        const auto& s = symbols[n - 1];
        x += alloc.amplitude(n) * std::complex<double>(s.i_sign(), s.q_sign());
    }
    return x;
}

AmplitudeLevel amplitude_level(std::array<int, 3> u, const PowerAllocation& alloc) {
    AmplitudeLevel lv;
    lv.u = u;
    for (int k = 0; k < 3; ++k) {
        if (u[k] < -2 || u[k] > 2) throw std::invalid_argument("amplitude_level: coefficient outside [-2,2]");
        if (u[k] == 0) continue;
        if (k >= alloc.size()) throw std::invalid_argument("amplitude_level: coefficient for a user beyond N");
        lv.value += u[k] * alloc.amplitude(k + 1);
    }
    return lv;
}

GammaCatalog::GammaCatalog(int N, std::vector<GammaEntry> entries) : N_(N), entries_(std::move(entries)) {}

const GammaEntry* GammaCatalog::find(int user, int c) const {
    for (const auto& e : entries_)
        if (e.user == user && e.c == c) return &e;
    return nullptr;
}

const AmplitudeLevel& GammaCatalog::level(int user, int c) const {
    if (const auto* e = find(user, c)) return e->level;
    if (N_ == 3) {
        for (const auto& e : entries_)
            if (e.c == c) return e.level;
    }
    throw std::out_of_range("gamma catalog has no case (" + std::to_string(user) + ", c" + std::to_string(c) + ")");
}

double GammaCatalog::gamma(int user, int c, double alpha, double sigma2) const {
    const double a = level(user, c).value;
    return alpha * alpha * a * a / sigma2;
}

double GammaCatalog::gamma_bar(int user, int c, double omega, double sigma2) const {
    const double a = level(user, c).value;
    return a * a * omega / sigma2;
}

GammaCatalog gamma_catalog(int N, const PowerAllocation& alloc) {
    if (N != 2 && N != 3) throw UnsupportedSystem("gamma catalog exists only for N = 2 or 3");
    if (alloc.size() != N) throw std::invalid_argument("gamma_catalog: allocation size differs from N");
    std::vector<GammaEntry> entries;
    auto add = [&](const auto& rows) {
        for (const auto& r : rows) entries.push_back({r.user, r.c, amplitude_level(r.u, alloc), r.user});
    };
    if (N == 2)
        add(kCatalogN2);
    else
        add(kCatalogN3);
    return GammaCatalog(N, std::move(entries));
}

double n0_from_ebn0_db(double ebn0_db) { return std::pow(10.0, -ebn0_db / 10.0); }

double sigma2_from_ebn0_db(double ebn0_db) { return 0.5 * n0_from_ebn0_db(ebn0_db); }

}  // namespace noma
