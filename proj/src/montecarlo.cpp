// SPDX-License-Identifier: Apache-2.0
#include "noma/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <boost/random/normal_distribution.hpp>

#include "noma/fading.hpp"

namespace noma {

namespace {

constexpr std::int64_t kMinTrials = 10000;
constexpr int kBlocksPerRound = 16;

struct BlockCounts {
    std::vector<std::array<std::int64_t, 2>> bit_errors;
    std::vector<std::int64_t> both;
    std::int64_t symbols = 0;
};

Rng block_rng(std::uint64_t seed, std::size_t point, std::int64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(point), static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(block) >> 32)};
    return Rng(seq);
}

BlockCounts simulate_block(const SimConfig& cfg, std::size_t point, std::int64_t block, std::int64_t count) {
    const int N = cfg.N;
    const double sigma = std::sqrt(sigma2_from_ebn0_db(cfg.ebn0_db[point]));
    Rng rng = block_rng(cfg.seed, point, block);
    boost::random::normal_distribution<double> noise(0.0, sigma);
    std::optional<NakagamiSampler> fade;
    if (!cfg.fixed_gains) fade.emplace(cfg.m, cfg.omega);

    std::vector<double> amps(N), gains(N);
    for (int k = 1; k <= N; ++k) amps[k - 1] = cfg.alloc.amplitude(k);
    if (cfg.fixed_gains) gains = *cfg.fixed_gains;
    std::vector<int> si(N), sq(N), di(N), dq(N);

    BlockCounts out;
    out.bit_errors.assign(N, {0, 0});
    out.both.assign(N, 0);
    out.symbols = count;
    for (std::int64_t t = 0; t < count; ++t) {
        if (fade) {
            for (auto& g : gains) g = (*fade)(rng);
            std::sort(gains.begin(), gains.end());
        }
        std::uint64_t bits = rng();
        double xi = 0.0, xq = 0.0;
        for (int k = 0; k < N; ++k) {
            si[k] = bits & 1u ? -1 : 1;
            sq[k] = bits & 2u ? -1 : 1;
            bits >>= 2;
            xi += amps[k] * si[k];
            xq += amps[k] * sq[k];
        }
        for (int n = 1; n <= N; ++n) {
            const double a = gains[n - 1];
            const double yi = a * xi + noise(rng);
            const double yq = a * xq + noise(rng);
            sic_decide_dimension(yi, a, amps.data(), n, cfg.sic_mode, si.data(), di.data());
            sic_decide_dimension(yq, a, amps.data(), n, cfg.sic_mode, sq.data(), dq.data());
            const bool ei = di[n - 1] != si[n - 1];
            const bool eq = dq[n - 1] != sq[n - 1];
            out.bit_errors[n - 1][0] += ei;
            out.bit_errors[n - 1][1] += eq;
            out.both[n - 1] += ei && eq;
        }
    }
    return out;
}

void fill_estimate(BerEstimate& e, const BlockCounts& total) {
    const int N = static_cast<int>(total.both.size());
    e.trials = total.symbols;
    e.ber.assign(N, 0.0);
    e.errors.assign(N, 0);
    e.bit_errors = total.bit_errors;
    e.both_bits_wrong = total.both;
    e.ci.assign(N, {});
    for (int n = 0; n < N; ++n) {
        const std::int64_t k = total.bit_errors[n][0] + total.bit_errors[n][1];
        const double bits = 2.0 * static_cast<double>(total.symbols);
        e.errors[n] = k;
        e.ber[n] = k / bits;
        // Per-symbol error count X in {0,1,2}; the two bits share the gain,
        // so Var(X) exceeds the independent-bit value 2p(1-p).
        const double p = e.ber[n];
        double deff = 1.0;
        if (p > 0.0 && p < 1.0) {
            const double T = static_cast<double>(total.symbols);
            const double ex2 = (k + 2.0 * total.both[n]) / T;  // E[X^2] = E[X] + 2 P(both)
            const double var_x = ex2 - 4.0 * p * p;
            deff = std::max(1.0, var_x / (2.0 * p * (1.0 - p)));
        }
        e.ci[n] = wilson_interval(static_cast<double>(k), bits, 1.959963984540054, deff);
    }
}

}  // namespace

void SimConfig::validate() const {
    if (N < 1) throw std::invalid_argument("SimConfig: N must be positive");
    if (alloc.size() != N) throw std::invalid_argument("SimConfig: allocation size differs from N");
    if (N > 32) throw std::invalid_argument("SimConfig: at most 32 users");
    if (ebn0_db.empty()) throw std::invalid_argument("SimConfig: Eb/N0 grid is empty");
    for (double e : ebn0_db)
        if (!std::isfinite(e)) throw std::invalid_argument("SimConfig: Eb/N0 must be finite");
    if (trials < kMinTrials) throw std::invalid_argument("SimConfig: at least 10^4 trials per point");
    if (shards < 1) throw std::invalid_argument("SimConfig: shards must be positive");
    if (block_size < 1) throw std::invalid_argument("SimConfig: block size must be positive");
    if (max_rel_ci && !(*max_rel_ci > 0.0)) throw std::invalid_argument("SimConfig: CI target must be positive");
    if (fixed_gains) {
        if (static_cast<int>(fixed_gains->size()) != N) throw std::invalid_argument("SimConfig: one fixed gain per user");
        for (double g : *fixed_gains)
            if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("SimConfig: fixed gains must be nonnegative");
    } else {
        FadingSpec{m, omega, N, 1}.validate();
    }
}

Interval wilson_interval(double k, double n, double z, double design_effect) {
    if (!(n > 0.0)) return {0.0, 1.0};
    const double ne = n / design_effect;
    const double p = k / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / ne;
    const double centre = (p + z2 / (2.0 * ne)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / ne + z2 / (4.0 * ne * ne)) / denom;
    return {k <= 0.0 ? 0.0 : std::max(0.0, centre - half), k >= n ? 1.0 : std::min(1.0, centre + half)};
}

std::vector<BerEstimate> run(const SimConfig& cfg) {
    cfg.validate();
    const std::int64_t nblocks = (cfg.trials + cfg.block_size - 1) / cfg.block_size;
    std::vector<BerEstimate> results;
    for (std::size_t point = 0; point < cfg.ebn0_db.size(); ++point) {
        BlockCounts total;
        total.bit_errors.assign(cfg.N, {0, 0});
        total.both.assign(cfg.N, 0);
        BerEstimate est;
        est.ebn0_db = cfg.ebn0_db[point];
        est.seed = cfg.seed;

        const std::int64_t round = cfg.max_rel_ci ? kBlocksPerRound : nblocks;
        for (std::int64_t first = 0; first < nblocks; first += round) {
            const std::int64_t last = std::min(nblocks, first + round);
            std::vector<BlockCounts> blocks(static_cast<std::size_t>(last - first));
            auto work = [&](int shard) {
                for (std::int64_t b = first + shard; b < last; b += cfg.shards) {
                    const std::int64_t count = std::min(cfg.block_size, cfg.trials - b * cfg.block_size);
                    blocks[static_cast<std::size_t>(b - first)] = simulate_block(cfg, point, b, count);
                }
            };
            if (cfg.shards == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                for (int s = 0; s < cfg.shards; ++s) pool.emplace_back(work, s);
                for (auto& th : pool) th.join();
            }
            for (const auto& bc : blocks) {
                total.symbols += bc.symbols;
                for (int n = 0; n < cfg.N; ++n) {
                    total.bit_errors[n][0] += bc.bit_errors[n][0];
                    total.bit_errors[n][1] += bc.bit_errors[n][1];
                    total.both[n] += bc.both[n];
                }
            }
            if (cfg.max_rel_ci && last < nblocks) {
                fill_estimate(est, total);
                bool tight = true;
                for (int n = 0; n < cfg.N; ++n) {
                    const double half = 0.5 * (est.ci[n].hi - est.ci[n].lo);
                    if (est.errors[n] == 0 || half > *cfg.max_rel_ci * est.ber[n]) tight = false;
                }
                if (tight) break;
            }
        }
        fill_estimate(est, total);
        results.push_back(std::move(est));
    }
    return results;
}

}  // namespace noma
