// SPDX-License-Identifier: Apache-2.0
#include "noma/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "noma/avg_ber.hpp"

namespace noma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-12;

bool feasible(const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (b[k] < -kFeasTol) return false;
        if (k > 0 && b[k] > b[k - 1] + kFeasTol) return false;
        sum += b[k];
    }
    return std::abs(sum - 1.0) < 1e-9;
}

PowerAllocation to_alloc(std::vector<double> b) {
    for (auto& x : b) x = std::max(0.0, x);
    for (std::size_t k = 1; k < b.size(); ++k) b[k] = std::min(b[k], b[k - 1]);
    const double s = std::accumulate(b.begin(), b.end(), 0.0);
    for (auto& x : b) x /= s;
    return PowerAllocation(b);
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double max_gap(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

struct Evaluator {
    const OptProblem& p;
    int evaluations = 0;
    int skipped = 0;

    std::optional<std::vector<double>> operator()(const std::vector<double>& b) {
        if (!feasible(b)) return std::nullopt;
        ++evaluations;
        auto r = user_bers(p, to_alloc(b));
        if (!r) ++skipped;
        return r;
    }

    double average(const std::vector<double>& b) {
        auto r = (*this)(b);
        return r ? mean(*r) : kInf;
    }
};

double descent_rate(Evaluator& ev, const std::vector<double>& b, double f0) {
    constexpr double h = 1e-6;
    double worst = 0.0;
    for (const auto& nb : certificate_neighbours(b, h)) {
        const double f = ev.average(nb);
        if (std::isfinite(f)) worst = std::max(worst, (f0 - f) / h);
    }
    return worst;
}

OptResult finish(Evaluator& ev, const std::vector<double>& b, OptResult r) {
    r.betas = to_alloc(b);
    if (auto bers = user_bers(ev.p, r.betas)) r.ber = *bers;
    r.iterations = ev.evaluations;
    r.skipped = ev.skipped;
    return r;
}

std::vector<double> n3(double b2, double b3) { return {1.0 - b2 - b3, b2, b3}; }

// Compass search over (beta_2, beta_3). The step doubles after a success
// and halves after a full failed sweep; false on budget exhaustion.
bool compass(Evaluator& ev, std::vector<double>& x, double step) {
    constexpr int kBudget = 20000;
    // Pairwise transfers e_i - e_j plus e_i - 1/N (scaled), so moves along
    // the ordering edges beta_1 = beta_2 and beta_2 = beta_3 stay available.
    const double dirs[12][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {-1, -1},
                                {1, -1}, {-1, 1}, {2, -1}, {-2, 1}, {-1, 2}, {1, -2}};
    const double max_step = step;
    const int start = ev.evaluations;
    double fx = ev.average(x);
    while (step > 1e-9) {
        if (ev.evaluations - start > kBudget) return false;
        bool moved = false;
        for (const auto& d : dirs) {
            auto y = n3(x[1] + step * d[0], x[2] + step * d[1]);
            const double fy = ev.average(y);
            if (fy < fx) {
                x = y;
                fx = fy;
                moved = true;
                break;
            }
        }
        step = moved ? std::min(2.0 * step, max_step) : 0.5 * step;
    }
    return true;
}

template <class F>
std::optional<double> bisect_root(F&& f, double lo, double hi, double flo, double fhi) {
    if (!(flo * fhi <= 0.0)) return std::nullopt;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) < 1e-14; };
    try {
        auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
        return 0.5 * (r.first + r.second);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

Objective parse_objective(const std::string& s) {
    if (s == "fairness") return Objective::fairness;
    if (s == "min-average") return Objective::min_average;
    throw std::invalid_argument("unknown objective '" + s + "'");
}

std::string to_string(Objective o) { return o == Objective::fairness ? "fairness" : "min-average"; }
std::string to_string(Backend b) { return b == Backend::series ? "series" : "numeric-oracle"; }

void OptProblem::validate() const {
    if (N != 2 && N != 3) throw UnsupportedSystem("optimisation supports N = 2 or 3");
    if (!std::isfinite(ebn0_db)) throw std::invalid_argument("Eb/N0 must be finite");
    if (!(m >= 0.5) || !(omega > 0.0)) throw std::invalid_argument("invalid fading parameters");
    if (!(fairness_tol > 0.0)) throw std::invalid_argument("fairness tolerance must be positive");
}

std::optional<std::vector<double>> user_bers(const OptProblem& p, const PowerAllocation& alloc) {
    AvgBerSpec spec;
    spec.N = p.N;
    spec.alloc = alloc;
    spec.m = p.m;
    spec.omega = p.omega;
    spec.N0 = n0_from_ebn0_db(p.ebn0_db);
    spec.tol = p.series_tol;
    spec.max_terms = p.max_terms;
    spec.nodes = p.nodes;
    std::vector<double> out;
    for (int n = 1; n <= p.N; ++n) {
        spec.n = n;
        if (p.backend == Backend::series) {
            const auto r = avg_ber(spec);
            if (!r.converged || r.anomaly) return std::nullopt;
            out.push_back(r.value);
        } else {
            OracleOptions opt;
            opt.strata = p.oracle_strata;
            out.push_back(avg_numeric_oracle(spec, opt).value);
        }
    }
    return out;
}

double average_objective(const OptProblem& p, const std::vector<double>& betas) {
    if (!feasible(betas)) return kInf;
    auto r = user_bers(p, to_alloc(betas));
    return r ? mean(*r) : kInf;
}

std::vector<std::vector<double>> certificate_neighbours(const std::vector<double>& b, double h) {
    const int N = static_cast<int>(b.size());
    std::vector<std::vector<double>> out;
    for (int i = 0; i < N; ++i) {
        for (double s : {1.0, -1.0}) {
            auto y = b;
            for (int k = 0; k < N; ++k) y[k] += s * h * ((k == i ? 1.0 : 0.0) - 1.0 / N);
            if (feasible(y) && std::find(out.begin(), out.end(), y) == out.end()) out.push_back(std::move(y));
        }
    }
    return out;
}

OptResult solve_min_average(const OptProblem& p) {
    p.validate();
    Evaluator ev{p};
    OptResult r;

    if (p.N == 2) {
        constexpr int kGrid = 200;
        std::vector<double> xs, fs;
        for (int g = 0; g <= kGrid; ++g) {
            const double b1 = 0.5 + 0.5 * g / kGrid;
            xs.push_back(b1);
            fs.push_back(ev.average({b1, 1.0 - b1}));
        }
        if (std::none_of(fs.begin(), fs.end(), [](double f) { return std::isfinite(f); })) {
            r.message = "backend failed at every probed allocation";
            return finish(ev, {0.5, 0.5}, r);
        }
        // Local minima of the grid, best first; refine the three best.
        std::vector<int> minima;
        for (int g = 0; g <= kGrid; ++g) {
            const double left = g > 0 ? fs[g - 1] : kInf, right = g < kGrid ? fs[g + 1] : kInf;
            if (std::isfinite(fs[g]) && fs[g] <= left && fs[g] <= right) minima.push_back(g);
        }
        std::sort(minima.begin(), minima.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        if (minima.size() > 3) minima.resize(3);
        double best_x = xs[minima.front()], best_f = fs[minima.front()];
        for (int g : minima) {
            const double lo = xs[std::max(0, g - 1)], hi = xs[std::min(kGrid, g + 1)];
            auto f = [&](double b1) { return ev.average({b1, 1.0 - b1}); };
            auto [x, fx] = boost::math::tools::brent_find_minima(f, lo, hi, 40);
            if (fx < best_f) {
                best_f = fx;
                best_x = x;
            }
        }
        const std::vector<double> b{best_x, 1.0 - best_x};
        r.residual = descent_rate(ev, b, best_f);
        r.converged = std::isfinite(best_f);
        return finish(ev, b, r);
    }

    // N = 3: grid over (beta_2, beta_3), then compass refinement.
    constexpr double kStep = 0.01;
    struct Probe {
        double f;
        std::vector<double> b;
    };
    std::vector<Probe> probes;
    for (int i3 = 0; i3 * kStep <= 1.0 / 3.0 + 1e-12; ++i3) {
        const double b3 = i3 * kStep;
        for (int i2 = i3; ; ++i2) {
            const double b2 = i2 * kStep;
            if (b2 > 0.5 * (1.0 - b3) + 1e-12) break;
            const auto b = n3(b2, b3);
            const double f = ev.average(b);
            if (std::isfinite(f)) probes.push_back({f, b});
        }
    }
    if (probes.empty()) {
        r.message = "backend failed at every probed allocation";
        return finish(ev, {1.0 / 3, 1.0 / 3, 1.0 / 3}, r);
    }
    std::sort(probes.begin(), probes.end(), [](const Probe& a, const Probe& b) { return a.f < b.f; });
    // Starts: best probe plus the next best ones that are not its neighbours.
    std::vector<std::vector<double>> starts;
    for (const auto& pr : probes) {
        bool near = false;
        for (const auto& s : starts)
            if (std::abs(s[1] - pr.b[1]) < 2.5 * kStep && std::abs(s[2] - pr.b[2]) < 2.5 * kStep) near = true;
        if (!near) starts.push_back(pr.b);
        if (starts.size() == 3) break;
    }
    std::vector<double> best = probes.front().b;
    double best_f = probes.front().f;
    bool settled = true;
    for (const auto& s : starts) {
        auto x = s;
        settled = compass(ev, x, kStep / 2) && settled;
        const double fx = ev.average(x);
        if (fx < best_f) {
            best_f = fx;
            best = x;
        }
    }
    r.residual = descent_rate(ev, best, best_f);
    r.converged = std::isfinite(best_f) && settled;
    if (!settled) r.message = "pattern search hit its evaluation budget";
    return finish(ev, best, r);
}

OptResult solve_fairness(const OptProblem& p) {
    p.validate();
    Evaluator ev{p};
    OptResult r;

    if (p.N == 2) {
        auto gap = [&](double b1) {
            auto v = ev({b1, 1.0 - b1});
            return v ? (*v)[0] - (*v)[1] : std::numeric_limits<double>::quiet_NaN();
        };
        constexpr int kGrid = 200;
        for (int g = 0; g <= kGrid; ++g) {
            const double b1 = 0.5 + 0.5 * g / kGrid;
            r.gap_profile.emplace_back(b1, gap(b1));
        }
        std::optional<std::vector<double>> best;
        double best_mean = kInf;
        for (int g = 0; g < kGrid; ++g) {
            const auto [x0, f0] = r.gap_profile[g];
            const auto [x1, f1] = r.gap_profile[g + 1];
            if (!std::isfinite(f0) || !std::isfinite(f1)) continue;
            auto root = bisect_root(gap, x0, x1, f0, f1);
            if (!root || (f1 == 0.0 && g + 1 < kGrid)) continue;
            auto v = ev({*root, 1.0 - *root});
            if (v && mean(*v) < best_mean) {
                best_mean = mean(*v);
                best = std::vector<double>{*root, 1.0 - *root};
            }
        }
        if (!best) {
            r.message = "no sign change of the BER gap over beta_1 in [0.5, 1]";
            return finish(ev, {0.5, 0.5}, r);
        }
        OptResult out = finish(ev, *best, r);
        out.residual = max_gap(out.ber);
        out.converged = out.residual < p.fairness_tol * mean(out.ber);
        if (!out.converged) out.message = "root located but gap above tolerance";
        return out;
    }

    // N = 3: for each beta_1 solve P2 = P3 over beta_2, then solve P1 = P2 over beta_1.
    auto inner = [&](double b1) -> std::optional<double> {
        const double lo = 0.5 * (1.0 - b1), hi = std::min(b1, 1.0 - b1);
        if (hi < lo) return std::nullopt;
        auto g23 = [&](double b2) {
            auto v = ev({b1, b2, 1.0 - b1 - b2});
            return v ? (*v)[1] - (*v)[2] : std::numeric_limits<double>::quiet_NaN();
        };
        constexpr int kScan = 20;
        double xp = lo, fp = g23(lo);
        std::optional<double> best;
        double best_mean = kInf;
        for (int s = 1; s <= kScan; ++s) {
            const double x = lo + (hi - lo) * s / kScan;
            const double f = g23(x);
            if (std::isfinite(fp) && std::isfinite(f)) {
                if (auto root = bisect_root(g23, xp, x, fp, f)) {
                    auto v = ev({b1, *root, 1.0 - b1 - *root});
                    if (v && mean(*v) < best_mean) {
                        best_mean = mean(*v);
                        best = *root;
                    }
                }
            }
            xp = x;
            fp = f;
        }
        return best;
    };
    auto outer = [&](double b1) {
        auto b2 = inner(b1);
        if (!b2) return std::numeric_limits<double>::quiet_NaN();
        auto v = ev({b1, *b2, 1.0 - b1 - *b2});
        return v ? (*v)[0] - (*v)[1] : std::numeric_limits<double>::quiet_NaN();
    };
    constexpr int kOuter = 40;
    for (int g = 0; g <= kOuter; ++g) {
        const double b1 = 1.0 / 3.0 + (2.0 / 3.0) * g / kOuter;
        r.gap_profile.emplace_back(b1, outer(b1));
    }
    std::optional<std::vector<double>> best;
    double best_mean = kInf;
    for (int g = 0; g < kOuter; ++g) {
        const auto [x0, f0] = r.gap_profile[g];
        const auto [x1, f1] = r.gap_profile[g + 1];
        if (!std::isfinite(f0) || !std::isfinite(f1)) continue;
        auto root = bisect_root(outer, x0, x1, f0, f1);
        if (!root) continue;
        auto b2 = inner(*root);
        if (!b2) continue;
        std::vector<double> b{*root, *b2, 1.0 - *root - *b2};
        auto v = ev(b);
        if (v && mean(*v) < best_mean) {
            best_mean = mean(*v);
            best = b;
        }
    }
    if (!best) {
        r.message = "no equal-BER allocation bracketed on the ordered simplex";
        return finish(ev, {1.0 / 3, 1.0 / 3, 1.0 / 3}, r);
    }
    OptResult out = finish(ev, *best, r);
    out.residual = max_gap(out.ber);
    out.converged = out.residual < p.fairness_tol * mean(out.ber);
    if (!out.converged) out.message = "root located but gap above tolerance";
    return out;
}

OptResult solve(const OptProblem& p) {
    return p.objective == Objective::fairness ? solve_fairness(p) : solve_min_average(p);
}

}  // namespace noma
