// SPDX-License-Identifier: Apache-2.0
#include "noma/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "noma/avg_ber.hpp"
#include "noma/exact_cond_ber.hpp"
#include "noma/montecarlo.hpp"
#include "noma/optimizer.hpp"
#include "noma/validation.hpp"

namespace noma {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kSweepSchema = "# noma-ber sweep csv v1";
constexpr const char* kOptimizeSchema = "# noma-ber optimize csv v1";
constexpr double kZ95 = 1.959963984540054;

/// Usage problems detected after parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + s + "'");
    return v;
}

std::vector<double> number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(to_double(part));
    if (out.empty()) throw UsageError("empty list");
    return out;
}

std::int64_t parse_count(const std::string& text) {
    const double v = to_double(text);
    if (v < 1.0 || v != std::floor(v) || v > 9.0e18) throw UsageError("--trials must be a positive integer");
    return static_cast<std::int64_t>(v);
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << body;
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

json read_manifest(const std::string& path, const std::string& command) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read manifest " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw UsageError("malformed manifest " + path + ": " + e.what());
    }
    if (j.value("command", "") != command)
        throw UsageError("manifest " + path + " was written by '" + j.value("command", "?") + "', not '" + command + "'");
    return j;
}

void write_manifest(const fs::path& path, const std::string& command, const std::vector<std::string>& args,
                    const json& config, std::uint64_t seed, int shards, const fs::path& csv) {
    json j;
    j["tool"] = "noma-ber";
    j["version"] = kToolVersion;
    j["command"] = command;
    j["argv"] = args;
    j["config"] = config;
    j["seed"] = seed;
    j["shards"] = shards;
    j["timestamp"] = utc_timestamp();
    j["outputs"] = {{"csv", csv.string()}, {"manifest", path.string()}};
    write_file(path, j.dump(2) + "\n");
}

// ---- sweep -------------------------------------------------------------

json to_json(const SweepConfig& c) {
    json j = {{"N", c.N},           {"beta", c.beta},       {"m", c.m},
              {"omega", c.omega},   {"ebn0_db", c.ebn0_db}, {"methods", c.methods},
              {"trials", c.trials}, {"seed", c.seed},       {"sic", c.sic},
              {"tol", c.tol},       {"max_terms", c.max_terms}, {"nodes", c.nodes},
              {"oracle_strata", c.oracle_strata}};
    j["fixed_gains"] = c.fixed_gains ? json(*c.fixed_gains) : json(nullptr);
    return j;
}

SweepConfig sweep_from_json(const json& j) {
    SweepConfig c;
    try {
        c.N = j.at("N").get<int>();
        c.beta = j.at("beta").get<std::vector<double>>();
        c.m = j.at("m").get<std::vector<double>>();
        c.omega = j.at("omega").get<double>();
        c.ebn0_db = j.at("ebn0_db").get<std::vector<double>>();
        c.methods = j.at("methods").get<std::vector<std::string>>();
        c.trials = j.at("trials").get<std::int64_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.sic = j.at("sic").get<std::string>();
        if (!j.at("fixed_gains").is_null()) c.fixed_gains = j.at("fixed_gains").get<std::vector<double>>();
        c.tol = j.at("tol").get<double>();
        c.max_terms = j.at("max_terms").get<int>();
        c.nodes = j.at("nodes").get<int>();
        c.oracle_strata = j.at("oracle_strata").get<int>();
    } catch (const json::exception& e) {
        throw UsageError(std::string("manifest config incomplete: ") + e.what());
    }
    return c;
}

void check_sweep(const SweepConfig& c) {
    if (c.N < 1) throw UsageError("--n must be positive");
    if (c.beta.empty()) throw UsageError("--beta is required");
    if (static_cast<int>(c.beta.size()) != c.N) throw UsageError("--beta needs exactly --n values");
    try {
        PowerAllocation{c.beta};
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--beta: ") + e.what());
    }
    if (c.ebn0_db.empty()) throw UsageError("--ebn0 is required");
    if (c.methods.empty()) throw UsageError("--methods is empty");
    if (c.sic != "perfect" && c.sic != "imperfect") throw UsageError("--sic must be perfect or imperfect");
    for (double m : c.m)
        if (!(m >= 0.5)) throw UsageError("--m values must be at least 0.5");
    if (!(c.omega > 0.0)) throw UsageError("--omega must be positive");
    if (!(c.tol > 0.0) || c.max_terms < 1 || c.nodes < 8) throw UsageError("bad --tol, --max-terms or --nodes");
    if (c.fixed_gains) {
        if (static_cast<int>(c.fixed_gains->size()) != c.N) throw UsageError("--fixed-gains needs exactly --n values");
        for (double g : *c.fixed_gains)
            if (g < 0.0) throw UsageError("--fixed-gains must be nonnegative");
    }
    for (const auto& method : c.methods) {
        if (method == "series" || method == "rayleigh") {
            if (c.fixed_gains) throw UsageError("--methods " + method + " averages over fading; drop --fixed-gains");
            if (c.N != 2 && c.N != 3) throw UsageError("--methods " + method + " needs --n 2 or 3");
            if (method == "rayleigh" && std::any_of(c.m.begin(), c.m.end(), [](double m) { return m != 1.0; }))
                throw UsageError("--methods rayleigh needs --m 1");
            if (c.sic == "perfect") throw UsageError("--methods " + method + " models imperfect cancellation only");
        } else if (method == "mc") {
            if (c.trials < 10000) throw UsageError("--trials must be at least 1e4 for mc");
            if (c.N > 32) throw UsageError("mc supports at most 32 users");
        } else if (method == "oracle") {
            if (c.N > 8) throw UsageError("oracle supports at most 8 users");
        } else {
            throw UsageError("unknown method '" + method + "' (series|rayleigh|mc|oracle)");
        }
    }
}

std::string sweep_csv(const SweepConfig& c, int shards) {
    std::ostringstream os;
    os << kSweepSchema << "\n";
    os << "N,user,m,omega,ebn0_db,beta_vector,method,ber,ci_low,ci_high,trials,seed\n";
    const PowerAllocation alloc(c.beta);
    std::string beta;
    for (double b : alloc.betas()) beta += (beta.empty() ? "" : ";") + num(b);
    const SicMode sic = parse_sic_mode(c.sic);
    // Fixed gains replace fading, so m and omega do not apply.
    const std::vector<double> ms = c.fixed_gains ? std::vector<double>{std::nan("")} : c.m;

    auto row = [&](int user, double m, double ebn0, const std::string& method, double ber, const std::string& lo,
                   const std::string& hi, const std::string& trials, const std::string& seed) {
        os << c.N << ',' << user << ',' << (std::isnan(m) ? "" : num(m)) << ','
           << (c.fixed_gains ? "" : num(c.omega)) << ',' << num(ebn0) << ',' << beta << ',' << method << ','
           << num(ber) << ',' << lo << ',' << hi << ',' << trials << ',' << seed << '\n';
    };

    for (double m : ms) {
        for (const auto& method : c.methods) {
            if (method == "mc") {
                SimConfig sim;
                sim.N = c.N;
                sim.alloc = alloc;
                sim.m = std::isnan(m) ? 1.0 : m;
                sim.omega = c.omega;
                sim.ebn0_db = c.ebn0_db;
                sim.trials = c.trials;
                sim.seed = c.seed;
                sim.sic_mode = sic;
                sim.fixed_gains = c.fixed_gains;
                sim.shards = shards;
                for (const auto& est : run(sim))
                    for (int n = 1; n <= c.N; ++n)
                        row(n, m, est.ebn0_db, "mc", est.ber[n - 1], num(est.ci[n - 1].lo), num(est.ci[n - 1].hi),
                            std::to_string(est.trials), std::to_string(c.seed));
                continue;
            }
            for (double ebn0 : c.ebn0_db) {
                for (int n = 1; n <= c.N; ++n) {
                    if (method == "oracle" && c.fixed_gains) {
                        CondBerInput in{c.N, n, *c.fixed_gains, sigma2_from_ebn0_db(ebn0), alloc};
                        row(n, m, ebn0, "oracle", enumerate_exact(in, sic).ber, "", "", "", "");
                        continue;
                    }
                    AvgBerSpec spec;
                    spec.N = c.N;
                    spec.n = n;
                    spec.alloc = alloc;
                    spec.m = m;
                    spec.omega = c.omega;
                    spec.N0 = n0_from_ebn0_db(ebn0);
                    spec.tol = c.tol;
                    spec.max_terms = c.max_terms;
                    spec.nodes = c.nodes;
                    if (method == "series") {
                        const auto r = avg_ber(spec);
                        if (!r.converged)
                            throw std::runtime_error("series did not converge at user " + std::to_string(n) +
                                                     ", Eb/N0 " + num(ebn0) + " dB; raise --max-terms");
                        row(n, m, ebn0, "series", r.value, "", "", "", "");
                    } else if (method == "rayleigh") {
                        row(n, m, ebn0, "rayleigh", avg_ber_rayleigh(spec).value, "", "", "", "");
                    } else {
                        if (sic == SicMode::perfect)
                            throw UsageError("--methods oracle averages imperfect cancellation only");
                        OracleOptions opt;
                        opt.strata = c.oracle_strata;
                        opt.seed = c.seed;
                        const auto r = avg_numeric_oracle(spec, opt);
                        row(n, m, ebn0, "oracle", r.value, num(r.value - kZ95 * r.std_error),
                            num(r.value + kZ95 * r.std_error), std::to_string(2 * opt.strata), std::to_string(c.seed));
                    }
                }
            }
        }
    }
    return os.str();
}

// ---- optimize ----------------------------------------------------------

json to_json(const OptimizeConfig& c) {
    return {{"objective", c.objective}, {"N", c.N},         {"m", c.m},
            {"omega", c.omega},         {"ebn0_db", c.ebn0_db}, {"backend", c.backend},
            {"tol", c.tol},             {"max_terms", c.max_terms}, {"nodes", c.nodes}};
}

OptimizeConfig optimize_from_json(const json& j) {
    OptimizeConfig c;
    try {
        c.objective = j.at("objective").get<std::string>();
        c.N = j.at("N").get<int>();
        c.m = j.at("m").get<std::vector<double>>();
        c.omega = j.at("omega").get<double>();
        c.ebn0_db = j.at("ebn0_db").get<std::vector<double>>();
        c.backend = j.at("backend").get<std::string>();
        c.tol = j.at("tol").get<double>();
        c.max_terms = j.at("max_terms").get<int>();
        c.nodes = j.at("nodes").get<int>();
    } catch (const json::exception& e) {
        throw UsageError(std::string("manifest config incomplete: ") + e.what());
    }
    return c;
}

void check_optimize(const OptimizeConfig& c) {
    if (c.objective != "fairness" && c.objective != "min-average")
        throw UsageError("--objective must be fairness or min-average");
    if (c.N != 2 && c.N != 3) throw UsageError("optimize supports --n 2 or 3");
    if (c.ebn0_db.empty()) throw UsageError("--ebn0 is required");
    for (double m : c.m)
        if (!(m >= 0.5)) throw UsageError("--m values must be at least 0.5");
    if (c.backend != "series" && c.backend != "oracle") throw UsageError("--backend must be series or oracle");
}

std::string optimize_csv(const OptimizeConfig& c, std::ostream& err, int& failures, int& rows) {
    std::ostringstream os;
    os << kOptimizeSchema << "\n";
    os << "objective,N,m,ebn0_db";
    for (int n = 1; n <= c.N; ++n) os << ",beta_" << n;
    for (int n = 1; n <= c.N; ++n) os << ",ber_" << n;
    os << ",residual,converged\n";
    for (double m : c.m) {
        for (double ebn0 : c.ebn0_db) {
            OptProblem p;
            p.objective = parse_objective(c.objective);
            p.N = c.N;
            p.m = m;
            p.omega = c.omega;
            p.ebn0_db = ebn0;
            p.backend = c.backend == "series" ? Backend::series : Backend::numeric_oracle;
            p.series_tol = c.tol;
            p.max_terms = c.max_terms;
            p.nodes = c.nodes;
            const OptResult r = solve(p);
            ++rows;
            if (!r.converged) {
                ++failures;
                err << "optimize: m=" << num(m) << " Eb/N0=" << num(ebn0) << " dB: " << r.message << "\n";
            }
            os << c.objective << ',' << c.N << ',' << num(m) << ',' << num(ebn0);
            for (double b : r.betas.betas()) os << ',' << num(b);
            for (int n = 0; n < c.N; ++n) os << ',' << (n < static_cast<int>(r.ber.size()) ? num(r.ber[n]) : "");
            os << ',' << num(r.residual) << ',' << (r.converged ? "true" : "false") << '\n';
        }
    }
    return os.str();
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return number_list(text);
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("range must be start:step:stop");
    const double start = to_double(parts[0]), step = to_double(parts[1]), stop = to_double(parts[2]);
    if (!(step > 0.0) || stop < start) throw UsageError("range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    if (count > 100000) throw UsageError("range has too many points");
    std::vector<double> out;
    for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"NOMA downlink BER with imperfect SIC over Nakagami-m fading", "noma-ber"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "BER over an Eb/N0 x m x user grid");
    int s_n = 2, s_shards = 1, s_max_terms = 500, s_nodes = 64, s_strata = 1 << 15;
    std::string s_beta, s_m = "1", s_ebn0, s_methods, s_trials = "1e6", s_sic = "imperfect", s_fixed, s_out = ".",
                s_manifest;
    double s_omega = 1.0, s_tol = 1e-12;
    std::uint64_t s_seed = 1;
    sweep->add_option("--n", s_n, "number of users");
    sweep->add_option("--beta", s_beta, "power fractions, strongest allocation first");
    sweep->add_option("--m", s_m, "Nakagami shape list");
    sweep->add_option("--omega", s_omega, "E[alpha^2]")->capture_default_str();
    sweep->add_option("--ebn0", s_ebn0, "Eb/N0 in dB: list or start:step:stop");
    sweep->add_option("--methods", s_methods, "series,rayleigh,mc,oracle");
    sweep->add_option("--trials", s_trials, "Monte Carlo symbols per point (1e6 accepted)");
    sweep->add_option("--seed", s_seed, "random seed");
    sweep->add_option("--sic", s_sic, "perfect or imperfect")->check(CLI::IsMember({"perfect", "imperfect"}));
    sweep->add_option("--fixed-gains", s_fixed, "per-user gains replacing fading");
    sweep->add_option("--out", s_out, "output directory");
    sweep->add_option("--tol", s_tol, "series tolerance");
    sweep->add_option("--max-terms", s_max_terms, "series term budget");
    sweep->add_option("--nodes", s_nodes, "Gauss-Legendre nodes");
    sweep->add_option("--oracle-strata", s_strata, "strata for the sampled oracle");
    sweep->add_option("--shards", s_shards, "Monte Carlo worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--manifest", s_manifest, "rerun the sweep recorded in a manifest");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "optimal power allocation");
    std::string o_objective, o_m = "1", o_ebn0, o_out = ".", o_backend = "series", o_manifest;
    int o_n = 2, o_max_terms = 500, o_nodes = 64;
    double o_omega = 1.0, o_tol = 1e-12;
    optimize->add_option("--objective", o_objective, "fairness or min-average")
        ->check(CLI::IsMember({"fairness", "min-average"}));
    optimize->add_option("--n", o_n, "number of users (2 or 3)");
    optimize->add_option("--m", o_m, "Nakagami shape list");
    optimize->add_option("--omega", o_omega, "E[alpha^2]");
    optimize->add_option("--ebn0", o_ebn0, "Eb/N0 in dB: list or start:step:stop");
    optimize->add_option("--backend", o_backend, "series or oracle")->check(CLI::IsMember({"series", "oracle"}));
    optimize->add_option("--out", o_out, "output directory");
    optimize->add_option("--tol", o_tol, "series tolerance");
    optimize->add_option("--max-terms", o_max_terms, "series term budget");
    optimize->add_option("--nodes", o_nodes, "Gauss-Legendre nodes");
    optimize->add_option("--manifest", o_manifest, "rerun the optimisation recorded in a manifest");

    // validate
    auto* validate = app.add_subcommand("validate", "acceptance suite");
    std::string v_only, v_out;
    bool v_audit = false;
    validate->add_option("--only", v_only, "restrict to a tag (n2, n3, mc, ...) or a check name");
    validate->add_flag("--audit", v_audit, "print the formula deviation table");
    validate->add_option("--out", v_out, "directory for validate_report.txt");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    try {
        if (sweep->parsed()) {
            SweepConfig cfg;
            fs::path out_dir = s_out;
            if (!s_manifest.empty()) {
                for (const auto* opt : sweep->get_options())
                    if (opt->count() > 0 && opt->get_name() != "--manifest" && opt->get_name() != "--out" &&
                        opt->get_name() != "--shards")
                        throw UsageError("--manifest accepts only --out and --shards alongside it");
                cfg = sweep_from_json(read_manifest(s_manifest, "sweep").at("config"));
            } else {
                cfg.N = s_n;
                if (!s_beta.empty()) cfg.beta = number_list(s_beta);
                cfg.m = number_list(s_m);
                cfg.omega = s_omega;
                if (!s_ebn0.empty()) cfg.ebn0_db = parse_grid(s_ebn0);
                if (s_methods.empty())
                    cfg.methods = {s_fixed.empty() ? "series" : "oracle"};
                else
                    for (const auto& m : split(s_methods, ',')) cfg.methods.push_back(m);
                cfg.trials = parse_count(s_trials);
                cfg.seed = s_seed;
                cfg.sic = s_sic;
                if (!s_fixed.empty()) cfg.fixed_gains = number_list(s_fixed);
                cfg.tol = s_tol;
                cfg.max_terms = s_max_terms;
                cfg.nodes = s_nodes;
                cfg.oracle_strata = s_strata;
                if (cfg.oracle_strata < 1) throw UsageError("--oracle-strata must be positive");
            }
            check_sweep(cfg);
            const std::string csv = sweep_csv(cfg, s_shards);
            fs::create_directories(out_dir);
            const fs::path csv_path = out_dir / "sweep.csv", man_path = out_dir / "sweep.manifest.json";
            write_file(csv_path, csv);
            write_manifest(man_path, "sweep", args, to_json(cfg), cfg.seed, s_shards, csv_path);
            out << "wrote " << csv_path.string() << "\nwrote " << man_path.string() << "\n";
            return kExitOk;
        }

        if (optimize->parsed()) {
            OptimizeConfig cfg;
            if (!o_manifest.empty()) {
                for (const auto* opt : optimize->get_options())
                    if (opt->count() > 0 && opt->get_name() != "--manifest" && opt->get_name() != "--out")
                        throw UsageError("--manifest accepts only --out alongside it");
                cfg = optimize_from_json(read_manifest(o_manifest, "optimize").at("config"));
            } else {
                if (o_objective.empty()) throw UsageError("--objective is required");
                cfg.objective = o_objective;
                cfg.N = o_n;
                cfg.m = number_list(o_m);
                cfg.omega = o_omega;
                if (!o_ebn0.empty()) cfg.ebn0_db = parse_grid(o_ebn0);
                cfg.backend = o_backend;
                cfg.tol = o_tol;
                cfg.max_terms = o_max_terms;
                cfg.nodes = o_nodes;
            }
            check_optimize(cfg);
            int failures = 0, rows = 0;
            const std::string csv = optimize_csv(cfg, err, failures, rows);
            const fs::path out_dir = o_out;
            fs::create_directories(out_dir);
            const fs::path csv_path = out_dir / "optimize.csv", man_path = out_dir / "optimize.manifest.json";
            write_file(csv_path, csv);
            write_manifest(man_path, "optimize", args, to_json(cfg), 0, 1, csv_path);
            out << "wrote " << csv_path.string() << "\nwrote " << man_path.string() << "\n";
            return failures == rows ? kExitFailure : kExitOk;
        }

        ValidationOptions vo;
        vo.only = v_only;
        vo.audit = v_audit;
        const ValidationReport report = run_validation(vo, &err);
        if (report.checks.empty()) throw UsageError("--only '" + v_only + "' matches no check");
        report.print(out, v_audit);
        if (!v_out.empty()) {
            fs::create_directories(v_out);
            std::ostringstream os;
            report.print(os, true);
            write_file(fs::path(v_out) / "validate_report.txt", os.str());
        }
        return report.all_passed() ? kExitOk : kExitFailure;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnsupportedSystem& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace noma
