// Command-line front end: sweep, solve, los-report.

#include "rishbf/analysis_los.hpp"
#include "rishbf/baselines.hpp"
#include "rishbf/config.hpp"
#include "rishbf/errors.hpp"
#include "rishbf/geometry.hpp"
#include "rishbf/srm.hpp"
#include "rishbf/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace rishbf;

namespace {

struct BaseFlags {
    std::string config_path;
    std::optional<int> n_r, bits, k_users, n_t;
    std::optional<double> snr_db;
    bool pure_los = false;

    void add(CLI::App* app)
    {
        app->add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
        app->add_option("--n-r", n_r, "RIS side length");
        app->add_option("--bits", bits, "phase quantization bits");
        app->add_option("--users", k_users, "number of users K");
        app->add_option("--antennas", n_t, "BS antennas N_t");
        app->add_option("--snr", snr_db, "SNR in dB");
        app->add_flag("--pure-los", pure_los, "disable the scattered component");
    }

    SystemConfig build() const
    {
        SystemConfig cfg;
        if (!config_path.empty()) {
            cfg = load_config(config_path, cfg);
        }
        if (n_r) cfg.n_r = *n_r;
        if (bits) cfg.b_bits = *bits;
        if (k_users) cfg.k_users = *k_users;
        if (n_t) cfg.n_t = *n_t;
        if (snr_db) cfg.noise_power = noise_from_snr_db(cfg.p_total, *snr_db);
        if (pure_los) cfg.rician_on = false;
        return cfg;
    }
};

std::vector<double> parse_values(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon != std::string::npos) {
            // a:b or a:b:step, inclusive
            std::vector<double> parts;
            std::stringstream rs(item);
            std::string p;
            while (std::getline(rs, p, ':')) {
                parts.push_back(std::stod(p));
            }
            const double step = parts.size() > 2 ? parts[2] : 1.0;
            if (parts.size() < 2 || !(step > 0)) {
                throw std::invalid_argument("bad range '" + item + "'");
            }
            for (double v = parts[0]; v <= parts[1] + 1e-9 * step; v += step) {
                out.push_back(v);
            }
        } else if (!item.empty()) {
            out.push_back(std::stod(item));
        }
    }
    return out;
}

void print_phases(const PhaseIndexMatrix& phases)
{
    for (int l1 = 0; l1 < phases.n_r(); ++l1) {
        std::cout << ' ';
        for (int l2 = 0; l2 < phases.n_r(); ++l2) {
            std::cout << ' ' << phases(l1, l2);
        }
        std::cout << '\n';
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"RIS hybrid beamforming toolkit"};
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV/SVG outputs");
    BaseFlags sweep_base;
    sweep_base.add(sweep);
    std::string param = "snr", values_arg, algos_arg = "srm,random", out_prefix = "sweep";
    int trials = 1, threads = 0, draws = 1, max_iter = 20;
    long sa_cap = 100000, node_limit = 100000;
    std::uint64_t seed = 1;
    double epsilon = 1e-3, radius = 60.0;
    bool svg = false, no_timing = false, force = false, paired = false, long_sa = false;
    sweep->add_option("-p,--param", param, "snr | n_r | b | k_users | d_b")->capture_default_str();
    sweep->add_option("-v,--values", values_arg, "comma list, ranges as a:b or a:b:step")->required();
    sweep->add_option("-a,--algorithms", algos_arg, "comma list of srm,sa,random,continuous,los")
        ->capture_default_str();
    sweep->add_option("-t,--trials", trials)->capture_default_str();
    sweep->add_option("-s,--seed", seed, "seed base")->capture_default_str();
    sweep->add_option("-o,--out", out_prefix, "output prefix")->capture_default_str();
    sweep->add_option("-j,--threads", threads, "worker threads, 0 = all cores")->capture_default_str();
    sweep->add_option("--draws", draws, "random-phase draws per cell")->capture_default_str();
    sweep->add_option("--sa-cap", sa_cap, "simulated annealing evaluations")->capture_default_str();
    sweep->add_flag("--long-sa", long_sa, "use 1e7 annealing evaluations");
    sweep->add_option("--epsilon", epsilon, "SRM stopping threshold")->capture_default_str();
    sweep->add_option("--max-iter", max_iter, "SRM outer iterations")->capture_default_str();
    sweep->add_option("--node-limit", node_limit, "branch-and-bound nodes per analog step")->capture_default_str();
    sweep->add_option("--radius", radius, "user drop radius in meters")->capture_default_str();
    sweep->add_flag("--svg", svg, "also write an SVG plot");
    sweep->add_flag("--no-timing", no_timing, "write 0 in the seconds column");
    sweep->add_flag("--force", force, "run SRM cells beyond desk scale");
    sweep->add_flag("--paired", paired, "share channels across swept values");

    // solve
    auto* solve = app.add_subcommand("solve", "optimise a single instance");
    BaseFlags solve_base;
    solve_base.add(solve);
    std::string solve_algo = "srm", trace_path;
    std::uint64_t solve_seed = 1;
    solve->add_option("-a,--algorithm", solve_algo, "srm | sa | random | continuous")->capture_default_str();
    solve->add_option("-s,--seed", solve_seed, "user drop and channel seed")->capture_default_str();
    solve->add_option("--trace", trace_path, "write the iteration trace CSV here");
    solve->add_option("--epsilon", epsilon)->capture_default_str();
    solve->add_option("--max-iter", max_iter)->capture_default_str();
    solve->add_option("--sa-cap", sa_cap)->capture_default_str();
    solve->add_option("--draws", draws)->capture_default_str();

    // los-report
    auto* los = app.add_subcommand("los-report", "line-of-sight design rules for a configuration");
    BaseFlags los_base;
    los_base.add(los);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            SweepSpec spec;
            spec.base = sweep_base.build();
            spec.param = parse_sweep_param(param);
            spec.values = parse_values(values_arg);
            std::stringstream as(algos_arg);
            std::string a;
            while (std::getline(as, a, ',')) {
                if (!a.empty()) {
                    spec.algorithms.push_back(parse_algorithm(a));
                }
            }
            spec.trials = trials;
            spec.seed_base = seed;
            spec.paired_seeds = paired;
            spec.user_radius = radius;
            spec.threads = threads;
            spec.force = force;
            spec.random_draws = draws;
            spec.sa.cap = long_sa ? AnnealSchedule::kLongCap : sa_cap;
            spec.srm.epsilon = epsilon;
            spec.srm.max_iter = max_iter;
            spec.srm.analog.node_limit = node_limit;
            spec.validate();

            const SweepTable table = run_sweep(spec);
            for (const auto& w : table.warnings) {
                std::cerr << "warning: " << w << '\n';
            }
            const auto paths = emit_outputs(table, out_prefix, {true, svg, !no_timing});
            for (const auto& s : summarize(table)) {
                std::cout << param << '=' << s.value << "  " << s.algorithm << "  mean " << s.mean << "  ci95 "
                          << s.ci95 << "  n " << s.n << '\n';
            }
            for (const auto& r : table.rows) {
                if (!r.ok() && r.status != "skipped") {
                    std::cerr << "cell " << param << '=' << r.value << " trial " << r.trial << ' ' << r.algorithm
                              << ": " << r.status << '\n';
                }
            }
            for (const auto& p : paths) {
                std::cout << "wrote " << p << '\n';
            }
            return table.all_ok() ? 0 : 1;
        }

        if (*solve) {
            SystemConfig cfg = solve_base.build();
            if (cfg.user_positions.empty()) {
                cfg = with_random_users(cfg, solve_seed);
                cfg.seed = solve_seed;
            }
            cfg.validate();
            const ChannelTensor ch = synthesize_channel(cfg);
            std::mt19937_64 rng(solve_seed);
            std::vector<TraceRecord> trace;
            if (solve_algo == "srm") {
                SrmOptions opts;
                opts.epsilon = epsilon;
                opts.max_iter = max_iter;
                const SrmTrace t = run_srm(cfg, ch, PhaseIndexMatrix::max_amplitude(cfg.n_r, cfg.b_bits), opts);
                std::cout << "sum_rate " << t.sum_rate << "\niterations " << t.iterations() << "\nphases\n";
                print_phases(t.phases);
                trace = t.records;
            } else if (solve_algo == "sa" || solve_algo == "random") {
                AnnealSchedule sched;
                sched.cap = sa_cap;
                const auto r = solve_algo == "sa" ? simulated_annealing(cfg, ch, sched, rng)
                                                  : random_phase_baseline(cfg, ch, rng, draws);
                std::cout << "sum_rate " << r.sum_rate << "\nevaluations " << r.evaluations << "\nphases\n";
                print_phases(r.phases);
                trace = r.trace;
            } else if (solve_algo == "continuous") {
                const auto r = continuous_relaxation(cfg, ch);
                std::cout << "sum_rate " << r.sum_rate << "\niterations " << r.iterations << "\nthetas";
                for (Eigen::Index i = 0; i < r.thetas.size(); ++i) {
                    std::cout << ' ' << r.thetas(i);
                }
                std::cout << '\n';
                trace = r.trace;
            } else {
                throw std::invalid_argument("unknown algorithm '" + solve_algo + "'");
            }
            if (!trace_path.empty()) {
                std::ofstream f(trace_path);
                if (!f) {
                    throw std::runtime_error("cannot open '" + trace_path + "'");
                }
                write_trace_csv(f, trace);
            }
            return 0;
        }

        if (*los) {
            const SystemConfig cfg = los_base.build();
            write_los_report(std::cout, los_report(cfg, PhaseIndexMatrix::max_amplitude(cfg.n_r, cfg.b_bits)));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
