#include "rishbf/sweep.hpp"

#include "rishbf/channel.hpp"
#include "rishbf/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rishbf {

const char* to_string(SweepParam p)
{
    switch (p) {
    case SweepParam::kSnr: return "snr";
    case SweepParam::kNR: return "n_r";
    case SweepParam::kBits: return "b";
    case SweepParam::kUsers: return "k_users";
    case SweepParam::kDb: return "d_b";
    }
    return "?";
}

const char* to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::kSrm: return "srm";
    case Algorithm::kSa: return "sa";
    case Algorithm::kRandom: return "random";
    case Algorithm::kContinuous: return "continuous";
    case Algorithm::kLos: return "los";
    }
    return "?";
}

SweepParam parse_sweep_param(const std::string& s)
{
    for (auto p : {SweepParam::kSnr, SweepParam::kNR, SweepParam::kBits, SweepParam::kUsers, SweepParam::kDb}) {
        if (s == to_string(p)) {
            return p;
        }
    }
    throw std::invalid_argument("unknown sweep parameter '" + s + "'");
}

Algorithm parse_algorithm(const std::string& s)
{
    for (auto a : {Algorithm::kSrm, Algorithm::kSa, Algorithm::kRandom, Algorithm::kContinuous, Algorithm::kLos}) {
        if (s == to_string(a)) {
            return a;
        }
    }
    throw std::invalid_argument("unknown algorithm '" + s + "'");
}

namespace {

int as_int(double v, const char* what)
{
    if (v != std::round(v)) {
        throw std::invalid_argument(std::string("sweep value for ") + what + " must be an integer");
    }
    return static_cast<int>(v);
}

}  // namespace

SystemConfig apply_sweep_value(const SystemConfig& base, SweepParam param, double value)
{
    SystemConfig cfg = base;
    switch (param) {
    case SweepParam::kSnr: cfg.noise_power = noise_from_snr_db(cfg.p_total, value); break;
    case SweepParam::kNR: cfg.n_r = as_int(value, "n_r"); break;
    case SweepParam::kBits: cfg.b_bits = as_int(value, "b"); break;
    case SweepParam::kUsers:
        cfg.k_users = as_int(value, "k_users");
        cfg.n_t = cfg.k_users;
        cfg.phi_k.clear();
        break;
    case SweepParam::kDb: cfg.d_b = value; break;
    }
    return cfg;
}

void SweepSpec::validate() const
{
    if (algorithms.empty()) {
        throw std::invalid_argument("sweep: no algorithms selected");
    }
    if (values.empty()) {
        throw std::invalid_argument("sweep: no values to sweep");
    }
    if (trials < 1) {
        throw std::invalid_argument("sweep: trials must be >= 1");
    }
    if (threads < 0) {
        throw std::invalid_argument("sweep: threads must be >= 0");
    }
    sa.validate();
    if (random_draws < 1) {
        throw std::invalid_argument("sweep: random draws must be >= 1");
    }
    for (double v : values) {
        apply_sweep_value(base, param, v).validate(false);
    }
}

bool within_desk_limits(const SystemConfig& cfg)
{
    return cfg.n_r <= 4 && cfg.b_bits <= 2 && cfg.k_users <= 3 && cfg.n_t <= 3;
}

std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t cell_seed(const SweepSpec& spec, double value, int trial)
{
    const std::uint64_t t = mix_seed(static_cast<std::uint64_t>(trial));
    if (spec.paired_seeds) {
        return spec.seed_base ^ t;
    }
    return spec.seed_base ^ mix_seed(std::bit_cast<std::uint64_t>(value) ^ t);
}

bool SweepTable::all_ok() const
{
    return failures() == 0;
}

long SweepTable::failures() const
{
    return std::count_if(rows.begin(), rows.end(),
                         [](const SweepRow& r) { return r.status != "ok" && r.status != "skipped"; });
}

namespace {

using Clock = std::chrono::steady_clock;

std::string sanitize(std::string s)
{
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

SystemConfig placed(SystemConfig cfg, std::uint64_t seed, double radius)
{
    cfg = with_random_users(cfg, seed, radius);
    cfg.seed = mix_seed(seed ^ 0x636861ULL);
    return cfg;
}

void run_cell(const SweepSpec& spec, Algorithm algo, SweepRow& row)
{
    SystemConfig cfg = apply_sweep_value(spec.base, spec.param, row.value);
    std::mt19937_64 rng(mix_seed(row.seed ^ (0x616c67ULL + static_cast<std::uint64_t>(algo))));
    const auto t0 = Clock::now();

    switch (algo) {
    case Algorithm::kSrm: {
        if (!spec.force && !within_desk_limits(cfg)) {
            row.status = "skipped";
            return;
        }
        cfg = placed(cfg, row.seed, spec.user_radius);
        const ChannelTensor ch = synthesize_channel(cfg);
        const SrmTrace trace = run_srm(cfg, ch, PhaseIndexMatrix::max_amplitude(cfg.n_r, cfg.b_bits), spec.srm);
        row.sum_rate = trace.sum_rate;
        row.iterations = trace.iterations();
        break;
    }
    case Algorithm::kSa: {
        cfg = placed(cfg, row.seed, spec.user_radius);
        const ChannelTensor ch = synthesize_channel(cfg);
        const auto res = simulated_annealing(cfg, ch, spec.sa, rng);
        row.sum_rate = res.sum_rate;
        row.iterations = res.evaluations;
        break;
    }
    case Algorithm::kRandom: {
        cfg = placed(cfg, row.seed, spec.user_radius);
        const ChannelTensor ch = synthesize_channel(cfg);
        const auto res = random_phase_baseline(cfg, ch, rng, spec.random_draws);
        row.sum_rate = res.sum_rate;
        row.iterations = res.evaluations;
        break;
    }
    case Algorithm::kContinuous: {
        cfg = placed(cfg, row.seed, spec.user_radius);
        const ChannelTensor ch = synthesize_channel(cfg);
        const auto res = continuous_relaxation(cfg, ch, spec.continuous);
        row.sum_rate = res.sum_rate;
        row.iterations = res.iterations;
        break;
    }
    case Algorithm::kLos: {
        // Independent user drop on the pure line-of-sight channel, scored at
        // the row-balanced max-amplitude configuration.
        cfg.rician_on = false;
        cfg = placed(cfg, mix_seed(row.seed ^ 0x6c6f73ULL), spec.user_radius);
        const ChannelTensor ch = synthesize_channel(cfg);
        row.sum_rate = score_configuration(cfg, ch, PhaseIndexMatrix::max_amplitude(cfg.n_r, cfg.b_bits));
        row.iterations = 1;
        break;
    }
    }
    row.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec)
{
    spec.validate();
    SweepTable table;
    const std::string param = to_string(spec.param);

    for (double v : spec.values) {
        const SystemConfig cfg = apply_sweep_value(spec.base, spec.param, v);
        if (within_desk_limits(cfg)) {
            continue;
        }
        std::ostringstream msg;
        msg << param << '=' << v << " is beyond desk scale (n_r <= 4, b <= 2, K = N_t <= 3): ";
        const bool has_srm =
            std::find(spec.algorithms.begin(), spec.algorithms.end(), Algorithm::kSrm) != spec.algorithms.end();
        if (has_srm && !spec.force) {
            msg << "srm cells skipped";
        } else {
            msg << "running anyway";
        }
        table.warnings.push_back(msg.str());
    }

    for (double v : spec.values) {
        for (int t = 0; t < spec.trials; ++t) {
            const std::uint64_t seed = cell_seed(spec, v, t);
            for (Algorithm a : spec.algorithms) {
                SweepRow row;
                row.param = param;
                row.value = v;
                row.trial = t;
                row.algorithm = to_string(a);
                row.seed = seed;
                table.rows.push_back(std::move(row));
            }
        }
    }

    const std::size_t n_algos = spec.algorithms.size();
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < table.rows.size(); i = next++) {
            SweepRow& row = table.rows[i];
            try {
                run_cell(spec, spec.algorithms[i % n_algos], row);
            } catch (const std::exception& e) {
                row.status = "error: " + sanitize(e.what());
            }
        }
    };
    unsigned n_threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(table.rows.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i) {
            pool.emplace_back(worker);
        }
    }
    return table;
}

std::vector<SummaryRow> summarize(const SweepTable& table)
{
    std::vector<double> values;
    std::vector<std::string> algos;
    std::map<std::pair<double, std::string>, std::vector<double>> groups;
    for (const auto& r : table.rows) {
        if (std::find(values.begin(), values.end(), r.value) == values.end()) {
            values.push_back(r.value);
        }
        if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end()) {
            algos.push_back(r.algorithm);
        }
        if (r.ok()) {
            groups[{r.value, r.algorithm}].push_back(r.sum_rate);
        }
    }
    std::sort(values.begin(), values.end());

    std::vector<SummaryRow> out;
    for (double v : values) {
        for (const auto& a : algos) {
            auto it = groups.find({v, a});
            if (it == groups.end()) {
                continue;
            }
            const auto& xs = it->second;
            SummaryRow s;
            s.value = v;
            s.algorithm = a;
            s.n = static_cast<int>(xs.size());
            double sum = 0.0;
            for (double x : xs) {
                sum += x;
            }
            s.mean = sum / s.n;
            if (s.n > 1) {
                double ss = 0.0;
                for (double x : xs) {
                    ss += (x - s.mean) * (x - s.mean);
                }
                s.ci95 = 1.96 * std::sqrt(ss / (s.n - 1)) / std::sqrt(static_cast<double>(s.n));
            }
            out.push_back(s);
        }
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table, bool timing)
{
    const auto old_precision = out.precision(17);
    out << "param,value,trial,algorithm,sum_rate,seconds,iterations,status,seed\n";
    for (const auto& r : table.rows) {
        out << r.param << ',' << r.value << ',' << r.trial << ',' << r.algorithm << ',' << r.sum_rate << ','
            << (timing ? r.seconds : 0.0) << ',' << r.iterations << ',' << sanitize(r.status) << ',' << r.seed
            << '\n';
    }
    out.precision(old_precision);
}

SweepTable read_sweep_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "param,value,trial,algorithm,sum_rate,seconds,iterations,status,seed") {
        throw std::runtime_error("read_sweep_csv: unexpected header");
    }
    SweepTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 9) {
            throw std::runtime_error("read_sweep_csv: line " + std::to_string(line_no) + " has " +
                                     std::to_string(f.size()) + " fields");
        }
        SweepRow r;
        try {
            r.param = f[0];
            r.value = std::stod(f[1]);
            r.trial = std::stoi(f[2]);
            r.algorithm = f[3];
            r.sum_rate = std::stod(f[4]);
            r.seconds = std::stod(f[5]);
            r.iterations = std::stol(f[6]);
            r.status = f[7];
            r.seed = std::stoull(f[8]);
        } catch (const std::logic_error&) {
            throw std::runtime_error("read_sweep_csv: malformed number on line " + std::to_string(line_no));
        }
        table.rows.push_back(std::move(r));
    }
    return table;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary)
{
    const auto old_precision = out.precision(17);
    out << "value,algorithm,n,mean,ci95\n";
    for (const auto& s : summary) {
        out << s.value << ',' << s.algorithm << ',' << s.n << ',' << s.mean << ',' << s.ci95 << '\n';
    }
    out.precision(old_precision);
}

void write_svg_plot(std::ostream& out, const SweepTable& table, const std::string& x_label)
{
    const auto summary = summarize(table);
    std::vector<std::string> algos;
    for (const auto& r : table.rows) {
        if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end()) {
            algos.push_back(r.algorithm);
        }
    }

    constexpr double kW = 640, kH = 420, kL = 60, kR = 150, kT = 20, kB = 50;
    double x_min = std::numeric_limits<double>::infinity(), x_max = -std::numeric_limits<double>::infinity(), y_max = 0.0;
    for (const auto& r : table.rows) {
        x_min = std::min(x_min, r.value);
        x_max = std::max(x_max, r.value);
    }
    for (const auto& s : summary) {
        y_max = std::max(y_max, s.mean + s.ci95);
    }
    if (!(x_max > x_min)) {
        x_min -= 1.0;
        x_max += 1.0;
    }
    if (!(y_max > 0.0)) {
        y_max = 1.0;
    }
    y_max *= 1.05;
    auto px = [&](double x) { return kL + (x - x_min) / (x_max - x_min) * (kW - kL - kR); };
    auto py = [&](double y) { return kH - kB - y / y_max * (kH - kT - kB); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    const auto old_precision = out.precision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\"" << kH - kB
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">" << x_label
        << "</text>\n"
        << "<text x=\"15\" y=\"" << (kT + kH - kB) / 2 << "\" transform=\"rotate(-90 15 " << (kT + kH - kB) / 2
        << ")\" text-anchor=\"middle\">sum rate (bit/s/Hz)</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double x = x_min + (x_max - x_min) * i / 4;
        const double y = y_max * i / 4;
        out << "<text x=\"" << px(x) << "\" y=\"" << kH - kB + 16 << "\" font-size=\"11\" text-anchor=\"middle\">"
            << x << "</text>\n"
            << "<text x=\"" << kL - 6 << "\" y=\"" << py(y) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << y
            << "</text>\n";
    }
    for (std::size_t a = 0; a < algos.size(); ++a) {
        const char* color = colors[a % std::size(colors)];
        out << "<g class=\"series\" data-algorithm=\"" << algos[a] << "\">\n<polyline fill=\"none\" stroke=\""
            << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& s : summary) {
            if (s.algorithm == algos[a]) {
                out << px(s.value) << ',' << py(s.mean) << ' ';
            }
        }
        out << "\"/>\n";
        for (const auto& s : summary) {
            if (s.algorithm != algos[a]) {
                continue;
            }
            out << "<circle cx=\"" << px(s.value) << "\" cy=\"" << py(s.mean) << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
            if (s.ci95 > 0) {
                out << "<line x1=\"" << px(s.value) << "\" y1=\"" << py(s.mean - s.ci95) << "\" x2=\""
                    << px(s.value) << "\" y2=\"" << py(s.mean + s.ci95) << "\" stroke=\"" << color << "\"/>\n";
            }
        }
        const double ly = kT + 20.0 * static_cast<double>(a);
        out << "<line x1=\"" << kW - kR + 15 << "\" y1=\"" << ly << "\" x2=\"" << kW - kR + 40 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kW - kR + 45 << "\" y=\"" << ly + 4 << "\">" << algos[a] << "</text>\n</g>\n";
    }
    out << "</svg>\n";
    out.precision(old_precision);
}

std::vector<std::string> emit_outputs(const SweepTable& table, const std::string& prefix, const OutputOptions& opts)
{
    if (table.rows.empty()) {
        throw std::runtime_error("emit_outputs: empty table");
    }
    std::vector<std::string> written;
    auto open = [&](const std::string& path) {
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            throw std::runtime_error("cannot open '" + path + "' for writing");
        }
        return f;
    };
    auto close = [&](std::ofstream& f, const std::string& path) {
        f.close();
        if (!f) {
            throw std::runtime_error("failed writing '" + path + "'");
        }
        written.push_back(path);
    };
    if (opts.csv) {
        const std::string path = prefix + ".csv";
        auto f = open(path);
        write_sweep_csv(f, table, opts.timing);
        close(f, path);
        const std::string spath = prefix + "_summary.csv";
        auto s = open(spath);
        write_summary_csv(s, summarize(table));
        close(s, spath);
    }
    if (opts.svg) {
        const std::string path = prefix + ".svg";
        auto f = open(path);
        write_svg_plot(f, table, table.rows.front().param);
        close(f, path);
    }
    return written;
}

}  // namespace rishbf
