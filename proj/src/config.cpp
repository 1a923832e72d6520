#include "rishbf/config.hpp"

#include "rishbf/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rishbf {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) {
            throw std::invalid_argument(v);
        }
        return d;
    } catch (const std::exception&) {
        throw InvalidConfig("config key '" + key + "': cannot parse number '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v)
{
    const double d = to_double(key, v);
    if (d != std::floor(d)) {
        throw InvalidConfig("config key '" + key + "': expected an integer, got '" + v + "'");
    }
    return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "1" || v == "true" || v == "on" || v == "yes") {
        return true;
    }
    if (v == "0" || v == "false" || v == "off" || v == "no") {
        return false;
    }
    throw InvalidConfig("config key '" + key + "': expected a boolean, got '" + v + "'");
}

std::string fmt(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::complex<double> SystemConfig::phi(int k) const
{
    if (phi_k.empty()) {
        return {1.0, 0.0};
    }
    return phi_k.at(static_cast<std::size_t>(k));
}

Eigen::VectorXcd SystemConfig::phi_vector() const
{
    Eigen::VectorXcd v(k_users);
    for (int k = 0; k < k_users; ++k) {
        v(k) = phi(k);
    }
    return v;
}

void SystemConfig::validate(bool require_users) const
{
    auto fail = [](const std::string& what) { throw InvalidConfig("invalid config: " + what); };
    if (n_t < 1) fail("n_t must be >= 1");
    if (k_users < 1) fail("k_users must be >= 1");
    if (n_r < 1) fail("n_r must be >= 1");
    if (b_bits < 1 || b_bits > 16) fail("b_bits must be in [1, 16]");
    if (!(p_total > 0)) fail("p_total must be > 0");
    if (!(noise_power > 0)) fail("noise_power must be > 0");
    if (!(wavelength > 0)) fail("wavelength must be > 0");
    if (!(d_b > 0) || !(d_r1 > 0) || !(d_r2 > 0)) fail("element separations must be > 0");
    if (!(d_00 > 0)) fail("d_00 must be > 0");
    if (!(kappa >= 0)) fail("kappa must be >= 0");
    if (!std::isfinite(alpha)) fail("alpha must be finite");
    if (!phi_k.empty() && static_cast<int>(phi_k.size()) != k_users) {
        fail("phi_k must be empty or have k_users entries");
    }
    if (require_users && static_cast<int>(user_positions.size()) != k_users) {
        fail("user_positions must have exactly k_users entries");
    }
    if (!require_users && !user_positions.empty() &&
        static_cast<int>(user_positions.size()) != k_users) {
        fail("user_positions must have exactly k_users entries");
    }
}

SystemConfig SystemConfig::reference_defaults()
{
    SystemConfig cfg;
    cfg.n_t = 5;
    cfg.k_users = 5;
    cfg.n_r = 6;
    cfg.b_bits = 2;
    cfg.p_total = 20.0;
    cfg.noise_power = noise_from_snr_db(cfg.p_total, 2.0);
    cfg.wavelength = kSpeedOfLight / 5.9e9;
    cfg.d_b = 1.0;
    cfg.d_r1 = 0.03;
    cfg.d_r2 = 0.03;
    cfg.theta_b = deg_to_rad(15.0);
    cfg.theta_r = deg_to_rad(30.0);
    cfg.d_00 = 20.0;
    cfg.kappa = 4.0;
    return cfg;
}

double noise_from_snr_db(double p_total, double snr_db)
{
    return p_total / std::pow(10.0, snr_db / 10.0);
}

double snr_db_from_noise(double p_total, double noise_power)
{
    return 10.0 * std::log10(p_total / noise_power);
}

SystemConfig parse_config(std::istream& in, const SystemConfig& base)
{
    SystemConfig cfg = base;
    std::string line;
    bool have_snr = false;
    double snr_db = 0.0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfig("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "n_t") cfg.n_t = to_int(key, val);
        else if (key == "k_users") cfg.k_users = to_int(key, val);
        else if (key == "n_r") cfg.n_r = to_int(key, val);
        else if (key == "b_bits") cfg.b_bits = to_int(key, val);
        else if (key == "p_total") cfg.p_total = to_double(key, val);
        else if (key == "noise_power") cfg.noise_power = to_double(key, val);
        else if (key == "snr_db") { have_snr = true; snr_db = to_double(key, val); }
        else if (key == "wavelength") cfg.wavelength = to_double(key, val);
        else if (key == "frequency") cfg.wavelength = kSpeedOfLight / to_double(key, val);
        else if (key == "d_b") cfg.d_b = to_double(key, val);
        else if (key == "d_r1") cfg.d_r1 = to_double(key, val);
        else if (key == "d_r2") cfg.d_r2 = to_double(key, val);
        else if (key == "theta_b") cfg.theta_b = deg_to_rad(to_double(key, val));
        else if (key == "theta_r") cfg.theta_r = deg_to_rad(to_double(key, val));
        else if (key == "d_00") cfg.d_00 = to_double(key, val);
        else if (key == "alpha") cfg.alpha = to_double(key, val);
        else if (key == "kappa") cfg.kappa = to_double(key, val);
        else if (key == "rician_on") cfg.rician_on = to_bool(key, val);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
        else if (key == "beta") cfg.beta = to_double(key, val);
        else if (key == "user_height") cfg.user_height = to_double(key, val);
        else if (key == "user_positions") {
            cfg.user_positions.clear();
            for (const auto& entry : split(val, ';')) {
                const auto xyz = split(entry, ',');
                if (xyz.size() != 3) {
                    throw InvalidConfig("user_positions entries need 3 coordinates: '" + entry + "'");
                }
                cfg.user_positions.emplace_back(to_double(key, xyz[0]), to_double(key, xyz[1]),
                                                to_double(key, xyz[2]));
            }
        } else if (key == "phi_k") {
            cfg.phi_k.clear();
            for (const auto& entry : split(val, ';')) {
                const auto ri = split(entry, ',');
                if (ri.empty() || ri.size() > 2) {
                    throw InvalidConfig("phi_k entries are 're' or 're,im': '" + entry + "'");
                }
                cfg.phi_k.emplace_back(to_double(key, ri[0]),
                                       ri.size() == 2 ? to_double(key, ri[1]) : 0.0);
            }
        } else {
            throw InvalidConfig("unknown config key '" + key + "'");
        }
    }
    if (have_snr) {
        cfg.noise_power = noise_from_snr_db(cfg.p_total, snr_db);
    }
    return cfg;
}

SystemConfig load_config(const std::string& path, const SystemConfig& base)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidConfig("cannot open config file '" + path + "'");
    }
    return parse_config(in, base);
}

void write_config(std::ostream& out, const SystemConfig& cfg)
{
    out << "n_t = " << cfg.n_t << '\n'
        << "k_users = " << cfg.k_users << '\n'
        << "n_r = " << cfg.n_r << '\n'
        << "b_bits = " << cfg.b_bits << '\n'
        << "p_total = " << fmt(cfg.p_total) << '\n'
        << "noise_power = " << fmt(cfg.noise_power) << '\n'
        << "wavelength = " << fmt(cfg.wavelength) << '\n'
        << "d_b = " << fmt(cfg.d_b) << '\n'
        << "d_r1 = " << fmt(cfg.d_r1) << '\n'
        << "d_r2 = " << fmt(cfg.d_r2) << '\n'
        << "theta_b = " << fmt(rad_to_deg(cfg.theta_b)) << '\n'
        << "theta_r = " << fmt(rad_to_deg(cfg.theta_r)) << '\n'
        << "d_00 = " << fmt(cfg.d_00) << '\n'
        << "alpha = " << fmt(cfg.alpha) << '\n'
        << "kappa = " << fmt(cfg.kappa) << '\n'
        << "rician_on = " << (cfg.rician_on ? "true" : "false") << '\n'
        << "seed = " << cfg.seed << '\n'
        << "beta = " << fmt(cfg.beta) << '\n'
        << "user_height = " << fmt(cfg.user_height) << '\n';
    if (!cfg.user_positions.empty()) {
        out << "user_positions = ";
        for (std::size_t i = 0; i < cfg.user_positions.size(); ++i) {
            const auto& p = cfg.user_positions[i];
            out << (i ? "; " : "") << fmt(p.x()) << ',' << fmt(p.y()) << ',' << fmt(p.z());
        }
        out << '\n';
    }
    if (!cfg.phi_k.empty()) {
        out << "phi_k = ";
        for (std::size_t i = 0; i < cfg.phi_k.size(); ++i) {
            out << (i ? "; " : "") << fmt(cfg.phi_k[i].real()) << ',' << fmt(cfg.phi_k[i].imag());
        }
        out << '\n';
    }
}

}  // namespace rishbf
