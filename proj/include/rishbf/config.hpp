#ifndef RISHBF_CONFIG_HPP
#define RISHBF_CONFIG_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rishbf {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// All physical and algorithmic parameters of one RIS-assisted downlink.
///
/// Angles are radians, distances meters, powers watts. user_positions may be
/// left empty until users are placed; validate() requires them.
struct SystemConfig {
    int n_t = 2;         // BS antennas
    int k_users = 2;     // single-antenna users
    int n_r = 2;         // RIS side length, n_r * n_r elements
    int b_bits = 1;      // phase quantization bits
    double p_total = 20.0;
    double noise_power = 20.0 / 1.5848931924611136;  // SNR 2 dB
    double wavelength = kSpeedOfLight / 5.9e9;
    double d_b = 1.0;
    double d_r1 = 0.03;
    double d_r2 = 0.03;
    double theta_b = deg_to_rad(15.0);
    double theta_r = deg_to_rad(30.0);
    double d_00 = 20.0;
    double alpha = 1.0;  // path-loss exponent (amplitude ~ distance^-alpha)
    double kappa = 4.0;
    bool rician_on = true;  // false selects the pure-LoS channel
    std::vector<Eigen::Vector3d> user_positions;
    std::uint64_t seed = 1;
    std::vector<std::complex<double>> phi_k;  // empty means 1 for every user
    double beta = 1.0;         // RIS wave-number factor, constant in band
    double user_height = 0.0;  // z coordinate used when placing users

    int num_elements() const { return n_r * n_r; }
    std::complex<double> phi(int k) const;
    Eigen::VectorXcd phi_vector() const;

    /// Throws InvalidConfig. With require_users=false the user list may be empty.
    void validate(bool require_users = true) const;

    /// Reference deployment (5.9 GHz, D00 = 20 m, ...)
    /// with K = N_t = 5, N_R = 6, b = 2 and SNR = 2 dB.
    static SystemConfig reference_defaults();
};

/// sigma^2 = P_T / SNR.
double noise_from_snr_db(double p_total, double snr_db);
double snr_db_from_noise(double p_total, double noise_power);

/// Flat "key = value" format; '#' starts a comment. Angles are written in
/// degrees. Lists use ';' between entries and ',' inside an entry, e.g.
/// "user_positions = 10,30,0; -5,40,0" and "phi_k = 1,0; 0.5,0.5".
/// The extra key snr_db (if present) overrides noise_power.
SystemConfig parse_config(std::istream& in, const SystemConfig& base = {});
SystemConfig load_config(const std::string& path, const SystemConfig& base = {});
void write_config(std::ostream& out, const SystemConfig& cfg);

}  // namespace rishbf

#endif  // RISHBF_CONFIG_HPP
