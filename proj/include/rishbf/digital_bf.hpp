#ifndef RISHBF_DIGITAL_BF_HPP
#define RISHBF_DIGITAL_BF_HPP

#include <Eigen/Dense>

namespace rishbf {

struct ZfPrecoder {
    Eigen::MatrixXcd v_tilde;  // N_t x K, F^H (F F^H)^{-1}
    Eigen::VectorXd nu;        // diag(V~^H V~)
};

struct WaterFillingResult {
    Eigen::VectorXd p;
    double mu = 0.0;  // water level is 1 / mu
};

struct ZfSolution {
    Eigen::MatrixXcd v_tilde;
    Eigen::VectorXd nu;
    Eigen::VectorXd p;
    double mu = 0.0;
    Eigen::MatrixXcd v_d;  // v_tilde * diag(sqrt(p))
    double sum_rate = 0.0;
};

/// Relative rank tolerance: F is treated as rank deficient when
/// sigma_min <= kRankTolerance * sigma_max.
inline constexpr double kRankTolerance = 1e-10;

/// Zero-forcing precoder from a thin QR of F^H (F^H = Q R gives V~ = Q R^{-H}).
/// Throws RankDeficient.
ZfPrecoder zf_precoder(const Eigen::MatrixXcd& f);

/// Exact water-filling for max sum log2(1 + p_k / sigma^2) subject to
/// sum nu_k p_k <= P_T. The active set is found by sorting nu.
WaterFillingResult water_filling(const Eigen::VectorXd& nu, double p_total, double noise_power);

/// ZF + water-filling (the digital step of the alternation).
ZfSolution digital_beamforming(const Eigen::MatrixXcd& f, double p_total, double noise_power);

/// sum_k log2(1 + p_k / sigma^2).
double zf_sum_rate(const Eigen::VectorXd& p, double noise_power);

}  // namespace rishbf

#endif  // RISHBF_DIGITAL_BF_HPP
