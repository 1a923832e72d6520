#ifndef RISHBF_ANALYSIS_LOS_HPP
#define RISHBF_ANALYSIS_LOS_HPP

#include "rishbf/channel.hpp"
#include "rishbf/config.hpp"
#include "rishbf/geometry.hpp"
#include "rishbf/phase.hpp"

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

namespace rishbf {

/// lambda * d_00 / (d_r1 * d_b * cos theta_r * cos theta_b). Throws
/// DegenerateOrientation when the cosine product vanishes.
double threshold_size(const SystemConfig& cfg);

/// d_r1 * d_b at which an n_r-row surface orthogonalises the LoS links.
double required_spacing_product(const SystemConfig& cfg, double n_r);
/// Antenna spacing solving threshold_size(cfg) = n_r for the configured d_r1.
double required_d_b(const SystemConfig& cfg, double n_r);

/// sum_{l2 = 0}^{n_r - 1} (1 + sin theta_{l1,l2}) for each row l1.
Eigen::VectorXd row_sums(const PhaseIndexMatrix& phases);
/// max_l1 |row_sums(l1) - row_sums(0)|.
double row_balance_residual(const PhaseIndexMatrix& phases);

/// max over users k and antenna pairs a != b of |f_a^H f_b| / (|f_a| |f_b|),
/// where f_n has entries q_p exp(-j 2 pi beta / lambda (D_{n,p} + d_{k,p})).
/// With no users in geom the user distances are taken as 0. Returns 0 for a
/// single antenna or when every q vanishes.
double orthogonality_residual(const SystemConfig& cfg, const GeometrySolution& geom, const PhaseIndexMatrix& phases);
double orthogonality_residual(const SystemConfig& cfg, const GeometrySolution& geom, const Eigen::VectorXcd& q);

struct AchievabilityResult {
    bool achievable = false;
    bool enough_elements = false;  // elements >= K * N_t
    bool enough_antennas = false;  // N_t >= K
    double residual = 0.0;         // |A q - t| / |t| of the least-squares solve
    Eigen::VectorXcd q;            // free complex element responses
};

/// Looks for q with F(q) V_D = H_fd V_fd, V_D = [I_K; 0], i.e. the first K
/// columns of F = sum_p q_p E_p match the target. elements[p] is the K x N_t
/// matrix E_p (channel with the user phases applied); q is not restricted to
/// the codebook. Throws DimensionMismatch on inconsistent shapes.
AchievabilityResult fully_digital_achievability(const std::vector<Eigen::MatrixXcd>& elements,
                                                const Eigen::MatrixXcd& h_fd, const Eigen::MatrixXcd& v_fd);
AchievabilityResult fully_digital_achievability(const ChannelTensor& channel, const Eigen::VectorXcd& phi,
                                                const Eigen::MatrixXcd& h_fd, const Eigen::MatrixXcd& v_fd);

struct LosReport {
    double threshold = 0.0;
    double required_product = 0.0;  // at cfg.n_r
    double actual_product = 0.0;
    double required_d_b = 0.0;      // at cfg.n_r
    Eigen::VectorXd row_sums;
    double row_balance = 0.0;
    double orthogonality = 0.0;     // NaN when the paraxial model is invalid for cfg
};

LosReport los_report(const SystemConfig& cfg, const PhaseIndexMatrix& phases);
void write_los_report(std::ostream& out, const LosReport& report);

}  // namespace rishbf

#endif  // RISHBF_ANALYSIS_LOS_HPP
