#ifndef RISHBF_CHANNEL_HPP
#define RISHBF_CHANNEL_HPP

#include "rishbf/config.hpp"
#include "rishbf/geometry.hpp"
#include "rishbf/phase.hpp"

#include <Eigen/Dense>
#include <iosfwd>
#include <random>
#include <vector>

namespace rishbf {

/// Per-(user, antenna, element) gains. Element p holds the K x N_t matrix
/// H_p = [h_p^{(k,n)}].
struct ChannelTensor {
    int k_users = 0;
    int n_t = 0;
    int n_r = 0;
    std::vector<Eigen::MatrixXcd> h_los;
    std::vector<Eigen::MatrixXcd> h_total;
    Eigen::VectorXd pathloss_los;  // [D00 + d_00^{(k)}]^{-alpha} per user
    double wave_number_beta = 1.0;

    int num_elements() const { return n_r * n_r; }
    std::complex<double> los(int k, int n, int l1, int l2) const { return h_los[idx(l1, l2)](k, n); }
    std::complex<double> total(int k, int n, int l1, int l2) const { return h_total[idx(l1, l2)](k, n); }

private:
    std::size_t idx(int l1, int l2) const { return static_cast<std::size_t>(l1 * n_r + l2); }
};

/// LoS gains with a common per-user path loss, plus (when cfg.rician_on) the
/// Ricean mixture with CN(0,1) scattering scaled by PL(D + d) = (D + d)^{-alpha}.
/// Draw order is (k, n, l1, l2), real part then imaginary part.
ChannelTensor synthesize_channel(const SystemConfig& cfg, const GeometrySolution& geom, std::mt19937_64& rng);

/// Convenience: users must already be placed in cfg; seeds a fresh stream from cfg.seed.
ChannelTensor synthesize_channel(const SystemConfig& cfg, DistanceModel mode = DistanceModel::kExact);

/// F = sum_p q_p (H_p o Phi) using h_total. Phi rows are constant per user.
Eigen::MatrixXcd assemble_f(const ChannelTensor& channel, const PhaseIndexMatrix& phases, const Eigen::VectorXcd& phi);
Eigen::MatrixXcd assemble_f(const ChannelTensor& channel, const Eigen::VectorXcd& q, const Eigen::VectorXcd& phi);
Eigen::MatrixXcd assemble_f_from_thetas(const ChannelTensor& channel, const Eigen::VectorXd& thetas,
                                        const Eigen::VectorXcd& phi);

/// R_k = log2(1 + |(F V)_kk|^2 / (sum_{k' != k} |(F V)_kk'|^2 + sigma^2)).
Eigen::VectorXd user_rates(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& v_d, double noise_power);

// Fixture dump. Binary layout (little-endian):
//   8 bytes magic "RISCHAN1", 4 x uint64 shape (K, N_t, n_r, n_r), float64 beta,
//   K float64 LoS path losses, then h_los and h_total as interleaved
//   (re, im) float64 pairs in row-major (k, n, l1, l2) order.
void write_channel_binary(std::ostream& out, const ChannelTensor& channel);
ChannelTensor read_channel_binary(std::istream& in);
/// CSV with header k,n,l1,l2,los_re,los_im,total_re,total_im (row-major order).
void write_channel_csv(std::ostream& out, const ChannelTensor& channel);

}  // namespace rishbf

#endif  // RISHBF_CHANNEL_HPP
