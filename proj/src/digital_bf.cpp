#include "rishbf/digital_bf.hpp"

#include "rishbf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rishbf {

ZfPrecoder zf_precoder(const Eigen::MatrixXcd& f)
{
    const Eigen::Index k = f.rows();
    const Eigen::Index n_t = f.cols();
    if (k == 0 || n_t == 0) {
        throw DimensionMismatch("zf_precoder: empty transmission matrix");
    }
    if (!f.allFinite()) {
        throw Error("zf_precoder: non-finite transmission matrix");
    }

    const Eigen::VectorXd sv = f.jacobiSvd().singularValues();
    const double sigma_max = sv(0);
    const double sigma_min = k > n_t ? 0.0 : sv(k - 1);
    if (!(sigma_max > 0) || sigma_min <= kRankTolerance * sigma_max) {
        throw RankDeficient(sigma_min, sigma_max);
    }

    const Eigen::MatrixXcd fh = f.adjoint();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(fh);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n_t, k);
    const Eigen::MatrixXcd r = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    // R^H X = I  =>  X = R^{-H}
    const Eigen::MatrixXcd r_inv_h =
        r.adjoint().triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(k, k));

    ZfPrecoder out;
    out.v_tilde = q * r_inv_h;
    out.nu = out.v_tilde.colwise().squaredNorm().transpose();
    return out;
}

WaterFillingResult water_filling(const Eigen::VectorXd& nu, double p_total, double noise_power)
{
    const Eigen::Index k = nu.size();
    if (k == 0) {
        throw DimensionMismatch("water_filling: empty nu");
    }
    if ((nu.array() <= 0).any() || !nu.allFinite()) {
        throw std::invalid_argument("water_filling: nu must be positive and finite");
    }
    if (!(p_total > 0) || !(noise_power > 0)) {
        throw std::invalid_argument("water_filling: power and noise must be positive");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return nu(a) < nu(b); });

    // With users sorted by noise floor nu_k sigma^2, the active set is a prefix.
    double level = 0.0;
    double floor_sum = 0.0;
    std::vector<double> prefix(static_cast<std::size_t>(k));
    for (Eigen::Index m = 0; m < k; ++m) {
        floor_sum += nu(order[static_cast<std::size_t>(m)]) * noise_power;
        prefix[static_cast<std::size_t>(m)] = floor_sum;
    }
    for (Eigen::Index m = k; m >= 1; --m) {
        const double candidate = (p_total + prefix[static_cast<std::size_t>(m - 1)]) / static_cast<double>(m);
        if (candidate > nu(order[static_cast<std::size_t>(m - 1)]) * noise_power) {
            level = candidate;
            break;
        }
    }

    WaterFillingResult out;
    out.mu = 1.0 / level;
    out.p.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        out.p(i) = std::max(level - nu(i) * noise_power, 0.0) / nu(i);
    }
    return out;
}

double zf_sum_rate(const Eigen::VectorXd& p, double noise_power)
{
    return (1.0 + p.array() / noise_power).log().sum() / std::log(2.0);
}

ZfSolution digital_beamforming(const Eigen::MatrixXcd& f, double p_total, double noise_power)
{
    ZfPrecoder zf = zf_precoder(f);
    WaterFillingResult wf = water_filling(zf.nu, p_total, noise_power);

    ZfSolution out;
    out.v_tilde = std::move(zf.v_tilde);
    out.nu = std::move(zf.nu);
    out.p = std::move(wf.p);
    out.mu = wf.mu;
    out.v_d = out.v_tilde * out.p.cwiseSqrt().asDiagonal();
    out.sum_rate = zf_sum_rate(out.p, noise_power);
    return out;
}

}  // namespace rishbf
