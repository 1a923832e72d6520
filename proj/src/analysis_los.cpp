#include "rishbf/analysis_los.hpp"

#include "rishbf/errors.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace rishbf {

namespace {

double cos_product(const SystemConfig& cfg)
{
    const double c = std::cos(cfg.theta_r) * std::cos(cfg.theta_b);
    if (std::abs(c) < 1e-12) {
        throw DegenerateOrientation("cos(theta_r) * cos(theta_b) vanishes");
    }
    return c;
}

}  // namespace

double threshold_size(const SystemConfig& cfg)
{
    const double c = cos_product(cfg);
    return cfg.wavelength * cfg.d_00 / (cfg.d_r1 * cfg.d_b * c);
}

double required_spacing_product(const SystemConfig& cfg, double n_r)
{
    if (!(n_r > 0)) {
        throw std::invalid_argument("required_spacing_product: n_r must be positive");
    }
    return cfg.wavelength * cfg.d_00 / (n_r * cos_product(cfg));
}

double required_d_b(const SystemConfig& cfg, double n_r)
{
    return required_spacing_product(cfg, n_r) / cfg.d_r1;
}

Eigen::VectorXd row_sums(const PhaseIndexMatrix& phases)
{
    const int n = phases.n_r();
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (int l1 = 0; l1 < n; ++l1) {
        for (int l2 = 0; l2 < n; ++l2) {
            s(l1) += 1.0 + codebook_sin(phases(l1, l2), phases.bits());
        }
    }
    return s;
}

double row_balance_residual(const PhaseIndexMatrix& phases)
{
    const Eigen::VectorXd s = row_sums(phases);
    return s.size() == 0 ? 0.0 : (s.array() - s(0)).abs().maxCoeff();
}

double orthogonality_residual(const SystemConfig& cfg, const GeometrySolution& geom, const Eigen::VectorXcd& q)
{
    const int n_t = static_cast<int>(geom.d_bs_ris.rows());
    const int elements = static_cast<int>(geom.d_bs_ris.cols());
    if (q.size() != elements) {
        throw DimensionMismatch("orthogonality_residual: q has the wrong length");
    }
    if (n_t < 2) {
        return 0.0;
    }
    const double kw = 2.0 * kPi * cfg.beta / cfg.wavelength;
    const int users = std::max<int>(1, static_cast<int>(geom.d_ris_user.rows()));

    double worst = 0.0;
    Eigen::MatrixXcd f(elements, n_t);
    for (int k = 0; k < users; ++k) {
        for (int n = 0; n < n_t; ++n) {
            for (int p = 0; p < elements; ++p) {
                const double d = geom.d_ris_user.rows() > 0 ? geom.d_ris_user(k, p) : 0.0;
                f(p, n) = q(p) * std::polar(1.0, -kw * (geom.d_bs_ris(n, p) + d));
            }
        }
        const Eigen::MatrixXcd gram = f.adjoint() * f;
        for (int a = 0; a < n_t; ++a) {
            for (int b = a + 1; b < n_t; ++b) {
                const double den = std::sqrt(gram(a, a).real() * gram(b, b).real());
                if (den > 0) {
                    worst = std::max(worst, std::abs(gram(a, b)) / den);
                }
            }
        }
    }
    return worst;
}

double orthogonality_residual(const SystemConfig& cfg, const GeometrySolution& geom, const PhaseIndexMatrix& phases)
{
    return orthogonality_residual(cfg, geom, phases.responses());
}

AchievabilityResult fully_digital_achievability(const std::vector<Eigen::MatrixXcd>& elements,
                                                const Eigen::MatrixXcd& h_fd, const Eigen::MatrixXcd& v_fd)
{
    const int p_count = static_cast<int>(elements.size());
    if (p_count == 0) {
        throw DimensionMismatch("fully_digital_achievability: no elements");
    }
    const int k = static_cast<int>(elements[0].rows());
    const int n_t = static_cast<int>(elements[0].cols());
    for (const auto& e : elements) {
        if (e.rows() != k || e.cols() != n_t) {
            throw DimensionMismatch("fully_digital_achievability: element matrices differ in shape");
        }
    }
    if (h_fd.rows() != k || h_fd.cols() != p_count || v_fd.rows() != p_count || v_fd.cols() != k) {
        throw DimensionMismatch("fully_digital_achievability: H_fd must be K x P and V_fd P x K");
    }

    AchievabilityResult out;
    out.enough_elements = p_count >= k * n_t;
    out.enough_antennas = n_t >= k;
    if (!out.enough_antennas) {
        out.residual = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    const Eigen::MatrixXcd target = h_fd * v_fd;
    Eigen::MatrixXcd a(k * k, p_count);
    Eigen::VectorXcd t(k * k);
    for (int m = 0; m < k; ++m) {
        for (int c = 0; c < k; ++c) {
            t(m * k + c) = target(m, c);
            for (int p = 0; p < p_count; ++p) {
                a(m * k + c, p) = elements[static_cast<std::size_t>(p)](m, c);
            }
        }
    }
    out.q = a.completeOrthogonalDecomposition().solve(t);
    const double scale = t.norm();
    out.residual = (a * out.q - t).norm() / (scale > 0 ? scale : 1.0);
    out.achievable = out.enough_elements && out.residual < 1e-8;
    return out;
}

AchievabilityResult fully_digital_achievability(const ChannelTensor& channel, const Eigen::VectorXcd& phi,
                                                const Eigen::MatrixXcd& h_fd, const Eigen::MatrixXcd& v_fd)
{
    if (phi.size() != channel.k_users) {
        throw DimensionMismatch("fully_digital_achievability: phi must have one entry per user");
    }
    std::vector<Eigen::MatrixXcd> elements;
    elements.reserve(static_cast<std::size_t>(channel.num_elements()));
    for (const auto& h : channel.h_total) {
        elements.push_back(phi.asDiagonal() * h);
    }
    return fully_digital_achievability(elements, h_fd, v_fd);
}

LosReport los_report(const SystemConfig& cfg, const PhaseIndexMatrix& phases)
{
    LosReport r;
    r.threshold = threshold_size(cfg);
    r.required_product = required_spacing_product(cfg, cfg.n_r);
    r.actual_product = cfg.d_r1 * cfg.d_b;
    r.required_d_b = required_d_b(cfg, cfg.n_r);
    r.row_sums = row_sums(phases);
    r.row_balance = row_balance_residual(phases);
    try {
        r.orthogonality = orthogonality_residual(cfg, build_geometry(cfg, DistanceModel::kParaxial), phases);
    } catch (const ParaxialInvalid&) {
        r.orthogonality = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

void write_los_report(std::ostream& out, const LosReport& r)
{
    const auto old_precision = out.precision(6);
    out << "threshold_size      " << r.threshold << '\n'
        << "required_d_r1_d_b   " << r.required_product << '\n'
        << "actual_d_r1_d_b     " << r.actual_product << '\n'
        << "required_d_b        " << r.required_d_b << '\n'
        << "row_sums           ";
    for (Eigen::Index i = 0; i < r.row_sums.size(); ++i) {
        out << ' ' << r.row_sums(i);
    }
    out << '\n'
        << "row_balance         " << r.row_balance << '\n'
        << "orthogonality       " << r.orthogonality << '\n';
    out.precision(old_precision);
}

}  // namespace rishbf
