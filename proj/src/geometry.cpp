#include "rishbf/geometry.hpp"

#include "rishbf/errors.hpp"

#include <cmath>
#include <random>

namespace rishbf {

namespace {

// Unit normal of the RIS plane (in the x-y plane) pointing away from the BS.
Eigen::Vector2d away_from_bs_normal(const SystemConfig& cfg)
{
    Eigen::Vector2d normal(-std::sin(cfg.theta_r), std::cos(cfg.theta_r));
    const Eigen::Vector2d to_bs(0.0, -cfg.d_00);
    if (normal.dot(to_bs) > 0) {
        normal = -normal;
    }
    return normal;
}

}  // namespace

Eigen::Vector3d bs_array_direction(const SystemConfig& cfg)
{
    return {std::cos(cfg.theta_b), std::sin(cfg.theta_b), 0.0};
}

Eigen::Vector3d ris_row_direction(const SystemConfig& cfg)
{
    return {std::cos(cfg.theta_r), std::sin(cfg.theta_r), 0.0};
}

Eigen::Vector3d bs_antenna_position(const SystemConfig& cfg, int n)
{
    return n * cfg.d_b * bs_array_direction(cfg);
}

Eigen::Vector3d ris_element_position(const SystemConfig& cfg, int l1, int l2)
{
    return l1 * cfg.d_r1 * ris_row_direction(cfg) + l2 * cfg.d_r2 * Eigen::Vector3d::UnitZ() +
           cfg.d_00 * Eigen::Vector3d::UnitY();
}

double exact_bs_ris_distance(const SystemConfig& cfg, int n, int l1, int l2)
{
    return (ris_element_position(cfg, l1, l2) - bs_antenna_position(cfg, n)).norm();
}

double paraxial_correction(const SystemConfig& cfg, int n, int l1, int l2)
{
    const double dx = l1 * cfg.d_r1 * std::cos(cfg.theta_r) - n * cfg.d_b * std::cos(cfg.theta_b);
    const double dz = l2 * cfg.d_r2;
    return (dx * dx + dz * dz) / (2.0 * cfg.d_00);
}

double paraxial_bs_ris_distance(const SystemConfig& cfg, int n, int l1, int l2)
{
    const double along = l1 * cfg.d_r1 * std::sin(cfg.theta_r) + cfg.d_00 - n * cfg.d_b * std::sin(cfg.theta_b);
    return along + paraxial_correction(cfg, n, l1, l2);
}

GeometrySolution build_geometry(const SystemConfig& cfg, DistanceModel mode)
{
    cfg.validate(false);
    const int elements = cfg.num_elements();

    GeometrySolution g;
    g.n_r = cfg.n_r;
    g.mode = mode;
    g.bs_positions.reserve(static_cast<std::size_t>(cfg.n_t));
    for (int n = 0; n < cfg.n_t; ++n) {
        g.bs_positions.push_back(bs_antenna_position(cfg, n));
    }
    g.ris_positions.reserve(static_cast<std::size_t>(elements));
    for (int l1 = 0; l1 < cfg.n_r; ++l1) {
        for (int l2 = 0; l2 < cfg.n_r; ++l2) {
            g.ris_positions.push_back(ris_element_position(cfg, l1, l2));
        }
    }

    g.d_bs_ris.resize(cfg.n_t, elements);
    for (int n = 0; n < cfg.n_t; ++n) {
        for (int l1 = 0; l1 < cfg.n_r; ++l1) {
            for (int l2 = 0; l2 < cfg.n_r; ++l2) {
                double d = 0.0;
                if (mode == DistanceModel::kExact) {
                    d = (g.ris_positions[static_cast<std::size_t>(l1 * cfg.n_r + l2)] -
                         g.bs_positions[static_cast<std::size_t>(n)]).norm();
                } else {
                    if (paraxial_correction(cfg, n, l1, l2) > 0.1 * cfg.d_00) {
                        throw ParaxialInvalid("paraxial correction exceeds 10% of d_00 at antenna " +
                                              std::to_string(n));
                    }
                    d = paraxial_bs_ris_distance(cfg, n, l1, l2);
                }
                if (!(d > 0)) {
                    throw InvalidConfig("non-positive BS-RIS distance");
                }
                g.d_bs_ris(n, l1 * cfg.n_r + l2) = d;
            }
        }
    }

    const int users = static_cast<int>(cfg.user_positions.size());
    g.d_ris_user.resize(users, elements);
    for (int k = 0; k < users; ++k) {
        for (int p = 0; p < elements; ++p) {
            const double d = (g.ris_positions[static_cast<std::size_t>(p)] -
                              cfg.user_positions[static_cast<std::size_t>(k)]).norm();
            if (!(d > 0)) {
                throw InvalidConfig("user " + std::to_string(k) + " coincides with a RIS element");
            }
            g.d_ris_user(k, p) = d;
        }
    }
    return g;
}

std::vector<Eigen::Vector3d> half_circle_user_placement(std::uint64_t seed, int k_users, double radius,
                                                        const SystemConfig& cfg)
{
    if (!(radius > 0)) {
        throw InvalidConfig("placement radius must be > 0");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const Eigen::Vector2d center(0.0, cfg.d_00);
    const Eigen::Vector2d along(std::cos(cfg.theta_r), std::sin(cfg.theta_r));
    const Eigen::Vector2d outward = -away_from_bs_normal(cfg);

    std::vector<Eigen::Vector3d> users;
    users.reserve(static_cast<std::size_t>(k_users));
    for (int k = 0; k < k_users; ++k) {
        const double r = radius * std::sqrt(unit(rng));
        const double phi = kPi * unit(rng);
        const Eigen::Vector2d xy = center + r * (std::cos(phi) * along + std::sin(phi) * outward);
        users.emplace_back(xy.x(), xy.y(), cfg.user_height);
    }
    return users;
}

SystemConfig with_random_users(const SystemConfig& cfg, std::uint64_t seed, double radius)
{
    SystemConfig out = cfg;
    out.user_positions = half_circle_user_placement(seed, cfg.k_users, radius, cfg);
    return out;
}

bool on_reflection_side(const SystemConfig& cfg, const Eigen::Vector3d& p)
{
    const Eigen::Vector2d rel(p.x(), p.y() - cfg.d_00);
    return away_from_bs_normal(cfg).dot(rel) <= 1e-12;
}

}  // namespace rishbf
