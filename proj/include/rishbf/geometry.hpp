#ifndef RISHBF_GEOMETRY_HPP
#define RISHBF_GEOMETRY_HPP

#include "rishbf/config.hpp"

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace rishbf {

enum class DistanceModel {
    kExact,     // Euclidean BS-RIS distances
    kParaxial,  // first-order expansion sqrt(1 + a) ~ 1 + a / 2
};

/// Coordinate convention: the y axis points from BS antenna 0 to RIS element
/// (0,0), z is vertical. The ULA lies along n_B = (cos theta_b, sin theta_b, 0)
/// from the origin, the RIS rows along (cos theta_r, sin theta_r, 0) and its
/// columns along z, with element (0,0) at (0, d_00, 0). Element (l1, l2) has
/// linear index l1 * n_r + l2 everywhere in this library.
struct GeometrySolution {
    int n_r = 0;
    DistanceModel mode = DistanceModel::kExact;
    std::vector<Eigen::Vector3d> bs_positions;
    std::vector<Eigen::Vector3d> ris_positions;
    Eigen::MatrixXd d_bs_ris;    // n_t x n_r^2, model-dependent
    Eigen::MatrixXd d_ris_user;  // k_users x n_r^2, always Euclidean

    double bs_ris(int n, int l1, int l2) const { return d_bs_ris(n, l1 * n_r + l2); }
    double ris_user(int k, int l1, int l2) const { return d_ris_user(k, l1 * n_r + l2); }
};

Eigen::Vector3d bs_array_direction(const SystemConfig& cfg);
Eigen::Vector3d ris_row_direction(const SystemConfig& cfg);
Eigen::Vector3d bs_antenna_position(const SystemConfig& cfg, int n);
Eigen::Vector3d ris_element_position(const SystemConfig& cfg, int l1, int l2);

double exact_bs_ris_distance(const SystemConfig& cfg, int n, int l1, int l2);
double paraxial_bs_ris_distance(const SystemConfig& cfg, int n, int l1, int l2);

/// Quadratic correction term of the paraxial distance, before adding the
/// first-order offset.
double paraxial_correction(const SystemConfig& cfg, int n, int l1, int l2);

/// Throws ParaxialInvalid in paraxial mode when a correction exceeds 10% of d_00.
GeometrySolution build_geometry(const SystemConfig& cfg, DistanceModel mode = DistanceModel::kExact);

/// Uniform draws over the half disc of the given radius centred at the
/// ground projection of RIS element (0,0), on the side of the surface that
/// faces the BS. All points get z = height.
std::vector<Eigen::Vector3d> half_circle_user_placement(std::uint64_t seed, int k_users, double radius,
                                                        const SystemConfig& cfg);

/// Returns a copy of cfg with user_positions drawn by half_circle_user_placement.
SystemConfig with_random_users(const SystemConfig& cfg, std::uint64_t seed, double radius = 60.0);

/// True when p is on the BS-facing side of the RIS plane (or on it).
bool on_reflection_side(const SystemConfig& cfg, const Eigen::Vector3d& p);

}  // namespace rishbf

#endif  // RISHBF_GEOMETRY_HPP
