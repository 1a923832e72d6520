#include "oracles.hpp"

#include "rishbf/digital_bf.hpp"
#include "rishbf/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace rishbf;

TEST_CASE("zero forcing on identity and diagonal channels")
{
    const ZfPrecoder id = zf_precoder(Eigen::MatrixXcd::Identity(3, 3));
    CHECK((id.v_tilde - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((id.nu - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() < 1e-15);

    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(2, 2);
    f(0, 0) = 2.0;
    f(1, 1) = 4.0;
    const ZfPrecoder d = zf_precoder(f);
    CHECK(std::abs(d.v_tilde(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(d.v_tilde(1, 1) - 0.25) < 1e-15);
    CHECK(std::abs(d.v_tilde(0, 1)) < 1e-15);
    CHECK(d.nu(0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(d.nu(1) == doctest::Approx(1.0 / 16).epsilon(1e-14));
}

TEST_CASE("zero forcing residual on wide random channels")
{
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        const Eigen::MatrixXcd f = oracle::random_complex(3, 5, rng);
        const ZfPrecoder z = zf_precoder(f);
        CHECK((f * z.v_tilde - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
        const Eigen::VectorXd nu = (z.v_tilde.adjoint() * z.v_tilde).diagonal().real();
        CHECK((nu - z.nu).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(z.nu.minCoeff() > 0);
    }
}

TEST_CASE("rank deficient channel is reported")
{
    Eigen::MatrixXcd f(2, 3);
    f << 1, 2, 3, 2, 4, 6;
    CHECK_THROWS_AS(zf_precoder(f), RankDeficient);
    CHECK_THROWS_AS(digital_beamforming(Eigen::MatrixXcd::Zero(2, 2), 1.0, 1.0), RankDeficient);
}

TEST_CASE("water filling closed cases")
{
    Eigen::VectorXd one(1);
    one << 1.0;
    const auto single = water_filling(one, 3.0, 0.2);
    CHECK(single.p(0) == doctest::Approx(3.0).epsilon(1e-14));

    Eigen::VectorXd eq = Eigen::VectorXd::Constant(4, 0.3);
    const auto even = water_filling(eq, 2.0, 0.5);
    for (int k = 0; k < 4; ++k) {
        CHECK(eq(k) * even.p(k) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("water filling against a grid search")
{
    Eigen::VectorXd nu(2);
    nu << 1.0, 10.0;
    const auto wf = water_filling(nu, 1.0, 0.1);
    const double obj = std::log2(1 + wf.p(0) / 0.1) + std::log2(1 + wf.p(1) / 0.1);
    const double grid = oracle::water_filling_grid(1.0, 10.0, 1.0, 0.1);
    CHECK(std::abs(obj - grid) < 1e-4);
    CHECK(obj >= grid - 1e-12);
}

TEST_CASE("digital step on the identity channel")
{
    const ZfSolution s = digital_beamforming(Eigen::MatrixXcd::Identity(2, 2), 2.0, 1.0);
    CHECK(s.p(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.p(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.sum_rate == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("optimality conditions and invariants on random channels")
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        const int k = 2 + t % 3;
        const Eigen::MatrixXcd f = oracle::random_complex(k, k + t % 2, rng);
        const double pt = 0.5 + t % 7;
        const double s2 = 0.1 + 0.2 * (t % 5);
        const ZfSolution s = digital_beamforming(f, pt, s2);

        CHECK(s.p.minCoeff() >= 0.0);
        CHECK(std::abs(s.nu.dot(s.p) - pt) < 1e-9 * std::max(1.0, pt));
        CHECK((s.v_d - s.v_tilde * s.p.cwiseSqrt().asDiagonal()).cwiseAbs().maxCoeff() < 1e-14);

        const double level = 1.0 / s.mu;
        for (int i = 0; i < k; ++i) {
            if (s.p(i) > 0) {
                CHECK(std::abs(level - s.nu(i) * s2 - s.nu(i) * s.p(i)) < 1e-9 * std::max(1.0, level));
            } else {
                CHECK(level <= s.nu(i) * s2 + 1e-9);
            }
        }

        const Eigen::MatrixXcd fv = f * s.v_d;
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) {
                if (a == b) {
                    CHECK(std::abs(std::abs(fv(a, a)) - std::sqrt(s.p(a))) < 1e-9);
                } else {
                    CHECK(std::abs(fv(a, b)) < 1e-9 * std::sqrt(pt));
                }
            }
        }

        // equal power under the same budget
        const Eigen::VectorXd eq = Eigen::VectorXd::Constant(k, pt / s.nu.sum());
        CHECK(s.sum_rate >= zf_sum_rate(eq, s2) - 1e-12);

        // first-order exchange check
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) {
                if (a == b || s.p(b) < 1e-6 * s.nu(a) / s.nu(b)) {
                    continue;
                }
                Eigen::VectorXd q = s.p;
                q(a) += 1e-6;
                q(b) -= 1e-6 * s.nu(a) / s.nu(b);
                CHECK(zf_sum_rate(q, s2) <= s.sum_rate + 1e-12);
            }
        }

        const ZfSolution more = digital_beamforming(f, pt * 1.5, s2);
        CHECK(more.sum_rate >= s.sum_rate);
    }
}
