#include "oracles.hpp"

#include "rishbf/analog_bf.hpp"
#include "rishbf/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace rishbf;

namespace {

struct Instance {
    ChannelTensor ch;
    Eigen::VectorXcd phi;
    ZfSolution zf;
    PhaseIndexMatrix init;
};

Instance make_instance(int k, int n_t, int n_r, int bits, std::mt19937_64& rng)
{
    Instance in{oracle::random_channel(k, n_t, n_r, rng), Eigen::VectorXcd::Ones(k), {}, {}};
    in.init = PhaseIndexMatrix::max_amplitude(n_r, bits);
    in.zf = digital_beamforming(assemble_f(in.ch, in.init, in.phi), 4.0, 0.5);
    return in;
}

double enumerate_best_epigraph(const Instance& in, const Eigen::VectorXd& powers, int bits)
{
    double best = std::numeric_limits<double>::infinity();
    oracle::for_each_configuration(in.ch.n_r, bits, [&](const PhaseIndexMatrix& m) {
        const Eigen::MatrixXcd f = oracle::naive_f(in.ch, oracle::naive_q(m), {in.phi.data(), in.phi.data() + in.phi.size()});
        best = std::min(best, oracle::epigraph_naive(oracle::naive_gram(f, powers)));
    });
    return best;
}

}  // namespace

TEST_CASE("variable layout")
{
    std::mt19937_64 rng(1);
    const ChannelTensor one = oracle::random_channel(1, 1, 1, rng);
    const AnalogBfModel a(one, Eigen::VectorXcd::Ones(1), Eigen::VectorXd::Ones(1), 2);
    CHECK(a.layout().elements == 1);
    CHECK(a.layout().pairs == 0);
    CHECK(a.layout().length == 7);
    CHECK(a.layout().num_vars() == 8);

    const ChannelTensor four = oracle::random_channel(2, 2, 2, rng);
    const AnalogBfModel b(four, Eigen::VectorXcd::Ones(2), Eigen::VectorXd::Ones(2), 1);
    CHECK(b.layout().elements == 4);
    CHECK(b.layout().pairs == 6);
    CHECK(b.layout().length == 3);
    CHECK(b.layout().num_vars() == 1 + 10 * 3);
    CHECK(b.layout().y(5, 2) == b.layout().num_vars() - 1);
}

TEST_CASE("objective closed forms")
{
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
    CHECK(power_objective(Eigen::MatrixXcd::Identity(3, 3), ones) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(epigraph_objective(Eigen::MatrixXcd::Identity(3, 3), ones) == doctest::Approx(3.0).epsilon(1e-14));

    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(2, 2);
    f(0, 0) = std::sqrt(2.0);
    f(1, 1) = std::sqrt(0.5);
    CHECK(power_objective(f, Eigen::VectorXd::Ones(2)) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(epigraph_objective(f, Eigen::VectorXd::Ones(2)) == doctest::Approx(4.0).epsilon(1e-14));

    Eigen::MatrixXcd rank1(2, 2);
    rank1 << 1, 2, 2, 4;
    CHECK_THROWS_AS(power_objective(rank1, Eigen::VectorXd::Ones(2)), Singular);
}

TEST_CASE("trace objective at the ZF powers is the power budget")
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 30; ++t) {
        const Eigen::MatrixXcd f = oracle::random_complex(3, 4, rng);
        const ZfSolution zf = digital_beamforming(f, 5.0, 0.05);
        if (zf.p.minCoeff() <= 0) {
            continue;
        }
        CHECK(power_objective(f, zf.p) == doctest::Approx(5.0).epsilon(1e-10));
        CHECK(epigraph_objective(f, zf.p) >= power_objective(f, zf.p) * (1 - 1e-12));
    }
}

TEST_CASE("power floor lifts inactive users")
{
    ZfSolution zf;
    zf.p = Eigen::VectorXd(3);
    zf.p << 2.0, 0.0, 1.0;
    const Eigen::VectorXd p = analog_powers(zf);
    CHECK(p(0) == 2.0);
    CHECK(p(1) == doctest::Approx(2.0 * kPowerFloor));
    CHECK(p(2) == 1.0);
}

TEST_CASE("Schur threshold equals K lambda_max of the inverse")
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const Eigen::MatrixXcd a = oracle::random_complex(3, 3, rng);
        const Eigen::MatrixXcd g = a * a.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(3, 3);
        const double w = oracle::schur_bisection(g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
        CHECK(std::abs(w - 3.0 / es.eigenvalues()(0)) < 1e-6 * w);
        CHECK(negative_directions(schur_matrix(w * (1 + 1e-6), g), 1e-12, 4).empty());
        CHECK_FALSE(negative_directions(schur_matrix(w * (1 - 1e-3), g), 1e-12, 4).empty());
    }
}

TEST_CASE("negative directions")
{
    CHECK(negative_directions(Eigen::MatrixXcd::Identity(2, 2), 1e-9, 4).empty());
    Eigen::MatrixXcd z(2, 2);
    z << 0, 1, 1, 0;
    const auto d = negative_directions(z, 1e-9, 4);
    REQUIRE(d.size() == 1);
    CHECK(d[0].first == doctest::Approx(-1.0));
    // u = (1, -1) / sqrt 2 in the real part of the embedding, up to a quarter turn
    const Eigen::VectorXd& u = d[0].second;
    CHECK(u.norm() == doctest::Approx(1.0));
    const std::complex<double> a(u(0), u(2)), b(u(1), u(3));
    CHECK(std::abs(a + b) < 1e-12);
}

TEST_CASE("encoded points are feasible and decode back")
{
    std::mt19937_64 rng(4);
    const Instance in = make_instance(2, 2, 2, 1, rng);
    const AnalogBfModel model(in.ch, in.phi, analog_powers(in.zf), 1);
    int count = 0;
    oracle::for_each_configuration(2, 1, [&](const PhaseIndexMatrix& m) {
        const Eigen::VectorXd z = model.encode(m, 1e6);
        CHECK(model.milp().lp.max_violation(z) < 1e-12);
        CHECK(model.decode(z) == m);
        ++count;
    });
    CHECK(count == 16);
}

TEST_CASE("model Gram matches the direct Gram")
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        const Instance in = make_instance(2, 3, 2, 2, rng);
        const Eigen::VectorXd powers = analog_powers(in.zf);
        const AnalogBfModel model(in.ch, in.phi, powers, 2);
        const PhaseIndexMatrix m = PhaseIndexMatrix::uniform_random(2, 2, rng);
        const Eigen::MatrixXcd f = oracle::naive_f(in.ch, oracle::naive_q(m), {1.0, 1.0});
        const Eigen::MatrixXcd ref = oracle::naive_gram(f, powers);
        const Eigen::MatrixXcd got = model.gram(model.encode(m, 0.0));
        CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
        const double epi = oracle::epigraph_naive(ref);
        CHECK(std::abs(model.scaled_epigraph(m) * model.scale() - epi) < 1e-9 * epi);
    }
}

TEST_CASE("model Gram is affine on relaxed points")
{
    std::mt19937_64 rng(6);
    const Instance in = make_instance(2, 2, 2, 2, rng);
    const AnalogBfModel model(in.ch, in.phi, analog_powers(in.zf), 2);
    const PhaseIndexMatrix a = PhaseIndexMatrix::uniform_random(2, 2, rng);
    const PhaseIndexMatrix b = PhaseIndexMatrix::uniform_random(2, 2, rng);
    const Eigen::VectorXd za = model.encode(a, 0.0);
    const Eigen::VectorXd zb = model.encode(b, 0.0);
    for (double t : {0.25, 0.5, 0.9}) {
        const Eigen::MatrixXcd mid = model.scaled_gram((1 - t) * za + t * zb);
        const Eigen::MatrixXcd lin = (1 - t) * model.scaled_gram(za) + t * model.scaled_gram(zb);
        CHECK((mid - lin).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, lin.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("eigen cuts separate their generating point and keep feasible points")
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        const Instance in = make_instance(2, 2, 2, 2, rng);
        const AnalogBfModel model(in.ch, in.phi, analog_powers(in.zf), 2);
        const PhaseIndexMatrix m = PhaseIndexMatrix::uniform_random(2, 2, rng);
        const double w_star = model.scaled_epigraph(m);
        if (!std::isfinite(w_star)) {
            continue;
        }
        const Eigen::VectorXd low = model.encode(m, 0.5 * w_star);
        const auto cuts = model.eigen_separation(low, 3);
        REQUIRE_FALSE(cuts.empty());
        const auto boundary = model.boundary_cut(low);
        REQUIRE(boundary.has_value());
        CHECK(boundary->constraint.slack(low) < 0);
        CHECK(std::abs(boundary->constraint.slack(model.encode(m, w_star))) < 1e-7);
        for (const auto& c : cuts) {
            CHECK(c.eigenvalue < 0);
            CHECK(c.constraint.slack(low) < 0);
            CHECK(c.constraint.slack(low) == doctest::Approx(c.eigenvalue).epsilon(1e-8));
            // every configuration at its own epigraph value satisfies the cut
            oracle::for_each_configuration(2, 2, [&](const PhaseIndexMatrix& other) {
                const double w = model.scaled_epigraph(other);
                if (std::isfinite(w)) {
                    CHECK(c.constraint.slack(model.encode(other, w * (1 + 1e-9))) >= -1e-9);
                }
            });
        }
        CHECK(model.eigen_separation(model.encode(m, w_star * (1 + 1e-6))).empty());
    }
}

TEST_CASE("no-good cut removes exactly one configuration")
{
    std::mt19937_64 rng(8);
    const Instance in = make_instance(2, 2, 2, 1, rng);
    const AnalogBfModel model(in.ch, in.phi, analog_powers(in.zf), 1);
    const PhaseIndexMatrix target = PhaseIndexMatrix::uniform_random(2, 1, rng);
    const auto cut = model.no_good_cut(model.encode(target, 1.0));
    int violated = 0;
    oracle::for_each_configuration(2, 1, [&](const PhaseIndexMatrix& m) {
        if (cut.slack(model.encode(m, 1.0)) < 0) {
            ++violated;
            CHECK(m == target);
        }
    });
    CHECK(violated == 1);
}

TEST_CASE("row balance constraint admits exactly the balanced surfaces")
{
    std::mt19937_64 rng(9);
    const Instance in = make_instance(2, 2, 2, 2, rng);
    const AnalogBfModel model(in.ch, in.phi, analog_powers(in.zf), 2, true);
    int feasible = 0;
    oracle::for_each_configuration(2, 2, [&](const PhaseIndexMatrix& m) {
        double r0 = 0, r1 = 0;
        for (int l2 = 0; l2 < 2; ++l2) {
            r0 += 1 + std::sin(m(0, l2) * M_PI / 2);
            r1 += 1 + std::sin(m(1, l2) * M_PI / 2);
        }
        const bool balanced = std::abs(r0 - r1) < 1e-12;
        const bool ok = model.milp().lp.max_violation(model.encode(m, 1e6)) < 1e-9;
        CHECK(ok == balanced);
        feasible += ok ? 1 : 0;
    });
    // count pairs of rows with equal sums, each element contributing 1 + sin in {1, 2, 1, 0}
    int expected = 0;
    for (int s = 0; s <= 4; ++s) {
        int c = 0;
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                const int va = a == 1 ? 2 : (a == 3 ? 0 : 1);
                const int vb = b == 1 ? 2 : (b == 3 ? 0 : 1);
                c += va + vb == s ? 1 : 0;
            }
        }
        expected += c * c;
    }
    CHECK(feasible == expected);
}

TEST_CASE("single element picks the full-amplitude phase")
{
    std::mt19937_64 rng(10);
    const ChannelTensor ch = oracle::random_channel(1, 1, 1, rng);
    const Eigen::VectorXcd phi = Eigen::VectorXcd::Ones(1);
    const PhaseIndexMatrix init(1, 2, 0);
    const ZfSolution zf = digital_beamforming(assemble_f(ch, init, phi), 1.0, 0.1);
    const AnalogBfResult r = analog_beamforming(ch, phi, zf, init);
    CHECK(r.status == milp::MilpStatus::kOptimal);
    CHECK(r.phases(0, 0) == 1);
}

TEST_CASE("analog step equals enumeration at one bit")
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 5; ++t) {
        const Instance in = make_instance(2, 2, 2, 1, rng);
        const Eigen::VectorXd powers = analog_powers(in.zf);
        const AnalogBfResult r = analog_beamforming(in.ch, in.phi, in.zf, in.init);
        REQUIRE(r.status == milp::MilpStatus::kOptimal);
        const double best = enumerate_best_epigraph(in, powers, 1);
        CHECK(std::abs(r.epigraph_exact - best) <= 1e-6 * best);
        CHECK(std::abs(r.w - r.epigraph_exact) <= 1e-6 * best);
        const Eigen::MatrixXcd f = oracle::naive_f(in.ch, oracle::naive_q(r.phases), {1.0, 1.0});
        CHECK(std::abs(oracle::epigraph_naive(oracle::naive_gram(f, powers)) - r.epigraph_exact) < 1e-9 * best);
    }
}

TEST_CASE("outer loop rounds are nondecreasing and agree with the lazy search")
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 3; ++t) {
        const Instance in = make_instance(2, 2, 2, 1, rng);
        AnalogBfOptions opts;
        opts.mode = AnalogBfOptions::Mode::kOuterLoop;
        const AnalogBfResult outer = analog_beamforming(in.ch, in.phi, in.zf, in.init, opts);
        const AnalogBfResult lazy = analog_beamforming(in.ch, in.phi, in.zf, in.init);
        REQUIRE(outer.status == milp::MilpStatus::kOptimal);
        REQUIRE_FALSE(outer.round_objectives.empty());
        for (std::size_t i = 1; i < outer.round_objectives.size(); ++i) {
            CHECK(outer.round_objectives[i] >= outer.round_objectives[i - 1] - 1e-9 * outer.round_objectives[i]);
        }
        CHECK(std::abs(outer.epigraph_exact - lazy.epigraph_exact) <= 1e-6 * lazy.epigraph_exact);
    }
}

TEST_CASE("oa trace csv")
{
    std::mt19937_64 rng(13);
    const Instance in = make_instance(2, 2, 2, 1, rng);
    const AnalogBfResult r = analog_beamforming(in.ch, in.phi, in.zf, in.init);
    std::ostringstream out;
    write_oa_trace_csv(out, r.trace);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "call,cuts,lambda_min,w,trace_objective");
    long n = 0;
    for (std::string l; std::getline(lines, l);) {
        ++n;
    }
    CHECK(n == static_cast<long>(r.trace.size()));
    long cuts = 0;
    for (const auto& row : r.trace) {
        cuts += row.cuts;
    }
    CHECK(cuts == r.cuts);
}
