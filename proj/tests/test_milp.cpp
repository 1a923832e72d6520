#include "oracles.hpp"

#include "rishbf/milp.hpp"

#include <doctest.h>

#include <sstream>

using namespace rishbf::milp;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) {
        out(i++) = x;
    }
    return out;
}

// max c^T x, A x <= b, x >= 0 with A, b > 0 (always feasible and bounded).
struct RandomLp {
    Eigen::MatrixXd a;
    Eigen::VectorXd b, c;
};

RandomLp random_lp(int m, int n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RandomLp r{Eigen::MatrixXd(m, n), Eigen::VectorXd(m), Eigen::VectorXd(n)};
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            r.a(i, j) = u(rng) < 0.3 ? 0.0 : 0.1 + u(rng);
        }
        r.b(i) = 1.0 + 5.0 * u(rng);
    }
    for (int j = 0; j < n; ++j) {
        r.c(j) = 2.0 * u(rng) - 0.5;
        r.a(j % m, j) = std::max(r.a(j % m, j), 0.5);  // every column is bounded by some row
    }
    return r;
}

LpProblem as_problem(const RandomLp& r)
{
    LpProblem lp(static_cast<int>(r.c.size()));
    lp.objective = -r.c;
    for (int i = 0; i < r.a.rows(); ++i) {
        lp.add_constraint(r.a.row(i).transpose(), Sense::kLessEqual, r.b(i));
    }
    return lp;
}

std::vector<LinearConstraint> no_good(const Eigen::VectorXd& x)
{
    Eigen::VectorXd c(x.size());
    double ones = 0;
    for (int j = 0; j < x.size(); ++j) {
        c(j) = x(j) > 0.5 ? 1.0 : -1.0;
        ones += x(j) > 0.5 ? 1.0 : 0.0;
    }
    return {LinearConstraint{c, Sense::kLessEqual, ones - 1.0, "nogood"}};
}

MilpModel random_binary_milp(int n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> rows(1, 4);
    MilpModel m;
    m.lp = LpProblem(n);
    for (int j = 0; j < n; ++j) {
        m.lp.objective(j) = u(rng);
        m.lp.upper(j) = 1.0;
    }
    const int r = rows(rng);
    for (int i = 0; i < r; ++i) {
        Eigen::VectorXd a(n);
        for (int j = 0; j < n; ++j) {
            a(j) = std::round(4 * u(rng));
        }
        const Sense s = i % 3 == 0 ? Sense::kGreaterEqual : Sense::kLessEqual;
        m.lp.add_constraint(a, s, std::round(2 * u(rng)));
    }
    m.integer.assign(static_cast<std::size_t>(n), true);
    return m;
}

}  // namespace

TEST_CASE("lp: single lower bound row")
{
    LpProblem lp(1);
    lp.objective(0) = 1.0;
    lp.add_constraint(vec({1.0}), Sense::kGreaterEqual, 3.0);
    const LpResult r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::kOptimal);
    CHECK(r.x(0) == doctest::Approx(3.0));
    CHECK(r.objective == doctest::Approx(3.0));
}

TEST_CASE("lp: simplex edge")
{
    LpProblem lp(2);
    lp.objective = vec({-1.0, -1.0});
    lp.add_constraint(vec({1.0, 1.0}), Sense::kLessEqual, 1.0);
    const LpResult r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::kOptimal);
    CHECK(r.objective == doctest::Approx(-1.0));
    CHECK(r.x.sum() == doctest::Approx(1.0));
    CHECK(r.x.minCoeff() >= -1e-12);
}

TEST_CASE("lp: infeasible and unbounded")
{
    LpProblem inf(2);
    inf.add_constraint(vec({1.0, 1.0}), Sense::kLessEqual, 1.0);
    inf.add_constraint(vec({1.0, 1.0}), Sense::kGreaterEqual, 2.0);
    CHECK(solve_lp(inf).status == LpStatus::kInfeasible);
    CHECK(solve_lp_primal(inf).status == LpStatus::kInfeasible);

    LpProblem unb(2);
    unb.objective = vec({-1.0, 0.0});
    unb.add_constraint(vec({1.0, -1.0}), Sense::kLessEqual, 1.0);
    CHECK(solve_lp(unb).status == LpStatus::kUnbounded);

    LpProblem bounds(1);
    bounds.lower(0) = 2.0;
    bounds.upper(0) = 1.0;
    CHECK(solve_lp(bounds).status == LpStatus::kInfeasible);
}

TEST_CASE("lp: free and negative-bounded variables")
{
    LpProblem lp(2);
    lp.lower = vec({-kInf, -5.0});
    lp.upper = vec({kInf, -1.0});
    lp.objective = vec({1.0, 1.0});
    lp.add_constraint(vec({1.0, -1.0}), Sense::kGreaterEqual, 2.0);
    const LpResult r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::kOptimal);
    CHECK(r.x(1) == doctest::Approx(-5.0));
    CHECK(r.x(0) == doctest::Approx(-3.0));
}

TEST_CASE("lp: degenerate cycling example terminates")
{
    // Beale's example, which cycles under the textbook largest-coefficient rule.
    LpProblem lp(4);
    lp.objective = vec({-0.75, 150.0, -0.02, 6.0});
    lp.add_constraint(vec({0.25, -60.0, -0.04, 9.0}), Sense::kLessEqual, 0.0);
    lp.add_constraint(vec({0.5, -90.0, -0.02, 3.0}), Sense::kLessEqual, 0.0);
    lp.add_constraint(vec({0.0, 0.0, 1.0, 0.0}), Sense::kLessEqual, 1.0);
    const LpResult r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::kOptimal);
    CHECK(r.objective == doctest::Approx(-0.05));
}

TEST_CASE("lp: random problems against the tableau oracle")
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t) {
        const RandomLp r = random_lp(10, 20, rng);
        const LpProblem lp = as_problem(r);
        const LpResult got = solve_lp(lp);
        const oracle::TableauResult ref = oracle::tableau_max(r.a, r.b, r.c);
        REQUIRE(ref.optimal);
        REQUIRE(got.status == LpStatus::kOptimal);
        CHECK(std::abs(-got.objective - ref.value) < 1e-7);
        CHECK(lp.max_violation(got.x) < 1e-8);
        const LpResult primal = solve_lp_primal(lp);
        CHECK(std::abs(primal.objective - got.objective) < 1e-7);
    }
}

TEST_CASE("lp: warm start after adding rows and changing bounds")
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 30; ++t) {
        const RandomLp r = random_lp(8, 12, rng);
        LpProblem lp = as_problem(r);
        const LpResult first = solve_lp(lp);
        REQUIRE(first.status == LpStatus::kOptimal);
        Eigen::VectorXd cut = Eigen::VectorXd::Ones(12);
        lp.add_constraint(cut, Sense::kLessEqual, 0.5 * first.x.sum());
        lp.upper(t % 12) = 0.1;
        const LpResult warm = solve_lp(lp, {}, first.basis.empty() ? nullptr : &first.basis);
        const LpResult cold = solve_lp_primal(lp);
        REQUIRE(warm.status == cold.status);
        if (cold.status == LpStatus::kOptimal) {
            CHECK(std::abs(warm.objective - cold.objective) < 1e-7);
            CHECK(lp.max_violation(warm.x) < 1e-8);
        }
    }
}

TEST_CASE("milp: knapsack equals enumeration")
{
    MilpModel m;
    m.lp = LpProblem(5);
    m.lp.objective = -vec({10, 13, 7, 8, 4});
    m.lp.upper = Eigen::VectorXd::Ones(5);
    m.lp.add_constraint(vec({5, 7, 4, 5, 3}), Sense::kLessEqual, 14);
    m.integer.assign(5, true);
    const MilpResult r = solve_milp(m);
    REQUIRE(r.status == MilpStatus::kOptimal);
    const auto ref = oracle::enumerate_binary(m.lp);
    REQUIRE(ref);
    CHECK(r.objective == doctest::Approx(*ref));
    CHECK(r.objective == doctest::Approx(-25.0));
}

TEST_CASE("milp: continuous model equals the LP")
{
    std::mt19937_64 rng(14);
    const RandomLp r = random_lp(6, 9, rng);
    MilpModel m;
    m.lp = as_problem(r);
    m.integer.assign(9, false);
    const MilpResult got = solve_milp(m);
    const LpResult lp = solve_lp(m.lp);
    REQUIRE(got.status == MilpStatus::kOptimal);
    CHECK(got.objective == doctest::Approx(lp.objective).epsilon(1e-12));
    CHECK(got.nodes == 1);
}

TEST_CASE("milp: a callback that rejects everything ends infeasible")
{
    MilpModel m;
    m.lp = LpProblem(4);
    m.lp.objective = vec({1, -2, 3, -1});
    m.lp.upper = Eigen::VectorXd::Ones(4);
    m.integer.assign(4, true);
    long calls = 0;
    m.lazy_cuts = [&](const Eigen::VectorXd& x) {
        ++calls;
        return no_good(x);
    };
    const MilpResult r = solve_milp(m);
    CHECK(r.status == MilpStatus::kInfeasible);
    CHECK_FALSE(r.has_incumbent);
    CHECK(calls >= 16);
    CHECK(r.cuts_added == calls);
}

TEST_CASE("milp: lazy cuts are violated by their generating point")
{
    std::mt19937_64 rng(15);
    for (int t = 0; t < 20; ++t) {
        MilpModel m = random_binary_milp(8, rng);
        // forbid the first three integer points the search proposes
        int budget = 3;
        std::vector<std::pair<Eigen::VectorXd, LinearConstraint>> seen;
        m.lazy_cuts = [&](const Eigen::VectorXd& x) -> std::vector<LinearConstraint> {
            if (budget-- <= 0) {
                return {};
            }
            auto cuts = no_good(x);
            seen.emplace_back(x, cuts[0]);
            return cuts;
        };
        const MilpResult r = solve_milp(m);
        for (const auto& [x, cut] : seen) {
            CHECK(cut.slack(x) < -1e-9);
            if (r.has_incumbent) {
                CHECK(cut.slack(r.x) >= -1e-9);
            }
        }
    }
}

TEST_CASE("milp: random binary models equal enumeration")
{
    std::mt19937_64 rng(16);
    for (int t = 0; t < 60; ++t) {
        const MilpModel m = random_binary_milp(4 + t % 9, rng);
        const MilpResult r = solve_milp(m);
        const auto ref = oracle::enumerate_binary(m.lp);
        if (!ref) {
            CHECK(r.status == MilpStatus::kInfeasible);
            continue;
        }
        REQUIRE(r.status == MilpStatus::kOptimal);
        CHECK(std::abs(r.objective - *ref) < 1e-7);
        CHECK(m.lp.max_violation(r.x) < 1e-7);
    }
}

TEST_CASE("milp: one-hot groups and warm start")
{
    // pick one of four options per block, cost table, coupling row
    MilpModel m;
    m.lp = LpProblem(8);
    m.lp.objective = vec({3, 1, 4, 1, 5, 9, 2, 6});
    m.lp.upper = Eigen::VectorXd::Ones(8);
    m.lp.add_constraint(vec({1, 1, 1, 1, 0, 0, 0, 0}), Sense::kEqual, 1);
    m.lp.add_constraint(vec({0, 0, 0, 0, 1, 1, 1, 1}), Sense::kEqual, 1);
    m.lp.add_constraint(vec({0, 1, 0, 1, 0, 0, 1, 0}), Sense::kLessEqual, 1);
    m.integer.assign(8, true);
    m.sos1_groups = {{0, 1, 2, 3}, {4, 5, 6, 7}};
    m.warm_start = vec({1, 0, 0, 0, 1, 0, 0, 0});
    const MilpResult r = solve_milp(m);
    REQUIRE(r.status == MilpStatus::kOptimal);
    CHECK(r.objective == doctest::Approx(*oracle::enumerate_binary(m.lp)));
    CHECK(r.objective == doctest::Approx(5.0));
}

TEST_CASE("milp: node limit keeps the incumbent")
{
    // max sum x with 2 sum x <= 11: the relaxation sits at 5.5, integers at 5
    MilpModel m;
    m.lp = LpProblem(12);
    m.lp.objective = -Eigen::VectorXd::Ones(12);
    m.lp.upper = Eigen::VectorXd::Ones(12);
    m.lp.add_constraint(Eigen::VectorXd::Constant(12, 2.0), Sense::kLessEqual, 11.0);
    m.integer.assign(12, true);
    m.node_limit = 1;
    m.warm_start = Eigen::VectorXd::Zero(12);
    m.warm_start->head(4).setOnes();
    const MilpResult r = solve_milp(m);
    CHECK(r.status == MilpStatus::kNodeLimit);
    CHECK(r.has_incumbent);
    CHECK(r.objective <= -4.0);
    CHECK(r.best_bound <= r.objective + 1e-12);
    CHECK(r.best_bound >= -5.5 - 1e-9);
}

TEST_CASE("milp: validation")
{
    MilpModel m;
    m.lp = LpProblem(2);
    m.integer.assign(1, true);
    CHECK_THROWS_AS(solve_milp(m), std::invalid_argument);
    m.integer.assign(2, true);
    m.branch_priority = {1};
    CHECK_THROWS_AS(solve_milp(m), std::invalid_argument);
    m.branch_priority.clear();
    m.sos1_groups = {{0, 5}};
    CHECK_THROWS_AS(solve_milp(m), std::invalid_argument);
}

TEST_CASE("lp format dump")
{
    MilpModel m;
    m.lp = LpProblem(3);
    m.lp.objective = vec({1, -2, 0});
    m.lp.upper = vec({1, 4, kInf});
    m.lp.add_constraint(vec({1, 1, 0}), Sense::kLessEqual, 3, "cap");
    m.lp.add_constraint(vec({0, 1, -1}), Sense::kEqual, 0);
    m.integer = {true, true, false};
    std::ostringstream out;
    write_lp_format(out, m);
    const std::string s = out.str();
    CHECK(s.find("Minimize\n obj: 1 x0 - 2 x1") != std::string::npos);
    CHECK(s.find(" cap: 1 x0 + 1 x1 <= 3") != std::string::npos);
    CHECK(s.find(" c1: 1 x1 - 1 x2 = 0") != std::string::npos);
    CHECK(s.find("0 <= x2 <= +inf") != std::string::npos);
    CHECK(s.find("Binaries\n x0") != std::string::npos);
    CHECK(s.find("Generals\n x1") != std::string::npos);
    CHECK(s.rfind("End\n") == s.size() - 4);
}
