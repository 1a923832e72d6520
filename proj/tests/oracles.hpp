// Independent reference computations used by the unit and acceptance tests.
// Everything here is written against plain loops or textbook algorithms, not
// against the library code paths it checks.

#ifndef RISHBF_TESTS_ORACLES_HPP
#define RISHBF_TESTS_ORACLES_HPP

#include "rishbf/channel.hpp"
#include "rishbf/milp.hpp"
#include "rishbf/phase.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

inline Eigen::MatrixXcd random_complex(int rows, int cols, std::mt19937_64& rng, double sd = 1.0)
{
    std::normal_distribution<double> n(0.0, sd);
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = cd(n(rng), n(rng));
        }
    }
    return m;
}

/// Channel tensor with i.i.d. CN(0, 2 sd^2) entries in both h_los and h_total.
inline rishbf::ChannelTensor random_channel(int k, int n_t, int n_r, std::mt19937_64& rng)
{
    rishbf::ChannelTensor ch;
    ch.k_users = k;
    ch.n_t = n_t;
    ch.n_r = n_r;
    for (int p = 0; p < n_r * n_r; ++p) {
        ch.h_total.push_back(random_complex(k, n_t, rng));
    }
    ch.h_los = ch.h_total;
    ch.pathloss_los = Eigen::VectorXd::Ones(k);
    return ch;
}

/// (j + e^{j theta}) / 2 from the complex exponential.
inline cd q_naive(double theta)
{
    return (cd(0, 1) + std::exp(cd(0, theta))) / 2.0;
}

/// F by an explicit quadruple loop over (k, n, l1, l2).
inline Eigen::MatrixXcd naive_f(const rishbf::ChannelTensor& ch, const std::vector<cd>& q, const std::vector<cd>& phi)
{
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(ch.k_users, ch.n_t);
    for (int k = 0; k < ch.k_users; ++k) {
        for (int n = 0; n < ch.n_t; ++n) {
            cd acc = 0;
            for (int l1 = 0; l1 < ch.n_r; ++l1) {
                for (int l2 = 0; l2 < ch.n_r; ++l2) {
                    acc += q[static_cast<std::size_t>(l1 * ch.n_r + l2)] * ch.total(k, n, l1, l2) *
                           phi[static_cast<std::size_t>(k)];
                }
            }
            f(k, n) = acc;
        }
    }
    return f;
}

inline std::vector<cd> naive_q(const rishbf::PhaseIndexMatrix& m)
{
    std::vector<cd> q;
    for (int l1 = 0; l1 < m.n_r(); ++l1) {
        for (int l2 = 0; l2 < m.n_r(); ++l2) {
            q.push_back(q_naive(m(l1, l2) * M_PI / std::pow(2.0, m.bits() - 1)));
        }
    }
    return q;
}

/// diag(p)^{-1/2} F F^H diag(p)^{-1/2} entry by entry.
inline Eigen::MatrixXcd naive_gram(const Eigen::MatrixXcd& f, const Eigen::VectorXd& p)
{
    const int k = static_cast<int>(f.rows());
    Eigen::MatrixXcd g(k, k);
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            cd acc = 0;
            for (int n = 0; n < f.cols(); ++n) {
                acc += f(a, n) * std::conj(f(b, n));
            }
            g(a, b) = acc / std::sqrt(p(a) * p(b));
        }
    }
    return g;
}

/// K * lambda_max(G^{-1}) from an explicit inverse, +inf if G is singular.
inline double epigraph_naive(const Eigen::MatrixXcd& g)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(g);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        lo = std::min(lo, es.eigenvalues()(i).real());
        hi = std::max(hi, es.eigenvalues()(i).real());
    }
    if (!(lo > 1e-12 * hi)) {
        return std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(g.rows()) / lo;
}

/// Calls fn on every configuration of an n_r x n_r surface (odometer order).
inline void for_each_configuration(int n_r, int bits, const std::function<void(const rishbf::PhaseIndexMatrix&)>& fn)
{
    rishbf::PhaseIndexMatrix m(n_r, bits, 0);
    const int e = n_r * n_r;
    const int base = 1 << bits;
    while (true) {
        fn(m);
        int p = 0;
        while (p < e) {
            const int v = m.at(p) + 1;
            if (v < base) {
                m.set(p, v);
                break;
            }
            m.set(p, 0);
            ++p;
        }
        if (p == e) {
            return;
        }
    }
}

/// Smallest w with lambda_min([[w/K I, I], [I, G]]) >= 0 by bisection.
inline double schur_bisection(const Eigen::MatrixXcd& g, double tol = 1e-12)
{
    const int k = static_cast<int>(g.rows());
    auto lam = [&](double w) {
        Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(2 * k, 2 * k);
        for (int i = 0; i < k; ++i) {
            z(i, i) = w / k;
            z(i, k + i) = 1.0;
            z(k + i, i) = 1.0;
        }
        z.bottomRightCorner(k, k) = g;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(z, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    };
    double lo = 0.0;
    double hi = 1.0;
    while (lam(hi) < 0) {
        hi *= 2;
    }
    while (hi - lo > tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (lam(mid) >= 0 ? hi : lo) = mid;
    }
    return hi;
}

/// Per-user SINR rates by scalar loops.
inline std::vector<double> scalar_rates(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& v, double noise)
{
    std::vector<double> r;
    for (int k = 0; k < f.rows(); ++k) {
        double sig = 0, intf = 0;
        for (int j = 0; j < v.cols(); ++j) {
            cd acc = 0;
            for (int n = 0; n < f.cols(); ++n) {
                acc += f(k, n) * v(n, j);
            }
            (j == k ? sig : intf) += std::norm(acc);
        }
        r.push_back(std::log2(1.0 + sig / (intf + noise)));
    }
    return r;
}

/// Best objective of max sum log2(1 + p_k / s2) s.t. nu1 p1 + nu2 p2 <= P on a
/// grid over p1 (p2 takes the rest of the budget).
inline double water_filling_grid(double nu1, double nu2, double p_total, double s2, int points = 1000000)
{
    double best = -1;
    for (int i = 0; i <= points; ++i) {
        const double p1 = p_total / nu1 * i / points;
        const double p2 = (p_total - nu1 * p1) / nu2;
        best = std::max(best, std::log2(1 + p1 / s2) + std::log2(1 + std::max(p2, 0.0) / s2));
    }
    return best;
}

struct TableauResult {
    bool optimal = false;
    bool unbounded = false;
    double value = 0.0;
    Eigen::VectorXd x;
};

/// Textbook dense tableau: maximize c^T x s.t. A x <= b, x >= 0, with b >= 0
/// so the slack basis is feasible. Bland's rule throughout.
inline TableauResult tableau_max(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c)
{
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
    t.topLeftCorner(m, n) = a;
    t.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
    t.col(n + m).head(m) = b;
    t.row(m).head(n) = -c.transpose();
    std::vector<int> basis(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        basis[static_cast<std::size_t>(i)] = n + i;
    }
    TableauResult r;
    for (int iter = 0; iter < 100000; ++iter) {
        int enter = -1;
        for (int j = 0; j < n + m; ++j) {
            if (t(m, j) < -1e-12) {
                enter = j;
                break;
            }
        }
        if (enter < 0) {
            r.optimal = true;
            break;
        }
        int leave = -1;
        double ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (t(i, enter) > 1e-12) {
                const double q = t(i, n + m) / t(i, enter);
                if (q < ratio - 1e-15 || (std::abs(q - ratio) <= 1e-15 && leave >= 0 &&
                                          basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                    ratio = q;
                    leave = i;
                }
            }
        }
        if (leave < 0) {
            r.unbounded = true;
            return r;
        }
        t.row(leave) /= t(leave, enter);
        for (int i = 0; i <= m; ++i) {
            if (i != leave && t(i, enter) != 0.0) {
                t.row(i) -= t(i, enter) * t.row(leave);
            }
        }
        basis[static_cast<std::size_t>(leave)] = enter;
    }
    r.x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) {
        if (basis[static_cast<std::size_t>(i)] < n) {
            r.x(basis[static_cast<std::size_t>(i)]) = t(i, n + m);
        }
    }
    r.value = t(m, n + m);
    return r;
}

/// Minimum of a pure-binary model by enumeration of all 2^n points; nullopt
/// when no point is feasible.
inline std::optional<double> enumerate_binary(const rishbf::milp::LpProblem& lp)
{
    const int n = lp.num_vars();
    std::optional<double> best;
    Eigen::VectorXd x(n);
    for (long mask = 0; mask < (1L << n); ++mask) {
        for (int j = 0; j < n; ++j) {
            x(j) = (mask >> j) & 1;
        }
        bool ok = true;
        for (const auto& c : lp.constraints) {
            const double act = c.coeffs.dot(x);
            switch (c.sense) {
            case rishbf::milp::Sense::kLessEqual: ok = act <= c.rhs + 1e-9; break;
            case rishbf::milp::Sense::kGreaterEqual: ok = act >= c.rhs - 1e-9; break;
            case rishbf::milp::Sense::kEqual: ok = std::abs(act - c.rhs) <= 1e-9; break;
            }
            if (!ok) {
                break;
            }
        }
        if (ok) {
            const double v = lp.objective.dot(x) + lp.objective_offset;
            if (!best || v < *best) {
                best = v;
            }
        }
    }
    return best;
}

}  // namespace oracle

#endif  // RISHBF_TESTS_ORACLES_HPP
