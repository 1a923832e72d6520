#ifndef RISHBF_MILP_HPP
#define RISHBF_MILP_HPP

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rishbf::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct LinearConstraint {
    Eigen::VectorXd coeffs;  // dense, one entry per variable
    Sense sense = Sense::kLessEqual;
    double rhs = 0.0;
    std::string name;

    double activity(const Eigen::VectorXd& x) const { return coeffs.dot(x); }
    /// Signed slack; negative means violated.
    double slack(const Eigen::VectorXd& x) const;
};

/// minimize objective^T x + objective_offset subject to constraints and lower <= x <= upper.
struct LpProblem {
    Eigen::VectorXd objective;
    double objective_offset = 0.0;
    std::vector<LinearConstraint> constraints;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    LpProblem() = default;
    /// n variables in [0, +inf) with zero cost.
    explicit LpProblem(int n);

    int num_vars() const { return static_cast<int>(objective.size()); }
    void add_constraint(Eigen::VectorXd coeffs, Sense sense, double rhs, std::string name = {});
    /// Throws std::invalid_argument on inconsistent dimensions or non-finite data.
    void validate() const;
    /// Largest bound or row violation at x.
    double max_violation(const Eigen::VectorXd& x) const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpOptions {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-9;
    long max_iterations = 200000;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    int degenerate_streak = 50;
};

/// Basis over the columns [x (n), row slacks (m)], row i reading a_i x + s_i = b_i
/// with s_i >= 0 for <=, s_i <= 0 for >= and s_i = 0 for = rows.
struct LpBasis {
    std::vector<int> basic;      // one column per row
    std::vector<char> at_upper;  // nonbasic columns resting at their upper bound
    bool empty() const { return basic.empty(); }
};

struct LpResult {
    LpStatus status = LpStatus::kInfeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    long iterations = 0;
    LpBasis basis;     // filled when the dual method produced the answer
    bool warm = false;  // the warm basis was usable
};

/// Bounded-variable simplex on a dense tableau. When every nonbasic column
/// can be placed at a finite bound with the right reduced-cost sign (always
/// true from the slack basis if all costs point at finite bounds, and for the
/// final basis of a parent problem), the dual method is used; rows appended
/// since `warm` was recorded start with their slack basic. Otherwise a
/// two-phase primal method runs. Both fall back to Bland's rule on long
/// degenerate runs, so they always terminate. Final basic values are
/// recomputed from an LU of the basis.
LpResult solve_lp(const LpProblem& problem, const LpOptions& options = {}, const LpBasis* warm = nullptr);

/// Two-phase primal method only (the cold path of solve_lp).
LpResult solve_lp_primal(const LpProblem& problem, const LpOptions& options = {});

/// Cut generator for an integer-feasible candidate. Returned cuts must be
/// violated by the candidate; an empty result accepts it.
using CutCallback = std::function<std::vector<LinearConstraint>(const Eigen::VectorXd&)>;

struct MilpModel {
    LpProblem lp;
    std::vector<bool> integer;  // integrality mask, one per variable
    /// One-hot binary blocks (each with a sum-to-one row in lp); branching
    /// splits a block instead of a single variable.
    std::vector<std::vector<int>> sos1_groups;
    CutCallback lazy_cuts;
    /// Optional per-variable branching priority; fractional variables of the
    /// highest priority are branched on first (most-fractional within it).
    std::vector<int> branch_priority;
    long node_limit = 100000;
    long cut_limit = 100000;
    double gap_tolerance = 1e-6;       // absolute
    double integrality_tol = 1e-6;
    /// Optional known-feasible point used as the first incumbent.
    std::optional<Eigen::VectorXd> warm_start;
    LpOptions lp_options;

    void validate() const;
};

enum class MilpStatus { kOptimal, kInfeasible, kNodeLimit };

struct MilpResult {
    MilpStatus status = MilpStatus::kInfeasible;
    bool has_incumbent = false;
    Eigen::VectorXd x;
    double objective = kInf;
    double best_bound = -kInf;
    long nodes = 0;
    long cuts_added = 0;
    long lp_iterations = 0;
    std::vector<LinearConstraint> cuts;  // every cut appended during the search
};

/// Best-first branch-and-bound (ties broken by node creation order) with
/// most-fractional branching and lazy cuts at integer-feasible nodes.
/// Throws std::runtime_error when an LP relaxation is unbounded.
MilpResult solve_milp(const MilpModel& model);

const char* to_string(LpStatus s);
const char* to_string(MilpStatus s);

/// CPLEX-LP style text dump: Minimize / Subject To / Bounds / Binaries /
/// Generals / End. Variables are named x0, x1, ...
void write_lp_format(std::ostream& out, const MilpModel& model);

}  // namespace rishbf::milp

#endif  // RISHBF_MILP_HPP
