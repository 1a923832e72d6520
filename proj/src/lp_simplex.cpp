#include "rishbf/milp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace rishbf::milp {

double LinearConstraint::slack(const Eigen::VectorXd& x) const
{
    const double act = activity(x);
    switch (sense) {
    case Sense::kLessEqual: return rhs - act;
    case Sense::kGreaterEqual: return act - rhs;
    case Sense::kEqual: return -std::abs(act - rhs);
    }
    return 0.0;
}

LpProblem::LpProblem(int n)
    : objective(Eigen::VectorXd::Zero(n)),
      lower(Eigen::VectorXd::Zero(n)),
      upper(Eigen::VectorXd::Constant(n, kInf))
{
}

void LpProblem::add_constraint(Eigen::VectorXd coeffs, Sense sense, double rhs, std::string name)
{
    constraints.push_back(LinearConstraint{std::move(coeffs), sense, rhs, std::move(name)});
}

void LpProblem::validate() const
{
    const auto n = objective.size();
    if (lower.size() != n || upper.size() != n) {
        throw std::invalid_argument("LpProblem: bound vectors must match the objective length");
    }
    if (!objective.allFinite() || !std::isfinite(objective_offset)) {
        throw std::invalid_argument("LpProblem: non-finite objective");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::isnan(lower(j)) || std::isnan(upper(j)) || lower(j) == kInf || upper(j) == -kInf) {
            throw std::invalid_argument("LpProblem: invalid bounds on variable " + std::to_string(j));
        }
    }
    for (const auto& c : constraints) {
        if (c.coeffs.size() != n) {
            throw std::invalid_argument("LpProblem: constraint '" + c.name + "' has wrong length");
        }
        if (!c.coeffs.allFinite() || !std::isfinite(c.rhs)) {
            throw std::invalid_argument("LpProblem: non-finite constraint '" + c.name + "'");
        }
    }
}

double LpProblem::max_violation(const Eigen::VectorXd& x) const
{
    double worst = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        worst = std::max({worst, lower(j) - x(j), x(j) - upper(j)});
    }
    for (const auto& c : constraints) {
        worst = std::max(worst, -c.slack(x));
    }
    return worst;
}

const char* to_string(LpStatus s)
{
    switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
    }
    return "?";
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// How an original variable maps onto nonnegative standard-form columns.
struct VarMap {
    enum Kind { kShift, kFlip, kSplit } kind = kShift;
    int column = 0;  // first standard column
    double anchor = 0.0;
};

class BoundedSimplex {
public:
    BoundedSimplex(const LpProblem& lp, const LpOptions& opt) : lp_(lp), opt_(opt) {}

    LpResult run()
    {
        LpResult result;
        if (!build()) {
            result.status = LpStatus::kInfeasible;
            return result;
        }

        // Phase 1: minimise the sum of artificials.
        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols_);
        phase1.tail(rows_).setOnes();
        LpStatus st = iterate(phase1);
        result.iterations = iterations_;
        if (st == LpStatus::kIterationLimit) {
            result.status = st;
            return result;
        }
        double infeasibility = 0.0;
        for (int i = 0; i < rows_; ++i) {
            if (basis_[i] >= art_begin_) {
                infeasibility += beta_(i);
            }
        }
        const double bmax = rows_ > 0 ? b_.cwiseAbs().maxCoeff() : 0.0;
        if (infeasibility > 1e-8 * (1.0 + bmax)) {
            result.status = LpStatus::kInfeasible;
            return result;
        }
        for (int j = art_begin_; j < cols_; ++j) {
            upper_(j) = 0.0;
        }
        drive_out_artificials();

        // Phase 2.
        st = iterate(cost_);
        result.iterations = iterations_;
        if (st != LpStatus::kOptimal) {
            result.status = st;
            return result;
        }
        polish();

        result.status = LpStatus::kOptimal;
        result.x = recover();
        result.objective = lp_.objective.dot(result.x) + lp_.objective_offset;
        return result;
    }

private:
    bool build()
    {
        const int n = lp_.num_vars();
        maps_.resize(static_cast<std::size_t>(n));
        std::vector<double> col_upper;
        std::vector<double> col_cost;
        for (int j = 0; j < n; ++j) {
            const double lo = lp_.lower(j);
            const double hi = lp_.upper(j);
            if (lo > hi) {
                return false;
            }
            VarMap& m = maps_[static_cast<std::size_t>(j)];
            m.column = static_cast<int>(col_upper.size());
            if (std::isfinite(lo)) {
                m.kind = VarMap::kShift;
                m.anchor = lo;
                col_upper.push_back(hi - lo);
                col_cost.push_back(lp_.objective(j));
            } else if (std::isfinite(hi)) {
                m.kind = VarMap::kFlip;
                m.anchor = hi;
                col_upper.push_back(kInf);
                col_cost.push_back(-lp_.objective(j));
            } else {
                m.kind = VarMap::kSplit;
                col_upper.push_back(kInf);
                col_upper.push_back(kInf);
                col_cost.push_back(lp_.objective(j));
                col_cost.push_back(-lp_.objective(j));
            }
        }
        const int structural = static_cast<int>(col_upper.size());
        rows_ = static_cast<int>(lp_.constraints.size());
        int slacks = 0;
        for (const auto& c : lp_.constraints) {
            slacks += c.sense == Sense::kEqual ? 0 : 1;
        }
        art_begin_ = structural + slacks;
        cols_ = art_begin_ + rows_;

        a_ = RowMatrix::Zero(rows_, cols_);
        b_.resize(rows_);
        int slack_col = structural;
        for (int i = 0; i < rows_; ++i) {
            const auto& con = lp_.constraints[static_cast<std::size_t>(i)];
            double rhs = con.rhs;
            for (int j = 0; j < n; ++j) {
                const double v = con.coeffs(j);
                if (v == 0.0) {
                    continue;
                }
                const VarMap& m = maps_[static_cast<std::size_t>(j)];
                switch (m.kind) {
                case VarMap::kShift:
                    a_(i, m.column) += v;
                    rhs -= v * m.anchor;
                    break;
                case VarMap::kFlip:
                    a_(i, m.column) -= v;
                    rhs -= v * m.anchor;
                    break;
                case VarMap::kSplit:
                    a_(i, m.column) += v;
                    a_(i, m.column + 1) -= v;
                    break;
                }
            }
            if (con.sense == Sense::kLessEqual) {
                a_(i, slack_col++) = 1.0;
            } else if (con.sense == Sense::kGreaterEqual) {
                a_(i, slack_col++) = -1.0;
            }
            if (rhs < 0) {
                a_.row(i) *= -1.0;
                rhs = -rhs;
            }
            a_(i, art_begin_ + i) = 1.0;
            b_(i) = rhs;
        }

        upper_ = Eigen::VectorXd::Constant(cols_, kInf);
        cost_ = Eigen::VectorXd::Zero(cols_);
        for (int j = 0; j < structural; ++j) {
            upper_(j) = col_upper[static_cast<std::size_t>(j)];
            cost_(j) = col_cost[static_cast<std::size_t>(j)];
        }

        tableau_ = a_;
        beta_ = b_;
        basis_.resize(static_cast<std::size_t>(rows_));
        is_basic_.assign(static_cast<std::size_t>(cols_), 0);
        at_upper_.assign(static_cast<std::size_t>(cols_), 0);
        for (int i = 0; i < rows_; ++i) {
            basis_[static_cast<std::size_t>(i)] = art_begin_ + i;
            is_basic_[static_cast<std::size_t>(art_begin_ + i)] = 1;
        }
        return true;
    }

    void compute_reduced_costs(const Eigen::VectorXd& cost)
    {
        reduced_ = cost;
        for (int i = 0; i < rows_; ++i) {
            const double cb = cost(basis_[static_cast<std::size_t>(i)]);
            if (cb != 0.0) {
                reduced_ -= cb * tableau_.row(i).transpose();
            }
        }
    }

    void pivot(int r, int c)
    {
        const double piv = tableau_(r, c);
        tableau_.row(r) /= piv;
        for (int i = 0; i < rows_; ++i) {
            if (i == r) {
                continue;
            }
            const double f = tableau_(i, c);
            if (f != 0.0) {
                tableau_.row(i) -= f * tableau_.row(r);
            }
        }
        const double dc = reduced_(c);
        if (dc != 0.0) {
            reduced_ -= dc * tableau_.row(r).transpose();
        }
        const int leaving = basis_[static_cast<std::size_t>(r)];
        is_basic_[static_cast<std::size_t>(leaving)] = 0;
        basis_[static_cast<std::size_t>(r)] = c;
        is_basic_[static_cast<std::size_t>(c)] = 1;
        at_upper_[static_cast<std::size_t>(c)] = 0;
    }

    LpStatus iterate(const Eigen::VectorXd& cost)
    {
        compute_reduced_costs(cost);
        int degenerate = 0;
        while (true) {
            if (iterations_ >= opt_.max_iterations) {
                return LpStatus::kIterationLimit;
            }
            const bool bland = degenerate >= opt_.degenerate_streak;

            int enter = -1;
            double best = 0.0;
            for (int j = 0; j < cols_; ++j) {
                if (is_basic_[static_cast<std::size_t>(j)] || upper_(j) <= 0.0) {
                    continue;
                }
                const double dj = reduced_(j);
                double score = 0.0;
                if (!at_upper_[static_cast<std::size_t>(j)] && dj < -opt_.optimality_tol) {
                    score = -dj;
                } else if (at_upper_[static_cast<std::size_t>(j)] && dj > opt_.optimality_tol) {
                    score = dj;
                } else {
                    continue;
                }
                if (bland) {
                    enter = j;
                    break;
                }
                if (score > best) {
                    best = score;
                    enter = j;
                }
            }
            if (enter < 0) {
                return LpStatus::kOptimal;
            }
            ++iterations_;

            const double sigma = at_upper_[static_cast<std::size_t>(enter)] ? -1.0 : 1.0;
            double step = upper_(enter);
            int leave_row = -1;
            bool leave_to_upper = false;
            double leave_alpha = 0.0;
            for (int i = 0; i < rows_; ++i) {
                const double alpha = sigma * tableau_(i, enter);
                const int bvar = basis_[static_cast<std::size_t>(i)];
                double limit = 0.0;
                bool to_upper = false;
                if (alpha > opt_.pivot_tol) {
                    limit = std::max(beta_(i), 0.0) / alpha;
                } else if (alpha < -opt_.pivot_tol && std::isfinite(upper_(bvar))) {
                    limit = std::max(upper_(bvar) - beta_(i), 0.0) / (-alpha);
                    to_upper = true;
                } else {
                    continue;
                }
                bool take = false;
                if (limit < step - 1e-12) {
                    take = true;
                } else if (limit <= step + 1e-12 && leave_row >= 0) {
                    take = bland ? bvar < basis_[static_cast<std::size_t>(leave_row)]
                                 : std::abs(alpha) > std::abs(leave_alpha);
                } else if (limit <= step + 1e-12 && leave_row < 0 && std::isfinite(step)) {
                    // Prefer a pivot over an equal-length bound flip only in Bland mode.
                    take = false;
                }
                if (take) {
                    step = limit;
                    leave_row = i;
                    leave_to_upper = to_upper;
                    leave_alpha = alpha;
                }
            }
            if (leave_row < 0 && !std::isfinite(step)) {
                return LpStatus::kUnbounded;
            }

            degenerate = step <= 1e-12 ? degenerate + 1 : 0;

            if (step > 0.0) {
                beta_ -= (sigma * step) * tableau_.col(enter);
            }
            if (leave_row < 0) {
                at_upper_[static_cast<std::size_t>(enter)] ^= 1;
                continue;
            }
            const double entering_value = (at_upper_[static_cast<std::size_t>(enter)] ? upper_(enter) : 0.0) +
                                          sigma * step;
            const int leaving = basis_[static_cast<std::size_t>(leave_row)];
            pivot(leave_row, enter);
            at_upper_[static_cast<std::size_t>(leaving)] = leave_to_upper ? 1 : 0;
            beta_(leave_row) = entering_value;
        }
    }

    void drive_out_artificials()
    {
        for (int r = 0; r < rows_; ++r) {
            if (basis_[static_cast<std::size_t>(r)] < art_begin_) {
                continue;
            }
            int best = -1;
            double mag = 1e-7;
            for (int j = 0; j < art_begin_; ++j) {
                if (!is_basic_[static_cast<std::size_t>(j)] && std::abs(tableau_(r, j)) > mag) {
                    mag = std::abs(tableau_(r, j));
                    best = j;
                }
            }
            if (best < 0) {
                continue;  // redundant row; the artificial stays basic, pinned at 0
            }
            const double value = at_upper_[static_cast<std::size_t>(best)] ? upper_(best) : 0.0;
            reduced_ = Eigen::VectorXd::Zero(cols_);
            pivot(r, best);
            beta_(r) = value;
        }
    }

    Eigen::VectorXd column_values() const
    {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(cols_);
        for (int j = 0; j < cols_; ++j) {
            if (!is_basic_[static_cast<std::size_t>(j)] && at_upper_[static_cast<std::size_t>(j)]) {
                v(j) = upper_(j);
            }
        }
        for (int i = 0; i < rows_; ++i) {
            v(basis_[static_cast<std::size_t>(i)]) = beta_(i);
        }
        return v;
    }

    // Recompute the basic values from the original rows to shed pivot drift.
    void polish()
    {
        if (rows_ == 0) {
            return;
        }
        Eigen::MatrixXd basis_matrix(rows_, rows_);
        Eigen::VectorXd rhs = b_;
        for (int i = 0; i < rows_; ++i) {
            basis_matrix.col(i) = a_.col(basis_[static_cast<std::size_t>(i)]);
        }
        for (int j = 0; j < cols_; ++j) {
            if (!is_basic_[static_cast<std::size_t>(j)] && at_upper_[static_cast<std::size_t>(j)]) {
                rhs -= upper_(j) * a_.col(j);
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
        const Eigen::VectorXd fresh = lu.solve(rhs);
        if (fresh.allFinite() && (basis_matrix * fresh - rhs).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
            beta_ = fresh;
        }
        for (int i = 0; i < rows_; ++i) {
            const int var = basis_[static_cast<std::size_t>(i)];
            if (beta_(i) < 0.0 && beta_(i) > -1e-9) {
                beta_(i) = 0.0;
            }
            if (std::isfinite(upper_(var)) && beta_(i) > upper_(var) && beta_(i) < upper_(var) + 1e-9) {
                beta_(i) = upper_(var);
            }
        }
    }

    Eigen::VectorXd recover() const
    {
        const Eigen::VectorXd v = column_values();
        Eigen::VectorXd x(lp_.num_vars());
        for (int j = 0; j < lp_.num_vars(); ++j) {
            const VarMap& m = maps_[static_cast<std::size_t>(j)];
            switch (m.kind) {
            case VarMap::kShift: x(j) = m.anchor + v(m.column); break;
            case VarMap::kFlip: x(j) = m.anchor - v(m.column); break;
            case VarMap::kSplit: x(j) = v(m.column) - v(m.column + 1); break;
            }
        }
        return x;
    }

    const LpProblem& lp_;
    const LpOptions& opt_;
    std::vector<VarMap> maps_;
    int rows_ = 0;
    int cols_ = 0;
    int art_begin_ = 0;
    RowMatrix a_;
    RowMatrix tableau_;
    Eigen::VectorXd b_;
    Eigen::VectorXd beta_;
    Eigen::VectorXd upper_;
    Eigen::VectorXd cost_;
    Eigen::VectorXd reduced_;
    std::vector<int> basis_;
    std::vector<char> is_basic_;
    std::vector<char> at_upper_;
    long iterations_ = 0;
};


class DualSimplex {
public:
    DualSimplex(const LpProblem& lp, const LpOptions& opt) : lp_(lp), opt_(opt)
    {
        n_ = lp.num_vars();
        m_ = static_cast<int>(lp.constraints.size());
        cols_ = n_ + m_;
        a_ = RowMatrix::Zero(m_, cols_);
        b_.resize(m_);
        lo_.resize(cols_);
        up_.resize(cols_);
        cost_ = Eigen::VectorXd::Zero(cols_);
        lo_.head(n_) = lp.lower;
        up_.head(n_) = lp.upper;
        cost_.head(n_) = lp.objective;
        for (int i = 0; i < m_; ++i) {
            const auto& c = lp.constraints[static_cast<std::size_t>(i)];
            a_.row(i).head(n_) = c.coeffs.transpose();
            a_(i, n_ + i) = 1.0;
            b_(i) = c.rhs;
            lo_(n_ + i) = c.sense == Sense::kGreaterEqual ? -kInf : 0.0;
            up_(n_ + i) = c.sense == Sense::kLessEqual ? kInf : 0.0;
        }
    }

    // Returns false when the start is unusable (singular or not dual feasible).
    bool start(const LpBasis* warm)
    {
        basis_.assign(static_cast<std::size_t>(m_), -1);
        is_basic_.assign(static_cast<std::size_t>(cols_), 0);
        at_upper_.assign(static_cast<std::size_t>(cols_), 0);
        const int warm_rows = warm != nullptr ? static_cast<int>(warm->basic.size()) : 0;
        if (warm != nullptr && warm_rows <= m_ && static_cast<int>(warm->at_upper.size()) == n_ + warm_rows) {
            for (int i = 0; i < warm_rows; ++i) {
                const int col = warm->basic[static_cast<std::size_t>(i)];
                if (col < 0 || col >= n_ + warm_rows || is_basic_[static_cast<std::size_t>(col)]) {
                    return false;
                }
                basis_[static_cast<std::size_t>(i)] = col;
                is_basic_[static_cast<std::size_t>(col)] = 1;
            }
            for (int j = 0; j < n_ + warm_rows; ++j) {
                at_upper_[static_cast<std::size_t>(j)] = warm->at_upper[static_cast<std::size_t>(j)];
            }
            for (int i = warm_rows; i < m_; ++i) {
                basis_[static_cast<std::size_t>(i)] = n_ + i;
                is_basic_[static_cast<std::size_t>(n_ + i)] = 1;
            }
        } else if (warm != nullptr) {
            return false;
        } else {
            for (int i = 0; i < m_; ++i) {
                basis_[static_cast<std::size_t>(i)] = n_ + i;
                is_basic_[static_cast<std::size_t>(n_ + i)] = 1;
            }
        }
        if (!refactor()) {
            return false;
        }
        // Place each nonbasic column on the bound its reduced cost asks for.
        for (int j = 0; j < cols_; ++j) {
            if (is_basic_[static_cast<std::size_t>(j)] || lo_(j) == up_(j)) {
                continue;
            }
            const double dj = reduced_(j);
            char& side = at_upper_[static_cast<std::size_t>(j)];
            if (dj > opt_.optimality_tol) {
                if (!std::isfinite(lo_(j))) {
                    return false;
                }
                side = 0;
            } else if (dj < -opt_.optimality_tol) {
                if (!std::isfinite(up_(j))) {
                    return false;
                }
                side = 1;
            } else if (side && !std::isfinite(up_(j))) {
                side = 0;
            } else if (!side && !std::isfinite(lo_(j)) && std::isfinite(up_(j))) {
                side = 1;
            }
        }
        compute_beta();
        return true;
    }

    LpResult run()
    {
        LpResult result;
        int degenerate = 0;
        int since_refactor = 0;
        while (true) {
            if (iterations_ >= opt_.max_iterations) {
                result.status = LpStatus::kIterationLimit;
                result.iterations = iterations_;
                return result;
            }
            if (since_refactor >= 100) {
                if (!refactor()) {
                    result.status = LpStatus::kIterationLimit;
                    result.iterations = iterations_;
                    return result;
                }
                compute_beta();
                since_refactor = 0;
            }
            const bool bland = degenerate >= opt_.degenerate_streak;

            int row = -1;
            double worst = opt_.feasibility_tol;
            for (int i = 0; i < m_; ++i) {
                const int var = basis_[static_cast<std::size_t>(i)];
                const double viol = std::max(lo_(var) - beta_(i), beta_(i) - up_(var));
                if (viol > worst * (1.0 + std::abs(beta_(i)))) {
                    if (bland) {
                        if (row < 0 || var < basis_[static_cast<std::size_t>(row)]) {
                            row = i;
                        }
                    } else {
                        worst = viol / (1.0 + std::abs(beta_(i)));
                        row = i;
                    }
                }
            }
            if (row < 0) {
                break;
            }
            const int leaving = basis_[static_cast<std::size_t>(row)];
            const bool below = beta_(row) < lo_(leaving);
            const double target = below ? lo_(leaving) : up_(leaving);

            int enter = -1;
            double best_ratio = kInf;
            double best_alpha = 0.0;
            for (int j = 0; j < cols_; ++j) {
                if (is_basic_[static_cast<std::size_t>(j)] || lo_(j) == up_(j)) {
                    continue;
                }
                const double alpha = tableau_(row, j);
                if (std::abs(alpha) <= opt_.pivot_tol) {
                    continue;
                }
                const bool free = !std::isfinite(lo_(j)) && !std::isfinite(up_(j));
                const bool up_side = at_upper_[static_cast<std::size_t>(j)] != 0;
                // x_row moves by -alpha * theta; below needs it to rise.
                const bool ok = free || (below ? (up_side ? alpha > 0 : alpha < 0) : (up_side ? alpha < 0 : alpha > 0));
                if (!ok) {
                    continue;
                }
                const double ratio = std::abs(reduced_(j)) / std::abs(alpha);
                bool take = false;
                if (ratio < best_ratio - 1e-12) {
                    take = true;
                } else if (ratio <= best_ratio + 1e-12 && enter >= 0) {
                    take = bland ? false : std::abs(alpha) > std::abs(best_alpha);
                }
                if (take) {
                    best_ratio = ratio;
                    best_alpha = alpha;
                    enter = j;
                }
            }
            if (enter < 0) {
                result.status = LpStatus::kInfeasible;
                result.iterations = iterations_;
                return result;
            }
            ++iterations_;
            ++since_refactor;
            degenerate = best_ratio <= 1e-12 ? degenerate + 1 : 0;

            const double theta = (beta_(row) - target) / tableau_(row, enter);
            const double entering_value = nonbasic_value(enter) + theta;
            beta_ -= theta * tableau_.col(enter);
            pivot(row, enter);
            at_upper_[static_cast<std::size_t>(leaving)] = below ? 0 : 1;
            beta_(row) = entering_value;
        }

        if (refactor()) {
            compute_beta();
        }
        Eigen::VectorXd full(cols_);
        for (int j = 0; j < cols_; ++j) {
            full(j) = nonbasic_value(j);
        }
        for (int i = 0; i < m_; ++i) {
            const int var = basis_[static_cast<std::size_t>(i)];
            double v = beta_(i);
            if (v < lo_(var) && v > lo_(var) - 1e-9) {
                v = lo_(var);
            }
            if (v > up_(var) && v < up_(var) + 1e-9) {
                v = up_(var);
            }
            full(var) = v;
        }
        result.status = LpStatus::kOptimal;
        result.x = full.head(n_);
        result.objective = lp_.objective.dot(result.x) + lp_.objective_offset;
        result.iterations = iterations_;
        result.basis.basic = basis_;
        result.basis.at_upper = at_upper_;
        return result;
    }

    long iterations() const { return iterations_; }

private:
    double nonbasic_value(int j) const
    {
        if (at_upper_[static_cast<std::size_t>(j)] && std::isfinite(up_(j))) {
            return up_(j);
        }
        if (std::isfinite(lo_(j))) {
            return lo_(j);
        }
        return std::isfinite(up_(j)) ? up_(j) : 0.0;
    }

    bool refactor()
    {
        if (m_ == 0) {
            tableau_ = RowMatrix::Zero(0, cols_);
            reduced_ = cost_;
            return true;
        }
        Eigen::MatrixXd bm(m_, m_);
        for (int i = 0; i < m_; ++i) {
            bm.col(i) = a_.col(basis_[static_cast<std::size_t>(i)]);
        }
        lu_.compute(bm);
        if (!(lu_.rcond() > 1e-13)) {
            return false;
        }
        tableau_ = lu_.solve(Eigen::MatrixXd(a_));
        Eigen::VectorXd cb(m_);
        for (int i = 0; i < m_; ++i) {
            cb(i) = cost_(basis_[static_cast<std::size_t>(i)]);
        }
        reduced_ = cost_ - tableau_.transpose() * cb;
        for (int i = 0; i < m_; ++i) {
            reduced_(basis_[static_cast<std::size_t>(i)]) = 0.0;
        }
        return true;
    }

    void compute_beta()
    {
        if (m_ == 0) {
            beta_.resize(0);
            return;
        }
        Eigen::VectorXd rhs = b_;
        for (int j = 0; j < cols_; ++j) {
            if (!is_basic_[static_cast<std::size_t>(j)]) {
                const double v = nonbasic_value(j);
                if (v != 0.0) {
                    rhs -= v * a_.col(j);
                }
            }
        }
        beta_ = lu_.solve(rhs);
    }

    void pivot(int r, int c)
    {
        const double piv = tableau_(r, c);
        tableau_.row(r) /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == r) {
                continue;
            }
            const double f = tableau_(i, c);
            if (f != 0.0) {
                tableau_.row(i) -= f * tableau_.row(r);
            }
        }
        const double dc = reduced_(c);
        if (dc != 0.0) {
            reduced_ -= dc * tableau_.row(r).transpose();
        }
        const int leaving = basis_[static_cast<std::size_t>(r)];
        is_basic_[static_cast<std::size_t>(leaving)] = 0;
        basis_[static_cast<std::size_t>(r)] = c;
        is_basic_[static_cast<std::size_t>(c)] = 1;
        at_upper_[static_cast<std::size_t>(c)] = 0;
    }

    const LpProblem& lp_;
    const LpOptions& opt_;
    int n_ = 0;
    int m_ = 0;
    int cols_ = 0;
    RowMatrix a_;
    RowMatrix tableau_;
    Eigen::VectorXd b_;
    Eigen::VectorXd lo_;
    Eigen::VectorXd up_;
    Eigen::VectorXd cost_;
    Eigen::VectorXd reduced_;
    Eigen::VectorXd beta_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    std::vector<int> basis_;
    std::vector<char> is_basic_;
    std::vector<char> at_upper_;
    long iterations_ = 0;
};

bool bounds_consistent(const LpProblem& lp)
{
    return ((lp.lower.array() <= lp.upper.array())).all();
}

}  // namespace

LpResult solve_lp_primal(const LpProblem& problem, const LpOptions& options)
{
    problem.validate();
    BoundedSimplex simplex(problem, options);
    return simplex.run();
}

LpResult solve_lp(const LpProblem& problem, const LpOptions& options, const LpBasis* warm)
{
    problem.validate();
    if (!bounds_consistent(problem)) {
        return LpResult{};
    }
    long spent = 0;
    auto attempt = [&](const LpBasis* start) -> std::optional<LpResult> {
        DualSimplex dual(problem, options);
        if (!dual.start(start)) {
            return std::nullopt;
        }
        LpResult r = dual.run();
        r.iterations += spent;
        spent = r.iterations;
        r.warm = start != nullptr;
        if (r.status == LpStatus::kInfeasible) {
            return r;
        }
        if (r.status == LpStatus::kOptimal &&
            problem.max_violation(r.x) <= 1e-7 * (1.0 + r.x.cwiseAbs().maxCoeff())) {
            return r;
        }
        return std::nullopt;
    };
    if (warm != nullptr && !warm->empty()) {
        if (auto r = attempt(warm)) {
            return *r;
        }
    }
    if (auto r = attempt(nullptr)) {
        return *r;
    }
    BoundedSimplex simplex(problem, options);
    LpResult r = simplex.run();
    r.iterations += spent;
    return r;
}

}  // namespace rishbf::milp
