#include "rishbf/milp.hpp"

#include <cmath>
#include <ostream>
#include <memory>
#include <queue>
#include <stdexcept>

namespace rishbf::milp {

void MilpModel::validate() const
{
    lp.validate();
    const int n = lp.num_vars();
    if (static_cast<int>(integer.size()) != n) {
        throw std::invalid_argument("MilpModel: integrality mask must have one entry per variable");
    }
    for (const auto& g : sos1_groups) {
        if (g.empty()) {
            throw std::invalid_argument("MilpModel: empty SOS1 group");
        }
        for (int v : g) {
            if (v < 0 || v >= n || !integer[static_cast<std::size_t>(v)]) {
                throw std::invalid_argument("MilpModel: SOS1 members must be integer variables");
            }
            if (lp.lower(v) < 0.0 || lp.upper(v) > 1.0) {
                throw std::invalid_argument("MilpModel: SOS1 members must be binary");
            }
        }
    }
    if (node_limit <= 0 || cut_limit < 0) {
        throw std::invalid_argument("MilpModel: limits must be positive");
    }
    if (!branch_priority.empty() && static_cast<int>(branch_priority.size()) != n) {
        throw std::invalid_argument("MilpModel: branch priority must have one entry per variable");
    }
    if (warm_start && warm_start->size() != n) {
        throw std::invalid_argument("MilpModel: warm start has the wrong length");
    }
}

const char* to_string(MilpStatus s)
{
    switch (s) {
    case MilpStatus::kOptimal: return "optimal";
    case MilpStatus::kInfeasible: return "infeasible";
    case MilpStatus::kNodeLimit: return "node-limit";
    }
    return "?";
}

namespace {

struct Node {
    long id = 0;
    double bound = -kInf;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    std::shared_ptr<const LpBasis> basis;  // final basis of the parent relaxation
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const
    {
        if (a.bound != b.bound) {
            return a.bound > b.bound;
        }
        return a.id > b.id;
    }
};

bool is_integral(const MilpModel& m, const Eigen::VectorXd& x)
{
    for (int j = 0; j < x.size(); ++j) {
        if (m.integer[static_cast<std::size_t>(j)] && std::abs(x(j) - std::round(x(j))) > m.integrality_tol) {
            return false;
        }
    }
    return true;
}

Eigen::VectorXd round_integers(const MilpModel& m, Eigen::VectorXd x)
{
    for (int j = 0; j < x.size(); ++j) {
        if (m.integer[static_cast<std::size_t>(j)]) {
            x(j) = std::round(x(j));
        }
    }
    return x;
}

class BranchAndBound {
public:
    explicit BranchAndBound(const MilpModel& m) : model_(m), lp_(m.lp)
    {
        group_of_.assign(static_cast<std::size_t>(lp_.num_vars()), -1);
        for (std::size_t g = 0; g < m.sos1_groups.size(); ++g) {
            for (int v : m.sos1_groups[g]) {
                group_of_[static_cast<std::size_t>(v)] = static_cast<int>(g);
            }
        }
    }

    MilpResult run()
    {
        if (model_.warm_start) {
            try_incumbent(*model_.warm_start);
        }
        queue_.push(Node{next_id_++, -kInf, model_.lp.lower, model_.lp.upper, nullptr});

        bool limited = false;
        while (!queue_.empty()) {
            if (result_.has_incumbent && queue_.top().bound >= result_.objective - model_.gap_tolerance) {
                queue_.pop();
                continue;
            }
            if (result_.nodes >= model_.node_limit || result_.cuts_added > model_.cut_limit) {
                limited = true;
                break;
            }
            Node node = queue_.top();
            queue_.pop();
            ++result_.nodes;
            if (!process(node)) {
                queue_.push(std::move(node));
                limited = true;
                break;
            }
        }

        if (limited) {
            result_.status = MilpStatus::kNodeLimit;
            double bound = result_.has_incumbent ? result_.objective : kInf;
            if (!queue_.empty()) {
                bound = std::min(bound, queue_.top().bound);
            }
            result_.best_bound = bound;
        } else if (result_.has_incumbent) {
            result_.status = MilpStatus::kOptimal;
            result_.best_bound = result_.objective;
        } else {
            result_.status = MilpStatus::kInfeasible;
            result_.best_bound = kInf;
        }
        return std::move(result_);
    }

private:
    double objective_of(const Eigen::VectorXd& x) const
    {
        return model_.lp.objective.dot(x) + model_.lp.objective_offset;
    }

    void add_cuts(const std::vector<LinearConstraint>& cuts, const Eigen::VectorXd& at)
    {
        for (const auto& cut : cuts) {
            if (cut.coeffs.size() != lp_.num_vars()) {
                throw std::invalid_argument("solve_milp: cut has the wrong length");
            }
            if (cut.slack(at) >= -1e-9) {
                throw std::logic_error("solve_milp: lazy cut '" + cut.name + "' is not violated by the candidate");
            }
            lp_.constraints.push_back(cut);
            result_.cuts.push_back(cut);
            ++result_.cuts_added;
        }
    }

    // Returns true when the point became the incumbent.
    bool try_incumbent(const Eigen::VectorXd& candidate)
    {
        if (!is_integral(model_, candidate)) {
            return false;
        }
        const Eigen::VectorXd x = round_integers(model_, candidate);
        if (lp_.max_violation(x) > 1e-6) {
            return false;
        }
        if (model_.lazy_cuts) {
            const auto cuts = model_.lazy_cuts(x);
            if (!cuts.empty()) {
                add_cuts(cuts, x);
                return false;
            }
        }
        const double obj = objective_of(x);
        if (!result_.has_incumbent || obj < result_.objective) {
            result_.has_incumbent = true;
            result_.objective = obj;
            result_.x = x;
        }
        return true;
    }

    // Returns false if the cut budget ran out before the node was settled.
    bool process(const Node& node)
    {
        std::shared_ptr<const LpBasis> basis = node.basis;
        while (true) {
            lp_.lower = node.lower;
            lp_.upper = node.upper;
            LpResult rel = solve_lp(lp_, model_.lp_options, basis.get());
            if (!rel.basis.empty()) {
                basis = std::make_shared<const LpBasis>(std::move(rel.basis));
            } else {
                basis.reset();
            }
            result_.lp_iterations += rel.iterations;
            if (rel.status == LpStatus::kInfeasible) {
                return true;
            }
            if (rel.status == LpStatus::kUnbounded) {
                throw std::runtime_error("solve_milp: LP relaxation is unbounded");
            }
            if (rel.status == LpStatus::kIterationLimit) {
                throw std::runtime_error("solve_milp: LP iteration limit reached");
            }
            if (result_.has_incumbent && rel.objective >= result_.objective - model_.gap_tolerance) {
                return true;
            }

            const int branch_var = most_fractional(rel.x);
            if (branch_var < 0) {
                const Eigen::VectorXd x = round_integers(model_, rel.x);
                std::vector<LinearConstraint> cuts;
                if (model_.lazy_cuts) {
                    cuts = model_.lazy_cuts(x);
                }
                if (cuts.empty()) {
                    const double obj = objective_of(x);
                    if (!result_.has_incumbent || obj < result_.objective) {
                        result_.has_incumbent = true;
                        result_.objective = obj;
                        result_.x = x;
                    }
                    return true;
                }
                add_cuts(cuts, x);
                if (result_.cuts_added > model_.cut_limit) {
                    return false;
                }
                continue;
            }
            branch(node, rel, branch_var, basis);
            return true;
        }
    }

    int most_fractional(const Eigen::VectorXd& x) const
    {
        int best = -1;
        int best_priority = 0;
        double score = model_.integrality_tol;
        const bool prioritized = !model_.branch_priority.empty();
        for (int j = 0; j < x.size(); ++j) {
            if (!model_.integer[static_cast<std::size_t>(j)]) {
                continue;
            }
            const double f = x(j) - std::floor(x(j));
            const double s = std::min(f, 1.0 - f);
            if (s <= model_.integrality_tol) {
                continue;
            }
            const int prio = prioritized ? model_.branch_priority[static_cast<std::size_t>(j)] : 0;
            if (best < 0 || prio > best_priority || (prio == best_priority && s > score)) {
                best = j;
                best_priority = prio;
                score = s;
            }
        }
        return best;
    }

    void branch(const Node& node, const LpResult& rel, int var, const std::shared_ptr<const LpBasis>& basis)
    {
        Node left{next_id_++, rel.objective, node.lower, node.upper, basis};
        Node right{next_id_++, rel.objective, node.lower, node.upper, basis};

        const int g = group_of_[static_cast<std::size_t>(var)];
        bool split = false;
        if (g >= 0) {
            std::vector<int> free;
            for (int v : model_.sos1_groups[static_cast<std::size_t>(g)]) {
                if (node.upper(v) > node.lower(v)) {
                    free.push_back(v);
                }
            }
            int first = -1;
            int last = -1;
            for (int i = 0; i < static_cast<int>(free.size()); ++i) {
                if (rel.x(free[static_cast<std::size_t>(i)]) > model_.integrality_tol) {
                    if (first < 0) {
                        first = i;
                    }
                    last = i;
                }
            }
            if (first >= 0 && last > first) {
                double mass = 0.0;
                double total = 0.0;
                for (int v : free) {
                    total += std::max(rel.x(v), 0.0);
                }
                int cut = first;
                for (int i = first; i < last; ++i) {
                    mass += std::max(rel.x(free[static_cast<std::size_t>(i)]), 0.0);
                    cut = i;
                    if (mass >= 0.5 * total) {
                        break;
                    }
                }
                for (int i = 0; i < static_cast<int>(free.size()); ++i) {
                    const int v = free[static_cast<std::size_t>(i)];
                    if (i <= cut) {
                        right.upper(v) = 0.0;
                    } else {
                        left.upper(v) = 0.0;
                    }
                }
                split = true;
            }
        }
        if (!split) {
            left.upper(var) = std::floor(rel.x(var));
            right.lower(var) = std::ceil(rel.x(var));
        }
        queue_.push(std::move(left));
        queue_.push(std::move(right));
    }

    const MilpModel& model_;
    LpProblem lp_;
    std::vector<int> group_of_;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> queue_;
    long next_id_ = 0;
    MilpResult result_;
};

void write_number(std::ostream& out, double v)
{
    if (std::isinf(v)) {
        out << (v > 0 ? "+inf" : "-inf");
    } else {
        out << v;
    }
}

void write_row(std::ostream& out, const Eigen::VectorXd& coeffs)
{
    bool any = false;
    for (int j = 0; j < coeffs.size(); ++j) {
        const double v = coeffs(j);
        if (v == 0.0) {
            continue;
        }
        out << (v < 0 ? " - " : (any ? " + " : " ")) << std::abs(v) << " x" << j;
        any = true;
    }
    if (!any) {
        out << " 0 x0";
    }
}

}  // namespace

MilpResult solve_milp(const MilpModel& model)
{
    model.validate();
    BranchAndBound bb(model);
    return bb.run();
}

void write_lp_format(std::ostream& out, const MilpModel& model)
{
    const LpProblem& lp = model.lp;
    const auto old_precision = out.precision(17);
    out << "\\ offset " << lp.objective_offset << "\nMinimize\n obj:";
    write_row(out, lp.objective);
    out << "\nSubject To\n";
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        const auto& c = lp.constraints[i];
        out << ' ' << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ':';
        write_row(out, c.coeffs);
        switch (c.sense) {
        case Sense::kLessEqual: out << " <= "; break;
        case Sense::kEqual: out << " = "; break;
        case Sense::kGreaterEqual: out << " >= "; break;
        }
        out << c.rhs << '\n';
    }
    out << "Bounds\n";
    for (int j = 0; j < lp.num_vars(); ++j) {
        out << ' ';
        write_number(out, lp.lower(j));
        out << " <= x" << j << " <= ";
        write_number(out, lp.upper(j));
        out << '\n';
    }
    std::vector<int> binaries;
    std::vector<int> generals;
    for (int j = 0; j < lp.num_vars(); ++j) {
        if (!model.integer[static_cast<std::size_t>(j)]) {
            continue;
        }
        (lp.lower(j) >= 0.0 && lp.upper(j) <= 1.0 ? binaries : generals).push_back(j);
    }
    if (!binaries.empty()) {
        out << "Binaries\n";
        for (int j : binaries) {
            out << " x" << j;
        }
        out << '\n';
    }
    if (!generals.empty()) {
        out << "Generals\n";
        for (int j : generals) {
            out << " x" << j;
        }
        out << '\n';
    }
    out << "End\n";
    out.precision(old_precision);
}

}  // namespace rishbf::milp
