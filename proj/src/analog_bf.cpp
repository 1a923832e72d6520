#include "rishbf/analog_bf.hpp"

#include "rishbf/errors.hpp"
#include "rishbf/linalg.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace rishbf {

namespace {

constexpr double kSingularRatio = 1e-12;

Eigen::VectorXd gram_eigenvalues(const Eigen::MatrixXcd& f, const Eigen::VectorXd& powers)
{
    const Eigen::MatrixXcd g = scaled_gram(f, powers);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double top = ev(ev.size() - 1);
    if (!(top > 0) || ev(0) <= kSingularRatio * top) {
        throw Singular("P^{-1/2} F F^H P^{-1/2} is singular");
    }
    return ev;
}

}  // namespace

double power_objective(const Eigen::MatrixXcd& f, const Eigen::VectorXd& powers)
{
    return gram_eigenvalues(f, powers).cwiseInverse().sum();
}

double epigraph_objective(const Eigen::MatrixXcd& f, const Eigen::VectorXd& powers)
{
    const Eigen::VectorXd ev = gram_eigenvalues(f, powers);
    return static_cast<double>(f.rows()) / ev(0);
}

Eigen::VectorXd analog_powers(const ZfSolution& zf)
{
    const double floor = kPowerFloor * zf.p.maxCoeff();
    return zf.p.cwiseMax(floor);
}

Eigen::MatrixXcd schur_matrix(double w, const Eigen::MatrixXcd& g)
{
    const Eigen::Index k = g.rows();
    Eigen::MatrixXcd z(2 * k, 2 * k);
    z.topLeftCorner(k, k) = Eigen::MatrixXcd::Identity(k, k) * (w / static_cast<double>(k));
    z.topRightCorner(k, k) = Eigen::MatrixXcd::Identity(k, k);
    z.bottomLeftCorner(k, k) = Eigen::MatrixXcd::Identity(k, k);
    z.bottomRightCorner(k, k) = g;
    return z;
}

std::vector<std::pair<double, Eigen::VectorXd>> negative_directions(const Eigen::MatrixXcd& z, double tol,
                                                                   int max_count)
{
    const Eigen::MatrixXd r = real_embedding(z);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
    const Eigen::Index n = z.rows();

    std::vector<std::pair<double, Eigen::VectorXd>> out;
    std::vector<Eigen::VectorXd> span;
    for (Eigen::Index i = 0; i < r.rows() && static_cast<int>(out.size()) < max_count; ++i) {
        const double lambda = es.eigenvalues()(i);
        if (lambda >= -tol) {
            break;
        }
        Eigen::VectorXd v = es.eigenvectors().col(i);
        for (const auto& s : span) {
            v -= s.dot(v) * s;
        }
        if (v.norm() < 0.5) {
            continue;
        }
        v.normalize();
        Eigen::VectorXd partner(2 * n);
        partner.head(n) = -v.tail(n);
        partner.tail(n) = v.head(n);
        span.push_back(v);
        span.push_back(partner);
        out.emplace_back(lambda, v);
    }
    return out;
}

AnalogBfModel::AnalogBfModel(const ChannelTensor& channel, const Eigen::VectorXcd& phi,
                             const Eigen::VectorXd& powers, int bits, bool los_balance, double scale)
    : codebook_(bits), k_(channel.k_users), n_r_(channel.n_r)
{
    const PairGrams grams(channel, phi, powers);
    const int elements = channel.num_elements();
    const int len = codebook_.length();
    layout_ = VariableLayout{elements, len, num_pairs(elements)};
    const int nv = layout_.num_vars();

    double bound = 0.0;
    for (int k = 0; k < k_; ++k) {
        double row = 0.0;
        for (int p = 0; p < elements; ++p) {
            row += grams.scaled_element(p).row(k).norm();
        }
        bound += row * row;
    }
    if (!(bound > 0)) {
        throw Singular("channel is identically zero");
    }
    scale_ = scale > 0 ? scale : static_cast<double>(k_) / bound;

    const Eigen::VectorXd& cs = codebook_.cosines();
    const Eigen::VectorXd& sn = codebook_.sines();
    const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(k_, k_);
    g0_ = zero;
    basis_.assign(static_cast<std::size_t>(nv), zero);
    auto at = [&](int v) -> Eigen::MatrixXcd& { return basis_[static_cast<std::size_t>(v)]; };

    for (int p = 0; p < elements; ++p) {
        const Eigen::MatrixXcd a = grams(p, p) * scale_;
        g0_ += 0.5 * a;
        for (int i = 0; i < len; ++i) {
            at(layout_.x(p, i)) += (0.5 * sn(i)) * a;
        }
    }
    for (int p = 0; p < elements; ++p) {
        for (int q = p + 1; q < elements; ++q) {
            const int r = pair_index(p, q, elements);
            const Eigen::MatrixXcd a = grams(p, q) * (0.25 * scale_);
            g0_ += hermitian_sum(a);
            for (int i = 0; i < len; ++i) {
                at(layout_.x(p, i)) += hermitian_sum(cdouble(sn(i), -cs(i)) * a);
                at(layout_.x(q, i)) += hermitian_sum(cdouble(sn(i), cs(i)) * a);
                at(layout_.y(r, i)) += hermitian_sum(cdouble(cs(i), sn(i)) * a);
            }
        }
    }

    milp::LpProblem lp(nv);
    lp.objective(0) = 1.0;
    // K lambda_max(G^{-1}) >= K^2 / Tr(G) >= K^2 / bound
    lp.lower(0) = static_cast<double>(k_ * k_) / (bound * scale_) * (1.0 - 1e-9);
    for (int v = 1; v < nv; ++v) {
        lp.upper(v) = 1.0;
    }
    const Eigen::VectorXd& mask = codebook_.negative_mask();
    for (int p = 0; p < elements; ++p) {
        for (int i = 0; i < len; ++i) {
            if (mask(i) != 0.0) {
                lp.upper(layout_.x(p, i)) = 0.0;
            }
        }
    }
    for (int p = 0; p < elements; ++p) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
        for (int i = 0; i < len; ++i) {
            row(layout_.x(p, i)) = 1.0;
        }
        lp.add_constraint(std::move(row), milp::Sense::kEqual, 1.0, "onehot_x" + std::to_string(p));
    }
    for (int r = 0; r < layout_.pairs; ++r) {
        Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
        for (int i = 0; i < len; ++i) {
            row(layout_.y(r, i)) = 1.0;
        }
        lp.add_constraint(std::move(row), milp::Sense::kEqual, 1.0, "onehot_y" + std::to_string(r));
    }
    for (int p = 0; p < elements; ++p) {
        for (int q = p + 1; q < elements; ++q) {
            const int r = pair_index(p, q, elements);
            Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
            for (int i = 0; i < len; ++i) {
                const double m = codebook_.slot_multiple(i);
                row(layout_.x(p, i)) += m;
                row(layout_.x(q, i)) -= m;
                row(layout_.y(r, i)) -= m;
            }
            lp.add_constraint(std::move(row), milp::Sense::kEqual, 0.0, "pair" + std::to_string(r));
        }
    }
    if (los_balance) {
        for (int l1 = 1; l1 < n_r_; ++l1) {
            Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
            for (int l2 = 0; l2 < n_r_; ++l2) {
                for (int i = 0; i < len; ++i) {
                    row(layout_.x(l1 * n_r_ + l2, i)) += sn(i);
                    row(layout_.x(l2, i)) -= sn(i);
                }
            }
            if (row.cwiseAbs().maxCoeff() > 0.0) {
                lp.add_constraint(std::move(row), milp::Sense::kEqual, 0.0, "balance" + std::to_string(l1));
            }
        }
    }

    milp_.lp = std::move(lp);
    milp_.integer.assign(static_cast<std::size_t>(nv), true);
    milp_.integer[0] = false;
    milp_.branch_priority.assign(static_cast<std::size_t>(nv), 0);
    for (int p = 0; p < elements; ++p) {
        for (int i = 0; i < len; ++i) {
            milp_.branch_priority[static_cast<std::size_t>(layout_.x(p, i))] = 1;
        }
    }
    for (int p = 0; p < elements; ++p) {
        std::vector<int> group;
        for (int i = codebook_.offset(); i < len; ++i) {
            group.push_back(layout_.x(p, i));
        }
        milp_.sos1_groups.push_back(std::move(group));
    }
    for (int r = 0; r < layout_.pairs; ++r) {
        std::vector<int> group;
        for (int i = 0; i < len; ++i) {
            group.push_back(layout_.y(r, i));
        }
        milp_.sos1_groups.push_back(std::move(group));
    }
}

Eigen::MatrixXcd AnalogBfModel::scaled_gram(const Eigen::VectorXd& z) const
{
    if (z.size() != layout_.num_vars()) {
        throw DimensionMismatch("AnalogBfModel: point has the wrong length");
    }
    Eigen::MatrixXcd g = g0_;
    for (int v = 1; v < z.size(); ++v) {
        if (z(v) != 0.0) {
            g += z(v) * basis_[static_cast<std::size_t>(v)];
        }
    }
    return g;
}

Eigen::MatrixXcd AnalogBfModel::z_matrix(const Eigen::VectorXd& z) const
{
    return schur_matrix(z(0), scaled_gram(z));
}

EigenCut AnalogBfModel::cut_from_direction(Eigen::VectorXd u, double lambda) const
{
    const Eigen::VectorXcd zeta = complex_from_embedding(u);
    const Eigen::VectorXcd z1 = zeta.head(k_);
    const Eigen::VectorXcd z2 = zeta.tail(k_);

    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(layout_.num_vars());
    coeffs(0) = z1.squaredNorm() / static_cast<double>(k_);
    for (int v = 1; v < layout_.num_vars(); ++v) {
        coeffs(v) = (z2.adjoint() * basis_[static_cast<std::size_t>(v)] * z2)(0, 0).real();
    }
    const double constant = 2.0 * z1.dot(z2).real() + (z2.adjoint() * g0_ * z2)(0, 0).real();

    EigenCut cut;
    cut.u = std::move(u);
    cut.eigenvalue = lambda;
    cut.constraint = milp::LinearConstraint{std::move(coeffs), milp::Sense::kGreaterEqual, -constant, "eig"};
    return cut;
}

std::vector<EigenCut> AnalogBfModel::eigen_separation(const Eigen::VectorXd& z, int max_cuts, double tol) const
{
    const Eigen::MatrixXcd zm = z_matrix(z);
    std::vector<EigenCut> cuts;
    for (auto& [lambda, u] : negative_directions(zm, tol, max_cuts)) {
        cuts.push_back(cut_from_direction(std::move(u), lambda));
    }
    return cuts;
}

std::optional<EigenCut> AnalogBfModel::boundary_cut(const Eigen::VectorXd& z, double tol) const
{
    const Eigen::MatrixXcd g = scaled_gram(z);
    if (singular(g)) {
        return std::nullopt;
    }
    const double w_star = static_cast<double>(k_) / min_eigenvalue(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_embedding(schur_matrix(w_star, g)));
    EigenCut cut = cut_from_direction(es.eigenvectors().col(0), es.eigenvalues()(0));
    cut.constraint.name = "eig_boundary";
    if (cut.constraint.slack(z) >= -tol) {
        return std::nullopt;
    }
    return cut;
}

milp::LinearConstraint AnalogBfModel::no_good_cut(const Eigen::VectorXd& z) const
{
    const PhaseIndexMatrix phases = decode(z);
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(layout_.num_vars());
    for (int p = 0; p < layout_.elements; ++p) {
        coeffs(layout_.x(p, codebook_.phase_slot(phases.at(p)))) = 1.0;
    }
    return milp::LinearConstraint{std::move(coeffs), milp::Sense::kLessEqual,
                                  static_cast<double>(layout_.elements - 1), "nogood"};
}

Eigen::VectorXd AnalogBfModel::encode(const PhaseIndexMatrix& phases, double scaled_w) const
{
    if (phases.n_r() != n_r_ || phases.bits() != codebook_.bits()) {
        throw DimensionMismatch("AnalogBfModel: phase matrix does not match the model");
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(layout_.num_vars());
    z(0) = scaled_w;
    for (int p = 0; p < layout_.elements; ++p) {
        z(layout_.x(p, codebook_.phase_slot(phases.at(p)))) = 1.0;
    }
    for (int p = 0; p < layout_.elements; ++p) {
        for (int q = p + 1; q < layout_.elements; ++q) {
            z(layout_.y(pair_index(p, q, layout_.elements), codebook_.difference_slot(phases.at(p) - phases.at(q)))) =
                1.0;
        }
    }
    return z;
}

PhaseIndexMatrix AnalogBfModel::decode(const Eigen::VectorXd& z) const
{
    if (z.size() != layout_.num_vars()) {
        throw DimensionMismatch("AnalogBfModel: point has the wrong length");
    }
    PhaseIndexMatrix phases(n_r_, codebook_.bits());
    for (int p = 0; p < layout_.elements; ++p) {
        Eigen::VectorXd block = z.segment(layout_.x(p, 0), layout_.length);
        block = block.array().round().matrix();
        phases.set(p, codebook_.decode_index(block));
    }
    return phases;
}

bool AnalogBfModel::singular(const Eigen::MatrixXcd& g) const
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues()(k_ - 1);
    return !(top > 0) || es.eigenvalues()(0) <= kSingularRatio * top;
}

double AnalogBfModel::scaled_epigraph(const PhaseIndexMatrix& phases) const
{
    const Eigen::MatrixXcd g = scaled_gram(encode(phases, 0.0));
    if (singular(g)) {
        return std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(k_) / min_eigenvalue(g);
}

milp::CutCallback AnalogBfModel::callback(std::vector<OaTraceRow>* trace, int cuts_per_round, double tol,
                                          bool boundary_cuts) const
{
    return [this, trace, cuts_per_round, tol, boundary_cuts](const Eigen::VectorXd& z) {
        std::vector<milp::LinearConstraint> out;
        const Eigen::MatrixXcd g = scaled_gram(z);
        OaTraceRow row;
        row.w = z(0) * scale_;
        row.lambda_min = min_eigenvalue(schur_matrix(z(0), g));
        if (singular(g)) {
            row.trace_objective = std::numeric_limits<double>::infinity();
            out.push_back(no_good_cut(z));
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
            row.trace_objective = scale_ * es.eigenvalues().cwiseInverse().sum();
            const auto eig = eigen_separation(z, cuts_per_round, tol);
            // an eigenvalue just below -tol can give a cut whose linear form
            // rounds to a slack above -tol; such a point counts as feasible
            for (const auto& cut : eig) {
                if (cut.constraint.slack(z) < -tol) {
                    out.push_back(cut.constraint);
                }
            }
            if (boundary_cuts && !eig.empty()) {
                if (auto cut = boundary_cut(z, tol)) {
                    out.push_back(std::move(cut->constraint));
                }
            }
        }
        if (trace != nullptr) {
            row.call = static_cast<long>(trace->size());
            row.cuts = static_cast<int>(out.size());
            trace->push_back(row);
        }
        return out;
    };
}

AnalogBfResult analog_beamforming(const ChannelTensor& channel, const Eigen::VectorXcd& phi, const ZfSolution& zf,
                                  const PhaseIndexMatrix& incumbent, const AnalogBfOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    const Eigen::VectorXd powers = analog_powers(zf);
    double scale = 0.0;
    {
        const Eigen::MatrixXcd g = scaled_gram(assemble_f(channel, incumbent, phi), powers);
        const double lo = min_eigenvalue(g);
        if (lo > kSingularRatio * max_eigenvalue(g)) {
            scale = 1.0 / lo;
        }
    }
    AnalogBfModel model(channel, phi, powers, incumbent.bits(), opts.los_balance, scale);
    milp::MilpModel& m = model.milp();
    m.node_limit = opts.node_limit;
    m.cut_limit = opts.cut_limit;

    const double inc_w = model.scaled_epigraph(incumbent);
    if (std::isfinite(inc_w)) {
        const double ub = inc_w * (1.0 + 1e-7);
        const Eigen::VectorXd z = model.encode(incumbent, ub);
        if (m.lp.max_violation(z) <= 1e-9) {
            m.lp.upper(0) = ub;
            m.warm_start = z;
        }
    }

    AnalogBfResult out;
    milp::MilpResult res;
    if (opts.mode == AnalogBfOptions::Mode::kLazy) {
        m.lazy_cuts = model.callback(&out.trace, opts.cuts_per_round, opts.psd_tol, opts.boundary_cuts);
        res = milp::solve_milp(m);
        out.nodes = res.nodes;
        out.cuts = res.cuts_added;
        out.lp_iterations = res.lp_iterations;
    } else {
        const auto separate = model.callback(&out.trace, opts.cuts_per_round, opts.psd_tol, opts.boundary_cuts);
        bool settled = false;
        for (int round = 0; round < opts.max_rounds; ++round) {
            res = milp::solve_milp(m);
            out.nodes += res.nodes;
            out.lp_iterations += res.lp_iterations;
            if (!res.has_incumbent) {
                settled = true;
                break;
            }
            out.round_objectives.push_back(res.objective * model.scale());
            const auto cuts = separate(res.x);
            if (cuts.empty()) {
                settled = true;
                break;
            }
            for (const auto& c : cuts) {
                m.lp.constraints.push_back(c);
            }
            out.cuts += static_cast<long>(cuts.size());
        }
        if (!settled) {
            res.has_incumbent = false;
            res.status = milp::MilpStatus::kNodeLimit;
        }
    }
    out.status = res.status;

    if (res.has_incumbent) {
        out.phases = model.decode(res.x);
        out.w = res.objective * model.scale();
    } else {
        out.phases = incumbent;
        out.fell_back = true;
        out.w = inc_w * model.scale();
    }
    const Eigen::MatrixXcd f = assemble_f(channel, out.phases, phi);
    out.epigraph_exact = epigraph_objective(f, powers);
    out.trace_objective = power_objective(f, powers);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

void write_oa_trace_csv(std::ostream& out, const std::vector<OaTraceRow>& rows)
{
    const auto old_precision = out.precision(17);
    out << "call,cuts,lambda_min,w,trace_objective\n";
    for (const auto& r : rows) {
        out << r.call << ',' << r.cuts << ',' << r.lambda_min << ',' << r.w << ',' << r.trace_objective << '\n';
    }
    out.precision(old_precision);
}

}  // namespace rishbf
