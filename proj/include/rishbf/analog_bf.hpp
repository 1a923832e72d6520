#ifndef RISHBF_ANALOG_BF_HPP
#define RISHBF_ANALOG_BF_HPP

#include "rishbf/channel.hpp"
#include "rishbf/digital_bf.hpp"
#include "rishbf/milp.hpp"
#include "rishbf/phase.hpp"
#include "rishbf/phase_codebook.hpp"

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace rishbf {

/// Tr((F~ F~^H)^{-1}) with F~ = P^{-1/2} F. Throws Singular.
double power_objective(const Eigen::MatrixXcd& f, const Eigen::VectorXd& powers);

/// K * lambda_max((F~ F~^H)^{-1}), the value the epigraph formulation
/// minimises. It upper-bounds power_objective. Throws Singular.
double epigraph_objective(const Eigen::MatrixXcd& f, const Eigen::VectorXd& powers);

/// Powers frozen into the analog step: the water-filling powers with inactive
/// users lifted to kPowerFloor * max(p) so that P^{-1/2} stays finite.
inline constexpr double kPowerFloor = 1e-4;
Eigen::VectorXd analog_powers(const ZfSolution& zf);

/// [[ (w/K) I, I ], [ I, G ]] for a K x K Hermitian G.
Eigen::MatrixXcd schur_matrix(double w, const Eigen::MatrixXcd& g);

/// Eigenpairs of the real embedding of Hermitian z with eigenvalue < -tol,
/// most negative first. Each complex eigendirection appears twice in the
/// embedding (u and its quarter-turn partner); only one of the two is kept.
std::vector<std::pair<double, Eigen::VectorXd>> negative_directions(const Eigen::MatrixXcd& z, double tol,
                                                                   int max_count);

struct EigenCut {
    Eigen::VectorXd u;  // eigenvector of the real embedding (length 4K)
    double eigenvalue = 0.0;
    milp::LinearConstraint constraint;  // u^T R(Z(z)) u >= 0, affine in z
};

/// Variable order: [w, x blocks (one per element), y blocks (one per pair p < p')].
struct VariableLayout {
    int elements = 0;
    int length = 0;  // one-hot block length L
    int pairs = 0;

    int num_vars() const { return 1 + (elements + pairs) * length; }
    static constexpr int w() { return 0; }
    int x(int p, int slot) const { return 1 + p * length + slot; }
    int y(int pair, int slot) const { return 1 + (elements + pair) * length + slot; }
};

struct AnalogBfOptions {
    enum class Mode {
        kLazy,       // eigen cuts inside branch-and-bound
        kOuterLoop,  // re-solve the MILP after each separation round
    };
    bool los_balance = false;  // equal sum_{l2} (1 + sin theta) across RIS rows
    Mode mode = Mode::kLazy;
    long node_limit = 100000;
    long cut_limit = 100000;
    int cuts_per_round = 1;
    bool boundary_cuts = true;  // add boundary_cut next to the eigen cuts
    double psd_tol = 1e-9;
    int max_rounds = 10000;  // outer-loop mode only
};

struct OaTraceRow {
    long call = 0;
    int cuts = 0;
    double lambda_min = 0.0;
    double w = 0.0;                // unscaled epigraph value of the candidate
    double trace_objective = 0.0;  // Tr(G^{-1}) of the candidate, inf if singular
};

/// Mixed-integer model of the power-minimisation step for fixed powers.
/// Internally the Gram is multiplied by scale() so that the LP data is O(1);
/// the MILP variable w is the scaled epigraph, and the true value is scale() * w.
class AnalogBfModel {
public:
    /// scale <= 0 picks K over an upper bound on Tr(G); analog_beamforming
    /// passes 1 / lambda_min of the incumbent Gram instead.
    AnalogBfModel(const ChannelTensor& channel, const Eigen::VectorXcd& phi, const Eigen::VectorXd& powers,
                  int bits, bool los_balance = false, double scale = 0.0);

    const VariableLayout& layout() const { return layout_; }
    const PhaseCodebook& codebook() const { return codebook_; }
    const milp::MilpModel& milp() const { return milp_; }
    milp::MilpModel& milp() { return milp_; }
    double scale() const { return scale_; }
    int k_users() const { return k_; }
    int n_r() const { return n_r_; }

    /// Scaled Gram s * G(z) from the binary part of z.
    Eigen::MatrixXcd scaled_gram(const Eigen::VectorXd& z) const;
    /// Unscaled P^{-1/2} F F^H P^{-1/2}.
    Eigen::MatrixXcd gram(const Eigen::VectorXd& z) const { return scaled_gram(z) / scale_; }
    /// Z(z) built from the scaled Gram and the scaled w in z.
    Eigen::MatrixXcd z_matrix(const Eigen::VectorXd& z) const;

    /// Cuts from the most negative eigendirections of Z at the point z.
    std::vector<EigenCut> eigen_separation(const Eigen::VectorXd& z, int max_cuts = 1,
                                           double tol = 1e-9) const;
    /// Cut from the null direction of Z at (w*, x), w* = K lambda_max(G(x)^{-1}),
    /// i.e. where the ray in w through the candidate leaves the PSD cone.
    /// Empty when G(x) is singular or the cut would not separate z.
    std::optional<EigenCut> boundary_cut(const Eigen::VectorXd& z, double tol = 1e-9) const;
    /// sum_p x_{p, slot(m_p)} <= P - 1, used when the candidate Gram is singular.
    milp::LinearConstraint no_good_cut(const Eigen::VectorXd& z) const;

    Eigen::VectorXd encode(const PhaseIndexMatrix& phases, double scaled_w) const;
    PhaseIndexMatrix decode(const Eigen::VectorXd& z) const;

    /// K * lambda_max of the inverse scaled Gram, +inf when singular.
    double scaled_epigraph(const PhaseIndexMatrix& phases) const;

    /// Lazy-cut callback. When trace is non-null each call appends one row.
    milp::CutCallback callback(std::vector<OaTraceRow>* trace, int cuts_per_round, double tol,
                               bool boundary_cuts) const;

private:
    bool singular(const Eigen::MatrixXcd& g) const;
    EigenCut cut_from_direction(Eigen::VectorXd u, double lambda) const;

    PhaseCodebook codebook_;
    VariableLayout layout_;
    int k_ = 0;
    int n_r_ = 0;
    double scale_ = 1.0;
    Eigen::MatrixXcd g0_;
    std::vector<Eigen::MatrixXcd> basis_;  // per variable, scaled
    milp::MilpModel milp_;
};

struct AnalogBfResult {
    PhaseIndexMatrix phases;
    double w = 0.0;               // optimal epigraph value reported by the MILP
    double epigraph_exact = 0.0;  // K * lambda_max(G^{-1}) of the decoded phases
    double trace_objective = 0.0;
    milp::MilpStatus status = milp::MilpStatus::kInfeasible;
    long nodes = 0;
    long cuts = 0;
    long lp_iterations = 0;
    bool fell_back = false;  // no MILP incumbent, the input phases were returned
    std::vector<OaTraceRow> trace;
    std::vector<double> round_objectives;  // outer-loop mode: MILP value per round
    double seconds = 0.0;
};

/// Discrete RIS configuration minimising the epigraph of the inverse Gram for
/// the powers of zf. incumbent seeds the MILP and bounds w from above.
AnalogBfResult analog_beamforming(const ChannelTensor& channel, const Eigen::VectorXcd& phi, const ZfSolution& zf,
                                  const PhaseIndexMatrix& incumbent, const AnalogBfOptions& opts = {});

/// CSV columns: call,cuts,lambda_min,w,trace_objective.
void write_oa_trace_csv(std::ostream& out, const std::vector<OaTraceRow>& rows);

}  // namespace rishbf

#endif  // RISHBF_ANALOG_BF_HPP
