#ifndef RISHBF_BASELINES_HPP
#define RISHBF_BASELINES_HPP

#include "rishbf/channel.hpp"
#include "rishbf/config.hpp"
#include "rishbf/phase.hpp"
#include "rishbf/srm.hpp"

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <vector>

namespace rishbf {

/// Sum rate of the digital step for a phase configuration, 0 when F is rank
/// deficient (no user can be served by ZF).
double score_configuration(const SystemConfig& cfg, const ChannelTensor& channel, const PhaseIndexMatrix& phases);
double score_thetas(const SystemConfig& cfg, const ChannelTensor& channel, const Eigen::VectorXd& thetas);

struct AnnealSchedule {
    double t0 = 1.0;        // bits
    double cooling = 0.999;  // T_i = t0 * cooling^i
    long cap = 100000;       // evaluations, including the initial one
    static constexpr long kLongCap = 10000000;

    void validate() const;
};

struct DiscreteBaselineResult {
    PhaseIndexMatrix phases;
    double sum_rate = 0.0;
    long evaluations = 0;
    long accepted = 0;
    std::vector<TraceRecord> trace;  // one row per accepted move (current R), t = evaluation index
    double seconds = 0.0;
};

/// Metropolis search over single-element phase re-draws, scored with the
/// digital step. Returns the best configuration seen. init defaults to
/// PhaseIndexMatrix::max_amplitude.
DiscreteBaselineResult simulated_annealing(const SystemConfig& cfg, const ChannelTensor& channel,
                                           const AnnealSchedule& schedule, std::mt19937_64& rng,
                                           const std::optional<PhaseIndexMatrix>& init = std::nullopt);

/// Best of `draws` uniform codebook configurations.
DiscreteBaselineResult random_phase_baseline(const SystemConfig& cfg, const ChannelTensor& channel,
                                             std::mt19937_64& rng, int draws = 1);

struct ContinuousOptions {
    double step = 0.5;  // initial step length in radians (along the normalised gradient)
    int iterations = 200;
    double fd_step = 1e-5;
    int max_halvings = 20;
    std::optional<Eigen::VectorXd> init;  // default: every theta = pi/2
};

struct ContinuousResult {
    Eigen::VectorXd thetas;  // best iterate, wrapped to [0, 2 pi)
    double sum_rate = 0.0;
    int iterations = 0;
    std::vector<TraceRecord> trace;
    double seconds = 0.0;
};

/// Gradient of score_thetas by central differences with step h.
Eigen::VectorXd sum_rate_gradient(const SystemConfig& cfg, const ChannelTensor& channel,
                                  const Eigen::VectorXd& thetas, double h = 1e-5);
/// Same with the fourth-order stencil (f(-2h) - 8 f(-h) + 8 f(h) - f(2h)) / 12h.
Eigen::VectorXd sum_rate_gradient_4pt(const SystemConfig& cfg, const ChannelTensor& channel,
                                      const Eigen::VectorXd& thetas, double h = 1e-3);

/// Gradient ascent on the sum rate over continuous phases. A step that does
/// not improve the rate is retried at half length; the search stops when
/// max_halvings is exhausted or after `iterations` accepted steps.
ContinuousResult continuous_relaxation(const SystemConfig& cfg, const ChannelTensor& channel,
                                       const ContinuousOptions& opts = {});

}  // namespace rishbf

#endif  // RISHBF_BASELINES_HPP
