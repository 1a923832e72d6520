#include "rishbf/baselines.hpp"

#include "rishbf/digital_bf.hpp"
#include "rishbf/errors.hpp"

#include <chrono>
#include <cmath>

namespace rishbf {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double wrap(double theta)
{
    double t = std::fmod(theta, 2.0 * kPi);
    if (t < 0) {
        t += 2.0 * kPi;
    }
    return t;
}

TraceRecord record(long t, double rate)
{
    TraceRecord r;
    r.t = static_cast<int>(t);
    r.sum_rate = rate;
    return r;
}

}  // namespace

double score_configuration(const SystemConfig& cfg, const ChannelTensor& channel, const PhaseIndexMatrix& phases)
{
    try {
        return digital_beamforming(assemble_f(channel, phases, cfg.phi_vector()), cfg.p_total, cfg.noise_power)
            .sum_rate;
    } catch (const RankDeficient&) {
        return 0.0;
    }
}

double score_thetas(const SystemConfig& cfg, const ChannelTensor& channel, const Eigen::VectorXd& thetas)
{
    try {
        return digital_beamforming(assemble_f_from_thetas(channel, thetas, cfg.phi_vector()), cfg.p_total,
                                   cfg.noise_power)
            .sum_rate;
    } catch (const RankDeficient&) {
        return 0.0;
    }
}

void AnnealSchedule::validate() const
{
    if (cap < 1) {
        throw std::invalid_argument("AnnealSchedule: cap must be >= 1");
    }
    if (!(cooling > 0.0 && cooling < 1.0)) {
        throw std::invalid_argument("AnnealSchedule: cooling must lie in (0, 1)");
    }
    if (!(t0 >= 0.0)) {
        throw std::invalid_argument("AnnealSchedule: initial temperature must be >= 0");
    }
}

DiscreteBaselineResult simulated_annealing(const SystemConfig& cfg, const ChannelTensor& channel,
                                           const AnnealSchedule& schedule, std::mt19937_64& rng,
                                           const std::optional<PhaseIndexMatrix>& init)
{
    schedule.validate();
    const auto t0 = Clock::now();
    PhaseIndexMatrix current = init ? *init : PhaseIndexMatrix::max_amplitude(cfg.n_r, cfg.b_bits);
    current.validate();

    DiscreteBaselineResult out;
    double rate = score_configuration(cfg, channel, current);
    out.evaluations = 1;
    out.phases = current;
    out.sum_rate = rate;
    out.trace.push_back(record(0, rate));

    const int elements = current.num_elements();
    const int phases = current.num_phases();
    std::uniform_int_distribution<int> pick_element(0, elements - 1);
    std::uniform_int_distribution<int> pick_shift(1, phases - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double temperature = schedule.t0;
    for (long i = 1; i < schedule.cap; ++i) {
        const int p = pick_element(rng);
        const int old = current.at(p);
        current.set(p, (old + pick_shift(rng)) % phases);
        const double candidate = score_configuration(cfg, channel, current);
        ++out.evaluations;

        const double delta = candidate - rate;
        bool accept = delta >= 0.0;
        if (!accept && temperature > 0.0) {
            accept = unit(rng) < std::exp(delta / temperature);
        }
        if (accept) {
            rate = candidate;
            ++out.accepted;
            out.trace.push_back(record(i, rate));
            if (rate > out.sum_rate) {
                out.sum_rate = rate;
                out.phases = current;
            }
        } else {
            current.set(p, old);
        }
        temperature *= schedule.cooling;
    }
    out.seconds = since(t0);
    return out;
}

DiscreteBaselineResult random_phase_baseline(const SystemConfig& cfg, const ChannelTensor& channel,
                                             std::mt19937_64& rng, int draws)
{
    if (draws < 1) {
        throw std::invalid_argument("random_phase_baseline: draws must be >= 1");
    }
    const auto t0 = Clock::now();
    DiscreteBaselineResult out;
    for (int d = 0; d < draws; ++d) {
        PhaseIndexMatrix phases = PhaseIndexMatrix::uniform_random(cfg.n_r, cfg.b_bits, rng);
        const double rate = score_configuration(cfg, channel, phases);
        ++out.evaluations;
        if (d == 0 || rate > out.sum_rate) {
            out.sum_rate = rate;
            out.phases = std::move(phases);
            out.trace.push_back(record(d, rate));
        }
    }
    out.accepted = static_cast<long>(out.trace.size());
    out.seconds = since(t0);
    return out;
}

Eigen::VectorXd sum_rate_gradient(const SystemConfig& cfg, const ChannelTensor& channel,
                                  const Eigen::VectorXd& thetas, double h)
{
    Eigen::VectorXd g(thetas.size());
    Eigen::VectorXd t = thetas;
    for (Eigen::Index i = 0; i < thetas.size(); ++i) {
        t(i) = thetas(i) + h;
        const double up = score_thetas(cfg, channel, t);
        t(i) = thetas(i) - h;
        const double down = score_thetas(cfg, channel, t);
        t(i) = thetas(i);
        g(i) = (up - down) / (2.0 * h);
    }
    return g;
}

Eigen::VectorXd sum_rate_gradient_4pt(const SystemConfig& cfg, const ChannelTensor& channel,
                                      const Eigen::VectorXd& thetas, double h)
{
    Eigen::VectorXd g(thetas.size());
    Eigen::VectorXd t = thetas;
    auto at = [&](Eigen::Index i, double offset) {
        t(i) = thetas(i) + offset;
        const double v = score_thetas(cfg, channel, t);
        t(i) = thetas(i);
        return v;
    };
    for (Eigen::Index i = 0; i < thetas.size(); ++i) {
        g(i) = (at(i, -2 * h) - 8 * at(i, -h) + 8 * at(i, h) - at(i, 2 * h)) / (12.0 * h);
    }
    return g;
}

ContinuousResult continuous_relaxation(const SystemConfig& cfg, const ChannelTensor& channel,
                                       const ContinuousOptions& opts)
{
    if (!(opts.step > 0.0) || !(opts.fd_step > 0.0) || opts.iterations < 0) {
        throw std::invalid_argument("continuous_relaxation: step and fd_step must be positive");
    }
    const auto t0 = Clock::now();
    const int elements = channel.num_elements();
    Eigen::VectorXd theta = opts.init ? *opts.init : Eigen::VectorXd::Constant(elements, kPi / 2);
    if (theta.size() != elements) {
        throw DimensionMismatch("continuous_relaxation: init has the wrong length");
    }
    theta = theta.unaryExpr(&wrap);

    ContinuousResult out;
    out.thetas = theta;
    out.sum_rate = score_thetas(cfg, channel, theta);
    out.trace.push_back(record(0, out.sum_rate));

    double step = opts.step;
    for (int it = 1; it <= opts.iterations; ++it) {
        const Eigen::VectorXd g = sum_rate_gradient(cfg, channel, out.thetas, opts.fd_step);
        const double norm = g.norm();
        if (!(norm > 0.0)) {
            break;
        }
        bool moved = false;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            const Eigen::VectorXd trial = (out.thetas + (step / norm) * g).unaryExpr(&wrap);
            const double rate = score_thetas(cfg, channel, trial);
            if (rate > out.sum_rate) {
                out.thetas = trial;
                out.sum_rate = rate;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            break;
        }
        out.iterations = it;
        out.trace.push_back(record(it, out.sum_rate));
        step = std::min(2.0 * step, opts.step);
    }
    out.seconds = since(t0);
    return out;
}

}  // namespace rishbf
