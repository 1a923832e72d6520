#include "rishbf/srm.hpp"

#include "rishbf/errors.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

namespace rishbf {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& rows, bool timing)
{
    const auto old_precision = out.precision(17);
    out << "t,R,w,trace_objective,cuts,nodes,seconds\n";
    for (const auto& r : rows) {
        out << r.t << ',' << r.sum_rate << ',' << r.w << ',' << r.trace_objective << ',' << r.cuts << ','
            << r.nodes << ',' << (timing ? r.seconds : 0.0) << '\n';
    }
    out.precision(old_precision);
}

SrmTrace run_srm(const SystemConfig& cfg, const ChannelTensor& channel, const PhaseIndexMatrix& init,
                 const SrmOptions& opts)
{
    if (opts.max_iter < 0 || std::isnan(opts.epsilon) || opts.epsilon < 0) {
        throw std::invalid_argument("run_srm: epsilon must be >= 0 and max_iter >= 0");
    }
    init.validate();
    const Eigen::VectorXcd phi = cfg.phi_vector();

    SrmTrace trace;
    trace.epsilon = opts.epsilon;
    trace.max_iter = opts.max_iter;

    auto t0 = Clock::now();
    trace.phases = init;
    trace.digital = digital_beamforming(assemble_f(channel, init, phi), cfg.p_total, cfg.noise_power);
    trace.sum_rate = trace.digital.sum_rate;
    {
        TraceRecord rec;
        rec.t = 0;
        rec.sum_rate = trace.sum_rate;
        try {
            rec.trace_objective = power_objective(assemble_f(channel, init, phi), analog_powers(trace.digital));
        } catch (const Singular&) {
        }
        rec.seconds = since(t0);
        trace.records.push_back(rec);
    }
    if (std::isinf(opts.epsilon)) {
        trace.converged = true;
        return trace;
    }

    for (int t = 1; t <= opts.max_iter; ++t) {
        t0 = Clock::now();
        TraceRecord rec;
        rec.t = t;
        rec.sum_rate = trace.sum_rate;

        AnalogBfResult analog;
        bool usable = true;
        try {
            analog = analog_beamforming(channel, phi, trace.digital, trace.phases, opts.analog);
        } catch (const Singular&) {
            usable = false;
        }
        if (usable) {
            rec.w = analog.w;
            rec.trace_objective = analog.trace_objective;
            rec.cuts = analog.cuts;
            rec.nodes = analog.nodes;
            if (analog.fell_back) {
                ++trace.fallbacks;
            }
            try {
                ZfSolution next = digital_beamforming(assemble_f(channel, analog.phases, phi), cfg.p_total,
                                                      cfg.noise_power);
                if (next.sum_rate >= trace.sum_rate) {
                    trace.phases = analog.phases;
                    trace.digital = std::move(next);
                } else {
                    rec.accepted = false;
                    ++trace.rejected_steps;
                }
            } catch (const RankDeficient&) {
                trace.rank_deficient = true;
                rec.accepted = false;
            }
        } else {
            trace.rank_deficient = true;
            rec.accepted = false;
        }

        const double gain = trace.digital.sum_rate - trace.sum_rate;
        trace.sum_rate = trace.digital.sum_rate;
        rec.sum_rate = trace.sum_rate;
        rec.seconds = since(t0);
        trace.records.push_back(rec);

        if (!rec.accepted || gain <= opts.epsilon) {
            trace.converged = rec.accepted || !trace.rank_deficient;
            break;
        }
    }
    return trace;
}

}  // namespace rishbf
