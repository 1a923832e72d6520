#ifndef RISHBF_SRM_HPP
#define RISHBF_SRM_HPP

#include "rishbf/analog_bf.hpp"
#include "rishbf/channel.hpp"
#include "rishbf/config.hpp"
#include "rishbf/digital_bf.hpp"
#include "rishbf/phase.hpp"

#include <iosfwd>
#include <limits>
#include <vector>

namespace rishbf {

/// One row of an optimisation trace. Also used by the baselines, which leave
/// w, trace_objective, cuts and nodes at their defaults.
struct TraceRecord {
    int t = 0;
    double sum_rate = 0.0;
    double w = std::numeric_limits<double>::quiet_NaN();
    double trace_objective = std::numeric_limits<double>::quiet_NaN();
    long cuts = 0;
    long nodes = 0;
    double seconds = 0.0;
    bool accepted = true;  // false when an analog step was rejected
};

/// Columns t,R,w,trace_objective,cuts,nodes,seconds. With timing=false the
/// seconds column is written as 0 so repeated runs are byte-identical.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& rows, bool timing = true);

struct SrmOptions {
    double epsilon = 1e-3;  // stop when the sum-rate gain drops to epsilon or below
    int max_iter = 20;      // analog+digital rounds after the initial digital step
    AnalogBfOptions analog;
};

struct SrmTrace {
    std::vector<TraceRecord> records;  // records[0] is the initial digital step
    PhaseIndexMatrix phases;
    ZfSolution digital;
    double sum_rate = 0.0;
    bool converged = false;       // stopped on the epsilon test
    bool rank_deficient = false;  // a candidate lost rank; the last feasible iterate was kept
    int rejected_steps = 0;       // analog steps that would have lowered the sum rate
    int fallbacks = 0;            // analog steps that returned the input phases
    double epsilon = 0.0;
    int max_iter = 0;

    int iterations() const { return static_cast<int>(records.size()) - 1; }
};

/// Alternates the digital step (ZF + water-filling) and the analog step
/// (discrete RIS configuration for the frozen powers), starting with the
/// digital step on init. A new configuration is kept only if its digital
/// step does not lower the sum rate, so the recorded rates never decrease.
/// Throws RankDeficient when init itself is rank deficient.
SrmTrace run_srm(const SystemConfig& cfg, const ChannelTensor& channel, const PhaseIndexMatrix& init,
                 const SrmOptions& opts = {});

}  // namespace rishbf

#endif  // RISHBF_SRM_HPP
