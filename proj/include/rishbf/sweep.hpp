#ifndef RISHBF_SWEEP_HPP
#define RISHBF_SWEEP_HPP

#include "rishbf/baselines.hpp"
#include "rishbf/config.hpp"
#include "rishbf/srm.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rishbf {

enum class SweepParam { kSnr, kNR, kBits, kUsers, kDb };
enum class Algorithm { kSrm, kSa, kRandom, kContinuous, kLos };

const char* to_string(SweepParam p);
const char* to_string(Algorithm a);
SweepParam parse_sweep_param(const std::string& s);
Algorithm parse_algorithm(const std::string& s);

/// Applies one swept value to a configuration. kUsers sets K and N_t together.
SystemConfig apply_sweep_value(const SystemConfig& base, SweepParam param, double value);

struct SweepSpec {
    SystemConfig base;
    SweepParam param = SweepParam::kSnr;
    std::vector<double> values;
    std::vector<Algorithm> algorithms;
    int trials = 1;
    std::uint64_t seed_base = 1;
    bool paired_seeds = false;  // channel seed depends on the trial only, shared across values
    double user_radius = 60.0;
    SrmOptions srm;
    AnnealSchedule sa;
    int random_draws = 1;
    ContinuousOptions continuous;
    bool force = false;  // run SRM cells beyond the desk-scale limits
    int threads = 0;     // 0 = hardware concurrency

    /// Throws std::invalid_argument.
    void validate() const;
};

/// SRM cells are skipped unless forced when n_r > 4, b > 2 or max(K, N_t) > 3.
bool within_desk_limits(const SystemConfig& cfg);

/// splitmix64 finaliser; the cell seed is seed_base ^ mix(value bits, trial).
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t cell_seed(const SweepSpec& spec, double value, int trial);

struct SweepRow {
    std::string param;
    double value = 0.0;
    int trial = 0;
    std::string algorithm;
    double sum_rate = 0.0;
    double seconds = 0.0;
    long iterations = 0;
    std::string status = "ok";  // ok | skipped | error: <message>
    std::uint64_t seed = 0;

    bool ok() const { return status == "ok"; }
    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;

    bool all_ok() const;
    long failures() const;
};

/// Runs every (value, trial, algorithm) cell on a worker pool. Rows come back
/// in (value, trial, algorithm) order regardless of scheduling. A failing
/// cell is recorded with an error status and the sweep carries on.
SweepTable run_sweep(const SweepSpec& spec);

struct SummaryRow {
    double value = 0.0;
    std::string algorithm;
    int n = 0;
    double mean = 0.0;
    double ci95 = 0.0;  // 1.96 * sample sd / sqrt(n), 0 when n < 2
};

/// Mean and confidence half-width over the ok rows, ordered by value then
/// first appearance of the algorithm.
std::vector<SummaryRow> summarize(const SweepTable& table);

/// Columns param,value,trial,algorithm,sum_rate,seconds,iterations,status,seed.
/// timing=false writes 0 for seconds.
void write_sweep_csv(std::ostream& out, const SweepTable& table, bool timing = true);
SweepTable read_sweep_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);
/// Line plot of the mean sum rate per algorithm with confidence bars.
void write_svg_plot(std::ostream& out, const SweepTable& table, const std::string& x_label);

struct OutputOptions {
    bool csv = true;
    bool svg = false;
    bool timing = true;
};

/// Writes <prefix>.csv, <prefix>_summary.csv and optionally <prefix>.svg.
/// Returns the paths written. Throws std::runtime_error on IO failure or an
/// empty table.
std::vector<std::string> emit_outputs(const SweepTable& table, const std::string& prefix, const OutputOptions& opts);

}  // namespace rishbf

#endif  // RISHBF_SWEEP_HPP
