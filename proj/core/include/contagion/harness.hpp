#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contagion/analytic.hpp"
#include "contagion/diffusion.hpp"
#include "contagion/serialize.hpp"

namespace contagion {

struct SweepSpec {
    /// One of lambda, q, alpha, pi.
    std::string parameter;
    double lo = 0.0;
    double hi = 0.0;
    /// Number of grid points, endpoints included.
    std::size_t steps = 1;

    std::vector<double> values() const;
};

/// Concrete model at one sweep point.
struct ModelSpec {
    DegreeDistribution p = DegreeDistribution::poisson(5.0);
    ThresholdLaw t = ThresholdLaw::proportional(0.15);
    ActivationLaw alpha = ActivationLaw::none();
    double pi = 1.0;
    /// Kept so a Poisson law can be rebuilt at another lambda.
    std::size_t support_max = 0;

    /// Copy with one parameter replaced. Throws FieldError when the
    /// parameter does not apply (lambda on a non-Poisson law, q on a
    /// non-proportional threshold).
    ModelSpec with(const std::string& parameter, double value) const;
    /// Analytic parameters; seeding laws that are not degree based map to alpha = 0.
    ModelParams params() const;
};

enum class Dynamics { Monotone, Trials };

struct ExperimentConfig {
    ModelSpec model;
    std::size_t n = 10000;
    std::size_t replicas = 50;
    std::uint64_t seed = 1;
    std::optional<SweepSpec> sweep;
    CascadeDetector detector;
    Dynamics dynamics = Dynamics::Monotone;
    /// Resample until simple (reject mode) before running the dynamics.
    bool simple = false;
    /// Largest inactive component per replica (one extra BFS).
    bool inactive_census = true;
    std::size_t max_attempts = 10000;
    std::string output;
    bool per_replica = false;
    /// 0 = hardware concurrency.
    std::size_t threads = 1;

    /// Sweep values, or a single NaN when there is no sweep.
    std::vector<double> points() const;
    ModelSpec model_at(double value) const;
};

/// Parses and validates a config. Errors carry the JSON pointer of the field.
ExperimentConfig config_from_json(const json& j);
json to_json(const ExperimentConfig& c);

struct ReplicaResult {
    std::size_t point = 0;
    std::size_t replica = 0;
    bool ok = true;
    std::string error;
    double final_fraction = 0.0;
    double seed_fraction = 0.0;
    double pivotal_fraction = 0.0;
    double largest_inactive_fraction = 0.0;
    std::size_t rounds = 0;
    bool cascade = false;
    std::size_t attempts = 0;
    bool censored = false;
    double wall_seconds = 0.0;
};

struct Stat {
    std::size_t count = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;
    double ci_half_width() const noexcept { return 1.96 * stderr_mean; }
};

Stat summarize(std::span<const double> xs);

struct ReplicaSummary {
    double value = 0.0;
    /// Analytic cascade size used by the detector.
    double s_analytic = 0.0;
    double cutoff = 0.0;
    std::vector<ReplicaResult> replicas;
    std::size_t failed = 0;
    Stat final_fraction;
    Stat pivotal_fraction;
    Stat largest_inactive;
    Stat rounds;
    Stat attempts;
    std::size_t censored = 0;
    double cascade_frequency = 0.0;
};

struct ExperimentResult {
    std::vector<ReplicaSummary> points;
    double wall_seconds = 0.0;
    std::size_t failed() const noexcept;
};

/// Replica `replica` at sweep point `point` uses the stream
/// RandomStream(seed).split(point * replicas + replica), so its results do not
/// depend on the thread count or on scheduling.
RandomStream replica_stream(const ExperimentConfig& config, std::size_t point, std::size_t replica);

ReplicaResult run_replica(const ExperimentConfig& config, const ModelSpec& model, std::size_t point,
                          std::size_t replica, double s_analytic);

/// Runs every replica of every sweep point on a bounded worker pool and
/// merges results in (point, replica) order.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Runs `count` independent jobs on `threads` workers (0 = hardware concurrency).
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// 12 significant digits, "." decimal point; NaN as "nan".
std::string format_number(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::optional<std::size_t> column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;
    void write(std::ostream& os) const;
    void write_file(const std::string& path) const;
    static CsvTable parse(std::istream& in);
    static CsvTable read_file(const std::string& path);
};

CsvTable summary_table(const ExperimentConfig& config, const ExperimentResult& result);
CsvTable replica_table(const ExperimentConfig& config, const ExperimentResult& result);
CsvTable analytic_table(const ExperimentConfig& config);
/// Analytic and simulated columns side by side, one row per sweep point.
CsvTable sweep_table(const ExperimentConfig& config, const ExperimentResult& result);

struct CompareOptions {
    /// Key column; defaults to the first column of the first table.
    std::string key;
    /// Column pairs to compare; empty means every column both tables share.
    std::vector<std::pair<std::string, std::string>> columns;
    double tolerance = 0.015;
    /// Per-row tolerance column in the second table, if present.
    std::string tolerance_column = "tolerance";
};

struct CompareRow {
    double key = 0.0;
    std::string column;
    double a = 0.0;
    double b = 0.0;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    double max_deviation = 0.0;
    bool pass = true;

    CsvTable table() const;
};

class GridMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

CompareReport compare(const CsvTable& a, const CsvTable& b, const CompareOptions& options = {});

// ---------------------------------------------------------------------------
// Figures
// ---------------------------------------------------------------------------

class UnknownFigure : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> figure_names();

/// Data behind one of the named figures. All but `trials` are analytic; the
/// config supplies the model and (optionally) the sweep, otherwise a default
/// grid for the figure is used.
CsvTable figure(const std::string& name, const ExperimentConfig& config);

}  // namespace contagion
