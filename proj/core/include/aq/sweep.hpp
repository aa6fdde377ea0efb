#pragma once

#include "aq/path.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aq {

enum class SweepMode { oam, path };
enum class OutputFormat { csv, json };

std::string_view to_string(SweepMode mode);
std::string_view to_string(OutputFormat format);

struct SweepConfig {
    SweepMode mode = SweepMode::oam;
    int dimension = 3;  // oam: D = 2N + 1
    int n_signal = 2;   // path
    int n_idler = 2;    // path
    int l0 = 0;
    CorrelationModel model = CorrelationModel::overlap;
    double alpha_min = 0.0;
    double alpha_max = kTwoPi;
    int steps = 200;
    std::optional<int> truncation;
    std::optional<std::string> preset;
    std::string output_path;  // empty: standard output
    OutputFormat format = OutputFormat::csv;
    std::optional<int> parallelism;

    /// Throws InvalidArgument on out-of-range or inconsistent values.
    void validate() const;
};

struct SweepRow {
    double alpha = 0.0;
    double concurrence = 0.0;
    double purity = 1.0;
    int schmidt_rank_effective = 0;
    int truncation_used = 0;
    bool converged = true;
    std::string notes;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Smallest aperture actually simulated when alpha_min is 0.
inline constexpr double kAlphaFloor = 1e-4;

/// Uniform grid over [alpha_min, alpha_max] with both endpoints; a zero
/// first point is replaced by kAlphaFloor.
std::vector<double> alpha_grid(const SweepConfig& config);

/// Names accepted by expand_preset.
std::vector<std::string> preset_names();

/// One curve of a (possibly multi-curve) sweep.
struct SweepCurve {
    std::string label;
    SweepConfig config;
};

/// Splits a preset into its curves; a config without preset is one curve.
/// Settings that a preset does not pin (steps, model, l0, truncation,
/// output, format, parallelism) are inherited from `config`.
std::vector<SweepCurve> expand_preset(const SweepConfig& config);

std::vector<SweepRow> run_oam_sweep(const SweepConfig& config);
std::vector<SweepRow> run_path_sweep(const SweepConfig& config);

/// Runs every curve of the config; rows are tagged with `curve=<label>`.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Fraction of rows with converged == false.
double unconverged_fraction(const std::vector<SweepRow>& rows);

std::string render_csv(const std::vector<SweepRow>& rows);
std::string render_json(const std::vector<SweepRow>& rows, const SweepConfig& config);
std::vector<SweepRow> parse_json_rows(std::string_view document);

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes the rows in the configured format to config.output_path, or to
/// `console` when it is empty. Throws IoError.
void emit(const std::vector<SweepRow>& rows, const SweepConfig& config, std::ostream& console);

/// emit() with standard output as the console.
void emit(const std::vector<SweepRow>& rows, const SweepConfig& config);

std::string_view library_version();

}  // namespace aq
