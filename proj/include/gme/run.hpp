#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gme/params.hpp"

namespace gme {

/// Thrown on config file schema violations; the message names the offending
/// field. Mapped to exit code 2 by the CLI.
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class RunMode { closed_form, simulate, sweep, verify, relativistic };

struct SweepAxis {
    std::string parameter;  // phi | epsilon | xi | Omega | omegaT
    double min = 0.0;
    double max = 1.0;
    int count = 2;
    std::string scale = "linear";  // linear | log
};

struct NumericalSettings {
    int final_grid_points = 96;
    int quadrature_nodes = 64;
    int split_steps = 256;
    int split_grid_points = 128;
    double tolerance = 1e-6;
};

struct RunConfig {
    int schema_version = 1;
    RunMode mode = RunMode::closed_form;
    // Exactly one of the two blocks is present in the config file.
    std::optional<ExperimentParams> params;
    std::optional<DimensionlessGroups> groups;
    std::optional<SweepAxis> sweep;
    std::vector<std::string> sweep_outputs;  // default: all closed forms
    NumericalSettings numerics;
    std::string out_dir = ".";
    int threads = 1;
    bool with_oracle = false;  // simulate: also run split-step and report fidelity
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_json(const std::string& text);

/// Resolved groups for the run (derived from params when given directly).
DimensionlessGroups resolve_groups(const RunConfig& config);

/// Compact single-line JSON of the resolved config, embedded in CSV headers.
std::string describe_config(const RunConfig& config);

// Subcommand drivers; each returns the process exit code (0 ok, 1 verification
// failure, 2 config error is signalled by config_error instead).
int run_closed_form(const RunConfig& config, std::ostream& out);
int run_relativistic(const RunConfig& config, std::ostream& out);
int run_simulate(const RunConfig& config, std::ostream& out);
int run_sweep(const RunConfig& config, std::ostream& out);
int run_verify(const RunConfig& config, std::ostream& out);

/// Writes CSV sweep rows for `config` to `out` (used by run_sweep and by the
/// determinism tests; byte-identical output for identical config and any
/// thread count).
void write_sweep_csv(const RunConfig& config, std::ostream& out);

/// Columns (x, f0, f2, f4) over [lo, hi] plus a self-contained SVG rendering.
void emit_ffunction_plot(double lo, double hi, int samples,
                         std::ostream& csv_out, std::ostream& svg_out);

}  // namespace gme
