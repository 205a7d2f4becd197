#ifndef QBARRIER_CLI_HPP
#define QBARRIER_CLI_HPP

#include "qbarrier/params.hpp"

#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace qbarrier::cli {

// Filesystem failure while emitting an artifact; message carries the path.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Invalid run configuration (unknown command, bad field combination).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

enum class Command { Classical, Fock, Vacuum, Thermal, Coherent, Entropy, Validate, Sweep };

enum class OutputFormat { Csv, Json };

/// Everything one invocation needs. Numeric fields are validated against the
/// physics modules' preconditions before any output is produced.
struct RunConfig {
    Command command = Command::Validate;
    // omega_tau defaults to pi at the CLI so --cap-lambda maps onto lambda_bar
    // without a resonance surprise; the library default stays zero.
    ModelParams params{.omega_tau = std::numbers::pi};
    double cap_lambda = -1.0;      // >= 0: override lambda_bar via Lambda at fixed omega_tau
    std::vector<double> lambda_caps; // Lambda grid for fock/thermal/entropy datasets
    int n0 = 0;                    // initial photon number (vacuum uses 0)
    int n0_max = 24;               // fock/entropy row range
    int n_max = 24;                // fock column range
    double y = 0.90483741803595957; // thermal Boltzmann weight, default exp(-0.1)
    double alpha_abs = 3.0;        // coherent |alpha|
    int n_out_max = 45;            // coherent conditional-distribution row range
    int circle_points = 256;       // coherent phase-space circle samples
    int grid_points = 1024;        // posterior grid resolution
    double tail_tol = 1e-12;
    OutputFormat format = OutputFormat::Csv;
    std::string out_path;          // empty: default name derived from the command
    double sweep_lambda_max = 2.0;
    int sweep_steps = 21;
    bool inject_perturbation = false; // validate-only negative control hook
};

struct RunResult {
    int exit_code = 0;                 // 0 ok, 1 validation failure, 2 config/io, 3 numeric
    std::vector<std::string> outputs;  // files written
    std::string message;               // human-readable status or error
};

struct ValidationRecord {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// In-memory dataset; one shape serves both output formats so the numeric
/// tokens are formatted exactly once.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

// Scientific notation with 12 significant digits; the round-trip format for
// every real-valued cell.
std::string format_sig12(double v);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

// Writes content to path via a temporary file and an atomic rename, so no
// partial artifact is ever observable. Throws IoError.
void write_atomic(const std::string& path, const std::string& content);

/// Reads a key=value config file into (key, value) pairs in file order.
/// Blank lines and full-line comments ('#' or ';') are skipped; keys and
/// values are whitespace-trimmed and a value may be double-quoted. Throws
/// ConfigError on a malformed line or a repeated key, IoError when the file
/// cannot be read.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Fully pinned configuration for a figure preset (fig3, fig4, fig5, fig6).
/// Throws ConfigError for an unknown name. Callers overlay explicit flags on
/// top of the returned config.
RunConfig preset_config(const std::string& name);

/// Executes one configuration: dispatches on config.command, writes the
/// artifact(s), and maps library errors onto exit codes. Never throws.
RunResult run(const RunConfig& config);

// Individual command backends; each returns the dataset(s) it would write.
// run() wraps these with output handling. These throw library errors.
Table make_classical_table(const RunConfig& config);
Table make_fock_table(const RunConfig& config);
Table make_vacuum_table(const RunConfig& config);
Table make_thermal_table(const RunConfig& config);
Table make_coherent_conditional_table(const RunConfig& config);
Table make_coherent_circle_table(const RunConfig& config);
Table make_entropy_table(const RunConfig& config);
Table make_sweep_table(const RunConfig& config);
std::vector<ValidationRecord> run_validation_suite(const RunConfig& config);
std::string validation_report_json(const std::vector<ValidationRecord>& records);

} // namespace qbarrier::cli

#endif
