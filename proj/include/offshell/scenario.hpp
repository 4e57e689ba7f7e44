#pragma once

// Batch front end: scenario files, run orchestration and CSV / metadata
// emission. Scenario files are JSON; every real may be given as a JSON number
// or, to keep full precision, as a decimal string.
//
//   {
//     "name": "converge",
//     "form": "scalar",                      // or "vector"
//     "precision_bits": 256,
//     "initial": {"eps": "0.5", "deps": "0.1"},
//     "params": {"D": "1", "tau_max": "40"},
//     "record_every": "0.01",
//     "emit": ["state", "k_potentials", "eigenvalues"],
//     "d_values": ["0.5", "1", "2"]           // optional default sweep list
//   }
//
// Vector initial data is either {"u": [t,x,y,z], "a": [...], "j": [...]}
// or scalar entries, which are then realized by worldline_from_scalars.

#include "offshell/core.hpp"
#include "offshell/integrator.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace offshell {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Process exit statuses of the command-line driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Environment variable that overrides the precision of a scenario file.
inline constexpr const char* kPrecisionEnv = "OFFSHELL_PRECISION";

struct EmitSet {
    bool state = true;
    bool k_potentials = false;
    bool eigenvalues = false;
    bool velocity = false;
};

struct Scenario {
    std::string name;
    Form form{Form::scalar};
    ScalarState scalar_initial;
    /// Set iff form == vector.
    std::optional<WorldlineState> vector_initial;
    ModelParams params;
    Real record_every{"0.01"};
    EmitSet emit;
    std::vector<Real> d_values;
    /// The document the scenario was parsed from (echoed into metadata).
    nlohmann::json source;
};

/// Reads and parses a JSON file. Throws ConfigError on I/O or syntax errors.
nlohmann::json load_json_file(const std::filesystem::path& path);

/// Precision for a run, by priority: explicit flag, OFFSHELL_PRECISION,
/// "precision_bits" in the document, 256. Throws ConfigError for values
/// below 53 or unparsable text.
int resolve_precision_bits(const nlohmann::json& doc, std::optional<int> flag);

/// Builds a scenario at the current working precision (install a
/// PrecisionScope for resolve_precision_bits first). `form_override`
/// converts the initial data to the other formulation when needed. Throws
/// ConfigError for malformed or invalid documents, including initial data
/// outside the above-shell domain.
Scenario parse_scenario(const nlohmann::json& doc, std::optional<Form> form_override = {});

/// Comma-separated list of reals ("0.5,1,2").
std::vector<Real> parse_real_list(const std::string& text);

struct RunReport {
    Trajectory trajectory;
    /// Extrapolated pole time for diverged runs, when the fit succeeds.
    std::optional<Real> blowup_fit;
    std::string fit_note;
};

RunReport run_scenario(const Scenario& s);

/// CSV column names in output order.
std::vector<std::string> csv_header(const Scenario& s);

/// Header plus one line per sample, reals with precision_bits / 3
/// significant digits.
void write_trajectory_csv(std::ostream& out, const Scenario& s, const Trajectory& traj);

nlohmann::json run_metadata(const Scenario& s, const RunReport& r);

/// Writes <dir>/<stem>.csv and <dir>/<stem>.meta.json.
void write_run_files(const std::filesystem::path& dir, const std::string& stem,
                     const Scenario& s, const RunReport& r);

/// Exit status implied by a run outcome.
int exit_status(OutcomeKind kind);

/// Significant digits used for reals in CSV output.
int csv_digits(int precision_bits);

/// One row of the sweep summary.
struct SweepRow {
    Real D;
    OutcomeKind outcome{OutcomeKind::tau_max_reached};
    std::optional<Real> blowup_tau;
    Real final_eps;
    Real tau_end;
    std::string error;
};

/// Runs the scenario once per D (in parallel) and writes
/// <dir>/<name>.sweep.csv plus <dir>/<name>.d<i>.csv / .meta.json per run
/// (i = position in d_values).
std::vector<SweepRow> run_sweep(const Scenario& s, const std::vector<Real>& d_values,
                                const std::filesystem::path& dir);

/// Grid of K-potentials over eps x deps at fixed (ddeps, rho) for surface
/// plots. Columns: eps, deps, ddeps, rho, k1, k2, k3, k1_plus, k2_plus, k3_plus.
struct KGridSpec {
    Real eps_min{"0.01"}, eps_max{"2"};
    Real deps_min{"-1"}, deps_max{"1"};
    int eps_points = 60;
    int deps_points = 60;
    Real ddeps{0};
    Real rho{0};
    Real D{1};
};
void write_k_grid_csv(std::ostream& out, const KGridSpec& spec, int precision_bits);

/// Result of a regularization self-check.
struct IdentityCheck {
    std::string name;
    bool passed = false;
    std::string tolerance;
    std::string detail;
};

/// Property checks of the regularization module on seeded random inputs.
/// Tolerances scale with the working precision.
std::vector<IdentityCheck> regularization_checks(unsigned seed);

}  // namespace offshell
