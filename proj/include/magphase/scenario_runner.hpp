#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "magphase/quadrature.hpp"

namespace magphase {

enum class Scenario {
    ab_flux_string,
    ab_lattice,
    classical_device,
    neutron_phase,
    neutron_emf,
    identity_check,
    inertness,
};

// Anything wrong with a config document or a --set override: unknown
// scenario or key, malformed number, missing table columns.  The CLI
// maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    std::string param;
    std::vector<double> values;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::ab_flux_string;
    // Numeric parameters, pre-populated with scenario defaults; keys
    // are validated against the scenario schema.
    std::map<std::string, double> parameters;
    // neutron-phase field profile name: constant, sinusoid, gaussian
    // or table.
    std::string profile = "gaussian";
    std::vector<double> table_t;
    std::vector<double> table_b;
    std::optional<SweepSpec> sweep;
    std::string output_path;
    double rel_tol = kDefaultRelTol;
    double abs_tol = kDefaultAbsTol;
    int workers = 1;
};

struct RunRecord {
    // scenario name, possibly with a /variant suffix for scenarios
    // that emit several quantities.
    std::string id;
    // Input echo in schema order; written one column per key.
    std::vector<std::pair<std::string, double>> inputs;
    double value = 0.0;
    double error_estimate = 0.0;
    bool has_expected = false;
    double expected = 0.0;
    // |value - expected| / scale, where scale is the record's natural
    // yardstick (usually |expected|, an absolute scale for
    // zero-expected records).
    double rel_deviation = 0.0;
    // Pass threshold on rel_deviation; pinned per scenario, not
    // user-configurable.
    double tolerance = 0.0;
    bool converged = true;
    double wall_ms = 0.0;

    bool passed() const { return converged && (!has_expected || rel_deviation <= tolerance); }
};

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

// Config with every parameter at its default; defaults are chosen so
// that running any scenario unmodified reproduces the canonical
// geometry (impact 1, magnet radius 0.1, speed 0.01, charge -1,
// flux 2 pi).
ScenarioConfig default_config(Scenario s);

// Apply one key=value setting; key is either a reserved key (scenario,
// profile, output, sweep.param, sweep.values, tol.rel, tol.abs,
// workers, table.t, table.b) or a numeric parameter from the scenario
// schema.  Unknown keys raise ConfigError naming the allowed set.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);

// Parse a flat key = value document (one setting per line, # comments).
// The scenario key is required and consumed first so that parameter
// validation knows its schema.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// Execute the scenario, expanding the sweep if present; one or more
// records per sweep point.  Quadrature non-convergence is reported in
// the records, never thrown.
std::vector<RunRecord> run_scenario(const ScenarioConfig& cfg);

// Resolved CSV destination: the config's output path if set, else
// <scenario>.csv inside $MAGPHASE_OUTPUT_DIR (or the working
// directory).
std::string resolve_output_path(const ScenarioConfig& cfg);

// CSV with header scenario, <input columns>, value, error_estimate,
// expected, rel_deviation, wall_ms; 17 significant digits so re-runs
// are byte-identical apart from the timing column.
void write_csv(const std::string& path, const std::vector<RunRecord>& records);
std::string csv_text(const std::vector<RunRecord>& records);

// Parsed CSV for the report command: one map per row keyed by header.
std::vector<std::map<std::string, std::string>> read_csv(const std::string& path);

struct LadderRung {
    int n_z;
    int n_r;
    int n_phi;
    double half_length;
};

// Count-refinement ladder at fixed half_length: n_z 64*2^k, n_r 2+k,
// n_phi 8+4k.  The truncation length itself is swept via the ordinary
// sweep mechanism instead.
std::vector<LadderRung> default_ladder(int steps, double half_length);

struct ConvergenceTable {
    std::vector<RunRecord> records;  // potential, field, equivalence per rung
    bool monotone = false;           // potential-picture deviation non-increasing
};

// Run the ab-lattice scenario over the rung sequence and report the
// per-rung deviation from the flux-string value plus the two-picture
// agreement; flags whether the deviation decreases monotonically.
ConvergenceTable convergence_report(const ScenarioConfig& base, const std::vector<LadderRung>& ladder);

}  // namespace magphase
