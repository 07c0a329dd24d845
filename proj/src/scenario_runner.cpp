#include "magphase/scenario_runner.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "magphase/ab_scenario.hpp"
#include "magphase/classical_device.hpp"
#include "magphase/neutron_scenario.hpp"

namespace magphase {
namespace {

constexpr double kPi = std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// NaN default = derived from other parameters at run time.
struct SchemaEntry {
    const char* key;
    double default_value;
};

struct ScenarioInfo {
    Scenario scenario;
    const char* name;
    std::vector<SchemaEntry> schema;
};

const std::vector<ScenarioInfo>& scenario_table() {
    static const std::vector<ScenarioInfo> table = {
        {Scenario::ab_flux_string,
         "ab-flux-string",
         {{"charge", -1.0},
          {"flux", 2.0 * kPi},
          {"radius", 0.1},
          {"impact", 1.0},
          {"speed", 0.01},
          {"y_start", -kInf},
          {"y_end", kInf}}},
        {Scenario::ab_lattice,
         "ab-lattice",
         {{"charge", -1.0},
          {"flux", 2.0 * kPi},
          {"radius", 0.1},
          {"impact", 1.0},
          {"speed", 0.01},
          {"y_start", -kInf},
          {"y_end", kInf},
          {"half_length", kNaN},  // 100 * impact
          {"n_z", 256.0},
          {"n_r", 4.0},
          {"n_phi", 16.0}}},
        {Scenario::classical_device,
         "classical-device",
         {{"charge", -1.0},
          {"radius", 0.1},
          {"impact", 1.0},
          {"speed", 0.01},
          {"flux", 2.0 * kPi},
          {"current_density", kNaN},  // flux / (4 pi^2 radius^2)
          {"y_start", -kInf},
          {"y_end", kInf}}},
        {Scenario::neutron_phase,
         "neutron-phase",
         {{"moment", 1.0},
          {"speed", 0.01},
          {"amplitude", 1.0},
          {"tau", 1.0},
          {"period", 1.0},
          {"phase", 0.0},
          {"center", 0.0},
          {"t_start", kNaN},  // profile-dependent window
          {"t_end", kNaN}}},
        {Scenario::neutron_emf,
         "neutron-emf",
         {{"radius", 1.0},
          {"half_length", 10.0},
          {"offset_x", 0.5},
          {"offset_y", 0.0},
          {"offset_z", 0.5},
          {"moment", 1.0},
          {"speed", 0.01},
          {"phi_samples", 64.0}}},
        {Scenario::identity_check,
         "identity-check",
         {{"charge", -1.0}, {"speed", 0.01}, {"radius", 1.0}, {"z_offset", 0.5}, {"moment", 1.0}}},
        {Scenario::inertness,
         "inertness",
         {{"atomic_distance", 1e-8}, {"electron_distance", 1e-4}, {"n_atoms", 1e12}}},
    };
    return table;
}

const ScenarioInfo& info_for(Scenario s) {
    for (const auto& info : scenario_table()) {
        if (info.scenario == s) return info;
    }
    throw std::logic_error("unmapped scenario");
}

bool schema_has(const ScenarioInfo& info, const std::string& key) {
    return std::any_of(info.schema.begin(), info.schema.end(),
                       [&](const SchemaEntry& e) { return key == e.key; });
}

std::string schema_keys(const ScenarioInfo& info) {
    std::string keys;
    for (const auto& e : info.schema) {
        if (!keys.empty()) keys += ", ";
        keys += e.key;
    }
    return keys;
}

double parse_number(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + text + "'");
    }
}

std::vector<double> parse_number_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number(key, item));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': expected a comma-separated number list");
    return out;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double param(const ScenarioConfig& cfg, const std::string& key) {
    const auto it = cfg.parameters.find(key);
    if (it == cfg.parameters.end()) throw std::logic_error("missing parameter " + key);
    return it->second;
}

int int_param(const ScenarioConfig& cfg, const std::string& key) {
    const double v = param(cfg, key);
    const double rounded = std::nearbyint(v);
    if (!(std::fabs(v - rounded) <= 1e-9) || !(rounded >= -2e9) || !(rounded <= 2e9)) {
        throw ConfigError("key '" + key + "': expected an integer, got " +
                          std::to_string(v));
    }
    return static_cast<int>(rounded);
}

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

// Input echo in schema order, with derived values already resolved.
std::vector<std::pair<std::string, double>> echo_inputs(const ScenarioConfig& cfg) {
    std::vector<std::pair<std::string, double>> out;
    const ScenarioInfo& info = info_for(cfg.scenario);
    out.reserve(info.schema.size());
    for (const auto& e : info.schema) {
        out.emplace_back(e.key, param(cfg, e.key));
    }
    return out;
}

RunRecord base_record(const ScenarioConfig& cfg, const std::string& variant) {
    RunRecord rec;
    rec.id = scenario_name(cfg.scenario);
    if (!variant.empty()) rec.id += "/" + variant;
    rec.inputs = echo_inputs(cfg);
    return rec;
}

void set_expected(RunRecord& rec, double expected, double tolerance,
                  double scale = std::numeric_limits<double>::quiet_NaN()) {
    rec.has_expected = true;
    rec.expected = expected;
    rec.tolerance = tolerance;
    if (std::isnan(scale)) {
        scale = std::fabs(expected) > 0.0 ? std::fabs(expected) : 1.0;
    }
    rec.rel_deviation = std::fabs(rec.value - expected) / scale;
}

// atan(y_end/a) - atan(y_start/a): the exact angular span of a
// truncated passage, pi for the full line.
double atan_span(double impact, double y_start, double y_end) {
    return std::atan(y_end / impact) - std::atan(y_start / impact);
}

ABGeometry geometry_from(const ScenarioConfig& cfg) {
    return ABGeometry{FluxString{param(cfg, "radius"), param(cfg, "flux")}, param(cfg, "impact"),
                      param(cfg, "y_start"), param(cfg, "y_end"), param(cfg, "speed"),
                      param(cfg, "charge")};
}

std::vector<RunRecord> run_ab_flux_string(const ScenarioConfig& cfg) {
    const ABGeometry g = geometry_from(cfg);
    Timer timer;
    const ActionReport report = ab_action_difference(g, cfg.rel_tol, cfg.abs_tol);
    RunRecord rec = base_record(cfg, "");
    rec.value = report.delta_I;
    rec.error_estimate = report.left.error_estimate + report.right.error_estimate;
    rec.converged = report.left.converged && report.right.converged;
    rec.wall_ms = timer.ms();
    const double expected = g.charge * g.magnet.flux * atan_span(g.impact, g.y_start, g.y_end) / kPi;
    set_expected(rec, expected, 1e-8);
    return {rec};
}

std::vector<RunRecord> run_ab_lattice(ScenarioConfig cfg) {
    if (std::isnan(param(cfg, "half_length"))) {
        cfg.parameters["half_length"] = 100.0 * param(cfg, "impact");
    }
    const ABGeometry g = geometry_from(cfg);
    const DipoleLattice lat =
        build_lattice(param(cfg, "radius"), param(cfg, "half_length"), param(cfg, "flux"),
                      int_param(cfg, "n_z"), int_param(cfg, "n_r"), int_param(cfg, "n_phi"));

    Timer pot_timer;
    const ActionReport pot = lattice_action_potential_picture(lat, g, cfg.workers);
    const double pot_ms = pot_timer.ms();
    Timer fld_timer;
    const ActionReport fld = lattice_action_field_picture(lat, g, cfg.workers);
    const double fld_ms = fld_timer.ms();

    const double flux_answer = g.charge * g.magnet.flux;
    const double scale = std::fabs(flux_answer) > 0.0 ? std::fabs(flux_answer) : 1.0;

    RunRecord pr = base_record(cfg, "potential");
    pr.value = pot.delta_I;
    pr.error_estimate = pot.left.error_estimate + pot.right.error_estimate;
    pr.converged = pot.left.converged && pot.right.converged;
    pr.wall_ms = pot_ms;
    set_expected(pr, flux_answer, 1e-2, scale);

    RunRecord fr = base_record(cfg, "field");
    fr.value = fld.delta_I;
    fr.error_estimate = fld.left.error_estimate + fld.right.error_estimate;
    fr.converged = fld.left.converged && fld.right.converged;
    fr.wall_ms = fld_ms;
    set_expected(fr, flux_answer, 1e-2, scale);

    RunRecord er = base_record(cfg, "equivalence");
    er.value = pot.delta_I - fld.delta_I;
    er.error_estimate = pr.error_estimate + fr.error_estimate;
    er.converged = pr.converged && fr.converged;
    er.wall_ms = 0.0;
    set_expected(er, 0.0, 1e-10, scale);

    return {pr, fr, er};
}

std::vector<RunRecord> run_classical_device(ScenarioConfig cfg) {
    const double radius = param(cfg, "radius");
    if (std::isnan(param(cfg, "current_density"))) {
        cfg.parameters["current_density"] =
            param(cfg, "flux") / (4.0 * kPi * kPi * radius * radius);
    } else {
        cfg.parameters["flux"] =
            4.0 * kPi * kPi * radius * radius * param(cfg, "current_density");
    }
    const ABGeometry g = geometry_from(cfg);
    const ClassicalSolenoid s{radius, param(cfg, "current_density")};

    const double span = atan_span(g.impact, g.y_start, g.y_end);
    const double expected1 = g.charge * s.flux() * span / (2.0 * kPi);
    const double expected2 = -2.0 * kPi * radius * radius * g.charge * s.current_density * span;
    const double half_flux_action = std::fabs(g.charge * s.flux() / 2.0);
    const double scale0 = half_flux_action > 0.0 ? half_flux_action : 1.0;

    Timer t1;
    const QuadResult d1 = delta_I1(s, g, cfg.rel_tol, cfg.abs_tol);
    const double ms1 = t1.ms();
    Timer t2;
    const QuadResult d2 = delta_I2(s, g, cfg.rel_tol, cfg.abs_tol);
    const double ms2 = t2.ms();

    RunRecord r1 = base_record(cfg, "delta-I1");
    r1.value = d1.value;
    r1.error_estimate = d1.error_estimate;
    r1.converged = d1.converged;
    r1.wall_ms = ms1;
    set_expected(r1, expected1, 1e-8, scale0);

    RunRecord r2 = base_record(cfg, "delta-I2");
    r2.value = d2.value;
    r2.error_estimate = d2.error_estimate;
    r2.converged = d2.converged;
    r2.wall_ms = ms2;
    set_expected(r2, expected2, 1e-8, scale0);

    RunRecord rt = base_record(cfg, "total");
    rt.value = d1.value + d2.value;
    rt.error_estimate = d1.error_estimate + d2.error_estimate;
    rt.converged = d1.converged && d2.converged;
    rt.wall_ms = 0.0;
    set_expected(rt, 0.0, 1e-8, scale0);

    return {r1, r2, rt};
}

FieldProfile profile_from(const ScenarioConfig& cfg) {
    const double amplitude = param(cfg, "amplitude");
    if (cfg.profile == "constant") return FieldProfile::constant(amplitude);
    if (cfg.profile == "sinusoid") {
        return FieldProfile::sinusoid(amplitude, param(cfg, "period"), param(cfg, "phase"));
    }
    if (cfg.profile == "gaussian") {
        return FieldProfile::gaussian(amplitude, param(cfg, "tau"), param(cfg, "center"));
    }
    if (cfg.profile == "table") {
        if (cfg.table_t.empty() || cfg.table_t.size() != cfg.table_b.size()) {
            throw ConfigError("table profile requires matching table.t and table.b lists");
        }
        std::vector<std::pair<double, double>> samples;
        samples.reserve(cfg.table_t.size());
        for (std::size_t i = 0; i < cfg.table_t.size(); ++i) {
            samples.emplace_back(cfg.table_t[i], cfg.table_b[i]);
        }
        return FieldProfile::table(std::move(samples));
    }
    throw ConfigError("unknown field profile '" + cfg.profile +
                      "'; expected constant, sinusoid, gaussian or table");
}

std::vector<RunRecord> run_neutron_phase(ScenarioConfig cfg) {
    const FieldProfile profile = profile_from(cfg);
    double t0 = param(cfg, "t_start");
    double t1 = param(cfg, "t_end");
    if (std::isnan(t0) || std::isnan(t1)) {
        double d0 = 0.0;
        double d1 = 1.0;
        if (cfg.profile == "sinusoid") {
            d1 = param(cfg, "period");
        } else if (cfg.profile == "gaussian") {
            d0 = param(cfg, "center") - 8.0 * param(cfg, "tau");
            d1 = param(cfg, "center") + 8.0 * param(cfg, "tau");
        } else if (cfg.profile == "table") {
            d0 = cfg.table_t.front();
            d1 = cfg.table_t.back();
        }
        if (std::isnan(t0)) t0 = d0;
        if (std::isnan(t1)) t1 = d1;
        cfg.parameters["t_start"] = t0;
        cfg.parameters["t_end"] = t1;
    }

    const double moment = param(cfg, "moment");
    const NeutronRun run{moment, param(cfg, "speed"), profile, t0, t1};
    Timer timer;
    const QuadResult q = neutron_phase(run, cfg.rel_tol, cfg.abs_tol);

    RunRecord rec = base_record(cfg, cfg.profile);
    rec.value = q.value;
    rec.error_estimate = q.error_estimate;
    rec.converged = q.converged;
    rec.wall_ms = timer.ms();

    const double amplitude = param(cfg, "amplitude");
    bool have_closed_form = true;
    double expected = 0.0;
    if (cfg.profile == "constant") {
        expected = moment * amplitude * (t1 - t0);
    } else if (cfg.profile == "sinusoid") {
        const double period = param(cfg, "period");
        const double phase = param(cfg, "phase");
        const double w = 2.0 * kPi / period;
        expected = moment * amplitude / w * (std::cos(w * t0 + phase) - std::cos(w * t1 + phase));
    } else if (cfg.profile == "gaussian") {
        const double tau = param(cfg, "tau");
        const double c = param(cfg, "center");
        expected = moment * amplitude * tau * 0.5 * std::sqrt(kPi) *
                   (std::erf((t1 - c) / tau) - std::erf((t0 - c) / tau));
    } else {
        have_closed_form = false;
    }
    if (have_closed_form) {
        const double magnitude_scale = std::fabs(moment * amplitude * (t1 - t0));
        if (std::fabs(expected) > 1e-6 * std::max(magnitude_scale, 1e-300)) {
            set_expected(rec, expected, 1e-9);
        } else {
            // Cancellation-dominated value (e.g. whole periods of a
            // sinusoid): judge it on an absolute scale.
            set_expected(rec, expected, 1e-12, 1.0);
        }
    }
    return {rec};
}

std::vector<RunRecord> run_neutron_emf(const ScenarioConfig& cfg) {
    EMFCheck chk;
    chk.solenoid_radius = param(cfg, "radius");
    chk.half_length = param(cfg, "half_length");
    chk.neutron_position = {param(cfg, "offset_x"), param(cfg, "offset_y"), param(cfg, "offset_z")};
    chk.neutron_moment = {0.0, 0.0, param(cfg, "moment")};
    chk.neutron_velocity = {0.0, 0.0, param(cfg, "speed")};
    chk.phi_samples = int_param(cfg, "phi_samples");

    Timer timer;
    const QuadResult q = emf_on_solenoid(chk);
    const GaussCheck gc = emf_gauss_check(chk);

    RunRecord rec = base_record(cfg, "");
    rec.value = q.value;
    rec.error_estimate = q.error_estimate;
    rec.converged = q.converged;
    rec.wall_ms = timer.ms();
    set_expected(rec, gc.surface_Br, 1e-8, std::max(gc.abs_scale, 1e-300));
    return {rec};
}

std::vector<RunRecord> run_identity_check(const ScenarioConfig& cfg) {
    const double radius = param(cfg, "radius");
    const double z0 = param(cfg, "z_offset");
    const double moment = param(cfg, "moment");
    const double speed = param(cfg, "speed");
    const double charge = param(cfg, "charge");

    const MovingCharge electron{charge, {0.0, speed, 0.0}, {radius, 0.0, z0}};
    const MagneticDipole dipole{{0.0, 0.0, moment}, {0.0, 0.0, 0.0}};
    Timer timer;
    const PairIdentity pid = pair_identity_check(electron, dipole);
    const double ms = timer.ms();

    RunRecord pair = base_record(cfg, "pair");
    pair.value = pid.lhs;
    pair.wall_ms = ms;
    set_expected(pair, pid.rhs, 1e-12);

    const double r = std::hypot(radius, z0);
    const double closed = moment * charge * speed * radius / (r * r * r);
    RunRecord cf = base_record(cfg, "closed-form");
    cf.value = pid.lhs;
    cf.wall_ms = 0.0;
    set_expected(cf, closed, 1e-12);

    return {pair, cf};
}

std::vector<RunRecord> run_inertness(const ScenarioConfig& cfg) {
    const double ad = param(cfg, "atomic_distance");
    const double ed = param(cfg, "electron_distance");
    const double n_atoms = param(cfg, "n_atoms");
    Timer timer;
    const InertnessBound b = inertness_bound(ad, ed, n_atoms);
    const double ms = timer.ms();

    const bool canonical = ad == 1e-8 && ed == 1e-4;
    RunRecord fr = base_record(cfg, "field-ratio");
    fr.value = b.field_ratio;
    fr.wall_ms = ms;
    RunRecord pr = base_record(cfg, "probability");
    pr.value = b.transition_probability;
    RunRecord ar = base_record(cfg, "aggregate");
    ar.value = b.aggregate;
    if (canonical) {
        set_expected(fr, 1e-8, 1e-15);
        set_expected(pr, 1e-16, 1e-15);
        set_expected(ar, n_atoms * 1e-16, 1e-15);
    }
    return {fr, pr, ar};
}

std::vector<RunRecord> run_single(const ScenarioConfig& cfg) {
    switch (cfg.scenario) {
        case Scenario::ab_flux_string:
            return run_ab_flux_string(cfg);
        case Scenario::ab_lattice:
            return run_ab_lattice(cfg);
        case Scenario::classical_device:
            return run_classical_device(cfg);
        case Scenario::neutron_phase:
            return run_neutron_phase(cfg);
        case Scenario::neutron_emf:
            return run_neutron_emf(cfg);
        case Scenario::identity_check:
            return run_identity_check(cfg);
        case Scenario::inertness:
            return run_inertness(cfg);
    }
    throw std::logic_error("unmapped scenario");
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string fmt_ms(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v;
    return os.str();
}

}  // namespace

const char* scenario_name(Scenario s) { return info_for(s).name; }

Scenario scenario_from_name(const std::string& name) {
    for (const auto& info : scenario_table()) {
        if (name == info.name) return info.scenario;
    }
    std::string names;
    for (const auto& info : scenario_table()) {
        if (!names.empty()) names += ", ";
        names += info.name;
    }
    throw ConfigError("unknown scenario '" + name + "'; expected one of: " + names);
}

ScenarioConfig default_config(Scenario s) {
    ScenarioConfig cfg;
    cfg.scenario = s;
    for (const auto& e : info_for(s).schema) {
        cfg.parameters[e.key] = e.default_value;
    }
    return cfg;
}

void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scenario") {
        throw ConfigError("the scenario is fixed once chosen; pass it first (scenario key or --scenario)");
    }
    if (key == "profile") {
        cfg.profile = trim(value);
        return;
    }
    if (key == "output") {
        cfg.output_path = trim(value);
        return;
    }
    if (key == "sweep.param") {
        if (!cfg.sweep) cfg.sweep.emplace();
        cfg.sweep->param = trim(value);
        return;
    }
    if (key == "sweep.values") {
        if (!cfg.sweep) cfg.sweep.emplace();
        cfg.sweep->values = parse_number_list(key, value);
        return;
    }
    if (key == "tol.rel") {
        cfg.rel_tol = parse_number(key, value);
        return;
    }
    if (key == "tol.abs") {
        cfg.abs_tol = parse_number(key, value);
        return;
    }
    if (key == "workers") {
        const double w = parse_number(key, value);
        if (!(w >= 1.0) || w != std::floor(w)) {
            throw ConfigError("key 'workers': expected a positive integer");
        }
        cfg.workers = static_cast<int>(w);
        return;
    }
    if (key == "table.t") {
        cfg.table_t = parse_number_list(key, value);
        return;
    }
    if (key == "table.b") {
        cfg.table_b = parse_number_list(key, value);
        return;
    }
    const ScenarioInfo& info = info_for(cfg.scenario);
    if (!schema_has(info, key)) {
        throw ConfigError("scenario '" + std::string(info.name) + "' has no parameter '" + key +
                          "'; known parameters: " + schema_keys(info));
    }
    cfg.parameters[key] = parse_number(key, value);
}

ScenarioConfig parse_config_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string scenario_value;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        if (key == "scenario") {
            if (!scenario_value.empty()) {
                throw ConfigError("line " + std::to_string(line_no) + ": scenario set twice");
            }
            scenario_value = value;
            continue;
        }
        pairs.emplace_back(key, value);
    }
    if (scenario_value.empty()) {
        throw ConfigError("config must name a scenario (scenario = <name>)");
    }
    ScenarioConfig cfg = default_config(scenario_from_name(scenario_value));
    for (const auto& [key, value] : pairs) {
        apply_setting(cfg, key, value);
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::vector<RunRecord> run_scenario(const ScenarioConfig& cfg) {
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    if (!(cfg.rel_tol >= 0.0) || !(cfg.abs_tol >= 0.0) || (cfg.rel_tol == 0.0 && cfg.abs_tol == 0.0)) {
        throw ConfigError("tolerances must be non-negative and not both zero");
    }
    std::vector<ScenarioConfig> points;
    if (cfg.sweep) {
        const ScenarioInfo& info = info_for(cfg.scenario);
        if (!schema_has(info, cfg.sweep->param)) {
            throw ConfigError("sweep parameter '" + cfg.sweep->param +
                              "' is not in the scenario schema; known parameters: " +
                              schema_keys(info));
        }
        if (cfg.sweep->values.empty()) {
            throw ConfigError("sweep.values must list at least one value");
        }
        for (const double v : cfg.sweep->values) {
            ScenarioConfig point = cfg;
            point.sweep.reset();
            point.parameters[cfg.sweep->param] = v;
            points.push_back(std::move(point));
        }
    } else {
        points.push_back(cfg);
    }
    std::vector<RunRecord> records;
    for (const auto& point : points) {
        std::vector<RunRecord> part = run_single(point);
        records.insert(records.end(), part.begin(), part.end());
    }
    return records;
}

std::string resolve_output_path(const ScenarioConfig& cfg) {
    if (!cfg.output_path.empty()) return cfg.output_path;
    std::string dir = ".";
    if (const char* env = std::getenv("MAGPHASE_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        dir = env;
    }
    return dir + "/" + scenario_name(cfg.scenario) + ".csv";
}

std::string csv_text(const std::vector<RunRecord>& records) {
    if (records.empty()) return "scenario,value,error_estimate,expected,rel_deviation,wall_ms\n";
    std::ostringstream out;
    out << "scenario";
    for (const auto& [key, value] : records.front().inputs) {
        out << ',' << key;
    }
    out << ",value,error_estimate,expected,rel_deviation,wall_ms\n";
    for (const auto& rec : records) {
        if (rec.inputs.size() != records.front().inputs.size()) {
            throw std::logic_error("records in one table must share the input schema");
        }
        out << rec.id;
        for (const auto& [key, value] : rec.inputs) {
            out << ',' << fmt(value);
        }
        out << ',' << fmt(rec.value) << ',' << fmt(rec.error_estimate) << ',';
        if (rec.has_expected) out << fmt(rec.expected);
        out << ',';
        if (rec.has_expected) out << fmt(rec.rel_deviation);
        out << ',' << fmt_ms(rec.wall_ms) << '\n';
    }
    return out.str();
}

void write_csv(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    out << csv_text(records);
    if (!out) {
        throw std::runtime_error("failed writing output file '" + path + "'");
    }
}

std::vector<std::map<std::string, std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open CSV file '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("empty CSV file '" + path + "'");
    }
    auto split = [](const std::string& row) {
        std::vector<std::string> cells;
        std::stringstream ss(row);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!row.empty() && row.back() == ',') cells.push_back("");
        return cells;
    };
    const std::vector<std::string> header = split(line);
    std::vector<std::map<std::string, std::string>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split(line);
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) {
            row[header[i]] = cells[i];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<LadderRung> default_ladder(int steps, double half_length) {
    if (steps < 1) throw ConfigError("converge requires at least one ladder step");
    std::vector<LadderRung> ladder;
    ladder.reserve(steps);
    for (int k = 0; k < steps; ++k) {
        ladder.push_back({64 << k, 2 + k, 8 + 4 * k, half_length});
    }
    return ladder;
}

ConvergenceTable convergence_report(const ScenarioConfig& base, const std::vector<LadderRung>& ladder) {
    if (base.scenario != Scenario::ab_lattice) {
        throw ConfigError("convergence reports are defined for the ab-lattice scenario");
    }
    if (ladder.empty()) throw ConfigError("convergence ladder must not be empty");

    ConvergenceTable table;
    std::vector<double> deviations;
    for (const LadderRung& rung : ladder) {
        ScenarioConfig cfg = base;
        cfg.sweep.reset();
        cfg.parameters["n_z"] = rung.n_z;
        cfg.parameters["n_r"] = rung.n_r;
        cfg.parameters["n_phi"] = rung.n_phi;
        cfg.parameters["half_length"] = rung.half_length;
        std::vector<RunRecord> records = run_scenario(cfg);
        for (const auto& rec : records) {
            if (rec.id == "ab-lattice/potential" && rec.has_expected) {
                deviations.push_back(rec.rel_deviation);
            }
        }
        table.records.insert(table.records.end(), records.begin(), records.end());
    }
    table.monotone = true;
    for (std::size_t i = 1; i < deviations.size(); ++i) {
        if (deviations[i] > deviations[i - 1] * (1.0 + 1e-9) + 1e-12) {
            table.monotone = false;
            break;
        }
    }
    return table;
}

}  // namespace magphase
