#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "magphase/scenario_runner.hpp"

namespace {

using magphase::ConfigError;
using magphase::RunRecord;
using magphase::ScenarioConfig;

void apply_set_options(ScenarioConfig& cfg, const std::vector<std::string>& sets) {
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        }
        magphase::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
}

ScenarioConfig build_config(const std::string& config_path, const std::string& scenario,
                            const std::vector<std::string>& sets, const std::string& output) {
    ScenarioConfig cfg;
    if (!config_path.empty()) {
        cfg = magphase::parse_config_file(config_path);
        if (!scenario.empty()) {
            throw ConfigError("pass either a config file or --scenario, not both");
        }
    } else if (!scenario.empty()) {
        cfg = magphase::default_config(magphase::scenario_from_name(scenario));
    } else {
        throw ConfigError("nothing to run: pass a config file or --scenario <name>");
    }
    apply_set_options(cfg, sets);
    if (!output.empty()) cfg.output_path = output;
    return cfg;
}

void print_records(const std::vector<RunRecord>& records) {
    std::cout << std::left << std::setw(28) << "record" << std::right << std::setw(24) << "value"
              << std::setw(24) << "expected" << std::setw(14) << "deviation" << std::setw(8)
              << "status" << '\n';
    for (const auto& rec : records) {
        std::cout << std::left << std::setw(28) << rec.id << std::right << std::setw(24)
                  << std::setprecision(12) << rec.value;
        if (rec.has_expected) {
            std::cout << std::setw(24) << std::setprecision(12) << rec.expected << std::setw(14)
                      << std::setprecision(3) << rec.rel_deviation;
        } else {
            std::cout << std::setw(24) << "-" << std::setw(14) << "-";
        }
        std::cout << std::setw(8) << (rec.passed() ? "ok" : "FAIL") << '\n';
    }
}

int cmd_run(const std::string& config_path, const std::string& scenario,
            const std::vector<std::string>& sets, const std::string& output) {
    const ScenarioConfig cfg = build_config(config_path, scenario, sets, output);
    const std::vector<RunRecord> records = magphase::run_scenario(cfg);
    const std::string path = magphase::resolve_output_path(cfg);
    magphase::write_csv(path, records);
    print_records(records);
    std::cout << "wrote " << path << '\n';
    const bool ok = std::all_of(records.begin(), records.end(),
                                [](const RunRecord& r) { return r.passed(); });
    return ok ? 0 : 1;
}

int cmd_converge(const std::string& config_path, const std::string& scenario, int steps,
                 const std::vector<std::string>& sets, const std::string& output) {
    ScenarioConfig cfg = build_config(config_path.empty() && scenario.empty() ? "" : config_path,
                                      config_path.empty() && scenario.empty() ? "ab-lattice" : scenario,
                                      sets, output);
    if (cfg.scenario != magphase::Scenario::ab_lattice) {
        throw ConfigError("converge runs the ab-lattice scenario");
    }
    double half_length = cfg.parameters.at("half_length");
    if (std::isnan(half_length)) {
        half_length = 100.0 * cfg.parameters.at("impact");
    }
    const auto ladder = magphase::default_ladder(steps, half_length);
    const magphase::ConvergenceTable table = magphase::convergence_report(cfg, ladder);

    if (cfg.output_path.empty()) cfg.output_path = magphase::resolve_output_path(cfg);
    magphase::write_csv(cfg.output_path, table.records);
    print_records(table.records);
    std::cout << "monotone approach: " << (table.monotone ? "yes" : "NO") << '\n';
    std::cout << "wrote " << cfg.output_path << '\n';

    // The early rungs are supposed to be coarse; the ladder passes if
    // the deviation shrinks monotonically, the final rung meets the
    // potential-picture tolerance and every equivalence record holds.
    bool final_ok = false;
    bool equivalence_ok = true;
    for (auto it = table.records.rbegin(); it != table.records.rend(); ++it) {
        if (it->id == "ab-lattice/potential") {
            final_ok = it->passed();
            break;
        }
    }
    for (const auto& rec : table.records) {
        if (rec.id == "ab-lattice/equivalence" && !rec.passed()) equivalence_ok = false;
    }
    return table.monotone && final_ok && equivalence_ok ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& paths) {
    for (const std::string& path : paths) {
        const auto rows = magphase::read_csv(path);
        int with_expected = 0;
        double max_dev = 0.0;
        double sum_dev = 0.0;
        for (const auto& row : rows) {
            const auto it = row.find("rel_deviation");
            if (it == row.end() || it->second.empty()) continue;
            const double dev = std::stod(it->second);
            ++with_expected;
            max_dev = std::max(max_dev, dev);
            sum_dev += dev;
        }
        std::cout << path << ": " << rows.size() << " records, " << with_expected
                  << " with expectations";
        if (with_expected > 0) {
            std::cout << ", max deviation " << std::setprecision(6) << max_dev
                      << ", mean deviation " << sum_dev / with_expected;
        }
        std::cout << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical experiments on phase shifts around shielded magnetic flux"};
    app.require_subcommand(1);

    std::string config_path;
    std::string scenario;
    std::vector<std::string> sets;
    std::string output;
    int steps = 4;
    std::vector<std::string> report_paths;

    CLI::App* run = app.add_subcommand("run", "run a scenario and write its CSV");
    run->add_option("config", config_path, "config file (key = value lines)");
    run->add_option("--scenario", scenario, "scenario name instead of a config file");
    run->add_option("--set", sets, "override key=value; repeatable");
    run->add_option("--output", output, "CSV destination");

    CLI::App* converge = app.add_subcommand("converge", "ab-lattice refinement ladder");
    converge->add_option("config", config_path, "base config file");
    converge->add_option("--scenario", scenario, "must be ab-lattice when given");
    converge->add_option("--steps", steps, "ladder steps")->check(CLI::PositiveNumber);
    converge->add_option("--set", sets, "override key=value; repeatable");
    converge->add_option("--output", output, "CSV destination");

    CLI::App* report = app.add_subcommand("report", "aggregate deviations from CSV files");
    report->add_option("csv", report_paths, "CSV files to summarize")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, scenario, sets, output);
        if (converge->parsed()) return cmd_converge(config_path, scenario, steps, sets, output);
        if (report->parsed()) return cmd_report(report_paths);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
