// bohmtraj: run one of the canonical scenarios and write its artifacts.
//
//   bohmtraj <scenario> [--config file.json] [--section.key value ...] [--check]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 a check failed (only with --check).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bohm/errors.hpp"
#include "bohm/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;
constexpr int kCheckFailed = 4;

// "--a.b value" and "--a.b=value" pairs left over by the option parser.
std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& extras) {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& arg = extras[i];
        if (arg.rfind("--", 0) != 0 || arg.size() < 3) throw bohm::ConfigError("unexpected argument '" + arg + "'");
        const std::string body = arg.substr(2);
        const auto eq = body.find('=');
        if (eq != std::string::npos) {
            out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
        } else {
            if (i + 1 >= extras.size()) throw bohm::ConfigError("override '" + arg + "' has no value");
            out.emplace_back(body, extras[++i]);
        }
        if (out.back().first.find('.') == std::string::npos)
            throw bohm::ConfigError("override '" + arg + "' must be namespaced, e.g. --numerics.dt");
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-trajectory scenarios: free packet, two-packet superposition, effective well, 2D reaction"};
    app.allow_extras();
    std::string scenario;
    std::string config_path;
    bool check = false;
    bool print_config = false;
    app.add_option("scenario", scenario, "free_gaussian | superposition | effective_well | reaction_2d")->required();
    app.add_option("--config", config_path, "JSON configuration file (defaults are built in)");
    app.add_flag("--check", check, "exit with code 4 when a scenario check fails");
    app.add_flag("--print-config", print_config, "print the effective configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    bohm::ScenarioConfig config;
    try {
        const bohm::ScenarioKind kind = bohm::scenario_from_string(scenario);
        nlohmann::json doc;
        if (config_path.empty()) {
            doc = bohm::config_to_json(bohm::default_config(kind));
        } else {
            std::ifstream in(config_path);
            if (!in) throw bohm::ConfigError("cannot read " + config_path);
            doc = nlohmann::json::parse(in, nullptr, false);
            if (doc.is_discarded()) throw bohm::ConfigError(config_path + " is not valid JSON");
            if (!doc.contains("scenario")) doc["scenario"] = scenario;
            if (doc["scenario"] != scenario)
                throw bohm::ConfigError("config is for scenario '" + doc["scenario"].dump() + "', not '" + scenario + "'");
        }
        for (const auto& [key, value] : parse_overrides(app.remaining())) bohm::apply_override(doc, key, value);
        config = bohm::config_from_json(doc);
    } catch (const bohm::Error& e) {
        std::cerr << "bohmtraj: configuration error: " << e.what() << "\n";
        return kConfigError;
    }

    if (print_config) {
        std::cout << bohm::config_to_json(config).dump(2) << "\n";
        return kOk;
    }

    try {
        const bohm::ScenarioResult result = bohm::run_scenario(config);
        std::cout << "bohmtraj: " << scenario << " wrote " << result.artifacts.size() << " artifact(s) to "
                  << config.outputs.directory << "\n";
        for (const auto& [name, ok] : result.report["checks"].items())
            std::cout << "  " << (ok.get<bool>() ? "pass" : "FAIL") << "  " << name << "\n";
        if (check && !result.checks_passed()) return kCheckFailed;
        return kOk;
    } catch (const bohm::ConfigError& e) {
        std::cerr << "bohmtraj: configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const bohm::InvalidParameter& e) {
        std::cerr << "bohmtraj: invalid parameter: " << e.what() << "\n";
        return kConfigError;
    } catch (const bohm::GridTooSmall& e) {
        std::cerr << "bohmtraj: grid too small: " << e.what() << "\n";
        return kConfigError;
    } catch (const bohm::DegenerateWell& e) {
        std::cerr << "bohmtraj: degenerate well: " << e.what() << "\n";
        return kConfigError;
    } catch (const bohm::Error& e) {
        std::cerr << "bohmtraj: numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "bohmtraj: file system error: " << e.what() << "\n";
        return kNumericalFailure;
    }
}
