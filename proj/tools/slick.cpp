#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "slick/errors.hpp"
#include "slick/run.hpp"
#include "slick/state_io.hpp"
#include "slick/verify.hpp"

int main(int argc, char** argv) {
    CLI::App app{"slick: free-surface surfactant layer simulator"};
    app.require_subcommand(1);

    std::string config_path, restart_path, dump_path, out_path, suite = "all";
    uint64_t seed = 12345;

    auto* run = app.add_subcommand("run", "run a configured simulation");
    run->add_option("config", config_path, "JSON configuration file")->required();
    run->add_option("--restart", restart_path, "resume from a state dump");

    auto* verify = app.add_subcommand("verify", "run a property suite");
    verify->add_option("suite", suite, "identities | budgets | scaling | all");
    verify->add_option("--seed", seed, "seed for randomized scenarios");

    auto* exp = app.add_subcommand("export-theta", "export the physical-domain mesh");
    exp->add_option("state", dump_path, "state dump file")->required();
    exp->add_option("-o,--output", out_path, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return slick::run_cli(config_path, std::cout, restart_path);

        if (verify->parsed()) {
            std::vector<slick::verify::Check> checks;
            if (suite == "identities" || suite == "all") {
                auto c = slick::verify::identities_suite(seed);
                checks.insert(checks.end(), c.begin(), c.end());
            }
            if (suite == "budgets" || suite == "all") {
                auto c = slick::verify::budgets_suite(seed);
                checks.insert(checks.end(), c.begin(), c.end());
            }
            if (suite == "scaling" || suite == "all") {
                auto c = slick::verify::scaling_suite(seed);
                checks.insert(checks.end(), c.begin(), c.end());
            }
            if (checks.empty()) {
                std::cerr << "unknown suite: " << suite << "\n";
                return 2;
            }
            return slick::verify::report(checks, std::cout);
        }

        if (exp->parsed()) {
            const slick::StateDump dump = slick::load_state(dump_path);
            if (out_path.empty()) out_path = dump_path + ".theta.csv";
            slick::export_theta(out_path, dump.state);
            std::cout << "wrote " << out_path << "\n";
            return 0;
        }
    } catch (const slick::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const slick::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
