// Command-line harness: dualmortar verify-basis|convergence|sparsity --config <file> [overrides]

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "dualmortar/common/errors.hpp"
#include "dualmortar/study/drivers.hpp"

namespace {

using namespace dualmortar;

enum Exit { ok = 0, property_failure = 1, config_error = 2, numerical_error = 3 };

struct Overrides {
    std::string config;
    std::optional<int> degree;
    std::optional<int> levels;
    std::optional<int> first_level;
    std::optional<int> level;
    std::vector<std::string> multipliers;
    std::vector<std::string> slave;
    std::optional<std::string> geometry;
    std::optional<std::string> out;
    std::optional<std::string> seed;
    int threads = 0;
    bool timings = false;
    bool serial = false;
};

void add_options(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config, "JSON study configuration")->check(CLI::ExistingFile);
    cmd->add_option("--degree", o.degree, "spline degree (1..4)");
    cmd->add_option("--levels", o.levels, "number of refinement levels");
    cmd->add_option("--first-level", o.first_level, "refinements before the first solved level");
    cmd->add_option("--multiplier", o.multipliers, "multiplier kinds: std, naive, optimal")->delimiter(',');
    cmd->add_option("--slave", o.slave, "slave policy (given, finer_side) or mesh ratios slave:master")->delimiter(',');
    cmd->add_option("--geometry", o.geometry, "benchmark geometry");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "seed of the randomized suites (decimal or 0x...)");
    cmd->add_option("--threads", o.threads, "OpenMP threads (0 keeps the default)");
    cmd->add_flag("--timings", o.timings, "write solve times (outputs are then no longer reproducible)");
    cmd->add_flag("--serial", o.serial, "serial assembly kernels");
}

study::StudyConfig build_config(const std::string& command, const Overrides& o)
{
    study::StudyConfig c = o.config.empty() ? study::StudyConfig{} : study::read_config(o.config);
    if (!c.command.empty() && c.command != command)
        throw ConfigError("config file is for '" + c.command + "', not '" + command + "'");
    c.command = command;
    if (o.degree) c.degree = *o.degree;
    if (o.levels) c.levels = *o.levels;
    if (o.first_level) c.first_level = *o.first_level;
    if (o.level) c.level = *o.level;
    if (o.geometry) c.geometry = *o.geometry;
    if (o.out) c.out = *o.out;
    if (o.seed) c.seed = study::config_from_json({{"seed", *o.seed}}).seed;
    if (!o.multipliers.empty()) {
        c.multipliers.clear();
        for (const auto& m : o.multipliers) c.multipliers.push_back(mortar::multiplier_kind_from_string(m));
    }
    std::vector<std::array<int, 2>> ratios;
    for (const auto& s : o.slave) {
        if (s.find(':') != std::string::npos) ratios.push_back(study::parse_ratio(s));
        else c.slave_policy = elasticity::slave_policy_from_string(s);
    }
    if (!ratios.empty()) c.ratios = ratios;
    if (o.timings) c.timings = true;
    if (o.serial) c.execution = Execution::serial;
    study::validate(c);
    return c;
}

void summarize(const study::StudyConfig& c, const study::StudyResult& r)
{
    if (c.command == "verify-basis") {
        for (const auto& p : r.report["properties"])
            std::printf("%-45s %-16s max %.3e\n", p["property"].get<std::string>().c_str(),
                        p["status"].get<std::string>().c_str(), p["max_residual"].get<double>());
    } else if (c.command == "convergence") {
        for (const auto& run : r.report["runs"]) {
            const auto& last = run["levels"].back();
            std::printf("%-50s error %.4e order %s\n", run["name"].get<std::string>().c_str(),
                        last["energy_error"].is_null() ? 0.0 : last["energy_error"].get<double>(),
                        run["final_order"].is_null() ? "-" : std::to_string(run["final_order"].get<double>()).c_str());
        }
    } else {
        for (const auto& [kind, v] : r.report["multipliers"].items())
            std::printf("%-8s primal %d dual %d saddle nnz %ld condensed nnz %ld\n", kind.c_str(),
                        v["primal_dofs"].get<int>(), v["dual_dofs"].get<int>(), v["saddle"]["nnz"].get<long>(),
                        v["condensed"]["nnz"].get<long>());
    }
    std::printf("reports written to %s\n", c.out.c_str());
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Isogeometric mortar coupling with biorthogonal multipliers"};
    app.require_subcommand(1);
    Overrides o;
    auto* verify = app.add_subcommand("verify-basis", "dual basis property suite over random spaces");
    auto* conv = app.add_subcommand("convergence", "energy error convergence study");
    auto* sparse = app.add_subcommand("sparsity", "saddle-point and condensed system patterns");
    for (auto* cmd : {verify, conv, sparse}) add_options(cmd, o);
    sparse->add_option("--level", o.level, "refinement level of the assembled systems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::config_error;
    }

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        const auto c = build_config(command, o);
        if (o.threads > 0) omp_set_num_threads(o.threads);
        study::StudyResult r;
        if (command == "verify-basis") r = study::verify_basis(c);
        else if (command == "convergence") r = study::convergence(c);
        else r = study::sparsity(c);
        summarize(c, r);
        return r.ok ? Exit::ok : Exit::property_failure;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << '\n';
        return Exit::config_error;
    } catch (const dualmortar::Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return Exit::numerical_error;
    }
}
