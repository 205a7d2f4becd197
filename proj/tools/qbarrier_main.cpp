#include "qbarrier/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace {

using qbarrier::cli::Command;
using qbarrier::cli::OutputFormat;
using qbarrier::cli::RunConfig;

// Parse targets plus the option handles. The bound fields give CLI11 the type
// for command-line validation; build_config reads values back through the
// handles so config-file entries (injected after parse) are seen too. Fields
// reach the RunConfig only when their option was given, so presets keep their
// pinned values and explicit flags or config-file entries override them.
struct Cli {
    std::string config_path;
    std::string preset;
    double lambda_bar = 0.0;
    double omega_tau = 0.0;
    double cap_lambda = 0.0;
    double phi = 0.0;
    double phi_alpha = 0.0;
    double e0_ratio = 0.0;
    double tail_tol = 0.0;
    double y = 0.0;
    double alpha_abs = 0.0;
    int n0 = 0;
    int n0_max = 0;
    int n_max = 0;
    int n_out_max = 0;
    int circle_points = 0;
    int grid_points = 0;
    double sweep_lambda_max = 0.0;
    int sweep_steps = 0;
    std::string format;
    std::string out;
    bool inject_perturbation = false;

    std::map<std::string, CLI::Option*> opt;
};

void add_common_options(CLI::App* sub, Cli& v) {
    v.opt["preset"] =
        sub->add_option("--preset", v.preset, "Figure preset: fig3, fig4, fig5, fig6")
            ->check(CLI::IsMember({"fig3", "fig4", "fig5", "fig6"}));
    v.opt["lambda-bar"] = sub->add_option("--lambda-bar", v.lambda_bar,
                                          "Coupling over photon energy (lambda/hbar-omega; "
                                          "V/hbar-omega for the classical command)");
    v.opt["omega-tau"] =
        sub->add_option("--omega-tau", v.omega_tau, "Transit phase omega*tau in radians");
    v.opt["cap-lambda"] = sub->add_option(
        "--cap-lambda", v.cap_lambda,
        "Coupling strength Lambda; solves lambda-bar at the given omega-tau");
    v.opt["phi"] = sub->add_option("--phi", v.phi, "Classical drive phase in radians");
    v.opt["phi-alpha"] =
        sub->add_option("--phi-alpha", v.phi_alpha, "Coherent-state phase in radians");
    v.opt["e0-ratio"] =
        sub->add_option("--e0-ratio", v.e0_ratio, "Incident energy over photon energy");
    v.opt["tail-tol"] =
        sub->add_option("--tail-tol", v.tail_tol, "Discarded probability mass per window");
    v.opt["n0"] = sub->add_option("--n0", v.n0, "Initial photon number");
    v.opt["y"] = sub->add_option("--y", v.y, "Thermal Boltzmann weight in [0, 1)");
    v.opt["alpha-abs"] =
        sub->add_option("--alpha-abs", v.alpha_abs, "Coherent-state amplitude |alpha|");
    v.opt["n0-max"] = sub->add_option("--n0-max", v.n0_max, "Largest initial photon number");
    v.opt["n-max"] = sub->add_option("--n-max", v.n_max, "Largest final photon number");
    v.opt["n-out-max"] = sub->add_option("--n-out-max", v.n_out_max,
                                         "Largest photon number in conditional output");
    v.opt["circle-points"] = sub->add_option("--circle-points", v.circle_points,
                                             "Samples on the phase-space circle");
    v.opt["grid-points"] =
        sub->add_option("--grid-points", v.grid_points, "Posterior grid resolution");
    v.opt["sweep-lambda-max"] = sub->add_option("--sweep-lambda-max", v.sweep_lambda_max,
                                                "Largest Lambda in the sweep");
    v.opt["sweep-steps"] =
        sub->add_option("--sweep-steps", v.sweep_steps, "Number of sweep points");
    v.opt["format"] = sub->add_option("--format", v.format, "Output format: csv or json")
                          ->check(CLI::IsMember({"csv", "json"}));
    v.opt["out"] = sub->add_option("--out", v.out, "Output path");
    v.opt["inject-perturbation"] =
        sub->add_flag("--inject-perturbation", v.inject_perturbation,
                      "Test hook: force one validation record to fail");
    sub->add_option("--config", v.config_path,
                    "Key=value config file; keys are the long option names "
                    "without dashes prefix (lambda-bar=2.0); explicit flags win");
}

bool given(const Cli& v, const std::string& name) {
    const auto it = v.opt.find(name);
    return it != v.opt.end() && it->second->count() > 0;
}

// Injects config-file entries into every option not already set on the
// command line, so the same given()/read-back path serves both sources.
void apply_config_file(const Cli& v) {
    if (v.config_path.empty())
        return;
    for (const auto& [key, value] : qbarrier::cli::read_config_file(v.config_path)) {
        const auto it = v.opt.find(key);
        if (it == v.opt.end())
            throw qbarrier::cli::ConfigError("config file " + v.config_path +
                                             ": unknown key '" + key + "'");
        if (it->second->count() == 0)
            it->second->add_result(value);
    }
}

RunConfig build_config(Command cmd, const Cli& v) {
    const auto dbl = [&](const char* name) { return v.opt.at(name)->as<double>(); };
    const auto num = [&](const char* name) { return v.opt.at(name)->as<int>(); };
    const auto str = [&](const char* name) { return v.opt.at(name)->as<std::string>(); };

    RunConfig c;
    if (given(v, "preset"))
        c = qbarrier::cli::preset_config(str("preset"));
    c.command = cmd;

    if (given(v, "lambda-bar"))
        c.params.lambda_bar = dbl("lambda-bar");
    if (given(v, "omega-tau"))
        c.params.omega_tau = dbl("omega-tau");
    if (given(v, "cap-lambda")) {
        c.cap_lambda = dbl("cap-lambda");
        c.lambda_caps.clear(); // a single requested Lambda replaces a preset grid
    }
    if (given(v, "phi"))
        c.params.phi = dbl("phi");
    if (given(v, "phi-alpha"))
        c.params.phi_alpha = dbl("phi-alpha");
    if (given(v, "e0-ratio"))
        c.params.e0_ratio = dbl("e0-ratio");
    if (given(v, "tail-tol"))
        c.tail_tol = dbl("tail-tol");
    if (given(v, "n0"))
        c.n0 = num("n0");
    if (given(v, "y"))
        c.y = dbl("y");
    if (given(v, "alpha-abs"))
        c.alpha_abs = dbl("alpha-abs");
    if (given(v, "n0-max"))
        c.n0_max = num("n0-max");
    if (given(v, "n-max"))
        c.n_max = num("n-max");
    if (given(v, "n-out-max"))
        c.n_out_max = num("n-out-max");
    if (given(v, "circle-points"))
        c.circle_points = num("circle-points");
    if (given(v, "grid-points"))
        c.grid_points = num("grid-points");
    if (given(v, "sweep-lambda-max"))
        c.sweep_lambda_max = dbl("sweep-lambda-max");
    if (given(v, "sweep-steps"))
        c.sweep_steps = num("sweep-steps");
    if (given(v, "format")) {
        const std::string f = str("format");
        if (f != "csv" && f != "json") // the option validator rejects first; this guards the mapping
            throw qbarrier::cli::ConfigError("format must be csv or json, got '" + f + "'");
        c.format = f == "json" ? OutputFormat::Json : OutputFormat::Csv;
    }
    if (given(v, "out"))
        c.out_path = str("out");
    if (given(v, "inject-perturbation") && v.opt.at("inject-perturbation")->as<bool>())
        c.inject_perturbation = true;
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qbarrier: photon exchange for a plane wave crossing a driven barrier"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, Command>> commands = {
        {"classical", Command::Classical}, {"fock", Command::Fock},
        {"vacuum", Command::Vacuum},       {"thermal", Command::Thermal},
        {"coherent", Command::Coherent},   {"entropy", Command::Entropy},
        {"validate", Command::Validate},   {"sweep", Command::Sweep},
    };
    const std::vector<std::string> descriptions = {
        "Classical sideband spectrum",
        "Transition probability grid over (Lambda, n0, n)",
        "Final photon distribution for a vacuum input",
        "Final photon distribution for a thermal input",
        "Conditional distributions at the detector positions plus the label circle",
        "Entanglement entropy over (Lambda, n0)",
        "Cross-route invariant suite with a JSON report",
        "Observables along a Lambda sweep at fixed n0",
    };

    std::vector<Cli> values(commands.size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        CLI::App* sub = app.add_subcommand(commands[i].first, descriptions[i]);
        add_common_options(sub, values[i]);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (std::size_t i = 0; i < commands.size(); ++i) {
        if (!subs[i]->parsed())
            continue;
        RunConfig config;
        try {
            apply_config_file(values[i]);
            config = build_config(commands[i].second, values[i]);
        } catch (const qbarrier::Error& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return 2;
        } catch (const CLI::Error& e) { // bad value text in a config file
            std::fprintf(stderr, "%s\n", e.what());
            return 2;
        }
        const qbarrier::cli::RunResult result = qbarrier::cli::run(config);
        std::fprintf(result.exit_code == 0 ? stdout : stderr, "%s\n",
                     result.message.c_str());
        return result.exit_code;
    }
    return 2;
}
