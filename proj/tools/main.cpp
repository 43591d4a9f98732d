#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace nsfd_epi;
using namespace nsfd_epi::cli;

struct Flags {
    std::string config_file;
    std::optional<std::string> model;
    std::optional<std::string> scheme;
    std::vector<double> h;
    std::optional<double> dt;
    std::optional<double> t_max;
    std::optional<double> bx, by, ux, uy, K, e, beta;
    std::vector<double> x0, y0;
    std::optional<std::string> preset;
    std::optional<std::size_t> steps;
    std::optional<double> tol_eq;
    std::optional<std::string> format;
    std::optional<std::string> out;
    bool permissive = false;
};

void add_run_flags(CLI::App& cmd, Flags& f)
{
    cmd.set_help_flag("--help", "print this help message and exit"); // frees -h for --h
    cmd.add_option("--config", f.config_file, "JSON run configuration; flags override its values");
    cmd.add_option("--model", f.model, "general | horizontal | vertical");
    cmd.add_option("--scheme", f.scheme, "nsfd | rk4 | euler");
    cmd.add_option("--h", f.h, "step size of the discrete map (repeatable)");
    cmd.add_option("--dt", f.dt, "rk4 step");
    cmd.add_option("--t-max", f.t_max, "rk4 horizon");
    cmd.add_option("--bx", f.bx, "susceptible birth rate");
    cmd.add_option("--by", f.by, "infected birth rate");
    cmd.add_option("--ux", f.ux, "susceptible death rate");
    cmd.add_option("--uy", f.uy, "infected death rate");
    cmd.add_option("--K", f.K, "carrying capacity");
    cmd.add_option("--e", f.e, "imperfect vertical transmission rate");
    cmd.add_option("--beta", f.beta, "horizontal transmission rate");
    cmd.add_option("--x0", f.x0, "initial X (repeatable, paired with --y0)");
    cmd.add_option("--y0", f.y0, "initial Y (repeatable, paired with --x0)");
    cmd.add_option("--preset", f.preset, "named initial points (paper-initials)");
    cmd.add_option("--steps", f.steps, "maximum number of steps");
    cmd.add_option("--tol-eq", f.tol_eq, "distance to an equilibrium accepted as convergence");
    cmd.add_option("--format", f.format, "csv | json");
    cmd.add_option("--out", f.out, "output file (portrait: directory)");
    cmd.add_flag("--permissive", f.permissive, "accept parameters outside the biological regime");
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunConfig build_config(const Flags& f)
{
    RunConfig c;
    std::vector<std::string> file_keys;
    if (!f.config_file.empty()) {
        const std::string text = read_file(f.config_file);
        c = config_from_json(text, c);
        file_keys = config_keys(text);
    }
    const auto in_file = [&](const std::string& key) {
        return std::find(file_keys.begin(), file_keys.end(), key) != file_keys.end();
    };

    if (f.model) {
        try {
            c.variant = parse_variant(*f.model);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(err.what());
        }
    }
    if (f.scheme)
        c.scheme = parse_scheme(*f.scheme);
    if (!f.h.empty())
        c.hs = f.h;
    if (f.dt)
        c.dt = *f.dt;
    if (f.t_max)
        c.t_max = *f.t_max;

    auto& p = c.params;
    for (auto [flag, target] : {std::pair {&f.bx, &p.bx}, {&f.by, &p.by}, {&f.ux, &p.ux}, {&f.uy, &p.uy},
             {&f.K, &p.K}, {&f.e, &p.e}, {&f.beta, &p.beta}}) {
        if (*flag)
            *target = **flag;
    }
    // Parameters a variant forces to zero default to zero for that variant
    // unless given explicitly, so `--model horizontal` works on its own.
    if (c.variant != ModelVariant::General && !f.e && !in_file("params.e"))
        p.e = 0.0;
    if (c.variant == ModelVariant::PerfectVerticalOnly && !f.beta && !in_file("params.beta"))
        p.beta = 0.0;

    if (f.x0.size() != f.y0.size())
        throw ConfigError("--x0 and --y0 must be given the same number of times");
    if (!f.x0.empty()) {
        c.initial_points.clear();
        for (std::size_t i = 0; i < f.x0.size(); ++i)
            c.initial_points.push_back({f.x0[i], f.y0[i]});
    }
    if (f.preset) {
        c.preset = *f.preset;
        if (f.x0.empty())
            c.initial_points.clear();
    }
    if (f.steps)
        c.steps = *f.steps;
    if (f.tol_eq)
        c.detector.tol_eq = *f.tol_eq;
    if (f.format)
        c.format = parse_format(*f.format);
    if (f.out)
        c.out = *f.out;
    if (f.permissive)
        c.permissive = true;
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app {"Positivity-preserving discretizations of host-parasite epidemic models", "nsfd-epi"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help message and exit");

    using Command = void (*)(const RunConfig&, std::ostream&);
    struct Entry {
        const char* name;
        const char* help;
        Command fn;
    };
    const Entry entries[] = {
        {"equilibria", "equilibria, existence conditions and reproduction numbers", cmd_equilibria},
        {"stability", "eigenvalues and stability predictions at each equilibrium", cmd_stability},
        {"simulate", "one trajectory as n,t,X,Y rows", cmd_simulate},
        {"portrait", "trajectories from several initial points into a directory", cmd_portrait},
        {"sweep", "classification of each equilibrium across step sizes", cmd_sweep},
    };

    std::vector<Flags> flags(std::size(entries));
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(entries); ++i) {
        auto* sub = app.add_subcommand(entries[i].name, entries[i].help);
        add_run_flags(*sub, flags[i]);
        subs.push_back(sub);
    }

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria and scenario fixtures");
    verify_cmd->add_flag("--list", verify.list_only, "list criteria without running them");
    verify_cmd->add_option("--tol-eq", verify.tol_eq, "distance to the reference limits accepted as a match");
    verify_cmd->add_option("--fixtures", verify.fixture_dir, "scenario fixture directory (overrides NSFD_EPI_SEED_DIR)");

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

    if (verify_cmd->parsed()) {
        if (verify.fixture_dir.empty()) {
            if (const char* dir = std::getenv("NSFD_EPI_SEED_DIR"))
                verify.fixture_dir = dir;
        }
        return run_guarded([&] { return cmd_verify(verify, std::cout); }, std::cerr);
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) {
            return run_guarded(
                [&] {
                    entries[i].fn(build_config(flags[i]), std::cout);
                    return static_cast<int>(kSuccess);
                },
                std::cerr);
        }
    }
    return kConfigError;
}
