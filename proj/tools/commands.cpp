#include "commands.hpp"

#include "nsfd_epi/acceptance.hpp"
#include "nsfd_epi/equilibria.hpp"
#include "nsfd_epi/format.hpp"
#include "nsfd_epi/harness.hpp"
#include "nsfd_epi/integrators.hpp"
#include "nsfd_epi/nsfd.hpp"
#include "nsfd_epi/stability.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>

namespace nsfd_epi::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kDefaultDiscreteSteps = 100000;
const State kDefaultInitialPoint {0.1, 0.1};

std::string num(double v)
{
    return format_number(v);
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos)
        return std::string(s);
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + '"';
}

void with_output(const RunConfig& config, std::ostream& fallback, const std::function<void(std::ostream&)>& write)
{
    if (config.out.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(config.out, std::ios::binary);
    if (!file)
        throw ConfigError("cannot open output file '" + config.out + "'");
    write(file);
}

std::vector<std::string> model_notes(const Model& model, bool permissive)
{
    std::vector<std::string> notes;
    if (model.variant() == ModelVariant::General && model.params().e == 0.0)
        notes.push_back("note: e = 0 under the general variant");
    if (permissive) {
        for (const auto& w : biological_warnings(model.params()))
            notes.push_back("warning: " + w.predicate + " does not hold");
    }
    return notes;
}

std::string model_line(const RunConfig& c)
{
    const auto& p = c.params;
    return "model=" + std::string(to_string(c.variant)) + " bx=" + num(p.bx) + " by=" + num(p.by) + " ux=" + num(p.ux)
        + " uy=" + num(p.uy) + " K=" + num(p.K) + " e=" + num(p.e) + " beta=" + num(p.beta);
}

json conditions_json(const std::vector<Condition>& cs)
{
    json arr = json::array();
    for (const auto& c : cs)
        arr.push_back({{"name", c.name}, {"holds", c.holds}, {"margin", c.margin}});
    return arr;
}

json eigen_json(const Eigenpair& eigs)
{
    json arr = json::array();
    for (const auto& l : eigs)
        arr.push_back({l.real(), l.imag()});
    return arr;
}

std::string eigen_csv(const Eigenpair& eigs)
{
    return num(eigs[0].real()) + "," + num(eigs[0].imag()) + "," + num(eigs[1].real()) + "," + num(eigs[1].imag());
}

Trajectory run_trajectory(const Model& model, const RunConfig& c, State s0)
{
    switch (c.scheme) {
    case Scheme::Rk4: {
        const double t_max = c.steps ? static_cast<double>(*c.steps) * c.dt : c.t_max;
        if (t_max < c.dt) {
            Trajectory t;
            t.step = c.dt;
            t.record(0, s0);
            return t;
        }
        return simulate_continuous(model, s0, c.dt, t_max, c.detector).trajectory;
    }
    case Scheme::Nsfd:
    case Scheme::Euler: {
        const double h = c.hs.empty() ? 0.1 : c.hs.front();
        const std::size_t n = c.steps.value_or(kDefaultDiscreteSteps);
        if (n == 0) {
            Trajectory t;
            t.step = h;
            t.record(0, s0);
            return t;
        }
        return c.scheme == Scheme::Nsfd ? iterate(model, StepSize(h), s0, n, c.detector)
                                        : iterate_euler(model, h, s0, n, c.detector);
    }
    }
    throw ConfigError("unknown scheme");
}

void write_trajectory(const RunConfig& c, const Trajectory& t, std::ostream& os)
{
    if (c.format == OutputFormat::Json) {
        json doc = {{"scheme", std::string(to_string(c.scheme))}, {"step", t.step}, {"n", t.indices},
            {"t", json::array()}, {"X", json::array()}, {"Y", json::array()}, {"verdict", describe(t.verdict)}};
        for (std::size_t i = 0; i < t.states.size(); ++i) {
            doc["t"].push_back(t.time(i));
            doc["X"].push_back(t.states[i].X);
            doc["Y"].push_back(t.states[i].Y);
        }
        os << doc.dump(2) << '\n';
        return;
    }
    os << "# " << model_line(c) << " scheme=" << to_string(c.scheme) << " step=" << num(t.step) << '\n';
    os << "n,t,X,Y\n";
    for (std::size_t i = 0; i < t.states.size(); ++i)
        os << t.indices[i] << ',' << num(t.time(i)) << ',' << num(t.states[i].X) << ',' << num(t.states[i].Y) << '\n';
    os << "# verdict=" << describe(t.verdict) << '\n';
}

RunConfig prepared(const RunConfig& c)
{
    validate_config(c);
    return c;
}

} // namespace

void cmd_equilibria(const RunConfig& config, std::ostream& out)
{
    const RunConfig c = prepared(config);
    const Model model = config_model(c);
    const auto eqs = all_equilibria(model);
    const auto r = reproduction_numbers(model.params());
    auto notes = model_notes(model, c.permissive);
    if (r.negative_disease_free_density)
        notes.push_back("note: 1 - u_x/b_x < 0, H0 is negative");

    with_output(c, out, [&](std::ostream& os) {
        if (c.format == OutputFormat::Json) {
            json list = json::array();
            for (const auto& eq : eqs) {
                list.push_back({{"label", label(eq.kind)}, {"kind", to_string(eq.kind)}, {"X", eq.point.X},
                    {"Y", eq.point.Y}, {"exists", eq.exists},
                    {"residual", eq.exists ? json(equilibrium_residual(model, eq)) : json(nullptr)},
                    {"conditions", conditions_json(eq.conditions)}, {"note", eq.note}});
            }
            const json doc = {{"model", to_string(model.variant())},
                {"reproduction", {{"V0", r.V0}, {"H0", r.H0}, {"R0", r.R0}}}, {"equilibria", list},
                {"notes", notes}};
            os << doc.dump(2) << '\n';
            return;
        }
        os << "# " << model_line(c) << '\n';
        os << "# R0=" << num(r.R0) << " V0=" << num(r.V0) << " H0=" << num(r.H0) << '\n';
        for (const auto& n : notes)
            os << "# " << n << '\n';
        os << "equilibrium,kind,X,Y,exists,residual,condition,holds,margin\n";
        for (const auto& eq : eqs) {
            const std::string head = std::string(label(eq.kind)) + "," + std::string(to_string(eq.kind)) + ","
                + num(eq.point.X) + "," + num(eq.point.Y) + "," + (eq.exists ? "true" : "false") + ","
                + (eq.exists ? num(equilibrium_residual(model, eq)) : "");
            if (!eq.note.empty())
                os << "# " << label(eq.kind) << ": " << eq.note << '\n';
            if (eq.conditions.empty())
                os << head << ",,,\n";
            for (const auto& cond : eq.conditions)
                os << head << ',' << csv_field(cond.name) << ',' << (cond.holds ? "true" : "false") << ','
                   << num(cond.margin) << '\n';
        }
    });
}

void cmd_stability(const RunConfig& config, std::ostream& out)
{
    const RunConfig c = prepared(config);
    const Model model = config_model(c);
    const std::vector<double> hs = c.hs.empty() ? std::vector<double> {0.1} : c.hs;

    struct Row {
        Equilibrium eq;
        StabilityReport report;
    };
    std::vector<Row> rows;
    std::vector<std::string> missing;
    for (const auto& eq : all_equilibria(model)) {
        if (!eq.exists) {
            missing.push_back(std::string(label(eq.kind)));
            continue;
        }
        rows.push_back({eq, analyze_stability(model, eq, Regime::continuous())});
        for (double h : hs)
            rows.push_back({eq, analyze_stability(model, eq, Regime::discrete_step(h))});
    }
    const auto notes = model_notes(model, c.permissive);

    with_output(c, out, [&](std::ostream& os) {
        if (c.format == OutputFormat::Json) {
            json list = json::array();
            for (const auto& [eq, rep] : rows) {
                list.push_back({{"equilibrium", label(eq.kind)}, {"X", eq.point.X}, {"Y", eq.point.Y},
                    {"regime", rep.regime.discrete ? "discrete" : "continuous"},
                    {"h", rep.regime.discrete ? json(rep.regime.h) : json(nullptr)},
                    {"eigenvalues", eigen_json(rep.eigenvalues)},
                    {"classification", to_string(rep.classification)},
                    {"prediction", to_string(rep.theorem.prediction)}, {"clause", rep.theorem.clause},
                    {"hypotheses", conditions_json(rep.theorem.hypotheses)},
                    {"side_conditions", conditions_json(rep.theorem.side_conditions)},
                    {"notes", rep.theorem.notes},
                    {"agree", rep.agree ? json(*rep.agree) : json(nullptr)}});
            }
            os << json {{"model", to_string(model.variant())}, {"reports", list}, {"absent", missing},
                          {"notes", notes}}
                      .dump(2)
               << '\n';
            return;
        }
        os << "# " << model_line(c) << '\n';
        for (const auto& n : notes)
            os << "# " << n << '\n';
        for (const auto& m : missing)
            os << "# " << m << " does not exist\n";
        os << "equilibrium,X,Y,regime,h,lambda1_re,lambda1_im,lambda2_re,lambda2_im,classification,prediction,agree,"
              "clause\n";
        for (const auto& [eq, rep] : rows) {
            os << label(eq.kind) << ',' << num(eq.point.X) << ',' << num(eq.point.Y) << ','
               << (rep.regime.discrete ? "discrete" : "continuous") << ','
               << (rep.regime.discrete ? num(rep.regime.h) : "") << ',' << eigen_csv(rep.eigenvalues) << ','
               << to_string(rep.classification) << ',' << to_string(rep.theorem.prediction) << ','
               << (rep.agree ? (*rep.agree ? "true" : "false") : "") << ',' << csv_field(rep.theorem.clause) << '\n';
            for (const auto& side : rep.theorem.side_conditions)
                os << "# " << label(eq.kind) << " side condition " << side.name << ": "
                   << (side.holds ? "holds" : "fails") << " (margin " << num(side.margin) << ")\n";
            for (const auto& n : rep.theorem.notes)
                os << "# " << label(eq.kind) << " " << describe(rep.regime) << ": " << n << '\n';
        }
    });
}

void cmd_simulate(const RunConfig& config, std::ostream& out)
{
    const RunConfig c = prepared(config);
    const Model model = config_model(c);
    const auto points = config_initial_points(c, {kDefaultInitialPoint});
    if (points.size() != 1)
        throw ConfigError("simulate takes exactly one initial point; use portrait for several");
    const Trajectory traj = run_trajectory(model, c, points.front());
    with_output(c, out, [&](std::ostream& os) { write_trajectory(c, traj, os); });
}

void cmd_portrait(const RunConfig& config, std::ostream& out)
{
    RunConfig c = prepared(config);
    const Model model = config_model(c);
    const auto points = config_initial_points(c, reference_initial_points());
    const fs::path dir = c.out.empty() ? fs::path("portrait") : fs::path(c.out);
    fs::create_directories(dir);

    std::vector<std::future<Trajectory>> pending;
    for (const auto& s0 : points)
        pending.push_back(std::async(std::launch::async, [&, s0] { return run_trajectory(model, c, s0); }));
    std::vector<Trajectory> trajs;
    for (auto& f : pending)
        trajs.push_back(f.get());

    std::ostringstream index;
    index << "file,x0,y0,steps,final_X,final_Y,verdict\n";
    for (std::size_t i = 0; i < trajs.size(); ++i) {
        const std::string name = "traj_" + std::to_string(i + 1) + (c.format == OutputFormat::Json ? ".json" : ".csv");
        std::ofstream file(dir / name, std::ios::binary);
        if (!file)
            throw ConfigError("cannot write " + (dir / name).string());
        write_trajectory(c, trajs[i], file);
        const auto& t = trajs[i];
        index << name << ',' << num(points[i].X) << ',' << num(points[i].Y) << ',' << t.steps_taken() << ','
              << num(t.final_state().X) << ',' << num(t.final_state().Y) << ',' << describe(t.verdict) << '\n';
    }
    std::ofstream(dir / "index.csv", std::ios::binary) << index.str();
    out << index.str();
}

void cmd_sweep(const RunConfig& config, std::ostream& out)
{
    const RunConfig c = prepared(config);
    const Model model = config_model(c);
    const std::vector<double> hs = c.hs.empty() ? kReferenceStepSizes : c.hs;
    std::vector<std::pair<Equilibrium, SweepResult>> sweeps;
    for (const auto& eq : all_equilibria(model)) {
        if (eq.exists)
            sweeps.emplace_back(eq, step_size_sweep(model, eq, hs));
    }

    with_output(c, out, [&](std::ostream& os) {
        if (c.format == OutputFormat::Json) {
            json list = json::array();
            for (const auto& [eq, sw] : sweeps) {
                json rows = json::array();
                for (const auto& r : sw.rows)
                    rows.push_back({{"h", r.h}, {"eigenvalues", eigen_json(r.eigenvalues)},
                        {"classification", to_string(r.classification)}});
                list.push_back({{"equilibrium", label(eq.kind)}, {"X", eq.point.X}, {"Y", eq.point.Y},
                    {"continuous", to_string(sw.continuous)}, {"identical", sw.identical},
                    {"matches_continuous", sw.matches_continuous}, {"rows", rows}});
            }
            os << json {{"model", to_string(model.variant())}, {"sweeps", list}}.dump(2) << '\n';
            return;
        }
        os << "# " << model_line(c) << '\n';
        os << "equilibrium,X,Y,h,lambda1_re,lambda1_im,lambda2_re,lambda2_im,classification,continuous,identical\n";
        for (const auto& [eq, sw] : sweeps) {
            for (const auto& r : sw.rows)
                os << label(eq.kind) << ',' << num(eq.point.X) << ',' << num(eq.point.Y) << ',' << num(r.h) << ','
                   << eigen_csv(r.eigenvalues) << ',' << to_string(r.classification) << ','
                   << to_string(sw.continuous) << ',' << (sw.identical ? "true" : "false") << '\n';
        }
    });
}

namespace {

struct FixtureOutcome {
    std::string id;
    bool passed = false;
    std::string detail;
};

FixtureOutcome run_fixture(const fs::path& path, double tol)
{
    FixtureOutcome f {path.filename().string(), false, {}};
    try {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        const json doc = json::parse(buf.str());
        f.id = doc.value("id", f.id);
        const RunConfig c = config_from_json(doc.at("config").dump());
        validate_config(c);
        const Model model = config_model(c);
        const State expect {doc.at("expect").at(0).get<double>(), doc.at("expect").at(1).get<double>()};
        const auto points = config_initial_points(c, reference_initial_points());
        const std::vector<double> hs = c.hs.empty() ? std::vector<double> {0.1} : c.hs;
        const auto report = consistency_experiment(model, points, hs, c.detector, {c.dt, c.t_max},
            c.steps.value_or(kDefaultDiscreteSteps), f.id);
        double worst = 0.0;
        bool all_converged = true;
        for (const auto& cell : report.cells) {
            all_converged = all_converged && cell.continuous.converged();
            worst = std::max(worst, distance(cell.continuous.final_state, expect));
            for (const auto& d : cell.discrete) {
                all_converged = all_converged && d.outcome.converged();
                worst = std::max(worst, distance(d.outcome.final_state, expect));
            }
        }
        f.passed = report.verdict && all_converged && worst <= tol;
        f.detail = std::to_string(report.cells.size()) + " initial points, worst distance " + num(worst);
    } catch (const std::exception& err) {
        f.detail = err.what();
    }
    return f;
}

} // namespace

int cmd_verify(const VerifyOptions& options, std::ostream& out)
{
    if (options.list_only) {
        for (const auto& c : acceptance_criteria())
            out << c.id << '\t' << c.name << '\n';
        return kSuccess;
    }
    if (!(options.tol_eq > 0.0))
        throw ConfigError("tol-eq must be > 0");

    AcceptanceOptions opt;
    opt.tol_eq = options.tol_eq;
    bool ok = true;
    std::size_t passed = 0;
    std::size_t total = 0;
    for (const auto& r : run_acceptance(opt)) {
        ++total;
        passed += r.passed ? 1 : 0;
        ok = ok && r.passed;
        out << (r.passed ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name << ": " << r.detail << '\n';
    }

    if (!options.fixture_dir.empty()) {
        std::vector<fs::path> files;
        if (fs::is_directory(options.fixture_dir)) {
            for (const auto& entry : fs::directory_iterator(options.fixture_dir)) {
                if (entry.path().extension() == ".json")
                    files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& path : files) {
            const auto f = run_fixture(path, options.tol_eq);
            ++total;
            passed += f.passed ? 1 : 0;
            ok = ok && f.passed;
            out << (f.passed ? "PASS" : "FAIL") << "  fixture " << f.id << ": " << f.detail << '\n';
        }
    }
    out << passed << "/" << total << " passed\n";
    return ok ? kSuccess : kVerificationFailed;
}

} // namespace nsfd_epi::cli
