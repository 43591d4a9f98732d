#include "nsfd_epi/acceptance.hpp"
#include "nsfd_epi/equilibria.hpp"
#include "nsfd_epi/format.hpp"
#include "nsfd_epi/harness.hpp"
#include "nsfd_epi/integrators.hpp"
#include "nsfd_epi/nsfd.hpp"
#include "nsfd_epi/stability.hpp"

#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace nsfd_epi;

namespace {

py::dict trajectory_dict(const Trajectory& t)
{
    std::vector<double> times, xs, ys;
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        times.push_back(t.time(i));
        xs.push_back(t.states[i].X);
        ys.push_back(t.states[i].Y);
    }
    py::dict d;
    d["step"] = t.step;
    d["n"] = t.indices;
    d["t"] = times;
    d["X"] = xs;
    d["Y"] = ys;
    d["verdict"] = describe(t.verdict);
    d["converged"] = t.verdict.converged();
    d["equilibrium"] = t.verdict.equilibrium ? py::object(py::str(std::string(label(*t.verdict.equilibrium))))
                                             : py::object(py::none());
    return d;
}

std::vector<py::tuple> conditions_list(const std::vector<Condition>& cs)
{
    std::vector<py::tuple> out;
    for (const auto& c : cs)
        out.push_back(py::make_tuple(c.name, c.holds, c.margin));
    return out;
}

Regime regime_for(std::optional<double> h)
{
    return h ? Regime::discrete_step(*h) : Regime::continuous();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Positivity-preserving discrete maps for host-parasite epidemic models";

    py::class_<HostParams>(m, "HostParams")
        .def(py::init([](double bx, double by, double ux, double uy, double K, double e, double beta) {
            return HostParams {bx, by, ux, uy, K, e, beta};
        }),
            py::arg("bx"), py::arg("by"), py::arg("ux"), py::arg("uy"), py::arg("K"), py::arg("e") = 0.0,
            py::arg("beta") = 0.0)
        .def_readwrite("bx", &HostParams::bx)
        .def_readwrite("by", &HostParams::by)
        .def_readwrite("ux", &HostParams::ux)
        .def_readwrite("uy", &HostParams::uy)
        .def_readwrite("K", &HostParams::K)
        .def_readwrite("e", &HostParams::e)
        .def_readwrite("beta", &HostParams::beta)
        .def(py::self == py::self)
        .def("__repr__", [](const HostParams& p) {
            return "HostParams(bx=" + format_number(p.bx) + ", by=" + format_number(p.by) + ", ux="
                + format_number(p.ux) + ", uy=" + format_number(p.uy) + ", K=" + format_number(p.K)
                + ", e=" + format_number(p.e) + ", beta=" + format_number(p.beta) + ")";
        });

    py::class_<State>(m, "State")
        .def(py::init<double, double>(), py::arg("X"), py::arg("Y"))
        .def_readwrite("X", &State::X)
        .def_readwrite("Y", &State::Y)
        .def("__iter__", [](const State& s) { return py::iter(py::make_tuple(s.X, s.Y)); })
        .def("__repr__",
            [](const State& s) { return "State(" + format_number(s.X) + ", " + format_number(s.Y) + ")"; });

    py::enum_<ModelVariant>(m, "ModelVariant")
        .value("GENERAL", ModelVariant::General)
        .value("HORIZONTAL", ModelVariant::HorizontalPerfectVertical)
        .value("VERTICAL", ModelVariant::PerfectVerticalOnly);

    py::class_<Model>(m, "Model")
        .def(py::init<HostParams, ModelVariant>(), py::arg("params"), py::arg("variant") = ModelVariant::General)
        .def_property_readonly("params", &Model::params)
        .def_property_readonly("variant", &Model::variant);

    m.def("general_reference_params", &general_reference_params, py::arg("beta"));
    m.def("perfect_vertical_reference_params", &perfect_vertical_reference_params, py::arg("beta"));
    m.def("reference_initial_points", &reference_initial_points);

    m.def("vector_field", &vector_field, py::arg("model"), py::arg("state"));

    m.def(
        "reproduction_numbers",
        [](const HostParams& p) {
            const auto r = reproduction_numbers(p);
            py::dict d;
            d["V0"] = r.V0;
            d["H0"] = r.H0;
            d["R0"] = r.R0;
            return d;
        },
        py::arg("params"));

    py::class_<Equilibrium>(m, "Equilibrium")
        .def_property_readonly("label", [](const Equilibrium& e) { return std::string(label(e.kind)); })
        .def_property_readonly("kind", [](const Equilibrium& e) { return std::string(to_string(e.kind)); })
        .def_readonly("point", &Equilibrium::point)
        .def_readonly("exists", &Equilibrium::exists)
        .def_readonly("note", &Equilibrium::note)
        .def_property_readonly("conditions", [](const Equilibrium& e) { return conditions_list(e.conditions); })
        .def("__repr__", [](const Equilibrium& e) {
            return std::string(label(e.kind)) + "(" + format_number(e.point.X) + ", " + format_number(e.point.Y)
                + (e.exists ? ")" : ", absent)");
        });

    m.def("equilibria", [](const Model& model) { return all_equilibria(model); }, py::arg("model"));
    m.def("interior_equilibrium", [](const Model& model) { return interior_equilibrium(model); }, py::arg("model"));

    m.def(
        "stability",
        [](const Model& model, const Equilibrium& eq, std::optional<double> h) {
            const auto rep = analyze_stability(model, eq, regime_for(h));
            py::dict d;
            d["eigenvalues"] = std::vector<std::complex<double>>(rep.eigenvalues.begin(), rep.eigenvalues.end());
            d["classification"] = std::string(to_string(rep.classification));
            d["prediction"] = std::string(to_string(rep.theorem.prediction));
            d["clause"] = rep.theorem.clause;
            d["agree"] = rep.agree ? py::object(py::bool_(*rep.agree)) : py::object(py::none());
            d["hypotheses"] = conditions_list(rep.theorem.hypotheses);
            d["side_conditions"] = conditions_list(rep.theorem.side_conditions);
            return d;
        },
        py::arg("model"), py::arg("equilibrium"), py::arg("h") = py::none(),
        "Linear stability at an equilibrium; continuous when h is None, else the discrete map with step h.");

    m.def(
        "denominators",
        [](const Model& model, double h) {
            const auto d = denominators(model, StepSize(h));
            return py::make_tuple(d.phi1, d.phi2);
        },
        py::arg("model"), py::arg("h"));
    m.def(
        "nsfd_step", [](const Model& model, double h, State s) { return nsfd_step(model, StepSize(h), s); },
        py::arg("model"), py::arg("h"), py::arg("state"));
    m.def("rk4_step", &rk4_step, py::arg("model"), py::arg("state"), py::arg("dt"));
    m.def("euler_step", &euler_step, py::arg("model"), py::arg("state"), py::arg("dt"));

    m.def(
        "iterate",
        [](const Model& model, double h, State s0, std::size_t n_max) {
            return trajectory_dict(iterate(model, StepSize(h), s0, n_max));
        },
        py::arg("model"), py::arg("h"), py::arg("state"), py::arg("n_max") = 100000);
    m.def(
        "iterate_euler",
        [](const Model& model, double h, State s0, std::size_t n_max) {
            return trajectory_dict(iterate_euler(model, h, s0, n_max));
        },
        py::arg("model"), py::arg("h"), py::arg("state"), py::arg("n_max") = 100000);
    m.def(
        "simulate_continuous",
        [](const Model& model, State s0, double dt, double t_max) {
            return trajectory_dict(simulate_continuous(model, s0, dt, t_max).trajectory);
        },
        py::arg("model"), py::arg("state"), py::arg("dt") = 0.01, py::arg("t_max") = 2000.0);

    m.def(
        "consistency_experiment",
        [](const Model& model, const std::vector<State>& points, const std::vector<double>& hs) {
            ConsistencyReport rep;
            {
                py::gil_scoped_release release;
                rep = consistency_experiment(model, points, hs);
            }
            py::list cells;
            for (const auto& c : rep.cells) {
                py::list discrete;
                for (const auto& d : c.discrete)
                    discrete.append(py::make_tuple(d.h, d.outcome.final_state, d.agree));
                py::dict cell;
                cell["initial"] = c.initial;
                cell["continuous"] = c.continuous.final_state;
                cell["discrete"] = discrete;
                cell["agree"] = c.agree;
                cells.append(cell);
            }
            py::dict d;
            d["cells"] = cells;
            d["agree"] = rep.verdict;
            return d;
        },
        py::arg("model"), py::arg("points"), py::arg("hs"));

    m.def(
        "step_size_sweep",
        [](const Model& model, const Equilibrium& eq, const std::vector<double>& hs) {
            const auto sw = step_size_sweep(model, eq, hs);
            std::vector<std::string> classes;
            for (const auto& r : sw.rows)
                classes.emplace_back(to_string(r.classification));
            py::dict d;
            d["continuous"] = std::string(to_string(sw.continuous));
            d["classifications"] = classes;
            d["identical"] = sw.identical;
            d["matches_continuous"] = sw.matches_continuous;
            return d;
        },
        py::arg("model"), py::arg("equilibrium"), py::arg("hs") = kReferenceStepSizes);

    m.def(
        "euler_failure_demo",
        [](const Model& model, State s0, double h, std::size_t max_steps) {
            const auto r = euler_failure_demo(model, s0, h, max_steps);
            return py::make_tuple(r.euler_first_negative, r.nsfd_first_negative);
        },
        py::arg("model"), py::arg("state"), py::arg("h"), py::arg("max_steps") = 10000);

    m.def(
        "run_acceptance",
        [](double tol_eq) {
            AcceptanceOptions opt;
            opt.tol_eq = tol_eq;
            std::vector<CriterionResult> results;
            {
                py::gil_scoped_release release;
                results = run_acceptance(opt);
            }
            std::vector<py::tuple> out;
            for (const auto& r : results)
                out.push_back(py::make_tuple(r.id, r.name, r.passed, r.detail));
            return out;
        },
        py::arg("tol_eq") = 1e-3);
}
