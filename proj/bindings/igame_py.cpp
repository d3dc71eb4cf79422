#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "igame/csv.hpp"
#include "igame/workbench.hpp"

namespace py = pybind11;
using namespace igame;

namespace {

TimeGrid grid_of(double t0, double dt, std::size_t n_steps) { return TimeGrid(t0, dt, n_steps); }

Trajectory make_trajectory(double t0, double dt, const Eigen::MatrixXd& states,
                           const std::optional<Eigen::MatrixXd>& controls) {
    const TimeGrid grid(t0, dt, static_cast<std::size_t>(states.rows()) - 1);
    if (controls) return Trajectory(grid, states, *controls);
    return Trajectory(grid, states);
}

py::dict ranking_dict(const CandidateRanking& ranking) {
    py::list errors, scores;
    for (const auto& s : ranking.scores) {
        errors.append(s.prediction_error);
        scores.append(s.optimality_score);
    }
    py::dict out;
    out["best_index"] = ranking.best_index;
    out["prediction_errors"] = errors;
    out["optimality_scores"] = scores;
    return out;
}

}  // namespace

PYBIND11_MODULE(_igame, m) {
    m.doc() = "interactive-game detection and analysis toolkit";

    py::register_exception<DimensionMismatch>(m, "DimensionMismatchError");
    py::register_exception<InsufficientData>(m, "InsufficientDataError");
    py::register_exception<SingularCoupling>(m, "SingularCouplingError");
    py::register_exception<BadConfig>(m, "BadConfigError");
    static py::exception<Error> base_error(m, "IgameError");

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init(&grid_of), py::arg("t0"), py::arg("dt"), py::arg("n_steps"))
        .def_readonly("t0", &TimeGrid::t0)
        .def_readonly("dt", &TimeGrid::dt)
        .def_readonly("n_steps", &TimeGrid::n_steps)
        .def("times", [](const TimeGrid& g) {
            Eigen::VectorXd t(static_cast<Eigen::Index>(g.n_nodes()));
            for (std::size_t k = 0; k < g.n_nodes(); ++k) t[static_cast<Eigen::Index>(k)] = g.time(k);
            return t;
        });

    py::class_<Trajectory>(m, "Trajectory")
        .def(py::init(&make_trajectory), py::arg("t0"), py::arg("dt"), py::arg("states"),
             py::arg("controls") = std::nullopt)
        .def_property_readonly("states", [](const Trajectory& t) { return t.states; })
        .def_property_readonly("controls",
                               [](const Trajectory& t) { return t.controls; })
        .def_property_readonly("grid", [](const Trajectory& t) { return t.grid; });

    py::class_<DynamicsModel>(m, "DynamicsModel")
        .def_readonly("state_dim", &DynamicsModel::state_dim)
        .def_readonly("control_dim", &DynamicsModel::control_dim)
        .def_property_readonly("coefficients",
                               [](const DynamicsModel& m_) { return m_.coefficients; })
        .def_property_readonly("term_keys",
                               [](const DynamicsModel& m_) {
                                   std::vector<std::string> keys;
                                   for (const auto& t : m_.terms) keys.push_back(t.key());
                                   return keys;
                               })
        .def("__call__",
             [](const DynamicsModel& m_, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
                 return evaluate_rhs(m_, x, u);
             })
        .def("to_json", [](const DynamicsModel& m_) { return json_expansion(m_).dump(); })
        .def_static("from_json", [](const std::string& text) {
            return expansion_from_json(Json::parse(text));
        });

    m.def("monomial_keys", [](int state_dim, int control_dim, int degree) {
        std::vector<std::string> keys;
        for (const auto& t : monomial_dictionary(state_dim, control_dim, degree)) {
            keys.push_back(t.key());
        }
        return keys;
    });

    m.def(
        "integrate",
        [](const DynamicsModel& model, const Eigen::VectorXd& x0,
           const std::optional<Eigen::MatrixXd>& controls, double t0, double dt,
           std::size_t n_steps) {
            const TimeGrid grid(t0, dt, n_steps);
            if (controls) {
                const ControlSignal u(grid, *controls, SignalRole::interactive);
                return integrate(model, x0, &u, grid).states;
            }
            return integrate(model, x0, nullptr, grid).states;
        },
        py::arg("model"), py::arg("x0"), py::arg("controls"), py::arg("t0"), py::arg("dt"),
        py::arg("n_steps"));

    m.def("estimate_derivatives", [](const Trajectory& traj) { return estimate_derivatives(traj); });

    m.def(
        "fit_dynamics",
        [](const Trajectory& traj, int degree, bool use_controls, double ridge,
           double sparsify_threshold) {
            const auto dict = monomial_dictionary(
                static_cast<int>(traj.state_dim()),
                use_controls ? static_cast<int>(traj.control_dim()) : 0, degree);
            const auto fit = fit_dynamics(traj, dict, use_controls, ridge, sparsify_threshold);
            return py::make_tuple(fit.model, fit.residual_norm);
        },
        py::arg("traj"), py::arg("degree") = 3, py::arg("use_controls") = false,
        py::arg("ridge") = 1e-9, py::arg("sparsify_threshold") = 0.0);

    m.def(
        "detect_hidden_inputs",
        [](const Trajectory& traj, const DynamicsModel& model, double threshold) {
            const auto verdict = detect_hidden_inputs(traj, model, threshold);
            py::dict out;
            out["hidden_inputs"] = verdict.hidden_inputs;
            out["residual_norm"] = verdict.residual_norm;
            out["threshold_used"] = verdict.threshold_used;
            out["per_node_residuals"] = Eigen::VectorXd(verdict.per_node_residuals);
            return out;
        },
        py::arg("traj"), py::arg("model"), py::arg("threshold"));

    m.def(
        "default_hidden_input_threshold",
        [](const Trajectory& traj, int degree, double ridge, double calibration_fraction) {
            const auto dict =
                monomial_dictionary(static_cast<int>(traj.state_dim()), 0, degree);
            return default_hidden_input_threshold(traj, dict, ridge, 0.0, calibration_fraction);
        },
        py::arg("traj"), py::arg("degree") = 3, py::arg("ridge") = 1e-9,
        py::arg("calibration_fraction") = 0.25);

    m.def(
        "apply_filtration",
        [](const std::string& spec_json, const Trajectory& traj,
           const std::optional<Eigen::MatrixXd>& epsilon) {
            const auto spec = filtration_from_json(Json::parse(spec_json));
            SignalSet signals;
            signals.traj = &traj;
            std::optional<ControlSignal> eps_signal;
            if (epsilon) {
                eps_signal.emplace(traj.grid, *epsilon, SignalRole::epsilon);
                signals.epsilon = &*eps_signal;
            }
            return apply_filtration(spec, signals).values;
        },
        py::arg("spec_json"), py::arg("traj"), py::arg("epsilon") = std::nullopt);

    m.def(
        "recover_epsilon_additive",
        [](const Trajectory& traj, const Eigen::MatrixXd& pure) {
            const auto coupling =
                CouplingForm::additive(static_cast<int>(traj.state_dim()),
                                       static_cast<int>(traj.control_dim()));
            const auto eps = recover_epsilon(
                coupling, traj.control_signal(),
                ControlSignal(traj.grid, pure, SignalRole::pure), traj, 1e-9);
            return py::make_tuple(eps.concatenated().values, eps.recovery_residual);
        },
        py::arg("traj"), py::arg("pure"));

    m.def(
        "segment_series",
        [](const Eigen::MatrixXd& driver, double dt, double penalty, std::size_t min_len) {
            const TimeGrid grid(0.0, dt, static_cast<std::size_t>(driver.rows()) - 1);
            const Trajectory traj(
                grid, Eigen::MatrixXd::Zero(driver.rows(), 1));
            const ControlSignal signal(grid, driver, SignalRole::epsilon);
            return segment_trajectory(traj, signal, penalty, min_len).breakpoints;
        },
        py::arg("driver"), py::arg("dt"), py::arg("penalty"), py::arg("min_len") = 2);

    m.def("ladder_operators", [](int modes, int cutoff) {
        const FockSpace space(modes, cutoff);
        auto [a, adag] = ladder_operators(space);
        std::vector<Eigen::MatrixXcd> lower, raise_;
        for (const auto& op : a) lower.emplace_back(op.matrix);
        for (const auto& op : adag) raise_.emplace_back(op.matrix);
        return py::make_tuple(lower, raise_);
    });

    m.def(
        "evolve",
        [](const Eigen::MatrixXcd& omega, const std::vector<double>& vertex, int cutoff,
           const Eigen::VectorXcd& psi, double duration) {
            const FockSpace space(static_cast<int>(omega.rows()), cutoff);
            HamiltonianSpec spec;
            spec.quadratic = omega;
            spec.vertex = vertex;
            const auto H = build_hamiltonian(spec, space);
            QuantumState state;
            state.coefficients = psi;
            return evolve_slow(state, H, duration).coefficients;
        },
        py::arg("omega"), py::arg("vertex"), py::arg("cutoff"), py::arg("psi"),
        py::arg("duration"));

    m.def("scenario_names", [] {
        std::vector<std::string> names;
        for (const auto& s : builtin_catalog()) names.push_back(s.name);
        return names;
    });

    m.def(
        "simulate_scenario",
        [](const std::string& name, std::uint64_t seed) {
            const auto scenario = builtin_scenario(name);
            const auto result = generate(scenario, seed);
            py::dict out;
            Eigen::VectorXd t(static_cast<Eigen::Index>(scenario.grid.n_nodes()));
            for (std::size_t k = 0; k < scenario.grid.n_nodes(); ++k) {
                t[static_cast<Eigen::Index>(k)] = scenario.grid.time(k);
            }
            out["t"] = t;
            out["states"] = result.trajectory.states;
            out["controls"] = result.interactive.values;
            out["pure"] = result.pure.values;
            out["epsilon"] = result.epsilon.concatenated().values;
            out["stats"] = result.stats;
            return out;
        },
        py::arg("name"), py::arg("seed") = 0);

    m.def(
        "select_interactive_model",
        [](const Trajectory& traj, const std::string& menu_json, double holdout, int degree,
           int n_perturbations, std::uint64_t seed) {
            const Json parsed = Json::parse(menu_json);
            const auto menus = parsed.contains("menus")
                                   ? menus_from_json(parsed)
                                   : std::vector<std::vector<Candidate>>{};
            if (menus.empty()) throw BadConfig("menu JSON has no levels");
            SelectionConfig config;
            config.dictionary_degree = degree;
            config.n_perturbations = n_perturbations;
            config.ridge = 1e-9;
            config.seed = seed;
            return ranking_dict(select_interactive_model(traj, menus.front(), holdout, config));
        },
        py::arg("traj"), py::arg("menu_json"), py::arg("holdout") = 0.25, py::arg("degree") = 2,
        py::arg("n_perturbations") = 12, py::arg("seed") = 0);

    m.def("builtin_menu_json", [](const std::string& name) {
        return json_menus(builtin_menus(builtin_scenario(name))).dump();
    });

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) { return igame::cli::run(args); },
        py::arg("args"), "run a workbench command in-process; returns the exit code");

    m.def("read_trajectory_csv",
          [](const std::string& path) { return read_trajectory_csv(path); });
    m.def("write_trajectory_csv", [](const std::string& path, const Trajectory& traj) {
        write_trajectory_csv(path, traj);
    });
}
