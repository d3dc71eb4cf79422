#include "igame/workbench.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iostream>

#include "igame/csv.hpp"

namespace igame::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

int log_level() {
    const char* env = std::getenv("IGAME_LOG");
    if (env == nullptr) return 1;
    const std::string v = env;
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
}

void log_info(const std::string& message) {
    if (log_level() >= 1) std::cerr << "[igame] " << message << "\n";
}

/// Collects stage timings and the artifact manifest of one run.
struct RunContext {
    fs::path out;
    Json report;
    Clock::time_point stage_start = Clock::now();
    std::vector<std::string> plots;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> plot_data;

    explicit RunContext(const std::string& command, const fs::path& out_dir) : out(out_dir) {
        fs::create_directories(out);
        report["schema"] = "igame-report-v1";
        report["command"] = command;
        report["config"] = Json::object();
        report["inputs"] = Json::object();
        report["results"] = Json::object();
        report["manifest"] = Json::array();
        report["timings_ms"] = Json::object();
    }

    void stage_done(const std::string& name) {
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - stage_start);
        report["timings_ms"][name] = elapsed.count();
        stage_start = Clock::now();
        log_info("stage " + name + " done");
    }

    fs::path artifact(const std::string& relative) {
        report["manifest"].push_back(relative);
        const fs::path path = out / relative;
        fs::create_directories(path.parent_path().empty() ? out : path.parent_path());
        return path;
    }

    void offer_plot(const std::string& name, std::vector<double> x, std::vector<double> y) {
        plot_data[name] = {std::move(x), std::move(y)};
    }

    void finish() {
        for (const auto& name : plots) {
            const auto it = plot_data.find(name);
            if (it == plot_data.end()) {
                log_info("plot series '" + name + "' has no data in this run; skipped");
                continue;
            }
            write_series_csv(artifact("plots/" + name + ".csv"), "x", name, it->second.first,
                             it->second.second);
        }
        save_json_file(out / "report.json", report);
        validate_report(report, out);
    }
};

std::vector<std::string> parse_plot_list(const std::string& arg,
                                         const std::vector<std::string>& known) {
    std::vector<std::string> names;
    std::string item;
    std::istringstream stream(arg);
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        if (std::find(known.begin(), known.end(), item) == known.end()) {
            throw BadConfig("unknown plot series: " + item);
        }
        names.push_back(item);
    }
    return names;
}

/// CLI option values plus the machinery to overlay a JSON config file:
/// command-line flags win, config supplies the rest, unknown keys rejected.
struct ConfigOverlay {
    CLI::App* cmd;
    std::vector<std::pair<std::string, std::function<void(const Json&)>>> appliers;
    std::vector<std::string> keys{"plot"};

    explicit ConfigOverlay(CLI::App* c) : cmd(c) {}

    template <typename T>
    void bind(const std::string& key, CLI::Option* option, T* target) {
        keys.push_back(key);
        appliers.emplace_back(key, [option, target](const Json& value) {
            if (option->count() == 0) *target = value.get<T>();
        });
    }

    void apply(const Json& config, const std::string& context) {
        expect_keys(config, keys, context);
        for (const auto& [key, applier] : appliers) {
            if (config.contains(key)) applier(config.at(key));
        }
    }
};

struct CommonOptions {
    std::string out;
    std::uint64_t seed = 0;
    std::string config_path;
    std::string plot_arg;
};

void add_common(CLI::App* cmd, CommonOptions* common, ConfigOverlay* overlay) {
    cmd->add_option("--out", common->out, "run directory")->required();
    auto* seed = cmd->add_option("--seed", common->seed, "seed for all randomness");
    cmd->add_option("--config", common->config_path, "JSON config file");
    cmd->add_option("--plot", common->plot_arg, "comma-separated plot series to emit");
    overlay->bind("seed", seed, &common->seed);
}

Json maybe_config(const CommonOptions& common) {
    if (common.config_path.empty()) return Json::object();
    return load_json_file(common.config_path);
}

Json echo_common(const CommonOptions& common) {
    return Json{{"out", common.out}, {"seed", common.seed}};
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    CommonOptions common;
    std::string scenario;
    bool emit_menu = false;
};

int cmd_simulate(const SimulateOptions& opt) {
    if (opt.scenario.empty()) throw BadConfig("simulate: --scenario is required");
    Scenario scenario = [&] {
        if (opt.scenario.find('/') != std::string::npos ||
            opt.scenario.find(".json") != std::string::npos) {
            return scenario_from_json(load_json_file(opt.scenario));
        }
        return builtin_scenario(opt.scenario);
    }();

    RunContext run("simulate", opt.common.out);
    run.report["config"] = echo_common(opt.common);
    run.report["config"]["scenario"] = opt.scenario;
    run.report["config"]["emit_menu"] = opt.emit_menu;

    const GenerationResult result = generate(scenario, opt.common.seed);
    run.stage_done("generate");

    write_trajectory_csv(run.artifact("traj.csv"), result.trajectory);
    write_signal_csv(run.artifact("pure.csv"), result.pure, "u");
    write_signal_csv(run.artifact("eps.csv"), result.epsilon.concatenated(), "eps");
    save_json_file(run.artifact("scenario.json"), json_scenario(scenario));

    Json meta{{"scenario", scenario.name},
              {"seed", opt.common.seed},
              {"stats", result.stats},
              {"files",
               Json{{"trajectory", "traj.csv"},
                    {"pure", "pure.csv"},
                    {"epsilon", "eps.csv"},
                    {"scenario", "scenario.json"}}}};
    save_json_file(run.artifact("meta.json"), meta);

    if (opt.emit_menu) {
        save_json_file(run.artifact("menu.json"), json_menus(builtin_menus(scenario)));
    }
    run.stage_done("write");

    run.report["results"] = Json{{"scenario", scenario.name},
                                 {"n_steps", scenario.grid.n_steps},
                                 {"stats", result.stats}};
    run.plots = parse_plot_list(opt.common.plot_arg, {});
    run.finish();
    return 0;
}

// ------------------------------------------------------------------ detect

struct DetectOptions {
    CommonOptions common;
    std::string traj_path;
    std::string menu_path;
    int dict_degree = 3;
    double ridge = 1e-9;
    double sparsify = 0.0;
    double holdout = 0.25;
    double calibration_fraction = 0.25;
    double threshold = -1.0;  // < 0: use the calibrated default
    int n_perturbations = 40;
    double perturbation_scale = 0.1;
};

int cmd_detect(const DetectOptions& opt) {
    if (opt.traj_path.empty()) throw BadConfig("detect: --traj is required");
    if (opt.menu_path.empty()) throw BadConfig("detect: --menu is required");
    const Trajectory traj = read_trajectory_csv(opt.traj_path);
    const Json menu_json = load_json_file(opt.menu_path);

    RunContext run("detect", opt.common.out);
    run.report["config"] = echo_common(opt.common);
    run.report["config"]["dict_degree"] = opt.dict_degree;
    run.report["config"]["ridge"] = opt.ridge;
    run.report["config"]["sparsify"] = opt.sparsify;
    run.report["config"]["holdout"] = opt.holdout;
    run.report["config"]["calibration_fraction"] = opt.calibration_fraction;
    run.report["config"]["n_perturbations"] = opt.n_perturbations;
    run.report["config"]["perturbation_scale"] = opt.perturbation_scale;
    run.report["inputs"] =
        Json{{"traj", fs::absolute(opt.traj_path).string()},
             {"menu", fs::absolute(opt.menu_path).string()}};

    const int d = static_cast<int>(traj.state_dim());
    const auto autonomous_dict = monomial_dictionary(d, 0, opt.dict_degree);
    const FitResult autonomous =
        fit_dynamics(traj, autonomous_dict, false, opt.ridge, opt.sparsify);
    const double threshold =
        opt.threshold >= 0.0
            ? opt.threshold
            : default_hidden_input_threshold(traj, autonomous_dict, opt.ridge, opt.sparsify,
                                             opt.calibration_fraction);
    run.report["config"]["threshold"] = threshold;
    const DetectionVerdict verdict = detect_hidden_inputs(traj, autonomous.model, threshold);
    run.stage_done("autonomous_fit");

    Json autonomous_json{{"model", json_expansion(autonomous.model)},
                         {"fit_residual", autonomous.residual_norm}};
    save_json_file(run.artifact("autonomous_model.json"), autonomous_json);
    run.report["results"]["verdict"] = json_verdict(verdict);

    std::vector<double> node_times;
    for (std::size_t k = 0; k < traj.grid.n_nodes(); ++k) node_times.push_back(traj.grid.time(k));
    run.offer_plot("residual_profile", node_times,
                   std::vector<double>(verdict.per_node_residuals.data(),
                                       verdict.per_node_residuals.data() +
                                           verdict.per_node_residuals.size()));

    if (verdict.hidden_inputs) {
        const auto menus = menu_json.contains("menus")
                               ? menus_from_json(menu_json)
                               : std::vector<std::vector<Candidate>>{[&] {
                                     std::vector<Candidate> menu;
                                     for (const auto& c : menu_json) menu.push_back(candidate_from_json(c));
                                     return menu;
                                 }()};
        if (menus.empty() || menus.front().empty()) {
            throw EmptyCandidateSet("detect: the candidate menu is empty");
        }
        SelectionConfig config;
        config.dictionary_degree = opt.dict_degree;
        config.ridge = opt.ridge;
        config.sparsify_threshold = opt.sparsify;
        config.n_perturbations = opt.n_perturbations;
        config.perturbation_scale = opt.perturbation_scale;
        config.seed = opt.common.seed;
        const CandidateRanking ranking =
            select_interactive_model(traj, menus.front(), opt.holdout, config);
        run.stage_done("selection");

        run.report["results"]["ranking"] = json_ranking(ranking);

        const auto controlled_dict =
            monomial_dictionary(d, static_cast<int>(traj.control_dim()), opt.dict_degree);
        const FitResult controlled =
            fit_dynamics(traj, controlled_dict, true, opt.ridge, opt.sparsify);
        Json controlled_json{{"model", json_expansion(controlled.model)},
                             {"fit_residual", controlled.residual_norm}};
        save_json_file(run.artifact("controlled_model.json"), controlled_json);
        run.stage_done("controlled_fit");
    }

    run.plots = parse_plot_list(opt.common.plot_arg, {"residual_profile"});
    run.finish();
    return 0;
}

// ----------------------------------------------------------------- unravel

struct UnravelOptions {
    CommonOptions common;
    std::string run_dir;
    std::string menu_path;     // optional level menus for the recursion
    std::string desires_path;  // optional V_alpha specs
    int depth = 1;
    int desire_degree = 1;
    int dict_degree = 3;
    double ridge = 1e-9;
    double sparsify = 0.0;
    double holdout = 0.25;
    double calibration_fraction = 0.25;
    double singular_tolerance = 1e-8;
    double threshold = -1.0;
    int n_perturbations = 40;
    double perturbation_scale = 0.1;
};

struct DetectArtifacts {
    Trajectory traj;
    Candidate best;
    DynamicsModel controlled_model;
    Json report;
};

DetectArtifacts load_detect_run(const fs::path& run_dir) {
    DetectArtifacts out;
    out.report = load_json_file(run_dir / "report.json");
    if (!out.report.contains("results") || !out.report["results"].contains("ranking")) {
        throw Error("unravel: the detect run has no candidate ranking (verdict autonomous?)");
    }
    out.traj = read_trajectory_csv(out.report["inputs"]["traj"].get<std::string>());
    const Json& ranking = out.report["results"]["ranking"];
    const auto best_index = ranking["best_index"].get<std::size_t>();
    out.best = candidate_from_json(ranking["candidates"][best_index]);
    const Json controlled = load_json_file(run_dir / "controlled_model.json");
    out.controlled_model = expansion_from_json(controlled.at("model"));
    return out;
}

std::vector<FiltrationSpec> resolve_desire_specs(const std::string& desires_path) {
    std::vector<FiltrationSpec> specs;
    if (desires_path.empty()) {
        specs.push_back(FiltrationSpec::identity(SignalSource::epsilon));
    } else {
        for (const auto& s : load_json_file(desires_path)) {
            specs.push_back(filtration_from_json(s));
        }
    }
    return specs;
}

int cmd_unravel(const UnravelOptions& opt) {
    if (opt.run_dir.empty()) throw BadConfig("unravel: --run is required");
    DetectArtifacts detect = load_detect_run(opt.run_dir);

    RunContext run("unravel", opt.common.out);
    run.report["config"] = echo_common(opt.common);
    run.report["config"]["depth"] = opt.depth;
    run.report["config"]["desire_degree"] = opt.desire_degree;
    run.report["config"]["singular_tolerance"] = opt.singular_tolerance;
    run.report["inputs"] = Json{{"detect_run", fs::absolute(opt.run_dir).string()},
                                {"traj", detect.report["inputs"]["traj"]}};

    SignalSet signals;
    signals.traj = &detect.traj;
    const ControlSignal pure = apply_filtration(detect.best.filtration, signals);
    const EpsilonRepresentation eps =
        recover_epsilon(detect.best.coupling, detect.traj.control_signal(), pure, detect.traj,
                        opt.singular_tolerance);
    run.stage_done("recover_epsilon");

    const std::vector<FiltrationSpec> desire_specs = resolve_desire_specs(opt.desires_path);
    const std::vector<ControlSignal> desires = extract_desires(desire_specs, eps, detect.traj);
    const ControlSignal desires_concat = hstack(desires, SignalRole::desire);
    const auto desire_dict =
        monomial_dictionary(static_cast<int>(detect.traj.state_dim()),
                            static_cast<int>(desires_concat.dim()), opt.desire_degree);
    const DesireMap desire_map =
        fit_desire_map(desires, detect.traj, eps, desire_dict, opt.ridge);
    run.stage_done("desires");

    std::vector<std::vector<Candidate>> menus;
    if (!opt.menu_path.empty()) {
        menus = menus_from_json(load_json_file(opt.menu_path));
    } else if (detect.report["inputs"].contains("menu")) {
        const Json menu_json = load_json_file(detect.report["inputs"]["menu"].get<std::string>());
        if (menu_json.contains("menus") && menu_json["menus"].size() > 1) {
            auto all = menus_from_json(menu_json);
            menus.assign(all.begin() + 1, all.end());
        }
    }

    UnravelConfig config;
    config.selection.dictionary_degree = opt.dict_degree;
    config.selection.ridge = opt.ridge;
    config.selection.sparsify_threshold = opt.sparsify;
    config.selection.n_perturbations = opt.n_perturbations;
    config.selection.perturbation_scale = opt.perturbation_scale;
    config.selection.seed = opt.common.seed;
    config.holdout_fraction = opt.holdout;
    config.calibration_fraction = opt.calibration_fraction;
    config.singular_tolerance = opt.singular_tolerance;
    if (opt.threshold >= 0.0) config.threshold_override = opt.threshold;
    const UnravelLevel tree =
        unravel_recursive(detect.traj, eps, menus, opt.depth, config);
    run.stage_done("unravel");

    write_signal_csv(run.artifact("eps.csv"), eps.concatenated(), "eps");
    write_signal_csv(run.artifact("pure.csv"), eps.pure_series, "u");
    write_signal_csv(run.artifact("desires.csv"), desires_concat, "v");
    save_json_file(run.artifact("desire_map.json"), json_desire_map(desire_map));
    save_json_file(run.artifact("unravel.json"), json_unravel(tree));
    save_json_file(run.artifact("best_candidate.json"), json_candidate(detect.best));

    Json desire_spec_json = Json::array();
    for (const auto& s : desire_specs) desire_spec_json.push_back(json_filtration(s));
    run.report["results"] = Json{{"recovery_residual", eps.recovery_residual},
                                 {"desire_fit_residual", desire_map.fit_residual},
                                 {"desire_specs", desire_spec_json},
                                 {"unravel", json_unravel(tree)}};
    run.plots = parse_plot_list(opt.common.plot_arg, {});
    run.finish();
    return 0;
}

// ----------------------------------------------------------------- sdcheck

struct SdcheckOptions {
    CommonOptions common;
    std::string run_dir;         // unravel run
    std::string add_agent_path;  // optional subsidiary term
};

struct UnravelArtifacts {
    Json report;
    Trajectory traj;
    Candidate best;
    DynamicsModel controlled_model;
    EpsilonRepresentation eps;
    std::vector<FiltrationSpec> desire_specs;
    DesireMap desire_map;
};

UnravelArtifacts load_unravel_run(const fs::path& run_dir) {
    UnravelArtifacts out;
    out.report = load_json_file(run_dir / "report.json");
    const fs::path detect_dir = out.report["inputs"]["detect_run"].get<std::string>();
    const Json detect_report = load_json_file(detect_dir / "report.json");
    out.traj = read_trajectory_csv(detect_report["inputs"]["traj"].get<std::string>());
    out.best = candidate_from_json(load_json_file(run_dir / "best_candidate.json"));
    out.controlled_model =
        expansion_from_json(load_json_file(detect_dir / "controlled_model.json").at("model"));

    const ControlSignal eps_concat =
        read_signal_csv(run_dir / "eps.csv", SignalRole::epsilon);
    const ControlSignal pure = read_signal_csv(run_dir / "pure.csv", SignalRole::pure);
    out.eps.coupling = out.best.coupling;
    out.eps.pure_series = pure;
    Eigen::Index at = 0;
    for (const auto& ch : out.best.coupling.channels) {
        out.eps.epsilon_series.emplace_back(
            eps_concat.grid, eps_concat.values.middleCols(at, ch.epsilon_dim),
            SignalRole::epsilon);
        at += ch.epsilon_dim;
    }
    out.eps.recovery_residual = out.report["results"]["recovery_residual"].get<double>();

    for (const auto& s : out.report["results"]["desire_specs"]) {
        out.desire_specs.push_back(filtration_from_json(s));
    }
    out.desire_map = desire_map_from_json(load_json_file(run_dir / "desire_map.json"));
    return out;
}

int cmd_sdcheck(const SdcheckOptions& opt) {
    if (opt.run_dir.empty()) throw BadConfig("sdcheck: --run is required");
    UnravelArtifacts unravel = load_unravel_run(opt.run_dir);

    RunContext run("sdcheck", opt.common.out);
    run.report["config"] = echo_common(opt.common);
    run.report["inputs"] = Json{{"unravel_run", fs::absolute(opt.run_dir).string()}};

    PictureModel s_picture;
    s_picture.dynamics = unravel.controlled_model;
    s_picture.couplings = unravel.best.coupling;
    s_picture.actor_roles = ActorRole::subjects;
    s_picture.hidden_parameter_map = unravel.desire_map;

    const SDTransformResult transform =
        sd_transform(s_picture, unravel.desire_specs, unravel.eps, unravel.traj);
    run.stage_done("sd_transform");

    SDPair pair;
    pair.s_picture = s_picture;
    pair.d_picture = transform.picture;
    const double residual = sd_consistency(pair, unravel.traj, unravel.traj.control_signal(),
                                           transform.realized_desires);
    run.stage_done("sd_consistency");

    run.report["results"] = Json{{"consistency_residual", residual},
                                 {"dynamics_fit_residual", transform.dynamics_fit_residual},
                                 {"hidden_map_fit_residual",
                                  transform.picture.hidden_parameter_map.fit_residual}};

    if (!opt.add_agent_path.empty()) {
        const DictionaryExpansion term =
            expansion_from_json(load_json_file(opt.add_agent_path));
        const PictureModel extended = add_agent(transform.picture, term);
        const double before = picture_replay_residual(transform.picture, unravel.traj,
                                                      unravel.eps.pure_series,
                                                      transform.pure_desires);
        const double after = picture_replay_residual(extended, unravel.traj,
                                                     unravel.eps.pure_series,
                                                     transform.pure_desires);
        run.report["results"]["add_agent"] =
            Json{{"replay_residual_before", before}, {"replay_residual_after", after}};
        save_json_file(run.artifact("d_picture_extended.json"), json_picture(extended));
        run.stage_done("add_agent");
    }

    save_json_file(run.artifact("sdpair.json"), json_sdpair(pair));
    write_signal_csv(run.artifact("pure_desires.csv"), transform.pure_desires, "v");
    write_signal_csv(run.artifact("realized_desires.csv"), transform.realized_desires, "v");

    // The D-picture's hidden parameters along the trajectory.
    Eigen::MatrixXd eps_tilde(static_cast<Eigen::Index>(unravel.traj.grid.n_nodes()),
                              transform.picture.couplings.total_epsilon_dim());
    for (std::size_t n = 0; n < unravel.traj.grid.n_nodes(); ++n) {
        eps_tilde.row(static_cast<Eigen::Index>(n)) =
            transform.picture.hidden_parameter_map
                .eval(unravel.traj.state_at(n), unravel.eps.pure_series.at(n))
                .transpose();
    }
    write_signal_csv(run.artifact("eps_tilde.csv"),
                     ControlSignal(unravel.traj.grid, eps_tilde, SignalRole::epsilon), "eps");

    run.plots = parse_plot_list(opt.common.plot_arg, {});
    run.finish();
    return 0;
}

// --------------------------------------------------------------- verbalize

struct VerbalizeOptions {
    CommonOptions common;
    std::string run_dir;  // sdcheck run
    std::string word_spec_path;
    std::string word_sources = "full";  // full | phi-only
    double penalty = 0.5;
    std::size_t min_len = 10;
    double ridge = 1e-8;
    double tolerance = 1e-6;
    double syn_tolerance = 1e-9;
};

int cmd_verbalize(const VerbalizeOptions& opt) {
    if (opt.run_dir.empty()) throw BadConfig("verbalize: --run is required");
    const Json sd_report = load_json_file(fs::path(opt.run_dir) / "report.json");
    UnravelArtifacts unravel =
        load_unravel_run(sd_report["inputs"]["unravel_run"].get<std::string>());
    const ControlSignal eps_tilde =
        read_signal_csv(fs::path(opt.run_dir) / "eps_tilde.csv", SignalRole::epsilon);
    const ControlSignal pure_desires =
        read_signal_csv(fs::path(opt.run_dir) / "pure_desires.csv", SignalRole::desire);

    RunContext run("verbalize", opt.common.out);
    run.report["config"] = echo_common(opt.common);
    run.report["config"]["penalty"] = opt.penalty;
    run.report["config"]["min_len"] = opt.min_len;
    run.report["config"]["word_sources"] = opt.word_sources;
    run.report["config"]["ridge"] = opt.ridge;
    run.report["config"]["tolerance"] = opt.tolerance;
    run.report["config"]["syn_tolerance"] = opt.syn_tolerance;
    run.report["inputs"] = Json{{"sdcheck_run", fs::absolute(opt.run_dir).string()}};

    const ControlSignal driver = unravel.eps.concatenated();
    const Partition partition =
        segment_trajectory(unravel.traj, driver, opt.penalty, opt.min_len);
    run.stage_done("segmentation");

    SegmentFunctionalSpec word_spec;
    if (!opt.word_spec_path.empty()) {
        word_spec = word_spec_from_json(load_json_file(opt.word_spec_path));
    } else if (opt.word_sources == "phi-only") {
        word_spec.recipes = {WordRecipe{WordRecipe::Kind::mean, SignalSource::states, {}}};
    } else if (opt.word_sources == "full") {
        word_spec.recipes = {WordRecipe{WordRecipe::Kind::mean, SignalSource::epsilon, {}},
                             WordRecipe{WordRecipe::Kind::mean, SignalSource::states, {}}};
    } else {
        throw BadConfig("verbalize: word_sources must be 'full' or 'phi-only'");
    }
    SegmentFunctionalSpec tactic_spec;
    tactic_spec.recipes = {WordRecipe{WordRecipe::Kind::mean, SignalSource::pure, {}}};

    SignalSet s_signals;
    s_signals.traj = &unravel.traj;
    ControlSignal eps_concat = driver;
    s_signals.epsilon = &eps_concat;
    s_signals.pure = &unravel.eps.pure_series;

    SignalSet d_signals;
    d_signals.traj = &unravel.traj;
    d_signals.epsilon = &eps_tilde;
    d_signals.pure = &pure_desires;

    WordSequence words_s = compute_words(word_spec, partition, s_signals);
    words_s.picture = PictureTag::S;
    WordSequence words_d = compute_words(word_spec, partition, d_signals);
    words_d.picture = PictureTag::D;
    const WordSequence tactics_s = compute_words(tactic_spec, partition, s_signals);
    const WordSequence tactics_d = compute_words(tactic_spec, partition, d_signals);
    run.stage_done("words");

    const Eigen::MatrixXd features = segment_state_features(unravel.traj, partition);
    const RecursionModel recursion_s =
        fit_recursion(words_s, tactics_s, features, opt.ridge, opt.tolerance);
    const RecursionModel recursion_d =
        fit_recursion(words_d, tactics_d, features, opt.ridge, opt.tolerance);
    const SynlinguismReport syn = check_synlinguism(words_s, words_d, opt.syn_tolerance);
    run.stage_done("recursion");

    save_json_file(run.artifact("partition.json"), json_partition(partition));
    write_words_csv(run.artifact("words_s.csv"), words_s, partition, unravel.traj.grid);
    write_words_csv(run.artifact("words_d.csv"), words_d, partition, unravel.traj.grid);
    save_json_file(run.artifact("recursion_s.json"), json_recursion(recursion_s));
    save_json_file(run.artifact("recursion_d.json"), json_recursion(recursion_d));

    Json syn_json{{"synlinguism", syn.synlinguistic},
                  {"per_segment_deviation", json_vector(syn.per_segment_deviation)}};
    if (syn.first_mismatch) syn_json["first_mismatch"] = *syn.first_mismatch;
    run.report["results"] = Json{{"n_segments", partition.n_segments()},
                                 {"breakpoints", partition.breakpoints},
                                 {"verbalizable_s", recursion_s.verbalizable},
                                 {"verbalizable_d", recursion_d.verbalizable},
                                 {"synlinguism", syn_json}};

    std::vector<double> seg_index;
    for (std::size_t i = 0; i < partition.n_segments(); ++i) {
        seg_index.push_back(static_cast<double>(i));
    }
    run.offer_plot("per_segment_deviation", seg_index,
                   std::vector<double>(syn.per_segment_deviation.data(),
                                       syn.per_segment_deviation.data() +
                                           syn.per_segment_deviation.size()));
    run.plots = parse_plot_list(opt.common.plot_arg, {"per_segment_deviation"});
    run.finish();
    return 0;
}

// ---------------------------------------------------------------- quantize

struct QuantizeOptions {
    CommonOptions common;
    std::string run_dir;          // unravel run (for epsilon inputs)
    std::string hamiltonian_path; // explicit spec instead
    std::string basis_path;
    std::string initial;          // comma-separated occupations
    int modes = 1;
    int cutoff = 2;
    int slow_steps = 5;
    double slow_dt = 0.1;
    std::size_t window = 50;
    double tolerance = 1e-12;
};

int cmd_quantize(const QuantizeOptions& opt) {
    if (opt.run_dir.empty() && opt.hamiltonian_path.empty()) {
        throw BadConfig("quantize: need either an unravel run or an explicit hamiltonian");
    }

    std::optional<HamiltonianSpec> explicit_spec;
    if (!opt.hamiltonian_path.empty()) {
        explicit_spec = hamiltonian_spec_from_json(load_json_file(opt.hamiltonian_path));
        if (opt.cutoff == 0 && explicit_spec->has_vertex()) {
            throw BadConfig("quantize: cutoff 0 cannot host vertex terms");
        }
    }

    FilterBasis basis;
    std::optional<Trajectory> traj;
    std::optional<EpsilonRepresentation> eps;
    int modes = opt.modes;
    if (explicit_spec) {
        modes = explicit_spec->modes();
    } else {
        UnravelArtifacts unravel = load_unravel_run(opt.run_dir);
        traj = std::move(unravel.traj);
        eps = std::move(unravel.eps);
        if (!opt.basis_path.empty()) {
            basis = filter_basis_from_json(load_json_file(opt.basis_path));
        } else {
            for (int j = 0; j < opt.modes; ++j) {
                FiltrationSpec spec;
                spec.input = SignalSource::epsilon;
                spec.pipeline = {FilterPrimitive::moving_average(1 << j)};
                basis.specs.push_back(std::move(spec));
            }
        }
        modes = static_cast<int>(basis.mode_count());
    }

    const FockSpace space(modes, opt.cutoff);

    RunContext run("quantize", opt.common.out);
    run.report["config"] = echo_common(opt.common);
    run.report["config"]["modes"] = modes;
    run.report["config"]["cutoff"] = opt.cutoff;
    run.report["config"]["slow_steps"] = opt.slow_steps;
    run.report["config"]["slow_dt"] = opt.slow_dt;
    run.report["config"]["window"] = opt.window;
    run.report["config"]["tolerance"] = opt.tolerance;
    if (!opt.run_dir.empty()) {
        run.report["inputs"]["unravel_run"] = fs::absolute(opt.run_dir).string();
    }
    if (!opt.hamiltonian_path.empty()) {
        run.report["inputs"]["hamiltonian"] = fs::absolute(opt.hamiltonian_path).string();
    }

    QuantumState psi = [&] {
        if (opt.initial.empty()) return QuantumState::vacuum(space);
        std::vector<int> occ;
        std::istringstream stream(opt.initial);
        std::string item;
        while (std::getline(stream, item, ',')) occ.push_back(std::stoi(item));
        return QuantumState::basis_state(space, occ);
    }();

    auto snapshot_name = [](int step) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "states/step_%03d.csv", step);
        return std::string(buf);
    };
    write_state_csv(run.artifact(snapshot_name(0)), psi, space);

    std::vector<double> norms{psi.norm()};
    std::vector<double> occupations{total_occupation_expectation(psi, space)};
    for (int step = 0; step < opt.slow_steps; ++step) {
        HamiltonianSpec spec;
        if (explicit_spec) {
            spec = *explicit_spec;
        } else {
            const std::size_t n_nodes = traj->grid.n_nodes();
            std::size_t end_node =
                (static_cast<std::size_t>(step) + 1) * (n_nodes - 1) /
                static_cast<std::size_t>(opt.slow_steps);
            end_node = std::max(end_node, opt.window - 1);
            end_node = std::min(end_node, n_nodes - 1);
            Trajectory prefix(TimeGrid(traj->grid.t0, traj->grid.dt, end_node),
                              traj->states.topRows(static_cast<Eigen::Index>(end_node + 1)));
            EpsilonRepresentation eps_prefix;
            eps_prefix.coupling = eps->coupling;
            eps_prefix.pure_series =
                ControlSignal(prefix.grid,
                              eps->pure_series.values.topRows(static_cast<Eigen::Index>(end_node + 1)),
                              SignalRole::pure);
            for (const auto& series : eps->epsilon_series) {
                eps_prefix.epsilon_series.emplace_back(
                    prefix.grid, series.values.topRows(static_cast<Eigen::Index>(end_node + 1)),
                    SignalRole::epsilon);
            }
            spec = quick_time_coefficients(basis, eps_prefix, prefix, opt.window);
        }
        const QuantumOperator H = build_hamiltonian(spec, space);
        psi = evolve_slow(psi, H, opt.slow_dt, opt.tolerance);
        write_state_csv(run.artifact(snapshot_name(step + 1)), psi, space);
        norms.push_back(psi.norm());
        occupations.push_back(total_occupation_expectation(psi, space));
    }
    run.stage_done("evolution");

    run.report["results"] = Json{{"norm_trace", norms},
                                 {"occupation_trace", occupations},
                                 {"dimension", space.dimension()}};
    std::vector<double> steps;
    for (std::size_t i = 0; i < norms.size(); ++i) steps.push_back(static_cast<double>(i));
    run.offer_plot("norm_trace", steps, norms);
    run.offer_plot("occupation_expectation", steps, occupations);
    run.plots = parse_plot_list(opt.common.plot_arg, {"norm_trace", "occupation_expectation"});
    run.finish();
    return 0;
}

}  // namespace

void validate_report(const Json& report, const std::filesystem::path& run_dir) {
    for (const char* key : {"schema", "command", "config", "inputs", "results", "manifest",
                            "timings_ms"}) {
        if (!report.contains(key)) {
            throw Error(std::string("report is missing required key: ") + key);
        }
    }
    if (report["schema"].get<std::string>() != "igame-report-v1") {
        throw Error("report has an unexpected schema tag");
    }
    for (const auto& entry : report["manifest"]) {
        const fs::path path = run_dir / entry.get<std::string>();
        if (!fs::exists(path)) {
            throw Error("manifest entry does not exist: " + path.string());
        }
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<std::string> argv_storage = args;
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>("igame"));
    for (auto& a : argv_storage) argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, char** argv) {
    CLI::App app{"interactive-game detection and analysis workbench"};
    app.require_subcommand(1);

    SimulateOptions simulate;
    auto* sim_cmd = app.add_subcommand("simulate", "generate a scenario fixture");
    ConfigOverlay sim_overlay(sim_cmd);
    add_common(sim_cmd, &simulate.common, &sim_overlay);
    auto* sim_scn = sim_cmd->add_option("--scenario", simulate.scenario,
                                        "builtin scenario name or scenario JSON path");
    auto* sim_menu = sim_cmd->add_flag("--emit-menu", simulate.emit_menu,
                                       "write the generating candidate menu");
    sim_overlay.bind("scenario", sim_scn, &simulate.scenario);
    sim_overlay.bind("emit_menu", sim_menu, &simulate.emit_menu);

    DetectOptions detect;
    auto* det_cmd = app.add_subcommand("detect", "autonomous fit, verdict, candidate selection");
    ConfigOverlay det_overlay(det_cmd);
    add_common(det_cmd, &detect.common, &det_overlay);
    det_overlay.bind("traj", det_cmd->add_option("--traj", detect.traj_path),
                     &detect.traj_path);
    det_overlay.bind("menu", det_cmd->add_option("--menu", detect.menu_path),
                     &detect.menu_path);
    det_overlay.bind("dict_degree", det_cmd->add_option("--dict-degree", detect.dict_degree),
                     &detect.dict_degree);
    det_overlay.bind("ridge", det_cmd->add_option("--ridge", detect.ridge), &detect.ridge);
    det_overlay.bind("sparsify", det_cmd->add_option("--sparsify", detect.sparsify),
                     &detect.sparsify);
    det_overlay.bind("holdout", det_cmd->add_option("--holdout", detect.holdout), &detect.holdout);
    det_overlay.bind("calibration_fraction",
                     det_cmd->add_option("--calibration-fraction", detect.calibration_fraction),
                     &detect.calibration_fraction);
    det_overlay.bind("threshold", det_cmd->add_option("--threshold", detect.threshold),
                     &detect.threshold);
    det_overlay.bind("n_perturbations",
                     det_cmd->add_option("--n-perturbations", detect.n_perturbations),
                     &detect.n_perturbations);
    det_overlay.bind("perturbation_scale",
                     det_cmd->add_option("--perturbation-scale", detect.perturbation_scale),
                     &detect.perturbation_scale);

    UnravelOptions unravel;
    auto* unr_cmd = app.add_subcommand("unravel", "epsilon recovery, desires, recursion");
    ConfigOverlay unr_overlay(unr_cmd);
    add_common(unr_cmd, &unravel.common, &unr_overlay);
    unr_overlay.bind("run", unr_cmd->add_option("--run", unravel.run_dir),
                     &unravel.run_dir);
    unr_overlay.bind("menu", unr_cmd->add_option("--menu", unravel.menu_path), &unravel.menu_path);
    unr_overlay.bind("desires", unr_cmd->add_option("--desires", unravel.desires_path),
                     &unravel.desires_path);
    unr_overlay.bind("depth", unr_cmd->add_option("--depth", unravel.depth), &unravel.depth);
    unr_overlay.bind("desire_degree", unr_cmd->add_option("--desire-degree", unravel.desire_degree),
                     &unravel.desire_degree);
    unr_overlay.bind("dict_degree", unr_cmd->add_option("--dict-degree", unravel.dict_degree),
                     &unravel.dict_degree);
    unr_overlay.bind("ridge", unr_cmd->add_option("--ridge", unravel.ridge), &unravel.ridge);
    unr_overlay.bind("sparsify", unr_cmd->add_option("--sparsify", unravel.sparsify),
                     &unravel.sparsify);
    unr_overlay.bind("holdout", unr_cmd->add_option("--holdout", unravel.holdout),
                     &unravel.holdout);
    unr_overlay.bind("calibration_fraction",
                     unr_cmd->add_option("--calibration-fraction", unravel.calibration_fraction),
                     &unravel.calibration_fraction);
    unr_overlay.bind("singular_tolerance",
                     unr_cmd->add_option("--singular-tolerance", unravel.singular_tolerance),
                     &unravel.singular_tolerance);
    unr_overlay.bind("threshold", unr_cmd->add_option("--threshold", unravel.threshold),
                     &unravel.threshold);
    unr_overlay.bind("n_perturbations",
                     unr_cmd->add_option("--n-perturbations", unravel.n_perturbations),
                     &unravel.n_perturbations);
    unr_overlay.bind("perturbation_scale",
                     unr_cmd->add_option("--perturbation-scale", unravel.perturbation_scale),
                     &unravel.perturbation_scale);

    SdcheckOptions sdcheck;
    auto* sd_cmd = app.add_subcommand("sdcheck", "SD-transform and consistency");
    ConfigOverlay sd_overlay(sd_cmd);
    add_common(sd_cmd, &sdcheck.common, &sd_overlay);
    sd_overlay.bind("run", sd_cmd->add_option("--run", sdcheck.run_dir),
                    &sdcheck.run_dir);
    sd_overlay.bind("add_agent", sd_cmd->add_option("--add-agent", sdcheck.add_agent_path),
                    &sdcheck.add_agent_path);

    VerbalizeOptions verbalize;
    auto* ver_cmd = app.add_subcommand("verbalize", "partition, words, synlinguism");
    ConfigOverlay ver_overlay(ver_cmd);
    add_common(ver_cmd, &verbalize.common, &ver_overlay);
    ver_overlay.bind("run", ver_cmd->add_option("--run", verbalize.run_dir),
                     &verbalize.run_dir);
    ver_overlay.bind("word_spec", ver_cmd->add_option("--word-spec", verbalize.word_spec_path),
                     &verbalize.word_spec_path);
    ver_overlay.bind("word_sources", ver_cmd->add_option("--word-sources", verbalize.word_sources),
                     &verbalize.word_sources);
    ver_overlay.bind("penalty", ver_cmd->add_option("--penalty", verbalize.penalty),
                     &verbalize.penalty);
    ver_overlay.bind("min_len", ver_cmd->add_option("--min-len", verbalize.min_len),
                     &verbalize.min_len);
    ver_overlay.bind("ridge", ver_cmd->add_option("--ridge", verbalize.ridge), &verbalize.ridge);
    ver_overlay.bind("tolerance", ver_cmd->add_option("--tolerance", verbalize.tolerance),
                     &verbalize.tolerance);
    ver_overlay.bind("syn_tolerance", ver_cmd->add_option("--syn-tolerance", verbalize.syn_tolerance),
                     &verbalize.syn_tolerance);

    QuantizeOptions quantize;
    auto* qnt_cmd = app.add_subcommand("quantize", "quick-time coefficients, slow evolution");
    ConfigOverlay qnt_overlay(qnt_cmd);
    add_common(qnt_cmd, &quantize.common, &qnt_overlay);
    qnt_overlay.bind("run", qnt_cmd->add_option("--run", quantize.run_dir), &quantize.run_dir);
    qnt_overlay.bind("hamiltonian",
                     qnt_cmd->add_option("--hamiltonian", quantize.hamiltonian_path),
                     &quantize.hamiltonian_path);
    qnt_overlay.bind("basis", qnt_cmd->add_option("--basis", quantize.basis_path),
                     &quantize.basis_path);
    qnt_overlay.bind("initial", qnt_cmd->add_option("--initial", quantize.initial),
                     &quantize.initial);
    qnt_overlay.bind("modes", qnt_cmd->add_option("--modes", quantize.modes), &quantize.modes);
    qnt_overlay.bind("cutoff", qnt_cmd->add_option("--cutoff", quantize.cutoff), &quantize.cutoff);
    qnt_overlay.bind("slow_steps", qnt_cmd->add_option("--slow-steps", quantize.slow_steps),
                     &quantize.slow_steps);
    qnt_overlay.bind("slow_dt", qnt_cmd->add_option("--slow-dt", quantize.slow_dt),
                     &quantize.slow_dt);
    qnt_overlay.bind("window", qnt_cmd->add_option("--window", quantize.window), &quantize.window);
    qnt_overlay.bind("tolerance", qnt_cmd->add_option("--tolerance", quantize.tolerance),
                     &quantize.tolerance);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help() << std::endl;
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "igame: " << e.what() << std::endl;
        return 2;
    }

    try {
        if (sim_cmd->parsed()) {
            sim_overlay.apply(maybe_config(simulate.common), "simulate config");
            return cmd_simulate(simulate);
        }
        if (det_cmd->parsed()) {
            det_overlay.apply(maybe_config(detect.common), "detect config");
            return cmd_detect(detect);
        }
        if (unr_cmd->parsed()) {
            unr_overlay.apply(maybe_config(unravel.common), "unravel config");
            return cmd_unravel(unravel);
        }
        if (sd_cmd->parsed()) {
            sd_overlay.apply(maybe_config(sdcheck.common), "sdcheck config");
            return cmd_sdcheck(sdcheck);
        }
        if (ver_cmd->parsed()) {
            ver_overlay.apply(maybe_config(verbalize.common), "verbalize config");
            return cmd_verbalize(verbalize);
        }
        if (qnt_cmd->parsed()) {
            qnt_overlay.apply(maybe_config(quantize.common), "quantize config");
            return cmd_quantize(quantize);
        }
        std::cerr << "igame: no command given" << std::endl;
        return 2;
    } catch (const BadConfig& e) {
        std::cerr << "igame: " << e.what() << std::endl;
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "igame: " << e.what() << std::endl;
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "igame: " << e.what() << std::endl;
        return 2;
    } catch (const Error& e) {
        std::cerr << "igame: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "igame: " << e.what() << std::endl;
        return 1;
    }
}

}  // namespace igame::cli
