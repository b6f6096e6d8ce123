#include "brlsim/commands.hpp"

#include <memory>
#include <ostream>
#include <sstream>
#include <utility>

#include "brlsim/analysis.hpp"
#include "brlsim/best_response.hpp"
#include "brlsim/errors.hpp"
#include "brlsim/io.hpp"

namespace brlsim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint64_t require_seed(const json& section, const std::string& context) {
    if (!section.contains("seed")) {
        throw ConfigError(context + " requires an explicit 'seed' (no entropy from the "
                                    "environment)");
    }
    return section.at("seed").get<std::uint64_t>();
}

MarketGenSpec parse_generator(const json& section) {
    MarketGenSpec spec;
    spec.num_goods = section.at("num_goods").get<std::size_t>();
    spec.num_buyers = section.at("num_buyers").get<std::size_t>();
    const double rho = section.at("rho").get<double>();
    if (!(rho > 0.0 && rho < 1.0)) {
        std::string msg = "generator field 'rho' must lie strictly in (0,1)";
        if (rho <= 0.0) {
            msg += "; complementary goods are outside the weak-gross-substitutes scope";
        }
        throw ConfigError(msg);
    }
    spec.rho = rho;
    spec.seed = require_seed(section, "market generator");
    if (section.contains("budget_range")) {
        const auto range = section.at("budget_range").get<std::vector<double>>();
        if (range.size() != 2) throw ConfigError("budget_range must be [min, max]");
        spec.budget_min = range[0];
        spec.budget_max = range[1];
    }
    if (section.contains("coeff_range")) {
        const auto range = section.at("coeff_range").get<std::vector<double>>();
        if (range.size() != 2) throw ConfigError("coeff_range must be [min, max]");
        spec.coeff_min = range[0];
        spec.coeff_max = range[1];
    }
    if (section.contains("sparsity")) spec.sparsity = section.at("sparsity").get<double>();
    return spec;
}

Market obtain_market(const ExperimentConfig& config) {
    if (config.market_file) return load_market(*config.market_file);
    if (config.market_generate) return generate_market(*config.market_generate);
    throw ConfigError("config needs a 'market' section with 'file' or 'generate'");
}

std::unique_ptr<Schedule> make_schedule(const ScheduleConfig& config, std::size_t n) {
    if (config.kind == "full") return std::make_unique<FullSchedule>(n);
    if (config.kind == "round_robin") return std::make_unique<RoundRobinSchedule>(n);
    if (config.kind == "random") {
        return std::make_unique<RandomSubsetSchedule>(n, config.seed, config.window);
    }
    throw ConfigError("unknown schedule kind '" + config.kind + "'");
}

std::unique_ptr<ProfileSource> make_profile_source(const BeliefConfig& config, std::size_t n) {
    if (config.kind == "level") {
        return std::make_unique<FixedProfileSource>(BeliefProfile::level_k(n, config.k));
    }
    if (config.kind == "file") {
        return std::make_unique<FixedProfileSource>(
            profile_from_json(load_json_file(config.path), n, config.max_depth));
    }
    if (config.kind == "random") {
        return std::make_unique<RandomProfileSource>(n, config.max_depth, config.seed);
    }
    throw ConfigError("unknown belief kind '" + config.kind + "'");
}

ordered_json equilibrium_to_json(const EquilibriumResult& result) {
    ordered_json doc;
    doc["method"] = result.method;
    doc["p_star"] = result.prices.values();
    doc["clearing_residual"] = result.clearing_residual;
    doc["iterations"] = result.iterations;
    return doc;
}

ordered_json base_report(const ExperimentConfig& config) {
    ordered_json doc;
    doc["config_hash"] = config.config_hash;
    doc["seeds"] = config.seeds;
    return doc;
}

std::vector<std::string> csv_header(const ExperimentConfig& config) {
    return {"config_hash=" + config.config_hash, "seeds=" + config.seeds.dump()};
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
    try {
        ExperimentConfig config;
        config.config_hash = hex64(fnv1a64(doc.dump()));
        config.seeds = ordered_json::object();

        if (doc.contains("market")) {
            const auto& market = doc.at("market");
            if (market.contains("file")) {
                config.market_file = market.at("file").get<std::string>();
            } else if (market.contains("generate")) {
                config.market_generate = parse_generator(market.at("generate"));
                config.seeds["market"] = config.market_generate->seed;
            } else {
                throw ConfigError("'market' needs either 'file' or 'generate'");
            }
        }

        if (doc.contains("tolerances")) {
            const auto& tol = doc.at("tolerances");
            if (tol.contains("equilibrium")) {
                config.equilibrium_tol = tol.at("equilibrium").get<double>();
            }
            if (tol.contains("oracle_agreement")) {
                config.oracle_agreement_tol = tol.at("oracle_agreement").get<double>();
            }
            if (tol.contains("tatonnement_step")) {
                config.tatonnement_step = tol.at("tatonnement_step").get<double>();
            }
            if (tol.contains("tatonnement_tol")) {
                config.tatonnement_tol = tol.at("tatonnement_tol").get<double>();
            }
        }

        if (doc.contains("dynamics")) {
            config.has_dynamics = true;
            const auto& dynamics = doc.at("dynamics");
            config.mode = dynamics.value("mode", std::string("sync"));
            if (config.mode != "sync" && config.mode != "async") {
                throw ConfigError("dynamics mode must be 'sync' or 'async'");
            }
            config.steps = dynamics.at("steps").get<std::size_t>();
            if (dynamics.contains("schedule")) {
                const auto& schedule = dynamics.at("schedule");
                config.schedule.kind = schedule.value("kind", std::string("full"));
                if (config.schedule.kind == "random") {
                    config.schedule.seed = require_seed(schedule, "random schedule");
                    config.schedule.window = schedule.at("window").get<std::size_t>();
                    config.seeds["schedule"] = config.schedule.seed;
                }
            }
            if (dynamics.contains("p0") && !dynamics.at("p0").is_string()) {
                config.p0 = dynamics.at("p0").get<std::vector<double>>();
            } else if (dynamics.contains("p0") &&
                       dynamics.at("p0").get<std::string>() != "midpoint") {
                throw ConfigError("dynamics p0 must be 'midpoint' or an array of prices");
            }
        }

        if (doc.contains("beliefs")) {
            const auto& beliefs = doc.at("beliefs");
            config.beliefs.kind = beliefs.value("kind", std::string("level"));
            if (config.beliefs.kind == "level") {
                config.beliefs.k = beliefs.at("k").get<int>();
            } else if (config.beliefs.kind == "file") {
                config.beliefs.path = beliefs.at("path").get<std::string>();
                config.beliefs.max_depth =
                    beliefs.value("max_depth", BeliefProfile::kDefaultMaxDepth);
            } else if (config.beliefs.kind == "random") {
                config.beliefs.max_depth = beliefs.at("max_depth").get<int>();
                config.beliefs.seed = require_seed(beliefs, "random beliefs");
                config.seeds["beliefs"] = config.beliefs.seed;
            } else {
                throw ConfigError("belief kind must be 'level', 'file', or 'random'");
            }
        }

        if (doc.contains("contraction")) {
            config.has_contraction = true;
            const auto& contraction = doc.at("contraction");
            config.contraction_pairs = contraction.at("pairs").get<std::size_t>();
            if (config.contraction_pairs < 1) {
                throw ConfigError("contraction needs at least one sample pair");
            }
            config.contraction_seed = require_seed(contraction, "contraction sampling");
            config.seeds["contraction"] = config.contraction_seed;
            for (const auto& update : contraction.value("updates", json::array())) {
                UpdateSpec spec;
                spec.kind = update.at("kind").get<std::string>();
                if (spec.kind == "level") {
                    spec.k = update.at("k").get<int>();
                    spec.label = "level-" + std::to_string(spec.k);
                } else if (spec.kind == "random_tree") {
                    spec.max_depth = update.at("max_depth").get<int>();
                    spec.seed = require_seed(update, "random_tree update");
                    spec.label = "random-depth" + std::to_string(spec.max_depth) + "-seed" +
                                 std::to_string(spec.seed);
                } else if (spec.kind == "file") {
                    spec.path = update.at("path").get<std::string>();
                    spec.label = "file:" + spec.path;
                } else {
                    throw ConfigError("contraction update kind must be 'level', "
                                      "'random_tree', or 'file'");
                }
                if (update.contains("label")) spec.label = update.at("label").get<std::string>();
                config.updates.push_back(std::move(spec));
            }
        }

        if (doc.contains("output")) {
            const auto& output = doc.at("output");
            config.out_trajectory = output.value("trajectory", std::string());
            config.out_report = output.value("report", std::string());
            config.out_market = output.value("market", std::string());
        }
        return config;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    return parse_config(load_json_file(path));
}

int cmd_equilibrium(const ExperimentConfig& config, std::ostream& log) {
    const Market market = obtain_market(config);

    const EquilibriumResult fixed_point = solve_equilibrium(market, config.equilibrium_tol);
    const EquilibriumResult oracle = tatonnement_oracle(market, config.tatonnement_step,
                                                        config.tatonnement_tol);
    const double agreement = thompson(fixed_point.prices, oracle.prices);
    const bool residual_ok = fixed_point.clearing_residual <= config.equilibrium_tol;
    const bool oracles_agree = agreement <= config.oracle_agreement_tol;

    ordered_json report = base_report(config);
    report["market_hash"] = market_hash(market);
    report["fixed_point"] = equilibrium_to_json(fixed_point);
    report["tatonnement"] = equilibrium_to_json(oracle);
    report["agreement_distance"] = agreement;
    report["tolerances"] = {{"equilibrium", config.equilibrium_tol},
                            {"oracle_agreement", config.oracle_agreement_tol}};
    report["passed"] = residual_ok && oracles_agree;
    if (!config.out_report.empty()) {
        write_text_file(config.out_report, report.dump(2) + "\n");
    }

    log << "equilibrium: residual=" << fixed_point.clearing_residual
        << " agreement=" << agreement << (report["passed"].get<bool>() ? " ok" : " FAILED")
        << "\n";
    return report["passed"].get<bool>() ? exit_codes::kOk : exit_codes::kProperty;
}

int cmd_simulate(const ExperimentConfig& config, std::ostream& log) {
    if (!config.has_dynamics) {
        throw ConfigError("simulate requires a 'dynamics' section");
    }
    const Market market = obtain_market(config);
    const std::size_t n = market.num_goods();

    const RunMode mode = config.mode == "sync" ? RunMode::kSync : RunMode::kAsync;
    std::unique_ptr<Schedule> schedule;
    if (mode == RunMode::kAsync) schedule = make_schedule(config.schedule, n);
    std::unique_ptr<ProfileSource> source = make_profile_source(config.beliefs, n);

    const PriceVector p0 =
        config.p0 ? PriceVector(*config.p0) : price_bounds(market).midpoint(n);

    Trajectory trajectory = run(market, mode, schedule.get(), *source, p0, config.steps);

    const EquilibriumResult reference = solve_equilibrium(market, config.equilibrium_tol);
    annotate_trajectory(market, trajectory, reference.prices);

    const DecayUnit unit = mode == RunMode::kSync ? DecayUnit::kSteps : DecayUnit::kEpochs;
    ordered_json fit_doc;
    try {
        const DecayFit fit = fit_decay(trajectory, reference.prices, unit);
        fit_doc["rate"] = fit.rate;
        fit_doc["residual"] = fit.residual;
        fit_doc["points_used"] = fit.points_used;
        fit_doc["unit"] = mode == RunMode::kSync ? "steps" : "epochs";
        log << "simulate: steps=" << config.steps << " decay_rate=" << fit.rate << "\n";
    } catch (const InsufficientDataError&) {
        fit_doc = nullptr;  // trajectory at or below the noise floor throughout
        log << "simulate: steps=" << config.steps << " decay_rate=n/a\n";
    }

    if (!config.out_trajectory.empty()) {
        std::ostringstream csv;
        write_trajectory_csv(csv, trajectory, csv_header(config));
        write_text_file(config.out_trajectory, csv.str());
    }
    if (!config.out_report.empty()) {
        ordered_json report = base_report(config);
        report["market_hash"] = market_hash(market);
        report["mode"] = config.mode;
        report["steps"] = config.steps;
        report["final_distance"] =
            trajectory.points.back().distance_to_reference.value_or(0.0);
        report["epochs_completed"] = trajectory.epoch_ends.size();
        report["decay_fit"] = fit_doc;
        report["reference"] = equilibrium_to_json(reference);
        write_text_file(config.out_report, report.dump(2) + "\n");
    }
    return exit_codes::kOk;
}

int cmd_contraction(const ExperimentConfig& config, std::ostream& log) {
    if (!config.has_contraction) {
        throw ConfigError("contraction requires a 'contraction' section");
    }
    const Market market = obtain_market(config);
    const std::size_t n = market.num_goods();

    struct Entry {
        std::string label;
        PriceUpdate update;
        bool belief_based;
    };
    std::vector<Entry> entries;
    entries.push_back({"identity", [](const PriceVector& p) { return p; }, false});
    entries.push_back({"best_response",
                       [&market](const PriceVector& p) { return best_response_all(market, p); },
                       false});
    for (const auto& spec : config.updates) {
        BeliefProfile profile = BeliefProfile::stay_put(n);
        if (spec.kind == "level") {
            profile = BeliefProfile::level_k(n, spec.k);
        } else if (spec.kind == "random_tree") {
            profile = RandomProfileSource(n, spec.max_depth, spec.seed).next();
        } else {
            profile = profile_from_json(load_json_file(spec.path), n, spec.max_depth);
        }
        entries.push_back({spec.label,
                           [&market, profile](const PriceVector& p) {
                               return brl_update(market, profile, p);
                           },
                           true});
    }

    double br_ratio = 0.0;
    bool contraction_ok = true;
    ordered_json estimates = ordered_json::array();
    for (const auto& entry : entries) {
        const ContractionEstimate estimate = estimate_contraction(
            market, entry.update, config.contraction_pairs, config.contraction_seed);
        ordered_json doc;
        doc["label"] = entry.label;
        doc["ratio_max"] = estimate.ratio_max;
        doc["sample_count"] = estimate.sample_count;
        estimates.push_back(doc);
        log << "contraction: " << entry.label << " ratio_max=" << estimate.ratio_max << "\n";

        if (entry.label == "best_response") {
            br_ratio = estimate.ratio_max;
            if (br_ratio >= 1.0) contraction_ok = false;
        } else if (entry.belief_based && estimate.ratio_max > br_ratio + 0.02) {
            contraction_ok = false;
        }
    }

    ordered_json report = base_report(config);
    report["market_hash"] = market_hash(market);
    report["pairs"] = config.contraction_pairs;
    report["pair_seed"] = config.contraction_seed;
    report["estimates"] = estimates;
    report["passed"] = contraction_ok;
    if (!config.out_report.empty()) {
        write_text_file(config.out_report, report.dump(2) + "\n");
    }
    return contraction_ok ? exit_codes::kOk : exit_codes::kProperty;
}

int cmd_generate(const ExperimentConfig& config, std::ostream& log) {
    if (!config.market_generate) {
        throw ConfigError("generate requires 'market.generate'");
    }
    if (config.out_market.empty()) {
        throw ConfigError("generate requires 'output.market'");
    }
    const Market market = generate_market(*config.market_generate);
    ordered_json meta;
    meta["config_hash"] = config.config_hash;
    meta["seeds"] = config.seeds;
    save_market(config.out_market, market, meta);
    log << "generate: wrote " << config.out_market << " (" << market.num_goods() << " goods, "
        << market.num_buyers() << " buyers)\n";
    return exit_codes::kOk;
}

int dispatch(const std::string& command, const std::string& config_path,
             const std::string& output_override, bool verbose, std::ostream& log,
             std::ostream& err) {
    try {
        ExperimentConfig config = load_config(config_path);
        if (verbose) {
            log << "config " << config_path << " hash=" << config.config_hash << "\n";
        }
        if (!output_override.empty()) {
            if (command == "simulate") {
                config.out_trajectory = output_override;
            } else if (command == "generate") {
                config.out_market = output_override;
            } else {
                config.out_report = output_override;
            }
        }
        if (command == "equilibrium") return cmd_equilibrium(config, log);
        if (command == "simulate") return cmd_simulate(config, log);
        if (command == "contraction") return cmd_contraction(config, log);
        if (command == "generate") return cmd_generate(config, log);
        err << "unknown command: " << command << "\n";
        return exit_codes::kConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_codes::kConfig;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << "\n";
        return exit_codes::kSolver;
    } catch (const OracleError& e) {
        err << "oracle error: " << e.what() << "\n";
        return exit_codes::kSolver;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return exit_codes::kDomain;
    } catch (const IndexError& e) {
        err << "domain error: " << e.what() << "\n";
        return exit_codes::kDomain;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_codes::kDomain;
    }
}

}  // namespace brlsim
