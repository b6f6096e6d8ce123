#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "brlsim/generator.hpp"

namespace brlsim {

namespace exit_codes {
inline constexpr int kOk = 0;
inline constexpr int kConfig = 2;    // config or input file rejected at parse time
inline constexpr int kDomain = 3;    // domain violations (bad prices, p0 outside the box)
inline constexpr int kSolver = 4;    // solver or oracle failed to converge
inline constexpr int kProperty = 5;  // a checked property failed (oracle disagreement, expansion)
}  // namespace exit_codes

struct ScheduleConfig {
    std::string kind = "full";  // full | round_robin | random
    std::uint64_t seed = 0;
    std::size_t window = 0;
};

struct BeliefConfig {
    std::string kind = "level";  // level | file | random
    int k = 1;
    std::string path;
    int max_depth = 8;
    std::uint64_t seed = 0;
};

struct UpdateSpec {
    std::string label;
    std::string kind;  // level | random_tree | file
    int k = 1;
    int max_depth = 4;
    std::uint64_t seed = 0;
    std::string path;
};

/// One config file per invocation; configs are archivable artifacts. Every
/// seed is explicit, and rho is validated at parse time.
struct ExperimentConfig {
    std::string config_hash;       // hash of the canonical config dump
    nlohmann::ordered_json seeds;  // every explicit seed, echoed into output headers

    std::optional<std::string> market_file;
    std::optional<MarketGenSpec> market_generate;

    std::string mode = "sync";
    std::size_t steps = 0;
    bool has_dynamics = false;
    ScheduleConfig schedule;
    std::optional<std::vector<double>> p0;  // absent: box midpoint
    BeliefConfig beliefs;

    double equilibrium_tol = 1e-10;
    double oracle_agreement_tol = 1e-6;
    double tatonnement_step = 0.1;
    double tatonnement_tol = 1e-9;

    std::size_t contraction_pairs = 500;
    std::uint64_t contraction_seed = 0;
    bool has_contraction = false;
    std::vector<UpdateSpec> updates;

    std::string out_trajectory;
    std::string out_report;
    std::string out_market;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

int cmd_equilibrium(const ExperimentConfig& config, std::ostream& log);
int cmd_simulate(const ExperimentConfig& config, std::ostream& log);
int cmd_contraction(const ExperimentConfig& config, std::ostream& log);
int cmd_generate(const ExperimentConfig& config, std::ostream& log);

/// Loads the config, applies the output override to the command's primary
/// output path, runs the command, and maps exceptions to exit codes.
int dispatch(const std::string& command, const std::string& config_path,
             const std::string& output_override, bool verbose, std::ostream& log,
             std::ostream& err);

}  // namespace brlsim
