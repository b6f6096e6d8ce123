// Acceptance suite: runs every engine-level guarantee at desk scale and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "brlsim/analysis.hpp"
#include "brlsim/beliefs.hpp"
#include "brlsim/best_response.hpp"
#include "brlsim/commands.hpp"
#include "brlsim/dynamics.hpp"
#include "brlsim/io.hpp"
#include "brlsim/market.hpp"
#include "support.hpp"

using namespace brlsim;

namespace {

using Outcome = std::pair<bool, std::string>;

int failures = 0;

void report(int index, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %02d: %s%s%s\n", ok ? "PASS" : "FAIL", index, name,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void criterion(int index, const char* name, const std::function<Outcome()>& body) {
    try {
        const Outcome outcome = body();
        report(index, name, outcome.first, outcome.second);
    } catch (const std::exception& e) {
        report(index, name, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(double value) {
    std::ostringstream out;
    out.precision(3);
    out << value;
    return out.str();
}

// ---------------------------------------------------------------------------

Outcome budget_exhaustion() {
    std::mt19937_64 gen(101);
    double worst = 0.0;
    for (int pair = 0; pair < 200; ++pair) {
        const Market market = testutil::random_market(1000 + pair / 10);
        const PriceVector p = testutil::random_box_price(market, gen);
        const Allocation x = demand(market, p);
        for (std::size_t i = 0; i < market.num_buyers(); ++i) {
            double spent = 0.0;
            for (std::size_t j = 0; j < market.num_goods(); ++j) spent += p[j] * x(i, j);
            worst = std::max(worst, std::abs(spent - market.budget(i)) / market.budget(i));
        }
    }
    return {worst <= 1e-10, "max relative budget error " + fmt(worst) + " over 200 pairs"};
}

Outcome spending_monotonicity() {
    std::mt19937_64 gen(202);
    int checked_goods = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Market market = testutil::random_market(2000 + trial);
        const PriceVector p = testutil::random_box_price(market, gen);
        const auto bounds = price_bounds(market);
        for (std::size_t j = 0; j < market.num_goods(); ++j) {
            bool multi = false;
            for (std::size_t i = 0; i < market.num_buyers() && !multi; ++i) {
                if (market.coefficient(i, j) <= 0.0) continue;
                for (std::size_t k = 0; k < market.num_goods(); ++k) {
                    if (k != j && market.coefficient(i, k) > 0.0) multi = true;
                }
            }
            if (!multi) continue;
            ++checked_goods;
            double prev = good_spending(market, p, j, bounds.p_min);
            for (int s = 1; s < 50; ++s) {
                const double alpha =
                    bounds.p_min * std::pow(bounds.p_max / bounds.p_min, s / 49.0);
                const double current = good_spending(market, p, j, alpha);
                if (!(current < prev)) {
                    return {false, "non-decreasing spending at market " +
                                       std::to_string(trial) + " good " + std::to_string(j)};
                }
                prev = current;
            }
        }
    }
    return {checked_goods > 0,
            "strict decrease along 50-point grids on " + std::to_string(checked_goods) +
                " goods across 100 markets"};
}

Outcome clearing_postcondition() {
    std::mt19937_64 gen(303);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Market market = testutil::random_market(3000 + trial / 4);
        const PriceVector p = testutil::random_box_price(market, gen);
        const std::size_t j = uniform_index(gen, market.num_goods());
        const BestResponseResult response = best_response(market, p, j);
        const double residual =
            std::abs(good_demand(market, p.with(j, response.price), j) - 1.0);
        worst = std::max(worst, residual);
    }
    return {worst <= 1e-8, "max clearing residual " + fmt(worst) + " over 200 cases"};
}

Outcome closed_form_root() {
    const Market sym = testutil::symmetric2();
    const double computed = best_response(sym, PriceVector({1.0, 1.0}), 0).price;
    const double expected = (std::sqrt(5.0) - 1.0) / 2.0;
    const double error = std::abs(computed - expected);
    return {error <= 1e-10, "|computed - (sqrt(5)-1)/2| = " + fmt(error)};
}

Outcome update_properties() {
    const Market market = testutil::random_market(55);
    const std::size_t n = market.num_goods();
    const auto bounds = price_bounds(market);

    struct Map {
        std::string label;
        std::function<PriceVector(const PriceVector&)> apply;
    };
    std::vector<Map> maps;
    maps.push_back({"best_response_all", [&](const PriceVector& p) {
                        return best_response_all(market, p);
                    }});
    for (int k = 1; k <= 3; ++k) {
        BeliefProfile profile = BeliefProfile::level_k(n, k);
        maps.push_back({"level-" + std::to_string(k),
                        [&market, profile](const PriceVector& p) {
                            return brl_update(market, profile, p);
                        }});
    }
    RandomProfileSource trees(n, 4, 404);
    for (int t = 0; t < 20; ++t) {
        BeliefProfile profile = trees.next();
        maps.push_back({"tree-" + std::to_string(t),
                        [&market, profile](const PriceVector& p) {
                            return brl_update(market, profile, p);
                        }});
    }

    std::mt19937_64 gen(505);
    for (const Map& map : maps) {
        for (int pair = 0; pair < 200; ++pair) {
            std::vector<double> qv(n), pv(n);
            for (std::size_t j = 0; j < n; ++j) {
                qv[j] = log_uniform_in(gen, bounds.p_min, bounds.p_max);
                pv[j] = log_uniform_in(gen, qv[j], bounds.p_max);
            }
            const PriceVector q(qv), p(pv);
            const PriceVector fp = map.apply(p);
            const PriceVector fq = map.apply(q);
            for (std::size_t j = 0; j < n; ++j) {
                if (fp[j] < fq[j]) {
                    return {false, map.label + ": monotonicity violated"};
                }
                if (fp[j] < bounds.p_min || fp[j] > bounds.p_max) {
                    return {false, map.label + ": left the price box"};
                }
            }
            for (double lambda : {0.3, 0.7}) {
                std::vector<double> scaled(n);
                for (std::size_t j = 0; j < n; ++j) scaled[j] = lambda * pv[j];
                const PriceVector fs = map.apply(PriceVector(scaled));
                for (std::size_t j = 0; j < n; ++j) {
                    if (!(fs[j] > lambda * fp[j] + 1e-9)) {
                        return {false, map.label + ": sub-homogeneity margin violated"};
                    }
                }
            }
        }
    }
    return {true, std::to_string(maps.size()) +
                      " update maps, 200 pairs each, lambda in {0.3, 0.7}"};
}

Outcome contraction_estimates() {
    double worst_br = 0.0;
    double worst_excess = -1.0;
    for (int m = 0; m < 5; ++m) {
        const Market market = testutil::random_market(6000 + m);
        const std::size_t n = market.num_goods();
        const std::uint64_t pair_seed = 700 + m;

        const ContractionEstimate br = estimate_contraction(
            market, [&](const PriceVector& p) { return best_response_all(market, p); }, 500,
            pair_seed);
        if (br.ratio_max >= 1.0) {
            return {false, "best-response ratio " + fmt(br.ratio_max) + " >= 1"};
        }
        worst_br = std::max(worst_br, br.ratio_max);

        std::vector<BeliefProfile> profiles;
        for (int k = 1; k <= 3; ++k) profiles.push_back(BeliefProfile::level_k(n, k));
        RandomProfileSource trees(n, 4, 800 + m);
        profiles.push_back(trees.next());
        profiles.push_back(trees.next());
        for (const BeliefProfile& profile : profiles) {
            const ContractionEstimate estimate = estimate_contraction(
                market,
                [&market, &profile](const PriceVector& p) {
                    return brl_update(market, profile, p);
                },
                500, pair_seed);
            worst_excess = std::max(worst_excess, estimate.ratio_max - br.ratio_max);
            if (estimate.ratio_max > br.ratio_max + 0.02) {
                return {false, "belief update ratio " + fmt(estimate.ratio_max) +
                                   " exceeds best-response ratio " + fmt(br.ratio_max) +
                                   " + 0.02"};
            }
        }
    }
    return {true, "max best-response ratio " + fmt(worst_br) + ", max belief excess " +
                      fmt(worst_excess) + " (5 markets, 500 pairs)"};
}

Outcome synchronous_convergence() {
    const Market market = testutil::random_market(77);
    const std::size_t n = market.num_goods();
    const PriceVector p_star = solve_equilibrium(market, 1e-11).prices;
    const auto bounds = price_bounds(market);

    std::mt19937_64 gen(909);
    double worst_final = 0.0;
    double worst_rate = 0.0;
    for (int start = 0; start < 20; ++start) {
        const PriceVector p0 = sample_box_price(bounds, n, gen);
        RandomProfileSource source(n, 4, 1000 + start);
        const Trajectory trajectory = run(market, RunMode::kSync, nullptr, source, p0, 200);

        double previous = thompson(p0, p_star);
        for (std::size_t t = 1; t < trajectory.points.size(); ++t) {
            const double current = thompson(trajectory.points[t].prices, p_star);
            if (previous > kNoiseFloor && !(current < previous)) {
                return {false, "step ratio >= 1 at t=" + std::to_string(t) + " (start " +
                                   std::to_string(start) + ")"};
            }
            previous = current;
        }
        const double final_distance = thompson(trajectory.points.back().prices, p_star);
        worst_final = std::max(worst_final, final_distance);
        if (final_distance > 1e-8) {
            return {false, "final distance " + fmt(final_distance) + " > 1e-8"};
        }
        const DecayFit fit = fit_decay(trajectory, p_star, DecayUnit::kSteps);
        worst_rate = std::max(worst_rate, fit.rate);
        if (!(fit.rate < 0.0)) {
            return {false, "non-negative decay rate " + fmt(fit.rate)};
        }
    }
    return {true, "20 starts, re-drawn profiles each step; worst final d " +
                      fmt(worst_final) + ", worst rate " + fmt(worst_rate)};
}

Outcome asynchronous_convergence() {
    const Market market = testutil::random_market(88);
    const std::size_t n = market.num_goods();
    const PriceVector p_star = solve_equilibrium(market, 1e-11).prices;
    const PriceVector p0 = price_bounds(market).midpoint(n);

    struct Case {
        std::string label;
        std::unique_ptr<Schedule> schedule;
    };
    std::vector<Case> cases;
    cases.push_back({"round-robin", std::make_unique<RoundRobinSchedule>(n)});
    cases.push_back({"random-fair", std::make_unique<RandomSubsetSchedule>(n, 2024, n + 1)});

    std::string summary;
    for (Case& c : cases) {
        RandomProfileSource source(n, 3, 3000);
        const Trajectory trajectory =
            run(market, RunMode::kAsync, c.schedule.get(), source, p0, 250);

        double previous = thompson(p0, p_star);
        for (std::size_t end : trajectory.epoch_ends) {
            const double at_end = thompson(trajectory.points[end].prices, p_star);
            if (previous > kNoiseFloor && !(at_end < previous)) {
                return {false, c.label + ": epoch ratio >= 1"};
            }
            previous = at_end;
        }
        const double final_distance = thompson(trajectory.points.back().prices, p_star);
        if (final_distance > 1e-8) {
            return {false, c.label + ": final distance " + fmt(final_distance) + " > 1e-8"};
        }
        summary += c.label + " d=" + fmt(final_distance) + " epochs=" +
                   std::to_string(trajectory.epoch_ends.size()) + "; ";
    }
    return {true, summary};
}

Outcome stability() {
    const Market market = testutil::random_market(99);
    const std::size_t n = market.num_goods();
    const PriceVector p_star = solve_equilibrium(market, 1e-11).prices;

    double worst = 0.0;
    for (int k = 1; k <= 3; ++k) {
        worst = std::max(
            worst, thompson(brl_update(market, BeliefProfile::level_k(n, k), p_star), p_star));
    }
    RandomProfileSource trees(n, 4, 4000);
    for (int t = 0; t < 20; ++t) {
        worst = std::max(worst, thompson(brl_update(market, trees.next(), p_star), p_star));
    }
    return {worst <= 1e-8,
            "max d(F(p*), p*) = " + fmt(worst) + " over 23 profiles"};
}

Outcome oracle_agreement() {
    double worst_agreement = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Market market = testutil::random_market(5000 + trial);
        const EquilibriumResult fp = solve_equilibrium(market, 1e-10);
        const EquilibriumResult tat = tatonnement_oracle(market, 0.1, 1e-9);
        const double distance = thompson(fp.prices, tat.prices);
        worst_agreement = std::max(worst_agreement, distance);
        if (distance > 1e-6) {
            return {false, "oracles disagree by " + fmt(distance) + " on market " +
                               std::to_string(trial)};
        }
    }

    struct Case { std::size_t n, m; double b, rho; };
    double worst_symmetric = 0.0;
    for (const Case c : {Case{2, 1, 1.0, 0.5}, Case{4, 3, 1.25, 0.35}, Case{5, 7, 0.8, 0.65}}) {
        const Market market = testutil::symmetric_market(c.n, c.m, c.b, c.rho);
        const PriceVector p_star = solve_equilibrium(market, 1e-10).prices;
        const double expected = static_cast<double>(c.m) * c.b / static_cast<double>(c.n);
        for (std::size_t j = 0; j < c.n; ++j) {
            worst_symmetric = std::max(worst_symmetric, std::abs(p_star[j] - expected));
        }
    }
    if (worst_symmetric > 1e-9) {
        return {false, "symmetric p* off m*b/n by " + fmt(worst_symmetric)};
    }
    return {true, "50 markets agree within " + fmt(worst_agreement) +
                      "; symmetric p* within " + fmt(worst_symmetric) + " of m*b/n"};
}

Outcome metric_suite() {
    std::mt19937_64 gen(1111);
    const double p_min = 0.1;
    const double p_max = 12.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> a(4), b(4), c(4);
        for (int j = 0; j < 4; ++j) {
            a[j] = log_uniform_in(gen, p_min, p_max);
            b[j] = log_uniform_in(gen, p_min, p_max);
            c[j] = log_uniform_in(gen, p_min, p_max);
        }
        const PriceVector pa(a), pb(b), pc(c);
        const double dab = thompson(pa, pb);
        if (dab < 0.0) return {false, "negative distance"};
        if (dab != thompson(pb, pa)) return {false, "asymmetry"};
        if ((dab == 0.0) != (a == b)) return {false, "identity axiom violated"};
        if (dab > thompson(pa, pc) + thompson(pc, pb) + 1e-15) {
            return {false, "triangle inequality violated"};
        }
        if (!metric_bounds_check(pa, pb, p_min, p_max)) {
            return {false, "norm comparison inequality violated"};
        }
    }
    return {true, "metric axioms and both norm bounds on 1000 sampled triples/pairs"};
}

Outcome determinism() {
    testutil::TempDir dir("acceptance_determinism");
    nlohmann::json doc;
    doc["market"] = {{"generate",
                      {{"num_goods", 5},
                       {"num_buyers", 6},
                       {"rho", 0.55},
                       {"seed", 31},
                       {"sparsity", 0.15}}}};
    doc["dynamics"] = {{"mode", "async"},
                       {"steps", 60},
                       {"schedule", {{"kind", "random"}, {"seed", 17}, {"window", 6}}}};
    doc["beliefs"] = {{"kind", "random"}, {"max_depth", 4}, {"seed", 23}};
    doc["output"] = {{"trajectory", dir.file("trajectory.csv")}};

    const ExperimentConfig config = parse_config(doc);
    std::ostringstream log;
    if (cmd_simulate(config, log) != exit_codes::kOk) return {false, "first run failed"};
    std::ifstream first_file(dir.file("trajectory.csv"), std::ios::binary);
    std::stringstream first;
    first << first_file.rdbuf();

    if (cmd_simulate(config, log) != exit_codes::kOk) return {false, "second run failed"};
    std::ifstream second_file(dir.file("trajectory.csv"), std::ios::binary);
    std::stringstream second;
    second << second_file.rdbuf();

    const bool identical = first.str() == second.str() && !first.str().empty();
    return {identical, identical ? "two simulate runs produced byte-identical trajectories"
                                 : "trajectory files differ"};
}

}  // namespace

int main() {
    criterion(1, "budget exhaustion", budget_exhaustion);
    criterion(2, "spending monotonicity", spending_monotonicity);
    criterion(3, "clearing postcondition", clearing_postcondition);
    criterion(4, "closed-form best response", closed_form_root);
    criterion(5, "update-property suite", update_properties);
    criterion(6, "contraction estimates", contraction_estimates);
    criterion(7, "synchronous linear convergence", synchronous_convergence);
    criterion(8, "asynchronous epoch convergence", asynchronous_convergence);
    criterion(9, "stability of equilibrium", stability);
    criterion(10, "equilibrium oracle agreement", oracle_agreement);
    criterion(11, "metric suite", metric_suite);
    criterion(12, "simulate determinism", determinism);

    if (failures > 0) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all 12 criteria passed\n");
    return 0;
}
