#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "brlsim/dynamics.hpp"
#include "brlsim/market.hpp"

namespace brlsim {

/// Below this Thompson distance the solver tolerance dominates: ratio
/// estimates and decay fits exclude such points.
inline constexpr double kNoiseFloor = 1e-9;

/// Thompson metric d(p, q) = max_j |log(p_j / q_j)| on positive vectors.
/// Symmetric, zero iff equal, invariant under common scaling.
double thompson(const PriceVector& p, const PriceVector& q);

/// Checks both comparisons against the standard norms:
///   ||p - q||_inf <= (p_max^2 / p_min) d(p, q)
///   ||p - q||_2   <= sqrt(n) (p_max^2 / p_min) d(p, q)
/// Used as a test oracle; must hold for every pair inside the box.
bool metric_bounds_check(const PriceVector& p, const PriceVector& q, double p_min,
                         double p_max);

struct EquilibriumResult {
    PriceVector prices;        // p*
    double clearing_residual;  // max_j |demand_j - 1|
    std::size_t iterations;
    std::string method;  // "fixed-point" | "tatonnement"
};

/// Banach iteration of best_response_all from the box midpoint. Stops once
/// the running contraction estimate certifies the fixed point within tol and
/// the clearing residual itself drops below tol.
EquilibriumResult solve_equilibrium(const Market& market, double tol,
                                    std::size_t max_iterations = 100000);

/// Independent cross-check: damped multiplicative price adjustment
/// p_j <- p_j (1 + step (demand_j - 1)), clamped to the box, until every
/// excess demand is below tol. Never used as a dynamic under study.
EquilibriumResult tatonnement_oracle(const Market& market, double step = 0.1,
                                     double tol = 1e-9, std::size_t max_iterations = 200000);

using PriceUpdate = std::function<PriceVector(const PriceVector&)>;

struct ContractionEstimate {
    double ratio_max = 0.0;       // max d(F(p), F(q)) / d(p, q) over used pairs
    std::size_t sample_count = 0; // pairs above the noise floor
    std::uint64_t seed = 0;
};

/// Samples price pairs uniformly in log-coordinates inside the box (the
/// Thompson metric is a sup-norm on logs, so uniform-in-price sampling would
/// crowd the upper corner) and reports the worst observed distance ratio.
/// For best_response_all this estimates the contraction constant from below.
ContractionEstimate estimate_contraction(const Market& market, const PriceUpdate& update,
                                         std::size_t pairs, std::uint64_t seed);

/// One log-uniform sample inside the price box.
PriceVector sample_box_price(const PriceBounds& bounds, std::size_t n, std::mt19937_64& gen);

enum class DecayUnit { kSteps, kEpochs };

struct DecayFit {
    double rate = 0.0;      // least-squares slope of log d(p^t, p*); < 0 certifies decay
    double residual = 0.0;  // root-mean-square residual of the fit
    std::size_t points_used = 0;
};

/// Fits log-distance-to-equilibrium against step or epoch index. Points at
/// or below the noise floor are excluded; fewer than three usable points is
/// an error (nothing to fit).
DecayFit fit_decay(const Trajectory& trajectory, const PriceVector& p_star, DecayUnit unit);

/// Fills per-point diagnostics (Thompson distance to the reference and
/// clearing residual). Purely observational; never feeds back into dynamics.
void annotate_trajectory(const Market& market, Trajectory& trajectory,
                         const PriceVector& reference);

}  // namespace brlsim
