#include "brlsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "brlsim/best_response.hpp"
#include "brlsim/errors.hpp"
#include "brlsim/rng.hpp"

namespace brlsim {

double thompson(const PriceVector& p, const PriceVector& q) {
    if (p.size() != q.size()) throw DomainError("thompson: vector size mismatch");
    // |log p - log q| rather than |log(p/q)|: bit-exact symmetry.
    double worst = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        worst = std::max(worst, std::abs(std::log(p[j]) - std::log(q[j])));
    }
    return worst;
}

bool metric_bounds_check(const PriceVector& p, const PriceVector& q, double p_min,
                         double p_max) {
    if (p.size() != q.size()) throw DomainError("metric_bounds_check: size mismatch");
    const double d = thompson(p, q);
    const double scale = p_max * p_max / p_min;

    double linf = 0.0;
    double l2sq = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double diff = std::abs(p[j] - q[j]);
        linf = std::max(linf, diff);
        l2sq += diff * diff;
    }
    const double n = static_cast<double>(p.size());
    return linf <= scale * d && std::sqrt(l2sq) <= std::sqrt(n) * scale * d;
}

EquilibriumResult solve_equilibrium(const Market& market, double tol,
                                    std::size_t max_iterations) {
    if (!(tol > 0.0)) throw DomainError("solve_equilibrium: tolerance must be positive");

    const PriceBounds bounds = price_bounds(market);
    PriceVector p = bounds.midpoint(market.num_goods());

    // xi_hat tracks the worst observed successive-distance ratio; the
    // threshold tol*(1-xi)/xi converts "successive iterates are close" into
    // "the fixed point is within tol" via the contraction property.
    double xi_hat = 0.5;
    double prev_delta = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        PriceVector q = best_response_all(market, p);
        const double delta = thompson(q, p);
        if (delta > kNoiseFloor && std::isfinite(prev_delta) && prev_delta > kNoiseFloor) {
            xi_hat = std::clamp(std::max(xi_hat, delta / prev_delta), 0.5, 1.0 - 1e-6);
        }
        prev_delta = delta;
        p = std::move(q);

        if (delta <= tol * (1.0 - xi_hat) / xi_hat) {
            const double residual = clearing_residual(market, p);
            if (residual <= tol) {
                return {std::move(p), residual, it, "fixed-point"};
            }
        }
    }
    throw SolverError("solve_equilibrium: iteration cap exceeded; contraction should "
                      "guarantee convergence, so this signals a bug or invalid market");
}

EquilibriumResult tatonnement_oracle(const Market& market, double step, double tol,
                                     std::size_t max_iterations) {
    if (!(step > 0.0)) throw DomainError("tatonnement_oracle: step must be positive");
    if (!(tol > 0.0)) throw DomainError("tatonnement_oracle: tolerance must be positive");

    const PriceBounds bounds = price_bounds(market);
    const std::size_t n = market.num_goods();
    PriceVector p = bounds.midpoint(n);

    std::vector<double> z(n);
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        double worst = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            z[j] = good_demand(market, p, j) - 1.0;
            worst = std::max(worst, std::abs(z[j]));
        }
        if (worst <= tol) {
            return {std::move(p), worst, it, "tatonnement"};
        }
        std::vector<double> next(n);
        for (std::size_t j = 0; j < n; ++j) {
            next[j] = std::clamp(p[j] * (1.0 + step * z[j]), bounds.p_min, bounds.p_max);
        }
        p = PriceVector(std::move(next));
    }
    throw OracleError("tatonnement_oracle: no convergence within the iteration cap; "
                      "the oracle step is likely mis-tuned for this market");
}

PriceVector sample_box_price(const PriceBounds& bounds, std::size_t n, std::mt19937_64& gen) {
    std::vector<double> values(n);
    for (std::size_t j = 0; j < n; ++j) {
        values[j] = log_uniform_in(gen, bounds.p_min, bounds.p_max);
    }
    return PriceVector(std::move(values));
}

ContractionEstimate estimate_contraction(const Market& market, const PriceUpdate& update,
                                         std::size_t pairs, std::uint64_t seed) {
    if (pairs < 1) throw DomainError("estimate_contraction: need at least one pair");

    const PriceBounds bounds = price_bounds(market);
    const std::size_t n = market.num_goods();
    std::mt19937_64 gen(seed);

    ContractionEstimate estimate;
    estimate.seed = seed;
    for (std::size_t s = 0; s < pairs; ++s) {
        const PriceVector p = sample_box_price(bounds, n, gen);
        const PriceVector q = sample_box_price(bounds, n, gen);
        const double d = thompson(p, q);
        if (d <= kNoiseFloor) continue;
        const double ratio = thompson(update(p), update(q)) / d;
        estimate.ratio_max = std::max(estimate.ratio_max, ratio);
        ++estimate.sample_count;
    }
    return estimate;
}

DecayFit fit_decay(const Trajectory& trajectory, const PriceVector& p_star, DecayUnit unit) {
    std::vector<double> xs;
    std::vector<double> ys;

    auto add_point = [&](double x, const PriceVector& p) {
        const double d = thompson(p, p_star);
        if (d > kNoiseFloor) {
            xs.push_back(x);
            ys.push_back(std::log(d));
        }
    };

    if (unit == DecayUnit::kSteps) {
        for (const auto& point : trajectory.points) {
            add_point(static_cast<double>(point.step), point.prices);
        }
    } else {
        if (!trajectory.points.empty()) {
            add_point(0.0, trajectory.points.front().prices);
        }
        for (std::size_t e = 0; e < trajectory.epoch_ends.size(); ++e) {
            add_point(static_cast<double>(e + 1),
                      trajectory.points.at(trajectory.epoch_ends[e]).prices);
        }
    }

    if (xs.size() < 3) {
        throw InsufficientDataError("fit_decay: fewer than three points above the noise "
                                    "floor; nothing to fit");
    }

    // Ordinary least squares for y = a + rate * x.
    const double k = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = k * sxx - sx * sx;
    if (denom == 0.0) {
        throw InsufficientDataError("fit_decay: degenerate abscissa, cannot fit a slope");
    }
    const double rate = (k * sxy - sx * sy) / denom;
    const double intercept = (sy - rate * sx) / k;

    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + rate * xs[i]);
        ss += r * r;
    }
    return {rate, std::sqrt(ss / k), xs.size()};
}

void annotate_trajectory(const Market& market, Trajectory& trajectory,
                         const PriceVector& reference) {
    for (auto& point : trajectory.points) {
        point.distance_to_reference = thompson(point.prices, reference);
        point.clearing_residual = clearing_residual(market, point.prices);
    }
}

}  // namespace brlsim
