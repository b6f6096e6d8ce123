#include "brlsim/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "brlsim/errors.hpp"

namespace brlsim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxIterations = 200;

// Spending on good j as a function of its own trial price, other prices
// frozen. The per-buyer log-sum over the other goods is computed once, so an
// evaluation inside the root finder costs one exp per interested buyer.
class SpendingCurve {
  public:
    SpendingCurve(const Market& market, const PriceVector& p, std::size_t j)
        : epsilon_(market.epsilon()) {
        const std::size_t n = market.num_goods();
        std::vector<double> log_p(n);
        for (std::size_t k = 0; k < n; ++k) log_p[k] = std::log(p[k]);

        std::vector<double> others;
        others.reserve(n);
        for (std::size_t i = 0; i < market.num_buyers(); ++i) {
            if (market.coefficient(i, j) <= 0.0) continue;
            others.clear();
            for (std::size_t k = 0; k < n; ++k) {
                if (k != j && market.coefficient(i, k) > 0.0) {
                    others.push_back(epsilon_ * (market.log_coefficient(i, k) - log_p[k]));
                }
            }
            double lse = kNegInf;
            if (!others.empty()) {
                double m = *std::max_element(others.begin(), others.end());
                double s = 0.0;
                for (double t : others) s += std::exp(t - m);
                lse = m + std::log(s);
            }
            buyers_.push_back({market.budget(i), market.log_coefficient(i, j), lse});
        }
    }

    double value(double alpha) const {
        const double log_alpha = std::log(alpha);
        double total = 0.0;
        for (const auto& b : buyers_) {
            total += b.budget * share(b, log_alpha);
        }
        return total;
    }

    // spending and d(spending)/d(alpha) = -(eps/alpha) * sum b * s * (1 - s)
    std::pair<double, double> value_and_derivative(double alpha) const {
        const double log_alpha = std::log(alpha);
        double total = 0.0;
        double slope = 0.0;
        for (const auto& b : buyers_) {
            const double s = share(b, log_alpha);
            total += b.budget * s;
            slope += b.budget * s * (1.0 - s);
        }
        return {total, -(epsilon_ / alpha) * slope};
    }

  private:
    struct Buyer {
        double budget;
        double log_c;      // log c_ij, positive coefficient guaranteed
        double other_lse;  // -inf when j is this buyer's only positive good
    };

    // 1/(1+exp(x)) saturates correctly at both ends under IEEE semantics:
    // exp overflow gives share 0, exp underflow (and other_lse = -inf) give 1.
    double share(const Buyer& b, double log_alpha) const {
        const double t = epsilon_ * (b.log_c - log_alpha);
        return 1.0 / (1.0 + std::exp(b.other_lse - t));
    }

    double epsilon_;
    std::vector<Buyer> buyers_;
};

}  // namespace

double clearing_gap(const Market& market, const PriceVector& p, std::size_t j, double alpha) {
    return alpha - good_spending(market, p, j, alpha);
}

BestResponseResult best_response(const Market& market, const PriceVector& p, std::size_t j) {
    if (j >= market.num_goods()) throw IndexError("good index out of range");
    if (p.size() != market.num_goods()) throw DomainError("price vector size mismatch");

    const PriceBounds bounds = price_bounds(market);
    const SpendingCurve curve(market, p, j);

    const double g_tol = 1e-12 * market.total_budget();
    const double w_tol = 1e-12 * bounds.p_max;

    int iterations = 0;

    // A couple of Newton steps once a termination criterion fires. Bisection
    // already meets the contract; this drives |g| down to evaluation noise,
    // which is proportional to the root itself, so the clearing residual
    // stays tiny even for cheap goods. Candidates are clamped to the bracket,
    // keeping the result inside [p_min, p_max] for in-box inputs.
    auto polish = [&](double x, double g, double dg, double lo, double hi)
        -> BestResponseResult {
        for (int k = 0; k < 3 && g != 0.0; ++k) {
            double candidate = x - g / dg;
            if (!std::isfinite(candidate)) break;
            candidate = std::clamp(candidate, lo, hi);
            if (candidate == x) break;
            const auto [spend, dspend] = curve.value_and_derivative(candidate);
            const double g_candidate = candidate - spend;
            if (std::abs(g_candidate) >= std::abs(g)) break;
            x = candidate;
            g = g_candidate;
            dg = 1.0 - dspend;
            ++iterations;
        }
        return {x, std::abs(g), iterations};
    };

    // Bracket the root. Spending never exceeds the total budget, so the gap
    // at p_max is always >= 0. The gap at p_min is <= 0 whenever p sits in
    // the price box; inputs outside the box can push the root lower, in
    // which case the lower end is extended geometrically (the gap tends to
    // minus the interested buyers' budgets as alpha -> 0).
    double lo = bounds.p_min;
    double hi = bounds.p_max;
    double g_lo = lo - curve.value(lo);
    while (g_lo > 0.0) {
        hi = lo;
        lo *= 0.5;
        g_lo = lo - curve.value(lo);
        if (++iterations > 600) {
            throw SolverError("best_response: failed to bracket the clearing price for good " +
                              std::to_string(j));
        }
    }
    if (g_lo == 0.0) return {lo, 0.0, iterations};
    const double g_hi = hi - curve.value(hi);
    if (g_hi <= 0.0) return polish(hi, g_hi, 1.0, lo, hi);

    // Safeguarded Newton on the bracket: take the Newton step when it lands
    // inside and halves fast enough, otherwise bisect. dg >= 1 always, since
    // spending is decreasing in alpha.
    double x = 0.5 * (lo + hi);
    double step_prev = hi - lo;
    auto [spend, dspend] = curve.value_and_derivative(x);
    double g = x - spend;
    double dg = 1.0 - dspend;

    for (; iterations < kMaxIterations; ++iterations) {
        if (std::abs(g) <= g_tol) return polish(x, g, dg, lo, hi);
        if (g < 0.0) lo = x; else hi = x;
        if (hi - lo <= w_tol) return polish(x, g, dg, lo, hi);

        double step = g / dg;
        double candidate = x - step;
        if (!(candidate > lo) || !(candidate < hi) ||
            std::abs(2.0 * g) > std::abs(step_prev * dg)) {
            candidate = 0.5 * (lo + hi);
            step = x - candidate;
        }
        step_prev = step;
        x = candidate;
        const auto [spend_x, dspend_x] = curve.value_and_derivative(x);
        g = x - spend_x;
        dg = 1.0 - dspend_x;
    }
    throw SolverError("best_response: no convergence within iteration cap for good " +
                      std::to_string(j));
}

PriceVector best_response_all(const Market& market, const PriceVector& p) {
    std::vector<double> out(market.num_goods());
    for (std::size_t j = 0; j < market.num_goods(); ++j) {
        out[j] = best_response(market, p, j).price;
    }
    return PriceVector(std::move(out));
}

}  // namespace brlsim
