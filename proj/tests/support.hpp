#pragma once

// Shared test helpers. The oracle namespace re-evaluates the CES formulas by
// direct powering, independent of the library's log-domain implementation
// path, so the two routes cross-check each other.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "brlsim/generator.hpp"
#include "brlsim/market.hpp"
#include "brlsim/rng.hpp"

namespace oracle {

inline double naive_demand_entry(const brlsim::Market& m, const std::vector<double>& p,
                                 std::size_t i, std::size_t j) {
    if (m.coefficient(i, j) <= 0.0) return 0.0;
    const double eps = m.epsilon();
    double denom = 0.0;
    for (std::size_t k = 0; k < m.num_goods(); ++k) {
        if (m.coefficient(i, k) > 0.0) {
            denom += std::pow(m.coefficient(i, k) / p[k], eps);
        }
    }
    return m.budget(i) / p[j] * std::pow(m.coefficient(i, j) / p[j], eps) / denom;
}

inline double naive_good_demand(const brlsim::Market& m, const std::vector<double>& p,
                                std::size_t j) {
    double total = 0.0;
    for (std::size_t i = 0; i < m.num_buyers(); ++i) {
        total += naive_demand_entry(m, p, i, j);
    }
    return total;
}

inline double naive_spending(const brlsim::Market& m, const std::vector<double>& p,
                             std::size_t j, double alpha) {
    const double eps = m.epsilon();
    double total = 0.0;
    for (std::size_t i = 0; i < m.num_buyers(); ++i) {
        if (m.coefficient(i, j) <= 0.0) continue;
        double others = 0.0;
        for (std::size_t k = 0; k < m.num_goods(); ++k) {
            if (k != j && m.coefficient(i, k) > 0.0) {
                others += std::pow(m.coefficient(i, k) / p[k], eps);
            }
        }
        const double own = std::pow(m.coefficient(i, j) / alpha, eps);
        total += m.budget(i) * own / (others + own);
    }
    return total;
}

inline double naive_utility(const brlsim::Market& m, const std::vector<double>& x,
                            std::size_t i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m.num_goods(); ++j) {
        const double term = m.coefficient(i, j) * x[i * m.num_goods() + j];
        if (term > 0.0) sum += std::pow(term, m.rho());
    }
    return sum > 0.0 ? std::pow(sum, 1.0 / m.rho()) : 0.0;
}

// Plain bisection on the naive spending curve: an independent route to the
// best-response price.
inline double naive_best_response(const brlsim::Market& m, const std::vector<double>& p,
                                  std::size_t j) {
    double hi = 0.0;
    for (std::size_t i = 0; i < m.num_buyers(); ++i) hi += m.budget(i);
    double lo = hi;
    while (lo - naive_spending(m, p, j, lo) > 0.0) lo *= 0.5;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid - naive_spending(m, p, j, mid) < 0.0) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle

namespace testutil {

/// m=1, n=2, b=(1), c=((1,1)), rho=1/2 (eps=1): the workhorse market with a
/// closed-form best response p'^2 + p' - 1 = 0 at unit prices.
inline brlsim::Market symmetric2() {
    return brlsim::Market(2, 1, {1.0}, {1.0, 1.0}, 0.5);
}

/// Root of p'^2 + p' - 1 = 0, solved independently.
inline double symmetric2_root() {
    return (std::sqrt(5.0) - 1.0) / 2.0;
}

/// Fully symmetric market: m buyers with budget b, all coefficients 1.
inline brlsim::Market symmetric_market(std::size_t n, std::size_t m, double b, double rho) {
    return brlsim::Market(n, m, std::vector<double>(m, b),
                          std::vector<double>(m * n, 1.0), rho);
}

struct MarketRanges {
    std::size_t max_goods = 6;
    std::size_t max_buyers = 6;
    double rho_min = 0.2;
    double rho_max = 0.8;
    double sparsity = 0.2;
};

/// Seeded random market with well-conditioned desk-scale parameters.
inline brlsim::Market random_market(std::uint64_t seed, MarketRanges ranges = {}) {
    std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ull);
    brlsim::MarketGenSpec spec;
    spec.num_goods = 2 + brlsim::uniform_index(gen, ranges.max_goods - 1);
    spec.num_buyers = 1 + brlsim::uniform_index(gen, ranges.max_buyers);
    spec.rho = brlsim::uniform_in(gen, ranges.rho_min, ranges.rho_max);
    spec.seed = gen();
    spec.sparsity = ranges.sparsity;
    return brlsim::generate_market(spec);
}

inline brlsim::PriceVector random_box_price(const brlsim::Market& market,
                                            std::mt19937_64& gen) {
    const auto bounds = brlsim::price_bounds(market);
    std::vector<double> values(market.num_goods());
    for (auto& v : values) {
        v = brlsim::log_uniform_in(gen, bounds.p_min, bounds.p_max);
    }
    return brlsim::PriceVector(values);
}

/// Scratch directory removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        const auto stamp =
            std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("brlsim_" + tag + "_" + std::to_string(stamp));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

}  // namespace testutil
