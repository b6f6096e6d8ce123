#pragma once

#include <cstdint>

#include "brlsim/market.hpp"

namespace brlsim {

/// Seeded random market description. Budgets and coefficients are drawn
/// log-uniformly; `sparsity` is the probability of a zero coefficient.
struct MarketGenSpec {
    std::size_t num_goods = 2;
    std::size_t num_buyers = 2;
    double rho = 0.5;
    std::uint64_t seed = 0;
    double budget_min = 0.5;
    double budget_max = 2.0;
    double coeff_min = 0.5;
    double coeff_max = 2.0;
    double sparsity = 0.0;
};

/// Draws a market satisfying every Market invariant: rows and columns that
/// come out all-zero are rejection-resampled. Deterministic given the seed.
Market generate_market(const MarketGenSpec& spec);

}  // namespace brlsim
